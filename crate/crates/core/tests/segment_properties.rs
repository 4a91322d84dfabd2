use mazer::extrange::XReal;
use mazer::segment::{Regime, Segment};
use proptest::prelude::*;

/// Propagate `(φ, φ')` from `x0` to `x0 + h` with the power series of
/// `φ'' = −(a + b x) φ`, independent of any Bessel evaluation.
fn taylor_step(a: f64, b: f64, x0: f64, phi: f64, dphi: f64, h: f64) -> (f64, f64) {
    let a0 = a + b * x0;
    let mut c = vec![phi, dphi];
    for n in 0..200 {
        let prev = if n >= 1 { c[n - 1] } else { 0.0 };
        c.push(-(a0 * c[n] + b * prev) / ((n + 1) as f64 * (n + 2) as f64));
    }
    let (mut v, mut dv, mut p) = (0.0, 0.0, 1.0);
    for (n, cn) in c.iter().enumerate() {
        v += cn * p;
        if n + 1 < c.len() {
            dv += (n + 1) as f64 * c[n + 1] * p;
        }
        p *= h;
    }
    (v, dv)
}

fn check_against_taylor(seg: &Segment, x0: f64, h: f64) -> f64 {
    let e0 = seg.eval(x0).unwrap();
    let e1 = seg.eval(x0 + h).unwrap();
    let mut worst: f64 = 0.0;
    for (f0, g0, f1, g1) in [
        (e0.f_plus, e0.g_plus, e1.f_plus, e1.g_plus),
        (e0.f_minus, e0.g_minus, e1.f_minus, e1.g_minus),
    ] {
        // common scale so the series runs in plain f64
        let s = if f0.abs() > g0.abs() { f0.abs() } else { g0.abs() };
        let n = |v: XReal| (v / s).to_f64_flush();
        let (v, dv) = taylor_step(seg.a(), seg.b(), x0, n(f0), n(g0), h);
        let scale = n(f1).abs().max(n(g1).abs()).max(1e-300);
        worst = worst.max((v - n(f1)).abs() / scale).max((dv - n(g1)).abs() / scale);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn basis_matches_taylor_propagation(a in -3.0f64..3.0, b in -2.0f64..2.0, x0 in -2.0f64..2.0, h in -0.5f64..0.5) {
        let (lo, hi) = (x0.min(x0 + h), x0.max(x0 + h));
        // keep one sign of z on the segment
        let (z_lo, z_hi) = (a + b * lo, a + b * hi);
        prop_assume!(z_lo * z_hi > 0.0 || b.abs() < 1e-12);
        let seg = Segment::linear(a, b, lo, hi).unwrap();
        prop_assert!(check_against_taylor(&seg, x0, h) < 1e-9);
    }

    #[test]
    fn basis_solves_the_equation(a in -3.0f64..3.0, b in -2.0f64..2.0, x in -2.0f64..2.0) {
        let (lo, hi) = (x - 0.5, x + 0.5);
        prop_assume!((a + b * lo) * (a + b * hi) > 0.0);
        let seg = Segment::linear(a, b, lo, hi).unwrap();
        // five-point stencil: truncation is negligible and rounding noise in the
        // values is amplified less than with a three-point stencil at small h
        let h = 2e-3;
        let e: Vec<_> = (-2..=2).map(|i| seg.eval(x + i as f64 * h).unwrap()).collect();
        let z = a + b * x;
        for plus in [true, false] {
            let f: Vec<f64> = e.iter().map(|v| if plus { v.f_plus } else { v.f_minus }.to_f64_flush()).collect();
            let g = if plus { e[2].g_plus } else { e[2].g_minus }.to_f64_flush();
            let second = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
            prop_assert!((second + z * f[2]).abs() < 1e-6 * f[2].abs().max(g.abs()) * (1.0 + z.abs()));
        }
    }

    #[test]
    fn wronskian_matches_analytic(a in -5.0f64..5.0, b in -5.0f64..5.0, t in 0.0f64..1.0) {
        let (lo, hi) = if b.abs() > 1e-9 && (-a / b).abs() < 50.0 {
            let x_tp = -a / b;
            if t < 0.5 { (x_tp - 10.0, x_tp) } else { (x_tp, x_tp + 10.0) }
        } else {
            (0.0, 10.0)
        };
        let seg = Segment::linear(a, b, lo, hi).unwrap();
        let x = lo + (hi - lo) * t;
        let w = seg.eval(x).unwrap().wronskian().to_f64_flush();
        prop_assert!((w / seg.wronskian() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn taylor_fit_near_and_across_turning_point_scales() {
    // steep and shallow ramps, both regimes, including the turning point itself
    for (a, b, lo, hi) in [
        (0.0, 1.0, 0.0, 3.0),
        (0.0, -1.0, 0.0, 3.0),
        (0.0, 40.0, 0.0, 1.0),
        (2.0, -1e-3, 0.0, 200.0),
        (-2.0, 1e-3, 0.0, 200.0),
    ] {
        let seg = Segment::linear(a, b, lo, hi).unwrap();
        for i in 0..10 {
            let x0 = lo + (hi - lo) * i as f64 / 10.0;
            let h = ((hi - lo) / 10.0).min(0.3);
            let err = check_against_taylor(&seg, x0, h);
            assert!(err < 1e-9, "a={a} b={b} x0={x0}: {err:e}");
        }
    }
}

#[test]
fn far_forbidden_values_stay_finite() {
    let seg = Segment::linear(-1.0, -10.0, 0.0, 1000.0).unwrap();
    assert_eq!(seg.regime(), Regime::SlopeForbidden);
    let e = seg.eval(1000.0).unwrap();
    assert!(e.f_plus.log10_abs() > 300.0 || e.f_minus.log10_abs() > 300.0);
    assert!((e.wronskian().to_f64_flush() / seg.wronskian() - 1.0).abs() < 1e-12);
}
