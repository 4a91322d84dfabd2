//! Independent reference results: exact `sech²` and rectangular amplitudes, and
//! the semiclassical prediction for the first excited sine mode.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Branch;
use crate::specfun::ln_gamma_complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSource {
    Sech2Analytic,
    MesaAnalytic,
    Wkb,
}

/// Amplitudes for left incidence, `e^{ikx} + r e^{−ikx}` → `t e^{ikx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub t: Complex64,
    pub r: Complex64,
    pub source: OracleSource,
}

impl OracleResult {
    pub fn unitarity_defect(&self) -> f64 {
        (self.t.norm_sqr() + self.r.norm_sqr() - 1.0).abs()
    }
}

fn check_inputs(k_over_kappa: f64, kappa_l: f64) -> Result<()> {
    if !(k_over_kappa > 0.0) || !k_over_kappa.is_finite() {
        return Err(Error::Domain(format!("k/kappa must be positive, got {k_over_kappa}")));
    }
    if !(kappa_l >= 0.0) || !kappa_l.is_finite() {
        return Err(Error::Domain(format!("kappa L must be finite and ≥ 0, got {kappa_l}")));
    }
    Ok(())
}

/// `ln cosh w`, stable for large `|Re w|`.
fn ln_cosh(w: Complex64) -> Complex64 {
    if w.re.abs() > 20.0 {
        let s = w.re.signum();
        s * w + (1.0 + (-2.0 * s * w).exp()).ln() - 2f64.ln()
    } else {
        w.cosh().ln()
    }
}

/// `ln sinh y` for `y > 0`.
fn ln_sinh(y: f64) -> f64 {
    if y > 20.0 {
        y + (-(-2.0 * y).exp()).ln_1p() - 2f64.ln()
    } else {
        y.sinh().ln()
    }
}

/// Exact amplitudes for `V± = ±sech²(x/L)/2`, which in units of `1/κ_n` reads
/// `±(κ_nL)² sech²(s)/(2L²)` with `s = x/L`:
///
/// `t = Γ(½ − i(kL+ξ)) Γ(½ − i(kL−ξ)) / (Γ(−ikL) Γ(1−ikL))`,
/// `r = −i cosh(πξ) / sinh(πkL) · t`, with `ξ = √(±(κ_nL)² − ¼)`.
///
/// Both are even in `ξ`, so the square root may take any branch; for the well
/// and for `κ_nL < ½` on the barrier it is imaginary.
pub fn sech2_analytic(k_over_kappa: f64, kappa_l: f64, branch: Branch) -> Result<OracleResult> {
    check_inputs(k_over_kappa, kappa_l)?;
    let source = OracleSource::Sech2Analytic;
    if kappa_l == 0.0 {
        return Ok(OracleResult {
            t: Complex64::new(1.0, 0.0),
            r: Complex64::new(0.0, 0.0),
            source,
        });
    }
    let kl = k_over_kappa * kappa_l;
    let xi = Complex64::new(branch.sign() * kappa_l * kappa_l - 0.25, 0.0).sqrt();
    let i = Complex64::i();
    let half = Complex64::new(0.5, 0.0);
    let ln_t = ln_gamma_complex(half - i * (kl + xi))? + ln_gamma_complex(half - i * (kl - xi))?
        - ln_gamma_complex(Complex64::new(0.0, -kl))?
        - ln_gamma_complex(Complex64::new(1.0, -kl))?;
    let t = ln_t.exp();
    let w = PI * xi;
    let r = if w.re.abs() > 20.0 {
        -i * (ln_cosh(w) - ln_sinh(PI * kl) + ln_t).exp()
    } else {
        -i * w.cosh() * (ln_t - ln_sinh(PI * kl)).exp()
    };
    Ok(OracleResult { t, r, source })
}

/// Rectangular barrier (`+`, height ½) or well (`−`, depth ½) on `[0, κ_nL]`.
///
/// With `q² = k² ∓ 1` and `φ = A cos qx + B sin qx` inside, matching at both
/// edges gives `t = e^{−ikL} / (cos qL − i (k²+q²)/(2kq) sin qL)` and
/// `r = t e^{ikL} (cos qL − i (k/q) sin qL) − 1`. Under the barrier the
/// hyperbolic form is divided through by `cosh ρL` so wide barriers do not
/// overflow.
pub fn mesa_analytic(k_over_kappa: f64, kappa_l: f64, branch: Branch) -> Result<OracleResult> {
    check_inputs(k_over_kappa, kappa_l)?;
    let k = k_over_kappa;
    let l = kappa_l;
    let q2 = k * k - branch.sign();
    let i = Complex64::i();
    let phase = (-i * k * l).exp();
    // t = phase / denom and A = t·e^{ikL}·cross
    let (denom, cross) = if q2 > 0.0 {
        let q = q2.sqrt();
        let (s, c) = (q * l).sin_cos();
        (c - i * (k * k + q2) / (2.0 * k * q) * s, c - i * (k / q) * s)
    } else if q2 < 0.0 {
        let rho = (-q2).sqrt();
        let th = (rho * l).tanh();
        let sech = 1.0 / (rho * l).cosh();
        // cos qL = cosh ρL, sin qL / q = sinh ρL / ρ; scale by sech ρL
        let d = 1.0 - i * (k * k + q2) / (2.0 * k * rho) * th;
        let a = 1.0 - i * (k / rho) * th;
        if sech == 0.0 {
            return Ok(OracleResult {
                t: Complex64::new(0.0, 0.0),
                r: a / d - 1.0,
                source: OracleSource::MesaAnalytic,
            });
        }
        let (d, a) = (d / sech, a / sech);
        (d, a)
    } else {
        (1.0 - i * 0.5 * k * l, Complex64::new(1.0, -k * l))
    };
    let t = phase / denom;
    let r = cross / denom - 1.0;
    Ok(OracleResult {
        t,
        r,
        source: OracleSource::MesaAnalytic,
    })
}

/// Semiclassical emission probability for the first excited sine mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbPrediction {
    /// `∫₀^{π/2} √((k/κ_n)² + cos x) dx`.
    pub integral: f64,
    /// `Δ_n = κ_nL · integral / π`.
    pub delta: f64,
    /// `sin²(Δ_n)`.
    pub p_em: f64,
}

impl WkbPrediction {
    /// Length `T` in `Δ_n = 2πκ_nL/T`, i.e. `2π²/integral`.
    pub fn period_t(&self) -> f64 {
        2.0 * PI * PI / self.integral
    }

    /// Period of `sin²(Δ_n)` in `κ_nL`, i.e. `π/(Δ_n/κ_nL) = π²/integral`.
    pub fn p_em_period(&self) -> f64 {
        PI * PI / self.integral
    }
}

/// The phase integral by double-exponential quadrature, which copes with the
/// square-root endpoint at `k = 0`.
pub fn wkb_phase_integral(k_over_kappa: f64) -> f64 {
    let k2 = k_over_kappa * k_over_kappa;
    quadrature::double_exponential::integrate(|x| (k2 + x.cos()).max(0.0).sqrt(), 0.0, FRAC_PI_2, 1e-14).integral
}

/// The same integral after `x = π/2 − s²`, which turns it into the smooth
/// `∫₀^{√(π/2)} 2s √(k² + sin s²) ds`, evaluated by Clenshaw–Curtis.
pub fn wkb_phase_integral_substituted(k_over_kappa: f64) -> f64 {
    let k2 = k_over_kappa * k_over_kappa;
    quadrature::clenshaw_curtis::integrate(|s| 2.0 * s * (k2 + (s * s).sin()).sqrt(), 0.0, FRAC_PI_2.sqrt(), 1e-14)
        .integral
}

pub fn wkb_first_excited(k_over_kappa: f64, kappa_l: f64) -> Result<WkbPrediction> {
    if !(k_over_kappa >= 0.0) || !(kappa_l >= 0.0) || !k_over_kappa.is_finite() || !kappa_l.is_finite() {
        return Err(Error::Domain(format!("WKB needs k/kappa ≥ 0 and kappa L ≥ 0, got {k_over_kappa}, {kappa_l}")));
    }
    let integral = wkb_phase_integral(k_over_kappa);
    let delta = kappa_l * integral / PI;
    Ok(WkbPrediction {
        integral,
        delta,
        p_em: delta.sin().powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_is_transparent() {
        for branch in [Branch::Plus, Branch::Minus] {
            for o in [sech2_analytic(0.1, 0.0, branch).unwrap(), mesa_analytic(0.1, 0.0, branch).unwrap()] {
                assert!((o.t - 1.0).norm() < 1e-15 && o.r.norm() < 1e-15);
            }
        }
        let w = wkb_first_excited(0.1, 0.0).unwrap();
        assert_eq!((w.delta, w.p_em), (0.0, 0.0));
    }

    #[test]
    fn sech2_at_vanishing_xi() {
        let k = 0.3;
        let kl = 0.5 * k;
        let o = sech2_analytic(k, 0.5, Branch::Plus).unwrap();
        let half = Complex64::new(0.5, -kl);
        let want = (2.0 * ln_gamma_complex(half).unwrap()
            - ln_gamma_complex(Complex64::new(0.0, -kl)).unwrap()
            - ln_gamma_complex(Complex64::new(1.0, -kl)).unwrap())
        .exp();
        assert!((o.t - want).norm() < 1e-14);
    }

    #[test]
    fn sech2_continuous_across_branch_switch() {
        let at = |l: f64| sech2_analytic(0.1, l, Branch::Plus).unwrap();
        let mut prev = at(0.49);
        for i in 1..=200 {
            let cur = at(0.49 + 0.0001 * i as f64);
            assert!((cur.t - prev.t).norm() < 1e-4 && (cur.r - prev.r).norm() < 1e-4);
            prev = cur;
        }
    }

    #[test]
    fn well_resonance_is_reflectionless() {
        // |t| = 1 when q·L = nπ with q = √(k² + 1)
        let k: f64 = 0.2;
        let q = (k * k + 1.0).sqrt();
        for n in 1..5 {
            let o = mesa_analytic(k, n as f64 * PI / q, Branch::Minus).unwrap();
            assert!((o.t.norm() - 1.0).abs() < 1e-13 && o.r.norm() < 1e-13);
        }
    }

    #[test]
    fn deep_tunnelling_slope() {
        let k: f64 = 0.01;
        let xs: Vec<f64> = (0..=20).map(|i| 5.0 + 0.5 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&l| mesa_analytic(k, l, Branch::Plus).unwrap().t.norm().ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        let rho = (1.0 - k * k).sqrt();
        assert!((slope + rho).abs() < 1e-3 * rho, "{slope}");
    }

    #[test]
    fn wide_barrier_does_not_overflow() {
        let o = mesa_analytic(0.1, 5000.0, Branch::Plus).unwrap();
        assert_eq!(o.t.norm(), 0.0);
        assert!((o.r.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wkb_constants() {
        // mpmath: quad(sqrt(0.01 + cos x), [0, pi/2]) = 1.2105988798827274300
        let w = wkb_first_excited(0.1, 1.0).unwrap();
        assert!((w.integral - 1.210_598_879_882_727_4).abs() < 1e-13);
        assert!((w.period_t() - 16.3).abs() < 0.05);
        // mpmath: quad(sqrt(cos x), [0, pi/2]) / pi
        let c = wkb_phase_integral(0.0) / PI;
        assert!((c - 0.381_379_881_750_906_6).abs() < 1e-12);
        assert!((wkb_phase_integral(0.0) - wkb_phase_integral_substituted(0.0)).abs() < 1e-9);
    }

    #[test]
    fn sech2_matches_reference_values() {
        // mpmath gamma products at k/κ = 0.1, κL = 5; the same amplitudes follow
        // from integrating the Schrödinger equation directly over [−70, 70]
        let cases = [
            (Branch::Plus, (-6.518_682_025_652_065e-7, 3.717_916_894_782_788e-7), (0.495_431_150_644_972_3, 0.868_647_209_729_033_5)),
            (Branch::Minus, (0.820_939_814_969_334_7, -0.409_933_396_834_710_1), (0.177_584_921_533_749_3, 0.355_634_680_538_221_2)),
        ];
        for (branch, t, r) in cases {
            let o = sech2_analytic(0.1, 5.0, branch).unwrap();
            let (t, r) = (Complex64::new(t.0, t.1), Complex64::new(r.0, r.1));
            assert!((o.t - t).norm() < 1e-12 * t.norm(), "{branch}: {} vs {t}", o.t);
            assert!((o.r - r).norm() < 1e-12 * r.norm(), "{branch}: {} vs {r}", o.r);
        }
    }

    #[test]
    fn oracle_unitarity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let k = rng.gen_range(0.005..1.5);
            let l = rng.gen_range(0.0..30.0);
            for branch in [Branch::Plus, Branch::Minus] {
                assert!(sech2_analytic(k, l, branch).unwrap().unitarity_defect() < 1e-10, "sech2 {k} {l} {branch}");
                assert!(mesa_analytic(k, l, branch).unwrap().unitarity_defect() < 1e-10, "mesa {k} {l} {branch}");
            }
        }
    }
}
