use mazer::grid::{build_grid, Branch, GridOptions, ModeProfile, Shape};
use mazer::mazer::{event_probabilities, MazerParams};
use mazer::oracles::sech2_analytic;

fn grid(shape: Shape, branch: Branch, points: usize) -> mazer::grid::Grid {
    let profile = ModeProfile::new(shape, 4.0).unwrap();
    build_grid(&profile, branch, 0.1, &GridOptions::new(points)).unwrap()
}

/// Least-squares slope of `log y` against `log x`.
fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

#[test]
fn refinement_converges_quadratically() {
    for shape in [Shape::Sech2, Shape::Gaussian] {
        for branch in [Branch::Plus, Branch::Minus] {
            let js = [50, 100, 200, 400];
            let mut gaps = Vec::new();
            for &j in &js {
                let (coarse, fine) = (grid(shape.clone(), branch, j), grid(shape.clone(), branch, 2 * j));
                let (lo, hi) = (coarse.points()[0], *coarse.points().last().unwrap());
                let gap = (0..=20_000)
                    .map(|i| lo + (hi - lo) * i as f64 / 20_000.0)
                    .map(|x| (fine.v_approx(x) - coarse.v_approx(x)).abs())
                    .fold(0.0, f64::max);
                gaps.push(gap);
            }
            let slope = -log_log_slope(&js.map(|j| j as f64), &gaps);
            assert!((1.7..=2.3).contains(&slope), "{shape} {branch}: slope {slope}, gaps {gaps:?}");
        }
    }
}

#[test]
fn alpha_approaches_one_monotonically() {
    for shape in [Shape::Sech2, Shape::Gaussian] {
        let defects: Vec<f64> =
            [50, 100, 200, 400, 800].iter().map(|&j| (grid(shape.clone(), Branch::Minus, j).alpha() - 1.0).abs()).collect();
        // the trapezoid rule converges spectrally here, so the defect may reach rounding early
        assert!(defects.windows(2).all(|w| w[1] < w[0] || w[1] < 1e-14), "{shape}: {defects:?}");
        assert!(defects[4] < 1e-6);
        println!("{shape}: |alpha - 1| = {defects:?}");
    }
}

#[test]
fn sech2_emission_at_plateau_matches_analytic() {
    let params = MazerParams::new(Shape::Sech2, 0.01, 10.0);
    let got = event_probabilities(&params).unwrap().p_em;
    let plus = sech2_analytic(0.01, 10.0, Branch::Plus).unwrap();
    let minus = sech2_analytic(0.01, 10.0, Branch::Minus).unwrap();
    let (tb, rb) = ((plus.t - minus.t) / 2.0, (plus.r - minus.r) / 2.0);
    let want = tb.norm_sqr() + rb.norm_sqr();
    assert!((got - want).abs() < 5e-3, "{got} vs {want}");
}
