//! Mazer emission probabilities from the two elementary scattering problems.
//!
//! An excited atom entering a cavity with `n` photons splits into the dressed
//! states seeing `V±`. With `t±`, `r±` the amplitudes of the two problems,
//!
//! `T_a = (t₊ + t₋)/2`, `T_b = (t₊ − t₋)/2`, `R_a = (r₊ + r₋)/2`, `R_b = (r₊ − r₋)/2`,
//!
//! and the induced emission probability is `P_em = |T_b|² + |R_b|²`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{build_grid, energy_of, Branch, Grid, GridOptions, ModeProfile, Shape, DEFAULT_WINDOW_FACTOR};
use crate::transfer::{solve_scattering, ScatterResult};

/// Environment variable bounding the sweep worker pool.
pub const THREADS_ENV: &str = "MAZER_THREADS";

/// Dimensionless mazer inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MazerParams {
    /// `k/κ_n`.
    pub k_over_kappa: f64,
    /// Interaction length `κ_nL`.
    pub kappa_l: f64,
    pub shape: Shape,
    /// Grid points `J`.
    pub points: usize,
    pub window_factor: f64,
    pub renormalize: bool,
}

impl MazerParams {
    pub fn new(shape: Shape, k_over_kappa: f64, kappa_l: f64) -> Self {
        Self {
            k_over_kappa,
            kappa_l,
            shape,
            points: 200,
            window_factor: DEFAULT_WINDOW_FACTOR,
            renormalize: true,
        }
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_kappa_l(&self, kappa_l: f64) -> Self {
        Self { kappa_l, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_over_kappa > 0.0) || !self.k_over_kappa.is_finite() {
            return Err(Error::Input(format!("k/kappa must be positive, got {}", self.k_over_kappa)));
        }
        if !(self.kappa_l >= 0.0) || !self.kappa_l.is_finite() {
            return Err(Error::Input(format!("kappa L must be finite and ≥ 0, got {}", self.kappa_l)));
        }
        if self.points < 2 {
            return Err(Error::Input(format!("J must be at least 2, got {}", self.points)));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<ModeProfile> {
        ModeProfile::new(self.shape.clone(), self.kappa_l)
    }

    pub fn grid_options(&self) -> GridOptions {
        GridOptions {
            points: self.points,
            window_factor: self.window_factor,
            renormalize: self.renormalize,
            window: None,
        }
    }
}

/// Interactions whose Born bound `∫|V|dx / k` on `|r|` is below this are
/// indistinguishable from free motion in double precision.
pub const NEGLIGIBLE_BORN_BOUND: f64 = 1e-15;

/// `t`, `r` for `V^branch`.
pub fn elementary_amplitudes(params: &MazerParams, branch: Branch) -> Result<ScatterResult> {
    params.validate()?;
    let profile = params.profile()?;
    let (lo, hi) = profile.default_window(params.window_factor);
    let born = 0.5 * profile.abs_area(lo, hi) / params.k_over_kappa;
    let grid = if born < NEGLIGIBLE_BORN_BOUND {
        Grid::free(energy_of(params.k_over_kappa))?
    } else {
        build_grid(&profile, branch, params.k_over_kappa, &params.grid_options())?
    };
    solve_scattering(&grid)
}

/// Squared event amplitudes and their diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventProbabilities {
    pub t_a_sq: f64,
    pub t_b_sq: f64,
    pub r_a_sq: f64,
    pub r_b_sq: f64,
    /// `|T_b|² + |R_b|²`.
    pub p_em: f64,
    /// `|Σ − 1|` over the four probabilities.
    pub closure_defect: f64,
    pub unitarity_defect_plus: f64,
    pub unitarity_defect_minus: f64,
}

impl EventProbabilities {
    /// Combine `(t₊, r₊)` and `(t₋, r₋)`.
    pub fn from_amplitudes(plus: (Complex64, Complex64), minus: (Complex64, Complex64)) -> Self {
        let ((tp, rp), (tm, rm)) = (plus, minus);
        let t_a_sq = (0.5 * (tp + tm)).norm_sqr();
        let t_b_sq = (0.5 * (tp - tm)).norm_sqr();
        let r_a_sq = (0.5 * (rp + rm)).norm_sqr();
        let r_b_sq = (0.5 * (rp - rm)).norm_sqr();
        let unit = |t: Complex64, r: Complex64| (t.norm_sqr() + r.norm_sqr() - 1.0).abs();
        Self {
            t_a_sq,
            t_b_sq,
            r_a_sq,
            r_b_sq,
            p_em: t_b_sq + r_b_sq,
            closure_defect: (t_a_sq + t_b_sq + r_a_sq + r_b_sq - 1.0).abs(),
            unitarity_defect_plus: unit(tp, rp),
            unitarity_defect_minus: unit(tm, rm),
        }
    }

    pub fn from_results(plus: &ScatterResult, minus: &ScatterResult) -> Self {
        Self::from_amplitudes((plus.t, plus.r), (minus.t, minus.r))
    }
}

pub fn event_probabilities(params: &MazerParams) -> Result<EventProbabilities> {
    let plus = elementary_amplitudes(params, Branch::Plus)?;
    let minus = elementary_amplitudes(params, Branch::Minus)?;
    Ok(EventProbabilities::from_results(&plus, &minus))
}

/// Values `lo, lo + step, …` up to `hi`, which is included if within half a step.
pub fn kappa_l_range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() || !step.is_finite() {
        return Err(Error::Input("range bounds must be finite".into()));
    }
    if !(step > 0.0) {
        return Err(Error::Input(format!("range step must be positive, got {step}")));
    }
    if lo > hi {
        return Err(Error::Input(format!("range lower bound {lo} exceeds upper bound {hi}")));
    }
    let n = ((hi - lo) / step + 0.5).floor() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

/// Largest `closure_defect` a sweep row may carry before it is marked as failed.
pub const CLOSURE_TOL: f64 = 1e-8;

/// One sweep row; a failed point keeps its `κ_nL` and the error text.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa_l: f64,
    pub outcome: std::result::Result<EventProbabilities, String>,
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Input(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// `P_em` and event probabilities at each `κ_nL`, computed in parallel and
/// returned in input order. The pool size comes from [`THREADS_ENV`].
pub fn sweep_kappa_l(params: &MazerParams, values: &[f64]) -> Result<Vec<SweepRow>> {
    sweep_kappa_l_with_threads(params, values, threads_from_env()?)
}

pub fn sweep_kappa_l_with_threads(params: &MazerParams, values: &[f64], threads: Option<usize>) -> Result<Vec<SweepRow>> {
    with_pool(threads, || {
        values
            .par_iter()
            .map(|&kappa_l| SweepRow {
                kappa_l,
                outcome: event_probabilities(&params.with_kappa_l(kappa_l)).map_err(|e| e.to_string()).and_then(|p| {
                    if p.closure_defect <= CLOSURE_TOL {
                        Ok(p)
                    } else {
                        Err(format!("closure defect {:e} exceeds {CLOSURE_TOL:e}", p.closure_defect))
                    }
                }),
            })
            .collect()
    })
}

/// `P_em` against `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<(usize, EventProbabilities)>,
}

impl ConvergenceTable {
    /// Largest pairwise `|ΔP_em|` among the upper half of the `J` values.
    pub fn settling(&self) -> f64 {
        let top = &self.rows[self.rows.len() / 2..];
        let mut worst: f64 = 0.0;
        for (i, a) in top.iter().enumerate() {
            for b in &top[i + 1..] {
                worst = worst.max((a.1.p_em - b.1.p_em).abs());
            }
        }
        worst
    }
}

pub fn convergence_study(params: &MazerParams, j_list: &[usize]) -> Result<ConvergenceTable> {
    if j_list.is_empty() || j_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("J list must be nonempty and strictly ascending".into()));
    }
    let rows = with_pool(threads_from_env()?, || {
        j_list
            .par_iter()
            .map(|&j| event_probabilities(&params.clone().with_points(j)).map(|p| (j, p)))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(ConvergenceTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{mesa_analytic, sech2_analytic};

    #[test]
    fn no_interaction_no_emission() {
        for shape in [Shape::Sech2, Shape::Mesa, Shape::SinFundamental] {
            let p = event_probabilities(&MazerParams::new(shape, 0.1, 0.0)).unwrap();
            assert_eq!(p.p_em, 0.0);
            assert_eq!(p.t_a_sq, 1.0);
        }
    }

    #[test]
    fn long_fundamental_sine_emits_half() {
        for kl in [1e5, 1e5 + 1.3, 1e5 + 2.7] {
            let p = event_probabilities(&MazerParams::new(Shape::SinFundamental, 0.1, kl)).unwrap();
            assert!((p.p_em - 0.5).abs() < 0.1, "{kl}: {}", p.p_em);
        }
    }

    #[test]
    fn mesa_matches_closed_form() {
        let params = MazerParams::new(Shape::Mesa, 0.1, 7.0);
        for branch in [Branch::Plus, Branch::Minus] {
            let got = elementary_amplitudes(&params, branch).unwrap();
            let want = mesa_analytic(0.1, 7.0, branch).unwrap();
            assert!((got.t - want.t).norm() < 1e-10 * want.t.norm());
            assert!((got.r - want.r).norm() < 1e-10 * want.r.norm());
        }
    }

    #[test]
    fn sech2_close_to_oracle() {
        let params = MazerParams::new(Shape::Sech2, 0.1, 5.0).with_points(200);
        for branch in [Branch::Plus, Branch::Minus] {
            let got = elementary_amplitudes(&params, branch).unwrap();
            let want = sech2_analytic(0.1, 5.0, branch).unwrap();
            assert!((got.t.norm_sqr() - want.t.norm_sqr()).abs() < 1e-3, "{branch}");
            assert!((got.r.norm_sqr() - want.r.norm_sqr()).abs() < 1e-3, "{branch}");
        }
    }

    #[test]
    fn vanishing_interaction_is_free() {
        for kappa_l in [1e-20, 1e-50, 1e-300] {
            for shape in [Shape::Sech2, Shape::SinFundamental, Shape::Gaussian] {
                let p = event_probabilities(&MazerParams::new(shape, 0.1, kappa_l)).unwrap();
                assert_eq!(p.p_em, 0.0);
            }
        }
        let p = event_probabilities(&MazerParams::new(Shape::Sech2, 0.1, 1e-12)).unwrap();
        assert!(p.p_em > 0.0 && p.p_em < 1e-20 && p.closure_defect < 1e-12);
    }

    #[test]
    fn emission_vanishes_quadratically_at_short_length() {
        // Born: |r±| ≈ κL/k, so P_em ≈ 2(κL/k)²
        let p3 = event_probabilities(&MazerParams::new(Shape::Sech2, 0.1, 1e-3)).unwrap().p_em;
        let p4 = event_probabilities(&MazerParams::new(Shape::Sech2, 0.1, 1e-4)).unwrap().p_em;
        assert!((p3 / 2e-4 - 1.0).abs() < 1e-2);
        assert!((p3 / p4 / 100.0 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn range_includes_endpoint_within_half_step() {
        assert_eq!(kappa_l_range(0.0, 20.0, 0.1).unwrap().len(), 201);
        assert_eq!(kappa_l_range(0.0, 1.04, 0.1).unwrap().len(), 11);
        assert_eq!(kappa_l_range(0.0, 1.06, 0.1).unwrap().len(), 12);
        assert!(kappa_l_range(1.0, 0.0, 0.1).is_err());
        assert!(kappa_l_range(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sweep_is_ordered_and_thread_independent() {
        let params = MazerParams::new(Shape::Sech2, 0.1, 0.0).with_points(60);
        let xs = kappa_l_range(0.0, 3.0, 0.25).unwrap();
        let a = sweep_kappa_l_with_threads(&params, &xs, Some(1)).unwrap();
        let b = sweep_kappa_l_with_threads(&params, &xs, Some(4)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().zip(&xs).all(|(row, &x)| row.kappa_l == x));
    }

    #[test]
    fn mesa_emission_independent_of_j() {
        let params = MazerParams::new(Shape::Mesa, 0.05, 9.0);
        let table = convergence_study(&params, &[10, 100, 1000]).unwrap();
        assert!(table.settling() < 1e-12);
    }
}
