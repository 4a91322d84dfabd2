//! Coefficient propagation across segment joins and extraction of `t`, `r`.
//!
//! On segment `j` the solution is `C_j f_j⁺ + D_j f_j⁻`. Matching value and
//! slope at a join gives a 2×2 real matrix between neighbouring coefficient
//! pairs. The production path seeds the outgoing wave `e^{ikx}`, i.e.
//! `(C_J, D_J) = (1, i)` in the `{cos kx, sin kx}` basis of the right-hand free
//! region, and runs the backward matrices down to the left-hand region where
//! `φ_0 = C_0 cos kx + D_0 sin kx` fixes
//! `t = 2/(C_0 − iD_0)` and `r = (C_0 + iD_0)/(C_0 − iD_0)`.
//!
//! Coefficients are renormalised after every join so that the larger modulus
//! lies in `[1, 10)`; the true pair is the stored pair times `10^scale`.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extrange::{XComplex, XReal};
use crate::grid::Grid;
use crate::segment::{BasisEval, Segment};

/// Coefficients `(C, D)` of one segment; true values are `(C, D)·10^scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffPair {
    pub c: XComplex,
    pub d: XComplex,
    pub scale: i64,
}

impl CoeffPair {
    pub fn new(c: XComplex, d: XComplex) -> Self {
        Self { c, d, scale: 0 }
    }

    /// Move powers of ten into `scale` so that `max(|C|, |D|) ∈ [1, 10)`.
    pub fn rescaled(self) -> Result<Self> {
        let e = match (self.c.max_exponent(), self.d.max_exponent()) {
            (None, None) => return Ok(self),
            (a, b) => a.into_iter().chain(b).max().expect("one side nonzero"),
        };
        let mut c = self.c.shift_exponent(-e)?;
        let mut d = self.d.shift_exponent(-e)?;
        let mut scale = self.scale.checked_add(e).ok_or(crate::extrange::RangeError::ExponentOverflow)?;
        let modulus = c.to_complex_flush().norm().max(d.to_complex_flush().norm());
        if modulus >= 10.0 {
            c = c.shift_exponent(-1)?;
            d = d.shift_exponent(-1)?;
            scale += 1;
        }
        Ok(Self { c, d, scale })
    }

    /// `log10 |C|` of the true coefficient.
    pub fn log10_abs_c(&self) -> f64 {
        self.c.log10_abs() + self.scale as f64
    }

    pub fn log10_abs_d(&self) -> f64 {
        self.d.log10_abs() + self.scale as f64
    }

    /// Stored `C f⁺ + D f⁻` (without the `10^scale` factor).
    fn combine(&self, v: &BasisEval) -> (XComplex, XComplex) {
        (self.c.scale(v.f_plus) + self.d.scale(v.f_minus), self.c.scale(v.g_plus) + self.d.scale(v.g_minus))
    }
}

/// Real 2×2 matrix acting on `(C, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub [[XReal; 2]; 2]);

impl TransferMatrix {
    pub fn identity() -> Self {
        Self([[XReal::ONE, XReal::ZERO], [XReal::ZERO, XReal::ONE]])
    }

    pub fn det(&self) -> XReal {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn apply(&self, p: &CoeffPair) -> CoeffPair {
        let m = &self.0;
        CoeffPair {
            c: p.c.scale(m[0][0]) + p.d.scale(m[0][1]),
            d: p.c.scale(m[1][0]) + p.d.scale(m[1][1]),
            scale: p.scale,
        }
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        self.0.map(|row| row.map(XReal::to_f64_flush))
    }
}

/// Matrix taking `(C, D)` on `to` from `(C, D)` on `from` at `x`, denominator
/// the analytic Wronskian of `to`.
fn join_matrix(to: &Segment, from: &Segment, x: f64) -> Result<TransferMatrix> {
    let w = to.wronskian();
    if w == 0.0 || !w.is_finite() {
        return Err(Error::Degenerate(format!("zero Wronskian on {:?} segment at x = {x}", to.regime())));
    }
    let t = to.eval(x)?;
    let f = from.eval(x)?;
    let inv = XReal::from_f64(1.0 / w);
    Ok(TransferMatrix([
        [
            (t.g_minus * f.f_plus - t.f_minus * f.g_plus) * inv,
            (t.g_minus * f.f_minus - t.f_minus * f.g_minus) * inv,
        ],
        [
            (t.f_plus * f.g_plus - t.g_plus * f.f_plus) * inv,
            (t.f_plus * f.g_minus - t.g_plus * f.f_minus) * inv,
        ],
    ]))
}

/// `B_j(x_j)`: coefficients on `left` from those on `right`.
pub fn backward_matrix(left: &Segment, right: &Segment, x_join: f64) -> Result<TransferMatrix> {
    join_matrix(left, right, x_join)
}

/// `A_j(x_j)`: coefficients on `right` from those on `left`.
pub fn forward_matrix(left: &Segment, right: &Segment, x_join: f64) -> Result<TransferMatrix> {
    join_matrix(right, left, x_join)
}

/// Carry `coeffs` from `right` to `left` across `x_join`, then rescale.
pub fn step_backward(left: &Segment, right: &Segment, x_join: f64, coeffs: &CoeffPair) -> Result<CoeffPair> {
    backward_matrix(left, right, x_join)?.apply(coeffs).rescaled()
}

/// Carry `coeffs` from `left` to `right` across `x_join`, then rescale.
pub fn step_forward(left: &Segment, right: &Segment, x_join: f64, coeffs: &CoeffPair) -> Result<CoeffPair> {
    forward_matrix(left, right, x_join)?.apply(coeffs).rescaled()
}

/// Transmission and reflection amplitudes for incidence from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    pub t: Complex64,
    pub r: Complex64,
    /// `log10 |t|`, meaningful even when `t` underflows to zero.
    pub log10_abs_t: f64,
    /// `| |t|² + |r|² − 1 |`.
    pub unitarity_defect: f64,
    pub energy: f64,
    pub k: f64,
}

/// A solved scattering problem with the coefficients of every segment.
#[derive(Debug, Clone)]
pub struct Solution<'g> {
    grid: &'g Grid,
    seed: XComplex,
    t: XComplex,
    coeffs: Vec<CoeffPair>,
    pub result: ScatterResult,
}

/// Solve with the outgoing wave seeded at unit amplitude.
pub fn solve_scattering(grid: &Grid) -> Result<ScatterResult> {
    Ok(solve_scattering_seeded(grid, Complex64::new(1.0, 0.0))?.result)
}

/// Solve with `(C_J, D_J) = s·(1, i)`; `t` and `r` do not depend on `s ≠ 0`.
pub fn solve_scattering_seeded(grid: &Grid, s: Complex64) -> Result<Solution<'_>> {
    if !(grid.energy() > 0.0) {
        return Err(Error::Input("scattering needs E > 0".into()));
    }
    if s == Complex64::new(0.0, 0.0) || !s.is_finite() {
        return Err(Error::Input(format!("seed must be finite and nonzero, got {s}")));
    }
    let segs = grid.segments();
    let n = segs.len();
    let seed = XComplex::from_complex(s);
    let mut coeffs = vec![CoeffPair::new(XComplex::ZERO, XComplex::ZERO); n];
    coeffs[n - 1] = CoeffPair::new(seed, seed.mul_i()).rescaled()?;
    for j in (1..n).rev() {
        coeffs[j - 1] = step_backward(&segs[j - 1], &segs[j], segs[j].x_lo(), &coeffs[j])?;
    }
    let first = coeffs[0];
    let denom = first.c - first.d.mul_i();
    if denom.is_zero() {
        return Err(Error::Degenerate("C_0 − iD_0 = 0".into()));
    }
    let numer = first.c + first.d.mul_i();
    let inv = denom.recip().expect("nonzero denominator");
    let t = (seed.scale(XReal::from_f64(2.0)) * inv).shift_exponent(-first.scale)?;
    let r = (numer * inv).to_complex_checked().map_err(|e| Error::Degenerate(format!("reflection amplitude {e:?}")))?;
    let t_c = t.to_complex_checked().map_err(|e| Error::Degenerate(format!("transmission amplitude {e:?}")))?;
    let k = grid.k();
    let result = ScatterResult {
        t: t_c,
        r,
        log10_abs_t: t.log10_abs(),
        unitarity_defect: (t_c.norm_sqr() + r.norm_sqr() - 1.0).abs(),
        energy: grid.energy(),
        k,
    };
    Ok(Solution {
        grid,
        seed,
        t,
        coeffs,
        result,
    })
}

/// Coefficients of the left free region obtained by forward propagation of
/// `(C_J, D_J)` back to the right; used to check the backward pass.
pub fn propagate_forward(grid: &Grid, first: CoeffPair) -> Result<Vec<CoeffPair>> {
    let segs = grid.segments();
    let mut out = Vec::with_capacity(segs.len());
    out.push(first.rescaled()?);
    for j in 1..segs.len() {
        let next = step_forward(&segs[j - 1], &segs[j], segs[j].x_lo(), &out[j - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// One row of the per-join diagnostic dump.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinRecord {
    pub x: f64,
    pub regime: &'static str,
    pub log10_abs_c: f64,
    pub log10_abs_d: f64,
    pub scale: i64,
}

impl<'g> Solution<'g> {
    pub fn grid(&self) -> &Grid {
        self.grid
    }

    pub fn coefficients(&self) -> &[CoeffPair] {
        &self.coeffs
    }

    /// Wavefunction with unit incident amplitude inside segment `j`.
    pub fn psi_in_segment(&self, j: usize, x: f64) -> Result<(XComplex, XComplex)> {
        let seg = self.grid.segments().get(j).ok_or_else(|| Error::Input(format!("no segment {j}")))?;
        let p = &self.coeffs[j];
        let (v, dv) = p.combine(&seg.eval(x)?);
        // physical normalisation: outgoing amplitude t instead of the seed
        let norm = (self.t * self.seed.recip().expect("nonzero seed")).shift_exponent(p.scale)?;
        Ok((v * norm, dv * norm))
    }

    /// `φ(x)` for each sample, taken from the segment containing it (the left
    /// one at a join). Samples further than `2L` outside the grid are rejected.
    pub fn wavefunction(&self, xs: &[f64]) -> Result<Vec<(f64, XComplex)>> {
        let pts = self.grid.points();
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        let margin = 2.0 * self.grid.length();
        let segs = self.grid.segments();
        xs.iter()
            .map(|&x| {
                if !x.is_finite() || (margin > 0.0 && (x < a - margin || x > b + margin)) {
                    return Err(Error::Input(format!(
                        "sample {x} outside [{}, {}]",
                        a - margin,
                        b + margin
                    )));
                }
                let j = segs.partition_point(|s| s.x_hi() < x);
                Ok((x, self.psi_in_segment(j, x)?.0))
            })
            .collect()
    }

    pub fn join_records(&self) -> Vec<JoinRecord> {
        let segs = self.grid.segments();
        (1..segs.len())
            .map(|j| JoinRecord {
                x: segs[j].x_lo(),
                regime: segs[j].regime().name(),
                log10_abs_c: self.coeffs[j].log10_abs_c(),
                log10_abs_d: self.coeffs[j].log10_abs_d(),
                scale: self.coeffs[j].scale,
            })
            .collect()
    }

    /// CSV of `x_j, regime, log10|C|, log10|D|, scale` for the segment to the
    /// right of each join.
    pub fn write_join_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "x,regime,log10_abs_C,log10_abs_D,log10_scale")?;
        for r in self.join_records() {
            writeln!(w, "{},{},{},{},{}", r.x, r.regime, r.log10_abs_c, r.log10_abs_d, r.scale)?;
        }
        Ok(())
    }
}
