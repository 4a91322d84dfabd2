//! Exact solution pair on one linear-potential segment.
//!
//! On a segment the reduced equation is `φ'' + z(x) φ = 0` with
//! `z(x) = a + b·x = 2(E − V(x))`. The pair `f±` and its derivative `g±` are
//! elementary when `b = 0` and Bessel functions of order 1/3 of
//! `w = 2|z|^{3/2} / (3|b|)` otherwise.
//!
//! Close to a turning point (`w ≤ 2`) the sloped pair is evaluated from
//! ascending series in which the `√|z|` prefactor has been absorbed, so every
//! value stays finite and accurate at `z = 0`. Far from it, large `w` is handled
//! by measuring the Bessel phase (or exponent) from a reference end of the
//! segment; this multiplies `f+` and `f−` by reciprocal constants (or rotates
//! them), which leaves the Wronskian unchanged.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::extrange::XReal;
use crate::specfun::{ascending_sums, bessel_ik_scaled, bessel_jy, gamma, hankel_jy, SERIES_MAX};

const NU: f64 = 1.0 / 3.0;
const SIN_PI_3: f64 = 0.866_025_403_784_438_6;
const COS_PI_3: f64 = 0.5;

/// Smallest reference value of `w` for which phases are measured from an end.
const OFFSET_MIN_W: f64 = 50.0;
/// Relative change of `z` across a segment below which it is treated as flat.
const FLAT_TOL: f64 = 1e-13;
/// Wrong-sign `z` smaller than this fraction of the segment scale is clamped to 0.
const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    FlatFree,
    FlatAllowed,
    FlatForbidden,
    SlopeAllowed,
    SlopeForbidden,
}

impl Regime {
    pub fn is_flat(self) -> bool {
        matches!(self, Regime::FlatFree | Regime::FlatAllowed | Regime::FlatForbidden)
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::FlatFree => "flat_free",
            Regime::FlatAllowed => "flat_allowed",
            Regime::FlatForbidden => "flat_forbidden",
            Regime::SlopeAllowed => "slope_allowed",
            Regime::SlopeForbidden => "slope_forbidden",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reference end for sloped segments with large `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Reference {
    x: f64,
    z: f64,
    w: f64,
}

/// One region `I_j` with `z(x) = a + b·x` of constant sign.
///
/// `z` is stored by its end values, so `z(x_hi)` is reproduced exactly and no
/// cancellation occurs in `a + b·x` when `|x|` is large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    x_lo: f64,
    x_hi: f64,
    z_lo: f64,
    z_hi: f64,
    b: f64,
    regime: Regime,
    /// Origin of the phase or exponent for flat segments.
    origin: f64,
    reference: Option<Reference>,
}

/// `f±(x)` and `g±(x) = df±/dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisEval {
    pub f_plus: XReal,
    pub f_minus: XReal,
    pub g_plus: XReal,
    pub g_minus: XReal,
}

impl BasisEval {
    /// `f+·g− − f−·g+` evaluated from the values.
    pub fn wronskian(&self) -> XReal {
        self.f_plus * self.g_minus - self.f_minus * self.g_plus
    }
}

fn regime_of_flat(z: f64) -> Regime {
    if z > 0.0 {
        Regime::FlatAllowed
    } else if z < 0.0 {
        Regime::FlatForbidden
    } else {
        Regime::FlatFree
    }
}

impl Segment {
    /// Segment on `[x_lo, x_hi]` with `z = a + b·x`, as written in the segment
    /// equation. Flat bases use the coordinate origin.
    pub fn linear(a: f64, b: f64, x_lo: f64, x_hi: f64) -> Result<Self> {
        if b == 0.0 {
            return Self::flat(x_lo, x_hi, a, 0.0);
        }
        Self::new_sloped(x_lo, x_hi, a + b * x_lo, a + b * x_hi, b)
    }

    /// Segment interpolating `z` linearly between its end values. Flat bases
    /// take their origin at `x_lo`.
    pub fn between(x_lo: f64, x_hi: f64, z_lo: f64, z_hi: f64) -> Result<Self> {
        check_bounds(x_lo, x_hi)?;
        if !z_lo.is_finite() || !z_hi.is_finite() {
            return Err(Error::Input(format!("non-finite z on [{x_lo}, {x_hi}]")));
        }
        let scale = z_lo.abs().max(z_hi.abs());
        if (z_hi - z_lo).abs() <= FLAT_TOL * scale || scale == 0.0 {
            return Self::flat(x_lo, x_hi, 0.5 * (z_lo + z_hi), x_lo);
        }
        let b = (z_hi - z_lo) / (x_hi - x_lo);
        Self::new_sloped(x_lo, x_hi, z_lo, z_hi, b)
    }

    /// Constant `z` with the elementary basis measured from `origin`.
    pub fn flat(x_lo: f64, x_hi: f64, z: f64, origin: f64) -> Result<Self> {
        check_bounds(x_lo, x_hi)?;
        if !z.is_finite() || !origin.is_finite() {
            return Err(Error::Input("non-finite flat segment".into()));
        }
        Ok(Self {
            x_lo,
            x_hi,
            z_lo: z,
            z_hi: z,
            b: 0.0,
            regime: regime_of_flat(z),
            origin,
            reference: None,
        })
    }

    /// Free asymptotic region with `a = 2E`, `b = 0` and basis
    /// `{cos kx, sin kx}` about the coordinate origin. Bounds may be infinite.
    pub fn asymptotic(x_lo: f64, x_hi: f64, energy: f64) -> Result<Self> {
        Self::flat(x_lo, x_hi, 2.0 * energy, 0.0)
    }

    fn new_sloped(x_lo: f64, x_hi: f64, z_lo: f64, z_hi: f64, b: f64) -> Result<Self> {
        check_bounds(x_lo, x_hi)?;
        if !x_lo.is_finite() || !x_hi.is_finite() || !b.is_finite() {
            return Err(Error::Input("sloped segment needs finite bounds".into()));
        }
        let scale = z_lo.abs().max(z_hi.abs());
        let clamp = |z: f64, sign: f64| if z * sign < 0.0 && z.abs() <= CLAMP_TOL * scale { 0.0 } else { z };
        let regime = if z_lo + z_hi > 0.0 { Regime::SlopeAllowed } else { Regime::SlopeForbidden };
        let sign = if regime == Regime::SlopeAllowed { 1.0 } else { -1.0 };
        let (z_lo, z_hi) = (clamp(z_lo, sign), clamp(z_hi, sign));
        if z_lo * sign < 0.0 || z_hi * sign < 0.0 {
            return Err(Error::Regime(format!(
                "z changes sign on [{x_lo}, {x_hi}]: z = {z_lo} .. {z_hi}"
            )));
        }
        let (x_r, z_r) = if z_lo.abs() <= z_hi.abs() { (x_lo, z_lo) } else { (x_hi, z_hi) };
        let w_r = airy_argument(z_r, b);
        let reference = (w_r >= OFFSET_MIN_W).then_some(Reference { x: x_r, z: z_r, w: w_r });
        Ok(Self {
            x_lo,
            x_hi,
            z_lo,
            z_hi,
            b,
            regime,
            origin: 0.0,
            reference,
        })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    /// Intercept of `z = a + b·x`.
    pub fn a(&self) -> f64 {
        if self.b == 0.0 {
            self.z_lo
        } else {
            self.z_lo - self.b * self.x_lo
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `z` at the two ends.
    pub fn z_ends(&self) -> (f64, f64) {
        (self.z_lo, self.z_hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi
    }

    /// `z(x)`, clamped to zero where rounding gives a tiny value of the wrong sign.
    pub fn z_at(&self, x: f64) -> Result<f64> {
        if self.b == 0.0 {
            return Ok(self.z_lo);
        }
        let z = if x == self.x_hi { self.z_hi } else { self.z_lo + self.b * (x - self.x_lo) };
        let allowed = self.regime == Regime::SlopeAllowed;
        if (allowed && z >= 0.0) || (!allowed && z <= 0.0) {
            return Ok(z);
        }
        let scale = self.z_lo.abs().max(self.z_hi.abs());
        if z.abs() <= CLAMP_TOL * scale {
            Ok(0.0)
        } else {
            Err(Error::Regime(format!("z({x}) = {z} inconsistent with {}", self.regime)))
        }
    }

    /// Analytic value of `f+·g− − f−·g+`.
    pub fn wronskian(&self) -> f64 {
        match self.regime {
            Regime::FlatFree => 1.0,
            Regime::FlatAllowed => self.z_lo.sqrt(),
            Regime::FlatForbidden => 2.0 * (-self.z_lo).sqrt(),
            Regime::SlopeAllowed => 3.0 * self.b / PI,
            Regime::SlopeForbidden => 1.5 * self.b,
        }
    }

    /// Limits of `[f+, f−, g+, g−]` at a turning point of a sloped segment.
    ///
    /// These hold for the basis without a phase reference, which is always the
    /// case for a segment ending on a turning point.
    pub fn turning_point_limits(&self) -> Option<[f64; 4]> {
        let b = self.b;
        if b == 0.0 {
            return None;
        }
        let c = (3.0 * b).abs().cbrt();
        let g13 = gamma(1.0 / 3.0).expect("regular point");
        let g43 = gamma(4.0 / 3.0).expect("regular point");
        let sqrt3 = 3f64.sqrt();
        Some(match self.regime {
            Regime::SlopeAllowed => [0.0, -c * g13 / PI, b / (c * g43), b / (sqrt3 * c * g43)],
            _ => [0.0, 0.5 * c * g13, -b / (c * g43), PI * b / (sqrt3 * c * g43)],
        })
    }

    /// `w` at `x`.
    pub fn airy_argument(&self, x: f64) -> Result<f64> {
        Ok(airy_argument(self.z_at(x)?, self.b))
    }

    /// Evaluate the basis at `x ∈ [x_lo, x_hi]`.
    pub fn eval(&self, x: f64) -> Result<BasisEval> {
        if !self.contains(x) {
            return Err(Error::Domain(format!(
                "x = {x} outside segment [{}, {}]",
                self.x_lo, self.x_hi
            )));
        }
        match self.regime {
            Regime::FlatFree => Ok(BasisEval {
                f_plus: XReal::ONE,
                f_minus: XReal::from_f64(x - self.origin),
                g_plus: XReal::ZERO,
                g_minus: XReal::ONE,
            }),
            Regime::FlatAllowed => {
                let k = self.z_lo.sqrt();
                let (s, c) = (k * (x - self.origin)).sin_cos();
                Ok(BasisEval {
                    f_plus: XReal::from_f64(c),
                    f_minus: XReal::from_f64(s),
                    g_plus: XReal::from_f64(-k * s),
                    g_minus: XReal::from_f64(k * c),
                })
            }
            Regime::FlatForbidden => {
                let rho = (-self.z_lo).sqrt();
                let decay = XReal::exp(-rho * (x - self.origin))?;
                let grow = XReal::exp(rho * (x - self.origin))?;
                Ok(BasisEval {
                    f_plus: decay,
                    f_minus: grow,
                    g_plus: decay * XReal::from_f64(-rho),
                    g_minus: grow * XReal::from_f64(rho),
                })
            }
            Regime::SlopeAllowed | Regime::SlopeForbidden => self.eval_sloped(x),
        }
    }

    fn eval_sloped(&self, x: f64) -> Result<BasisEval> {
        let b = self.b;
        let s = b.signum();
        let z = self.z_at(x)?;
        let az = z.abs();
        let w = airy_argument(z, b);
        let allowed = self.regime == Regime::SlopeAllowed;
        if w <= SERIES_MAX {
            return Ok(self.eval_series(az, w, allowed));
        }
        let root = az.sqrt();
        let dw = match self.reference {
            Some(r) => delta_w(x, z, r, s),
            None => w,
        };
        if allowed {
            let v = if self.reference.is_some() { hankel_jy(NU, w, dw) } else { bessel_jy(NU, w) };
            let edge = 0.5 * b / root;
            Ok(BasisEval {
                f_plus: XReal::from_f64(root * v.j),
                f_minus: XReal::from_f64(root * v.y),
                g_plus: XReal::from_f64(edge * v.j + s * az * v.jp),
                g_minus: XReal::from_f64(edge * v.y + s * az * v.yp),
            })
        } else {
            let v = bessel_ik_scaled(NU, w);
            let grow = XReal::exp(dw)?;
            let decay = XReal::exp(-dw)?;
            let edge = -0.5 * b / root;
            Ok(BasisEval {
                f_plus: XReal::from_f64(root * v.i) * grow,
                f_minus: XReal::from_f64(root * v.k) * decay,
                g_plus: XReal::from_f64(edge * v.i - s * az * v.ip) * grow,
                g_minus: XReal::from_f64(edge * v.k - s * az * v.kp) * decay,
            })
        }
    }

    /// Turning-point neighbourhood: the four functions
    /// `√|z|·C_{±1/3}(w)` and their derivatives written as power series in
    /// `q = w²/4` with the fractional powers of `|z|` factored out.
    fn eval_series(&self, az: f64, w: f64, allowed: bool) -> BasisEval {
        let b = self.b;
        let s = b.signum();
        let q = 0.25 * w * w;
        let c = (3.0 * b.abs()).cbrt();
        let sum = |nu: f64| ascending_sums(nu, q, !allowed).0;
        let f_p = az / c * sum(NU);
        let f_m = c * sum(-NU);
        let sign = if allowed { s } else { -s };
        let g_p = sign * c * c * sum(-2.0 * NU);
        let g_m = -s * az * az / (c * c) * sum(2.0 * NU);
        let (f_minus, g_minus) = if allowed {
            ((COS_PI_3 * f_p - f_m) / SIN_PI_3, (COS_PI_3 * g_p - g_m) / SIN_PI_3)
        } else {
            let k = 0.5 * PI / SIN_PI_3;
            (k * (f_m - f_p), k * (g_m - g_p))
        };
        BasisEval {
            f_plus: XReal::from_f64(f_p),
            f_minus: XReal::from_f64(f_minus),
            g_plus: XReal::from_f64(g_p),
            g_minus: XReal::from_f64(g_minus),
        }
    }
}

fn check_bounds(x_lo: f64, x_hi: f64) -> Result<()> {
    if x_lo.is_nan() || x_hi.is_nan() || !(x_lo < x_hi) {
        return Err(Error::Input(format!("segment bounds must satisfy x_lo < x_hi, got [{x_lo}, {x_hi}]")));
    }
    Ok(())
}

fn airy_argument(z: f64, b: f64) -> f64 {
    let az = z.abs();
    2.0 * az * az.sqrt() / (3.0 * b.abs())
}

/// `w(x) − w(x_r)` without cancellation, using
/// `|z|^{3/2} − |z_r|^{3/2} = (|z| − |z_r|)(|z| + √|z z_r| + |z_r|)/(√|z| + √|z_r|)`.
fn delta_w(x: f64, z: f64, r: Reference, s: f64) -> f64 {
    let (az, ar) = (z.abs(), r.z.abs());
    let sz = if z != 0.0 { z.signum() } else { r.z.signum() };
    let ratio = (az + (az * ar).sqrt() + ar) / (az.sqrt() + ar.sqrt());
    (2.0 / 3.0) * sz * s * (x - r.x) * ratio
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: XReal) -> f64 {
        x.to_f64_flush()
    }

    #[test]
    fn flat_allowed_at_origin() {
        let seg = Segment::linear(2.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(seg.regime(), Regime::FlatAllowed);
        let v = seg.eval(0.0).unwrap();
        assert_eq!(f(v.f_plus), 1.0);
        assert_eq!(f(v.f_minus), 0.0);
        assert_eq!(f(v.g_plus), 0.0);
        assert!((f(v.g_minus) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn allowed_turning_point_limit() {
        // b = 1/3 so |3b| = 1; turning point at x = 0
        let seg = Segment::linear(0.0, 1.0 / 3.0, 0.0, 2.0).unwrap();
        let v = seg.eval(0.0).unwrap();
        assert_eq!(f(v.f_plus), 0.0);
        // mpmath: gamma(1/3)/pi
        assert!((f(v.f_minus) + 0.852_732_620_076_194_1).abs() < 4e-15);
    }

    #[test]
    fn limits_match_table() {
        for (a, b) in [(0.0, 0.7), (0.0, -0.7), (0.0, 2.5), (0.0, -1e-3)] {
            for lo in [true, false] {
                let (x_lo, x_hi) = if lo { (0.0, 1.0) } else { (-1.0, 0.0) };
                let seg = match Segment::linear(a, b, x_lo, x_hi) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let v = seg.eval(0.0).unwrap();
                let want = seg.turning_point_limits().unwrap();
                let got = [f(v.f_plus), f(v.f_minus), f(v.g_plus), f(v.g_minus)];
                for (g, w) in got.iter().zip(want) {
                    assert!((g - w).abs() <= 1e-14 * w.abs().max(1e-300), "{:?}: {g} vs {w}", seg.regime());
                }
                assert!((f(v.wronskian()) / seg.wronskian() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wronskian_constant_along_segments() {
        let cases = [
            Segment::linear(1.5, 0.0, -2.0, 3.0).unwrap(),
            Segment::linear(-0.8, 0.0, -2.0, 3.0).unwrap(),
            Segment::linear(0.0, 0.0, -2.0, 3.0).unwrap(),
            Segment::between(10.0, 40.0, 1e-3, 0.9).unwrap(),
            Segment::between(10.0, 40.0, -0.9, -1e-3).unwrap(),
            Segment::between(0.0, 3e4, 0.5, 0.8).unwrap(),
            Segment::between(0.0, 3e4, -0.8, -0.5).unwrap(),
            Segment::between(1e5, 1.01e5, -0.2, 0.0).unwrap(),
        ];
        for seg in cases {
            for i in 0..=10 {
                let x = seg.x_lo() + (seg.x_hi() - seg.x_lo()) * i as f64 / 10.0;
                let v = seg.eval(x).unwrap();
                let got = v.wronskian() / XReal::from_f64(seg.wronskian());
                assert!((f(got) - 1.0).abs() < 1e-10, "{:?} at {x}: {}", seg.regime(), f(got));
            }
        }
    }

    #[test]
    fn series_and_bessel_agree_at_switch() {
        for b in [0.9f64, -0.9, 1e-4, -1e-4] {
            for allowed in [true, false] {
                let sign = if allowed { 1.0 } else { -1.0 };
                let z_switch = sign * (1.5 * b.abs() * SERIES_MAX).powf(2.0 / 3.0);
                let seg = if (b > 0.0) == allowed {
                    Segment::linear(0.0, b, 0.0, 3.0 * z_switch / b)
                } else {
                    Segment::linear(0.0, b, 3.0 * z_switch / b, 0.0)
                }
                .unwrap();
                let x = z_switch / b;
                let lo = seg.eval(x * (1.0 - 1e-13)).unwrap();
                let hi = seg.eval(x * (1.0 + 1e-13)).unwrap();
                for (p, q) in [
                    (lo.f_plus, hi.f_plus),
                    (lo.f_minus, hi.f_minus),
                    (lo.g_plus, hi.g_plus),
                    (lo.g_minus, hi.g_minus),
                ] {
                    assert!((f(p) / f(q) - 1.0).abs() < 1e-9, "b={b} allowed={allowed}: {} {}", f(p), f(q));
                }
            }
        }
    }

    #[test]
    fn regime_mismatch_is_an_error() {
        assert!(matches!(Segment::between(0.0, 1.0, -1.0, 1.0), Err(Error::Regime(_))));
        assert!(Segment::between(1.0, 1.0, 1.0, 1.0).is_err());
        let seg = Segment::linear(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(seg.eval(1.5).is_err());
    }

    #[test]
    fn tiny_wrong_sign_is_clamped() {
        let seg = Segment::between(0.0, 1.0, -1e-17, 0.5).unwrap();
        assert_eq!(seg.regime(), Regime::SlopeAllowed);
        assert_eq!(seg.z_ends().0, 0.0);
    }
}
