//! Cavity mode profiles `u(x)`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sampled profile, linearly interpolated. Abscissae are in units of the
/// cavity length `L` and must be strictly increasing; values lie in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    xs: Vec<f64>,
    us: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(xs: Vec<f64>, us: Vec<f64>) -> Result<Self> {
        if xs.len() != us.len() || xs.len() < 2 {
            return Err(Error::Input("tabulated profile needs at least two (x, u) pairs".into()));
        }
        if xs.iter().chain(&us).any(|v| !v.is_finite()) {
            return Err(Error::Input("tabulated profile contains non-finite values".into()));
        }
        if let Some(i) = xs.windows(2).position(|p| p[1] <= p[0]) {
            return Err(Error::Input(format!(
                "tabulated abscissae not strictly increasing at row {}: {} then {}",
                i + 1,
                xs[i],
                xs[i + 1]
            )));
        }
        if let Some(u) = us.iter().find(|u| u.abs() > 1.0) {
            return Err(Error::Input(format!("tabulated value {u} outside [-1, 1]")));
        }
        Ok(Self { xs, us })
    }

    /// Parse two whitespace- or comma-separated columns; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            if cols.len() != 2 {
                return Err(Error::Input(format!("line {}: expected two columns, got {:?}", n + 1, line)));
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Input(format!("line {}: {s:?}: {e}", n + 1)))
            };
            xs.push(num(cols[0])?);
            us.push(num(cols[1])?);
        }
        Self::new(xs, us)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.us
    }

    fn eval(&self, s: f64) -> f64 {
        let n = self.xs.len();
        if s < self.xs[0] || s > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&x| x <= s).clamp(1, n - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let t = (s - x0) / (x1 - x0);
        self.us[i - 1] + t * (self.us[i] - self.us[i - 1])
    }

    /// `∫|u| ds` over `[a, b]` in units of `L`; exact for the interpolant.
    fn abs_area(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for i in 1..self.xs.len() {
            let lo = self.xs[i - 1].max(a);
            let hi = self.xs[i].min(b);
            if hi > lo {
                total += abs_linear_area(lo, self.eval(lo), hi, self.eval(hi));
            }
        }
        total
    }
}

/// `∫|·|` of the straight line through `(x0, y0)` and `(x1, y1)`.
pub(crate) fn abs_linear_area(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let h = x1 - x0;
    if y0 * y1 >= 0.0 {
        0.5 * h * (y0.abs() + y1.abs())
    } else {
        0.5 * h * (y0 * y0 + y1 * y1) / (y0.abs() + y1.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Flat top: `u = 1` on `(0, L)`.
    Mesa,
    /// `u = sech²(x/L)`.
    Sech2,
    /// `u = sin(πx/L)` on `(0, L)`.
    SinFundamental,
    /// `u = sin(2πx/L)` on `(0, L)`.
    SinFirstExcited,
    /// `u = exp(−x²/2σ²)` with `σ = √(2/π)·L`, the same area as `sech²(x/L)`.
    Gaussian,
    Tabulated(TabulatedProfile),
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Mesa => "mesa",
            Shape::Sech2 => "sech2",
            Shape::SinFundamental => "sin",
            Shape::SinFirstExcited => "sin2",
            Shape::Gaussian => "gaussian",
            Shape::Tabulated(_) => "tabulated",
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// Built-in shapes by name; tabulated profiles are loaded separately.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "mesa" => Shape::Mesa,
            "sech2" => Shape::Sech2,
            "sin" | "sine" | "sin1" => Shape::SinFundamental,
            "sin2" | "sine2" => Shape::SinFirstExcited,
            "gaussian" | "gauss" => Shape::Gaussian,
            other => {
                return Err(Error::Input(format!(
                    "unknown profile {other:?} (expected mesa, sech2, sin, sin2, gaussian, tabulated)"
                )))
            }
        })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Mode function `u(x)` of a cavity of length `L` (in units of `1/κ_n`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    shape: Shape,
    length: f64,
}

impl ModeProfile {
    pub fn new(shape: Shape, length: f64) -> Result<Self> {
        if !(length >= 0.0) || !length.is_finite() {
            return Err(Error::Input(format!("cavity length must be finite and ≥ 0, got {length}")));
        }
        Ok(Self { shape, length })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Same shape at another length.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(self.shape.clone(), length)
    }

    /// Gaussian width `σ = √(2/π)·L`.
    pub fn sigma(&self) -> Option<f64> {
        matches!(self.shape, Shape::Gaussian).then(|| (2.0 / PI).sqrt() * self.length)
    }

    /// Whether `u` has unbounded support and must be truncated to a window.
    pub fn is_unbounded(&self) -> bool {
        matches!(self.shape, Shape::Sech2 | Shape::Gaussian)
    }

    pub fn is_piecewise_constant(&self) -> bool {
        matches!(self.shape, Shape::Mesa)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let l = self.length;
        if l == 0.0 {
            return 0.0;
        }
        let s = x / l;
        let inside = s > 0.0 && s < 1.0;
        match &self.shape {
            Shape::Mesa => f64::from(u8::from(inside)),
            Shape::Sech2 => {
                let c = s.abs().cosh();
                if c.is_finite() {
                    1.0 / (c * c)
                } else {
                    0.0
                }
            }
            Shape::SinFundamental if inside => (PI * s).sin(),
            Shape::SinFirstExcited if inside => (2.0 * PI * s).sin(),
            Shape::SinFundamental | Shape::SinFirstExcited => 0.0,
            Shape::Gaussian => (-0.25 * PI * s * s).exp(),
            Shape::Tabulated(t) => t.eval(s),
        }
    }

    /// Default computational window: `[−f·L/2, f·L/2]` for unbounded shapes,
    /// the support otherwise.
    pub fn default_window(&self, window_factor: f64) -> (f64, f64) {
        let l = self.length;
        match &self.shape {
            Shape::Sech2 | Shape::Gaussian => (-0.5 * window_factor * l, 0.5 * window_factor * l),
            Shape::Tabulated(t) => (t.xs[0] * l, t.xs[t.xs.len() - 1] * l),
            _ => (0.0, l),
        }
    }

    /// Closure of the region where `u` may be nonzero.
    pub fn support(&self) -> (f64, f64) {
        if self.is_unbounded() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            self.default_window(0.0)
        }
    }

    /// Exact `∫|u(x)| dx` over `[a, b]`.
    pub fn abs_area(&self, a: f64, b: f64) -> f64 {
        let l = self.length;
        if l == 0.0 || !(b > a) {
            return 0.0;
        }
        let (sa, sb) = (a / l, b / l);
        let (ca, cb) = (sa.max(0.0), sb.min(1.0));
        let unit = match &self.shape {
            Shape::Mesa => (cb - ca).max(0.0),
            Shape::Sech2 => sb.tanh() - sa.tanh(),
            Shape::Gaussian => libm::erf(0.5 * PI.sqrt() * sb) - libm::erf(0.5 * PI.sqrt() * sa),
            Shape::SinFundamental => abs_sin_area(PI, ca, cb),
            Shape::SinFirstExcited => abs_sin_area(2.0 * PI, ca, cb),
            Shape::Tabulated(t) => t.abs_area(sa, sb),
        };
        unit * l
    }
}

/// `∫|sin(ωs)| ds` over `[a, b] ⊂ [0, 1]`, split at the zeros of the sine.
fn abs_sin_area(omega: f64, a: f64, b: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let half = PI / omega;
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (((lo / half).floor() + 1.0) * half).min(b);
        total += ((omega * lo).cos() - (omega * hi).cos()).abs() / omega;
        lo = hi;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let sin = ModeProfile::new(Shape::SinFundamental, 3.0).unwrap();
        assert!((sin.eval(1.5) - 1.0).abs() < 1e-15);
        let sin2 = ModeProfile::new(Shape::SinFirstExcited, 4.0).unwrap();
        assert!((sin2.eval(3.0) + 1.0).abs() < 1e-15);
        let g = ModeProfile::new(Shape::Gaussian, 2.0).unwrap();
        assert_eq!(g.eval(0.0), 1.0);
        let sigma = g.sigma().unwrap();
        assert!((sigma - (2.0 / PI).sqrt() * 2.0).abs() < 1e-15);
        let half = sigma * (2.0 * 2f64.ln()).sqrt();
        assert!((g.eval(half) - 0.5).abs() < 1e-15);
        let mesa = ModeProfile::new(Shape::Mesa, 2.0).unwrap();
        assert_eq!((mesa.eval(-0.1), mesa.eval(1.0), mesa.eval(2.1)), (0.0, 1.0, 0.0));
        assert_eq!(sin.eval(-1.0), 0.0);
        assert_eq!(sin.eval(4.0), 0.0);
    }

    #[test]
    fn gaussian_and_sech2_share_area() {
        let l = 1.7;
        let g = ModeProfile::new(Shape::Gaussian, l).unwrap();
        let s = ModeProfile::new(Shape::Sech2, l).unwrap();
        assert!((g.abs_area(-100.0, 100.0) - s.abs_area(-100.0, 100.0)).abs() < 1e-14);
    }

    #[test]
    fn areas_match_quadrature() {
        let cases = [
            ModeProfile::new(Shape::Sech2, 2.0).unwrap(),
            ModeProfile::new(Shape::Gaussian, 2.0).unwrap(),
            ModeProfile::new(Shape::SinFundamental, 2.0).unwrap(),
            ModeProfile::new(Shape::SinFirstExcited, 2.0).unwrap(),
        ];
        for p in cases {
            for (a, b) in [(-3.0, 1.1), (0.3, 1.7), (0.0, 2.0)] {
                // split at the kinks: support edges and the zero of the first excited sine
                let mut cuts = vec![a, b];
                cuts.extend([0.0, 1.0, 2.0].iter().filter(|&&c| c > a && c < b));
                cuts.sort_by(f64::total_cmp);
                let want: f64 = cuts
                    .windows(2)
                    .map(|w| quadrature::double_exponential::integrate(|x| p.eval(x).abs(), w[0], w[1], 1e-14).integral)
                    .sum();
                let got = p.abs_area(a, b);
                assert!((got - want).abs() < 1e-12, "{} [{a}, {b}]: {got} vs {want}", p.shape());
            }
        }
    }

    #[test]
    fn tabulated_parse_and_eval() {
        let t = TabulatedProfile::parse("# header\n0 0\n0.5, 1 # peak\n\n1 0\n").unwrap();
        let p = ModeProfile::new(Shape::Tabulated(t), 2.0).unwrap();
        assert_eq!(p.eval(0.5), 0.5);
        assert_eq!(p.eval(1.0), 1.0);
        assert_eq!(p.eval(2.5), 0.0);
        assert!((p.abs_area(0.0, 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(p.default_window(16.0), (0.0, 2.0));
    }

    #[test]
    fn tabulated_rejects_bad_input() {
        assert!(TabulatedProfile::parse("0 0\n1 1\n0.5 0.2\n").is_err());
        assert!(TabulatedProfile::parse("0 0\n1 1.5\n").is_err());
        assert!(TabulatedProfile::parse("0 0 0\n").is_err());
        assert!(TabulatedProfile::parse("0 x\n1 0\n").is_err());
        assert!(TabulatedProfile::parse("0 0\n").is_err());
    }

    #[test]
    fn shape_names_round_trip() {
        for name in ["mesa", "sech2", "sin", "sin2", "gaussian"] {
            assert_eq!(name.parse::<Shape>().unwrap().name(), name);
        }
        assert!("lorentzian".parse::<Shape>().is_err());
    }
}
