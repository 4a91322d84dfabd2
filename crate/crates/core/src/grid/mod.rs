//! Piecewise-linear discretisation of the dressed potentials.
//!
//! Units: `ħ = m = 1` and lengths in `1/κ_n`, so `V±(x) = ±u(x)/2` and
//! `E = (k/κ_n)²/2`.

mod profile;

pub use profile::{ModeProfile, Shape, TabulatedProfile};

use std::fmt;

use crate::error::{Error, Result};
use crate::segment::Segment;
use profile::abs_linear_area;

/// Roots closer than this to an existing node replace the node.
pub const MERGE_TOL: f64 = 1e-10;
/// Default window length for unbounded profiles, in cavity lengths.
pub const DEFAULT_WINDOW_FACTOR: f64 = 16.0;

const ALPHA_MAX_ITER: usize = 100;
const SCAN_FACTOR: usize = 8;

/// Sign of the dressed potential: `+` is a barrier, `−` a well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptions {
    /// Number `J` of uniform grid points.
    pub points: usize,
    /// Window length in cavity lengths for unbounded profiles.
    pub window_factor: f64,
    /// Rescale the sampled potential so its area matches the exact one.
    pub renormalize: bool,
    /// Explicit window, overriding the profile default.
    pub window: Option<(f64, f64)>,
}

impl GridOptions {
    pub fn new(points: usize) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            points: 200,
            window_factor: DEFAULT_WINDOW_FACTOR,
            renormalize: true,
            window: None,
        }
    }
}

/// Dimensionless energy `E = (k/κ_n)²/2`.
pub fn energy_of(k_over_kappa: f64) -> f64 {
    0.5 * k_over_kappa * k_over_kappa
}

/// Segmentation of the x axis: nodes `x_1 < … < x_J` with potential samples,
/// interior linear segments, and free asymptotic regions on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    energy: f64,
    length: f64,
    alpha: f64,
    points: Vec<f64>,
    v_values: Vec<f64>,
    turning_points: Vec<f64>,
    segments: Vec<Segment>,
}

impl Grid {
    /// Grid interpolating the samples `(xs[i], vs[i])`. Turning points of the
    /// interpolant are inserted as nodes. `alpha` is reported as 1.
    pub fn from_samples(energy: f64, xs: &[f64], vs: &[f64]) -> Result<Self> {
        check_energy(energy)?;
        if xs.len() != vs.len() || xs.is_empty() {
            return Err(Error::Input("need matching, nonempty node and value lists".into()));
        }
        if xs.windows(2).any(|p| !(p[1] > p[0])) || xs.iter().chain(vs).any(|v| !v.is_finite()) {
            return Err(Error::Input("nodes must be finite and strictly increasing".into()));
        }
        let mut points = vec![xs[0]];
        let mut v_values = vec![vs[0]];
        let mut turning_points = Vec::new();
        if vs[0] == energy {
            turning_points.push(xs[0]);
        }
        for i in 1..xs.len() {
            let (g0, g1) = (vs[i - 1] - energy, vs[i] - energy);
            if g0 * g1 < 0.0 {
                let x = xs[i - 1] + (xs[i] - xs[i - 1]) * g0 / (g0 - g1);
                if x - xs[i - 1] > MERGE_TOL && xs[i] - x > MERGE_TOL {
                    points.push(x);
                    v_values.push(energy);
                    turning_points.push(x);
                }
            }
            points.push(xs[i]);
            v_values.push(vs[i]);
            if g1 == 0.0 {
                turning_points.push(xs[i]);
            }
        }
        Self::assemble(energy, 1.0, points, v_values, turning_points)
    }

    /// Potential-free grid: two free regions joined at `x = 0`.
    pub fn free(energy: f64) -> Result<Self> {
        Self::from_samples(energy, &[0.0], &[0.0])
    }

    fn assemble(
        energy: f64,
        alpha: f64,
        points: Vec<f64>,
        v_values: Vec<f64>,
        turning_points: Vec<f64>,
    ) -> Result<Self> {
        let n = points.len();
        let mut segments = Vec::with_capacity(n + 1);
        segments.push(Segment::asymptotic(f64::NEG_INFINITY, points[0], energy)?);
        for i in 1..n {
            let z = |v: f64| 2.0 * (energy - v);
            segments.push(Segment::between(points[i - 1], points[i], z(v_values[i - 1]), z(v_values[i]))?);
        }
        segments.push(Segment::asymptotic(points[n - 1], f64::INFINITY, energy)?);
        Ok(Self {
            energy,
            length: points[n - 1] - points[0],
            alpha,
            points,
            v_values,
            turning_points,
            segments,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Asymptotic wavenumber `k = √(2E)`.
    pub fn k(&self) -> f64 {
        (2.0 * self.energy).sqrt()
    }

    /// Cavity length `L`, or the node span for grids built from samples.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Renormalised potential `α·V(x_i)` at the nodes.
    pub fn v_values(&self) -> &[f64] {
        &self.v_values
    }

    pub fn turning_points(&self) -> &[f64] {
        &self.turning_points
    }

    /// `I_0`, the interior segments, then `I_J`.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The same potential reflected through `x = 0`.
    pub fn mirrored(&self) -> Result<Self> {
        let points: Vec<f64> = self.points.iter().rev().map(|x| -x).collect();
        let v_values: Vec<f64> = self.v_values.iter().rev().copied().collect();
        let turning_points = self.turning_points.iter().rev().map(|x| -x).collect();
        let mut grid = Self::assemble(self.energy, self.alpha, points, v_values, turning_points)?;
        grid.length = self.length;
        Ok(grid)
    }

    /// Piecewise-linear potential at `x` (zero outside the nodes).
    pub fn v_approx(&self, x: f64) -> f64 {
        let n = self.points.len();
        if n < 2 || x < self.points[0] || x > self.points[n - 1] {
            return 0.0;
        }
        let i = self.points.partition_point(|&p| p <= x).clamp(1, n - 1);
        let (x0, x1) = (self.points[i - 1], self.points[i]);
        let (v0, v1) = (self.v_values[i - 1], self.v_values[i]);
        v0 + (x - x0) / (x1 - x0) * (v1 - v0)
    }
}

fn check_energy(energy: f64) -> Result<()> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::Input(format!("energy must be positive, got {energy}")));
    }
    Ok(())
}

/// Dressed potential `V±(x) = ±u(x)/2`.
pub fn potential(profile: &ModeProfile, branch: Branch, x: f64) -> f64 {
    0.5 * branch.sign() * profile.eval(x)
}

/// Roots of `α·V(x) = E` in `window`, bracketed on a scan of `scan_points`
/// uniform samples and bisected until the bracket stops shrinking.
pub fn find_turning_points(
    profile: &ModeProfile,
    branch: Branch,
    alpha: f64,
    energy: f64,
    window: (f64, f64),
    scan_points: usize,
) -> Vec<f64> {
    if profile.is_piecewise_constant() || profile.length() == 0.0 {
        return Vec::new();
    }
    let g = |x: f64| alpha * potential(profile, branch, x) - energy;
    let (a, b) = window;
    let n = scan_points.max(2);
    let xs: Vec<f64> = (0..n).map(|i| node(a, b, i, n)).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        if gs[i] == 0.0 {
            roots.push(xs[i]);
        } else if i + 1 < n && gs[i] * gs[i + 1] < 0.0 {
            roots.push(bisect(&g, xs[i], xs[i + 1], gs[i]));
        }
    }
    roots
}

fn node(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let sign_lo = g_lo.signum();
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Uniform nodes with the roots merged in, plus the indices that are roots.
fn merge_nodes(uniform: &[f64], roots: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let mut nodes: Vec<(f64, bool)> = uniform.iter().map(|&x| (x, false)).collect();
    for &r in roots {
        let i = nodes.partition_point(|&(x, _)| x < r);
        let near = |j: usize| nodes.get(j).is_some_and(|&(x, _)| (x - r).abs() <= MERGE_TOL);
        if near(i) {
            nodes[i] = (r, true);
        } else if i > 0 && near(i - 1) {
            nodes[i - 1] = (r, true);
        } else {
            nodes.insert(i, (r, true));
        }
    }
    nodes.into_iter().unzip()
}

struct Sampled {
    points: Vec<f64>,
    values: Vec<f64>,
    roots: Vec<f64>,
}

fn sample(
    profile: &ModeProfile,
    branch: Branch,
    alpha: f64,
    energy: f64,
    uniform: &[f64],
    window: (f64, f64),
    scan_points: usize,
) -> Sampled {
    let g = |x: f64| alpha * potential(profile, branch, x) - energy;
    let mut roots = find_turning_points(profile, branch, alpha, energy, window, scan_points);
    roots.sort_by(f64::total_cmp);
    let (mut points, mut is_root) = merge_nodes(uniform, &roots);
    // a sign change between neighbouring nodes means the scan missed a root
    loop {
        let values: Vec<f64> = points.iter().zip(&is_root).map(|(&x, &r)| if r { 0.0 } else { g(x) }).collect();
        let missed: Vec<f64> = (1..points.len())
            .filter(|&i| values[i - 1] * values[i] < 0.0)
            .map(|i| bisect(&g, points[i - 1], points[i], values[i - 1]))
            .collect();
        if missed.is_empty() {
            break;
        }
        roots.extend(&missed);
        roots.sort_by(f64::total_cmp);
        (points, is_root) = merge_nodes(uniform, &roots);
    }
    let values = points
        .iter()
        .zip(&is_root)
        .map(|(&x, &r)| if r { energy / alpha } else { potential(profile, branch, x) })
        .collect();
    let roots = points.iter().zip(&is_root).filter(|(_, &r)| r).map(|(&x, _)| x).collect();
    Sampled { points, values, roots }
}

fn abs_area(points: &[f64], values: &[f64]) -> f64 {
    (1..points.len())
        .map(|i| abs_linear_area(points[i - 1], values[i - 1], points[i], values[i]))
        .sum()
}

/// Build the segmentation for one branch.
///
/// Smooth profiles get `J` uniform nodes over the window plus every root of
/// `α·V(x) = E`. With renormalisation on, `α` is the fixed point of
/// `α = ∫|V| / ∫|V_approx|`, the approximant's nodes depending on `α` through
/// the turning points. The mesa is a single flat segment over `[0, L]`.
pub fn build_grid(profile: &ModeProfile, branch: Branch, k_over_kappa: f64, opts: &GridOptions) -> Result<Grid> {
    if !(k_over_kappa > 0.0) || !k_over_kappa.is_finite() {
        return Err(Error::Input(format!("k/kappa must be positive, got {k_over_kappa}")));
    }
    if opts.points < 2 {
        return Err(Error::Input(format!("J must be at least 2, got {}", opts.points)));
    }
    let energy = energy_of(k_over_kappa);
    let l = profile.length();
    if l == 0.0 {
        return Grid::free(energy);
    }
    let window = match opts.window {
        Some(w) => w,
        None => {
            if !(opts.window_factor > 0.0) {
                return Err(Error::Input(format!("window factor must be positive, got {}", opts.window_factor)));
            }
            profile.default_window(opts.window_factor)
        }
    };
    let (a, b) = window;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Input(format!("empty or non-finite window [{a}, {b}]")));
    }
    let (sa, sb) = profile.support();
    if b <= sa || a >= sb {
        return Err(Error::Input(format!("window [{a}, {b}] excludes the profile support [{sa}, {sb}]")));
    }

    if profile.is_piecewise_constant() {
        let (lo, hi) = (a.max(0.0), b.min(l));
        let v = potential(profile, branch, 0.5 * (lo + hi));
        let mut grid = Grid::assemble(energy, 1.0, vec![lo, hi], vec![v, v], Vec::new())?;
        grid.segments[1] = Segment::flat(lo, hi, 2.0 * (energy - v), lo)?;
        grid.length = l;
        return Ok(grid);
    }

    let j = opts.points;
    let uniform: Vec<f64> = (0..j).map(|i| node(a, b, i, j)).collect();
    let scan = SCAN_FACTOR * j;
    let exact = 0.5 * profile.abs_area(a, b);
    let mut alpha = 1.0;
    let mut s = sample(profile, branch, alpha, energy, &uniform, window, scan);
    if opts.renormalize {
        for _ in 0..ALPHA_MAX_ITER {
            let approx = abs_area(&s.points, &s.values);
            if approx == 0.0 || exact == 0.0 {
                break;
            }
            let next = exact / approx;
            let done = (next - alpha).abs() <= 4.0 * f64::EPSILON * next;
            alpha = next;
            s = sample(profile, branch, alpha, energy, &uniform, window, scan);
            if done {
                break;
            }
        }
    }
    let v_values = s
        .values
        .iter()
        .zip(&s.points)
        .map(|(&v, x)| if s.roots.contains(x) { energy } else { alpha * v })
        .collect();
    let mut grid = Grid::assemble(energy, alpha, s.points, v_values, s.roots)?;
    grid.length = l;
    Ok(grid)
}
