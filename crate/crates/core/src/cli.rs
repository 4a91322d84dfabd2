//! Command-line front end: sweeps, convergence tables, oracle comparisons and
//! wavefunction dumps, all written as CSV with a `#` header echoing the run
//! configuration and its hash.
//!
//! Exit status is 0 on success, 1 on a configuration or I/O error and 2 when
//! at least one row carries an error marker.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::{build_grid, Branch, Shape, TabulatedProfile, DEFAULT_WINDOW_FACTOR};
use crate::mazer::{convergence_study, kappa_l_range, sweep_kappa_l, EventProbabilities, MazerParams, SweepRow};
use crate::oracles::{mesa_analytic, sech2_analytic, wkb_first_excited};
use crate::transfer::solve_scattering_seeded;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_ROW_ERROR: u8 = 2;

pub const SWEEP_COLUMNS: &str = "kappaL,P_em,Ta2,Tb2,Ra2,Rb2,unit_defect_plus,unit_defect_minus";

#[derive(Debug, Parser)]
#[command(name = "mazer", version, about = "One-photon mazer emission probabilities by exact piecewise-linear segments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P_em and event probabilities over a range of κL.
    Sweep(SweepArgs),
    /// P_em against the grid size J at fixed κL.
    Converge(ConvergeArgs),
    /// Sweep alongside the analytic (sech2, mesa) or WKB (sin2) prediction.
    CompareOracle(SweepArgs),
    /// Wavefunction samples for one branch at fixed κL.
    Wavefunction(WaveArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// mesa, sech2, sin, sin2, gaussian or tabulated.
    #[arg(long, default_value = "sech2")]
    pub profile: String,
    /// Two-column `x u` file for the tabulated profile, x in units of L.
    #[arg(long)]
    pub profile_file: Option<PathBuf>,
    /// k/κ.
    #[arg(long = "k")]
    pub k: f64,
    /// Width of the computational window in units of L for unbounded profiles.
    #[arg(long, default_value_t = DEFAULT_WINDOW_FACTOR)]
    pub window_factor: f64,
    /// Keep the raw samples instead of rescaling to preserve the area of |V|.
    #[arg(long)]
    pub no_renormalize: bool,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// `lo:hi:step`, hi included within half a step.
    #[arg(long, conflicts_with = "kappa_l", required_unless_present = "kappa_l")]
    pub range: Option<String>,
    #[arg(long = "kappaL")]
    pub kappa_l: Option<f64>,
    #[arg(long = "J", default_value_t = 200)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "kappaL")]
    pub kappa_l: f64,
    /// Comma-separated ascending list.
    #[arg(long = "J", value_delimiter = ',', required = true)]
    pub points: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "kappaL")]
    pub kappa_l: f64,
    #[arg(long = "J", default_value_t = 200)]
    pub points: usize,
    /// `+` or `-`.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub branch: String,
    /// Number of evenly spaced samples.
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    /// Sample interval `a:b`; defaults to the grid span padded by L on each side.
    #[arg(long, allow_hyphen_values = true)]
    pub span: Option<String>,
    /// Also write per-join coefficient magnitudes to this file.
    #[arg(long)]
    pub joins: Option<PathBuf>,
}

/// Parse `lo:hi:step`.
pub fn parse_range(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Input(format!("malformed range {s:?}, expected lo:hi:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    Ok((v[0], v[1], v[2]))
}

fn parse_branch(s: &str) -> Result<Branch> {
    match s {
        "+" | "plus" => Ok(Branch::Plus),
        "-" | "minus" => Ok(Branch::Minus),
        other => Err(Error::Input(format!("unknown branch {other:?}, expected + or -"))),
    }
}

/// Canonical `key = value` echo of a run and its SHA-256 prefix.
#[derive(Debug, Clone, Default)]
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    /// First 16 hex digits of SHA-256 over the canonical lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.entries {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        let mut out = String::new();
        for b in &h.finalize()[..8] {
            write!(out, "{b:02x}").unwrap();
        }
        out
    }

    pub fn write(&self, w: &mut impl Write) -> io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "# config_hash = {}", self.hash())
    }
}

struct Resolved {
    shape: Shape,
    header: Header,
}

fn resolve(command: &str, c: &Common) -> Result<Resolved> {
    let tabulated = c.profile.eq_ignore_ascii_case("tabulated");
    let mut header = Header::default();
    header.push("command", command);
    let shape = match (tabulated, &c.profile_file) {
        (true, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let table = TabulatedProfile::parse(&text)?;
            let digest = Sha256::digest(text.as_bytes());
            header.push("profile", "tabulated");
            header.push("profile_file", path.display());
            header.push("profile_file_sha256", digest.iter().map(|b| format!("{b:02x}")).collect::<String>());
            Shape::Tabulated(table)
        }
        (true, None) => return Err(Error::Input("tabulated profile needs --profile-file".into())),
        (false, Some(_)) => return Err(Error::Input("--profile-file only applies to the tabulated profile".into())),
        (false, None) => {
            let shape: Shape = c.profile.parse()?;
            header.push("profile", shape.name());
            shape
        }
    };
    if !(c.k > 0.0) || !c.k.is_finite() {
        return Err(Error::Input(format!("--k must be positive, got {}", c.k)));
    }
    if !(c.window_factor > 0.0) || !c.window_factor.is_finite() {
        return Err(Error::Input(format!("--window-factor must be positive, got {}", c.window_factor)));
    }
    header.push("k_over_kappa", c.k);
    header.push("window_factor", c.window_factor);
    header.push("renormalize", !c.no_renormalize);
    Ok(Resolved { shape, header })
}

fn params(r: &Resolved, c: &Common, kappa_l: f64, points: usize) -> MazerParams {
    MazerParams {
        k_over_kappa: c.k,
        kappa_l,
        shape: r.shape.clone(),
        points,
        window_factor: c.window_factor,
        renormalize: !c.no_renormalize,
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Shortest round-trip text, in exponent form for very small or large magnitudes.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v != 0.0 && v.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn probability_fields(p: &EventProbabilities) -> String {
    [p.p_em, p.t_a_sq, p.t_b_sq, p.r_a_sq, p.r_b_sq, p.unitarity_defect_plus, p.unitarity_defect_minus]
        .map(fmt_num)
        .join(",")
}

fn error_row(w: &mut impl Write, label: impl std::fmt::Display, extra_cols: usize, msg: &str) -> io::Result<()> {
    writeln!(w, "{label},ERROR,,,,,,{}", ",".repeat(extra_cols))?;
    writeln!(w, "# error at {label}: {msg}")
}

fn sweep_values(a: &SweepArgs) -> Result<Vec<f64>> {
    match (&a.range, a.kappa_l) {
        (Some(r), _) => {
            let (lo, hi, step) = parse_range(r)?;
            if lo < 0.0 {
                return Err(Error::Input(format!("kappaL must be ≥ 0, got {lo}")));
            }
            kappa_l_range(lo, hi, step)
        }
        (None, Some(v)) if v >= 0.0 && v.is_finite() => Ok(vec![v]),
        (None, Some(v)) => Err(Error::Input(format!("kappaL must be finite and ≥ 0, got {v}"))),
        (None, None) => Err(Error::Input("one of --range or --kappaL is required".into())),
    }
}

/// Oracle `P_em` for a shape, if one exists.
pub fn oracle_p_em(shape: &Shape, k: f64, kappa_l: f64) -> Result<f64> {
    match shape {
        Shape::Sech2 | Shape::Mesa => {
            let f = if matches!(shape, Shape::Sech2) { sech2_analytic } else { mesa_analytic };
            let p = f(k, kappa_l, Branch::Plus)?;
            let m = f(k, kappa_l, Branch::Minus)?;
            Ok(EventProbabilities::from_amplitudes((p.t, p.r), (m.t, m.r)).p_em)
        }
        Shape::SinFirstExcited => Ok(wkb_first_excited(k, kappa_l)?.p_em),
        other => Err(Error::Input(format!("no oracle for the {} profile", other.name()))),
    }
}

fn run_sweep(a: &SweepArgs, compare: bool) -> Result<u8> {
    let command = if compare { "compare-oracle" } else { "sweep" };
    let mut r = resolve(command, &a.common)?;
    if compare {
        oracle_p_em(&r.shape, a.common.k, 0.0)?;
    }
    if a.points < 2 {
        return Err(Error::Input(format!("--J must be at least 2, got {}", a.points)));
    }
    let values = sweep_values(a)?;
    match &a.range {
        Some(s) => r.header.push("range", s),
        None => r.header.push("kappaL", a.kappa_l.unwrap_or_default()),
    }
    r.header.push("J", a.points);
    let rows = sweep_kappa_l(&params(&r, &a.common, 0.0, a.points), &values)?;

    let mut w = open_output(&a.common.output)?;
    r.header.write(&mut w)?;
    let extra = if compare { 2 } else { 0 };
    writeln!(w, "{SWEEP_COLUMNS}{}", if compare { ",P_em_oracle,abs_dev" } else { "" })?;
    let mut failed = false;
    let mut max_dev: f64 = 0.0;
    for SweepRow { kappa_l, outcome } in &rows {
        let oracle = if compare { Some(oracle_p_em(&r.shape, a.common.k, *kappa_l)) } else { None };
        match (outcome, oracle) {
            (Ok(p), None) => writeln!(w, "{},{}", fmt_num(*kappa_l), probability_fields(p))?,
            (Ok(p), Some(Ok(o))) => {
                let dev = (p.p_em - o).abs();
                max_dev = max_dev.max(dev);
                writeln!(w, "{},{},{},{}", fmt_num(*kappa_l), probability_fields(p), fmt_num(o), fmt_num(dev))?;
            }
            (Ok(_), Some(Err(e))) => {
                failed = true;
                error_row(&mut w, fmt_num(*kappa_l), extra, &format!("oracle: {e}"))?;
            }
            (Err(e), _) => {
                failed = true;
                error_row(&mut w, fmt_num(*kappa_l), extra, e)?;
            }
        }
    }
    if compare {
        writeln!(w, "# max_abs_dev = {}", fmt_num(max_dev))?;
    }
    w.flush()?;
    Ok(if failed { EXIT_ROW_ERROR } else { EXIT_OK })
}

fn run_converge(a: &ConvergeArgs) -> Result<u8> {
    let mut r = resolve("converge", &a.common)?;
    if !(a.kappa_l >= 0.0) || !a.kappa_l.is_finite() {
        return Err(Error::Input(format!("kappaL must be finite and ≥ 0, got {}", a.kappa_l)));
    }
    if a.points.iter().any(|&j| j < 2) {
        return Err(Error::Input("every J must be at least 2".into()));
    }
    r.header.push("kappaL", a.kappa_l);
    r.header.push("J", a.points.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","));
    let p = params(&r, &a.common, a.kappa_l, 2);

    let mut w = open_output(&a.common.output)?;
    r.header.write(&mut w)?;
    writeln!(w, "J,P_em,Ta2,Tb2,Ra2,Rb2,unit_defect_plus,unit_defect_minus")?;
    match convergence_study(&p, &a.points) {
        Ok(table) => {
            for (j, e) in &table.rows {
                writeln!(w, "{j},{}", probability_fields(e))?;
            }
            writeln!(w, "# settling = {}", fmt_num(table.settling()))?;
            w.flush()?;
            Ok(EXIT_OK)
        }
        Err(e @ Error::Input(_)) => Err(e),
        Err(e) => {
            // locate the failing J so every row is either a value or a marker
            for &j in &a.points {
                match crate::mazer::event_probabilities(&p.clone().with_points(j)) {
                    Ok(ev) => writeln!(w, "{j},{}", probability_fields(&ev))?,
                    Err(e) => error_row(&mut w, j, 0, &e.to_string())?,
                }
            }
            writeln!(w, "# convergence study failed: {e}")?;
            w.flush()?;
            Ok(EXIT_ROW_ERROR)
        }
    }
}

fn parse_span(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Input(format!("malformed span {s:?}, expected a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = (a.trim().parse::<f64>().map_err(|_| bad())?, b.trim().parse::<f64>().map_err(|_| bad())?);
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok((a, b))
}

fn run_wavefunction(a: &WaveArgs) -> Result<u8> {
    let mut r = resolve("wavefunction", &a.common)?;
    let branch = parse_branch(&a.branch)?;
    if a.samples < 2 {
        return Err(Error::Input("--samples must be at least 2".into()));
    }
    let span = a.span.as_deref().map(parse_span).transpose()?;
    r.header.push("kappaL", a.kappa_l);
    r.header.push("J", a.points);
    r.header.push("branch", branch);
    r.header.push("samples", a.samples);
    if let Some(s) = &a.span {
        r.header.push("span", s);
    }
    let p = params(&r, &a.common, a.kappa_l, a.points);
    p.validate()?;
    let grid = build_grid(&p.profile()?, branch, p.k_over_kappa, &p.grid_options())?;
    let sol = solve_scattering_seeded(&grid, num_complex::Complex64::new(1.0, 0.0))?;
    let (lo, hi) = span.unwrap_or_else(|| {
        let pts = grid.points();
        let pad = grid.length().max(1.0);
        (pts[0] - pad, pts[pts.len() - 1] + pad)
    });
    let xs: Vec<f64> = (0..a.samples).map(|i| lo + (hi - lo) * i as f64 / (a.samples - 1) as f64).collect();
    let psi = sol.wavefunction(&xs)?;

    let mut w = open_output(&a.common.output)?;
    r.header.write(&mut w)?;
    writeln!(w, "# t = {} {}", sol.result.t.re, sol.result.t.im)?;
    writeln!(w, "# r = {} {}", sol.result.r.re, sol.result.r.im)?;
    writeln!(w, "x,re_psi,im_psi,log10_abs_psi")?;
    for (x, v) in psi {
        let c = v.to_complex_flush();
        writeln!(w, "{x},{},{},{}", fmt_num(c.re), fmt_num(c.im), v.log10_abs())?;
    }
    w.flush()?;
    if let Some(path) = &a.joins {
        let mut jw = BufWriter::new(File::create(path)?);
        r.header.write(&mut jw)?;
        sol.write_join_csv(&mut jw)?;
        jw.flush()?;
    }
    Ok(EXIT_OK)
}

/// Execute a parsed command, returning the exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Sweep(a) => run_sweep(a, false),
        Command::CompareOracle(a) => run_sweep(a, true),
        Command::Converge(a) => run_converge(a),
        Command::Wavefunction(a) => run_wavefunction(a),
    }
}

/// Parse `args` (including the program name) and run, reporting errors on
/// stderr. Usage errors map to exit status 1.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mazer: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!(parse_range("0:20:0.1").unwrap(), (0.0, 20.0, 0.1));
        assert!(parse_range("0:20").is_err());
        assert!(parse_range("a:1:2").is_err());
    }

    #[test]
    fn header_hash_is_stable_and_sensitive() {
        let mut a = Header::default();
        a.push("k_over_kappa", 0.1);
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
        b.push("J", 200);
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn branch_names() {
        assert_eq!(parse_branch("-").unwrap(), Branch::Minus);
        assert!(parse_branch("x").is_err());
    }
}
