//! Cylinder Bessel functions of fractional order in three regimes.
//!
//! | argument      | J, Y                         | I, K (scaled)                 |
//! |---------------|------------------------------|-------------------------------|
//! | `x ≤ 2`       | ascending series in ±ν       | ascending series in ±ν        |
//! | `2 < x < 20`  | Steed: CF1 for J'/J, CF2 p+iq| CF1 for I'/I, Steed CF2 for K |
//! | `x ≥ 20`      | Hankel expansion, mod-phase  | large-argument expansion      |
//!
//! At `x = 20` the smallest term of the asymptotic series is about `e^{-2x}`,
//! so all three regimes reach full double precision at their boundaries.
//! Orders are restricted to `0 < ν < 1` (non-integer), which covers the 1/3 and
//! 2/3 orders needed by linear-potential solutions and keeps the reflection
//! formulas `Y_ν = (J_ν cos νπ - J_{-ν}) / sin νπ` well conditioned.

use std::f64::consts::{FRAC_2_PI, PI};

use super::gamma::rgamma;

pub(crate) const SERIES_MAX: f64 = 2.0;
pub(crate) const ASYMPTOTIC_MIN: f64 = 20.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;

/// `J_ν, Y_ν` and their derivatives at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JyValues {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

/// Exponentially scaled modified Bessel functions: `e^{-x} I_ν`, `e^{x} K_ν` and
/// the derivatives scaled by the same factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkScaled {
    pub i: f64,
    pub k: f64,
    pub ip: f64,
    pub kp: f64,
}

/// `Σ_k s^k q^k / (k! Γ(ν+k+1))` together with the weighted sum
/// `Σ_k (ν+2k) s^k q^k / (k! Γ(ν+k+1))`, for `s = ±1`.
///
/// These are the bracketed parts of `J_ν(x) = (x/2)^ν Σ…` and
/// `I_ν(x) = (x/2)^ν Σ…` with `q = x²/4`; the weighted sum gives `x·C'_ν`.
pub(crate) fn ascending_sums(nu: f64, q: f64, modified: bool) -> (f64, f64) {
    let s = if modified { q } else { -q };
    let mut term = rgamma(nu + 1.0);
    let mut sum = term;
    let mut dsum = nu * term;
    for k in 1..500 {
        let kf = k as f64;
        term *= s / (kf * (nu + kf));
        sum += term;
        let dt = (nu + 2.0 * kf) * term;
        dsum += dt;
        if term.abs() <= EPS * sum.abs() && dt.abs() <= EPS * dsum.abs().max(FPMIN) {
            break;
        }
    }
    (sum, dsum)
}

fn series_jy(nu: f64, x: f64) -> JyValues {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    let (sp, dp) = ascending_sums(nu, q, false);
    let (sm, dm) = ascending_sums(-nu, q, false);
    let pp = half.powf(nu);
    let pm = half.powf(-nu);
    let j = pp * sp;
    let jp = pp * dp / x;
    let jm = pm * sm;
    let jmp = pm * dm / x;
    let (s, c) = (nu * PI).sin_cos();
    JyValues {
        j,
        y: (j * c - jm) / s,
        jp,
        yp: (jp * c - jmp) / s,
    }
}

fn series_ik_scaled(nu: f64, x: f64) -> IkScaled {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    let (sp, dp) = ascending_sums(nu, q, true);
    let (sm, dm) = ascending_sums(-nu, q, true);
    let pp = half.powf(nu);
    let pm = half.powf(-nu);
    let i = pp * sp;
    let ip = pp * dp / x;
    let im = pm * sm;
    let imp = pm * dm / x;
    let f = 0.5 * PI / (nu * PI).sin();
    let down = (-x).exp();
    let up = x.exp();
    IkScaled {
        i: i * down,
        k: f * (im - i) * up,
        ip: ip * down,
        kp: f * (imp - ip) * up,
    }
}

/// Continued fraction for `J'_ν/J_ν`; also returns the sign of `J_ν`'s
/// backward-recurrence seed.
fn cf1_j(nu: f64, x: f64) -> (f64, f64) {
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }
    (h, isign)
}

/// Steed's method for `2 ≤ x`, `0 ≤ ν < x`.
fn steed_jy(nu: f64, x: f64) -> JyValues {
    let xi = 1.0 / x;
    let w = xi * FRAC_2_PI;
    let (f, isign) = cf1_j(nu, x);

    // CF2: p + iq = (J' + iY') / (J + iY)
    let mu2 = nu * nu;
    let mut a = 0.25 - mu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 1..MAXIT {
        a += 2.0 * i as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() <= EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let j = (w / ((p - f) * gam + q)).sqrt().copysign(isign);
    let y = j * gam;
    let yp = y * (p + q / gam);
    JyValues {
        j,
        y,
        jp: f * j,
        yp,
    }
}

/// `a_k(ν)/x^k` terms of the Hankel expansions, until they stop shrinking.
fn hankel_terms(nu: f64, x: f64) -> impl Iterator<Item = f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut k = 0usize;
    let mut last = f64::INFINITY;
    std::iter::from_fn(move || {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        k += 1;
        let mag = term.abs();
        if mag >= last || (k > 1 && mag < 1e-18) {
            return None;
        }
        last = mag;
        Some(term)
    })
}

/// `(P, Q)` of the Hankel expansion.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut q = 0.0;
    for (k, t) in hankel_terms(nu, x).enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
    }
    (p, q)
}

/// `(J_ν, Y_ν)` from the Hankel expansion with phase argument `phase` standing
/// in for `x` inside the trigonometric factors.
fn hankel_jy_order(nu: f64, x: f64, phase: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu, x);
    let chi = phase - (0.5 * nu + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// Large-argument `J_ν, Y_ν` with the oscillatory phase `x` replaced by
/// `phase = x - shift`.
///
/// With `phase = x` these are the ordinary functions. With a shift the pair is
/// rotated by the constant angle `shift`, which leaves both the differential
/// equation and the Wronskian unchanged while letting callers pass a phase that
/// is accurate even when `x` itself is enormous.
pub fn hankel_jy(nu: f64, x: f64, phase: f64) -> JyValues {
    let (j, y) = hankel_jy_order(nu, x, phase);
    let (j1, y1) = hankel_jy_order(nu + 1.0, x, phase);
    let r = nu / x;
    JyValues {
        j,
        y,
        jp: r * j - j1,
        yp: r * y - y1,
    }
}

/// `J_ν(x), Y_ν(x)` and derivatives for `0 < ν < 1`, `x > 0`.
pub fn bessel_jy(nu: f64, x: f64) -> JyValues {
    debug_assert!(nu > 0.0 && nu < 1.0 && x > 0.0);
    if x <= SERIES_MAX {
        series_jy(nu, x)
    } else if x < ASYMPTOTIC_MIN {
        steed_jy(nu, x)
    } else {
        hankel_jy(nu, x, x)
    }
}

fn steed_ik_scaled(nu: f64, x: f64) -> IkScaled {
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let nl = (nu + 0.5) as usize;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;

    // CF1 for I'_ν/I_ν
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    // Steed's CF2 for K_μ, scaled by e^x
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAXIT {
        a -= 2.0 * i as f64;
        c = -a * c / (i as f64 + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let mut rkmu = (PI / (2.0 * x)).sqrt() / s;
    let mut rk1 = rkmu * (mu + x + 0.5 - h) * xi;
    let rkmup = mu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;
    let rip = rimu * rip1 / ril;
    for i in 1..=nl {
        let rktemp = (mu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    IkScaled {
        i: ri,
        k: rkmu,
        ip: rip,
        kp: nu * xi * rkmu - rk1,
    }
}

fn asymptotic_ik_order(nu: f64, x: f64) -> (f64, f64) {
    let mut si = 0.0;
    let mut sk = 0.0;
    for (k, t) in hankel_terms(nu, x).enumerate() {
        sk += t;
        si += if k % 2 == 0 { t } else { -t };
    }
    (si / (2.0 * PI * x).sqrt(), sk * (PI / (2.0 * x)).sqrt())
}

fn asymptotic_ik_scaled(nu: f64, x: f64) -> IkScaled {
    let (i, k) = asymptotic_ik_order(nu, x);
    let (i1, k1) = asymptotic_ik_order(nu + 1.0, x);
    let r = nu / x;
    IkScaled {
        i,
        k,
        ip: i1 + r * i,
        kp: r * k - k1,
    }
}

/// `e^{-x} I_ν(x)`, `e^{x} K_ν(x)` and scaled derivatives for `0 < ν < 1`.
pub fn bessel_ik_scaled(nu: f64, x: f64) -> IkScaled {
    debug_assert!(nu > 0.0 && nu < 1.0 && x > 0.0);
    if x <= SERIES_MAX {
        series_ik_scaled(nu, x)
    } else if x < ASYMPTOTIC_MIN {
        steed_ik_scaled(nu, x)
    } else {
        asymptotic_ik_scaled(nu, x)
    }
}
