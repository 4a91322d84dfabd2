//! Real and complex gamma functions.
//!
//! Real arguments go to `libm`. Complex ones use the Stirling series after shifting the argument to `Re z ≥ 10` with
//! the recurrence `Γ(z+1) = zΓ(z)`. At that distance ten Bernoulli terms leave a
//! truncation error below `1e-20`, so accuracy is set by the final rounding of
//! `(z - ½)ln z - z`, i.e. roughly `|ln Γ(z)|·ε` in absolute terms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const SHIFT_TARGET: f64 = 10.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2n} / (2n (2n-1))` for n = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

/// Sum of `ln(z + k)` for `k` in `0..n`, taking logs of partial products.
fn ln_rising(z: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..n {
        prod *= z + k as f64;
        if prod.norm() > 1e100 || prod.norm() < 1e-100 {
            acc += prod.ln();
            prod = Complex64::new(1.0, 0.0);
        }
    }
    // the chunked logs each carry a principal argument; recover the continuous
    // branch by summing the arguments of the individual factors
    let arg: f64 = (0..n).map(|k| (z + k as f64).arg()).sum();
    Complex64::new(acc.re + prod.norm().ln(), arg)
}

/// `ln sin(πz)` up to a multiple of `2πi`, stable for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::i();
    if w.im > 20.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        -i * w + (1.0 - (2.0 * i * w).exp()).ln() + Complex64::new(0.5f64.ln(), PI / 2.0)
    } else if w.im < -20.0 {
        // sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() + Complex64::new(0.5f64.ln(), -PI / 2.0)
    } else {
        w.sin().ln()
    }
}

/// Principal-branch `ln Γ(z)`.
///
/// For `Re z ≥ -1e4` the result is the analytic continuation from the positive
/// real axis (branch cut on the negative real axis). Further left the
/// reflection formula is used and the imaginary part is only defined modulo `2π`.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Domain(format!("ln_gamma pole at {}", z.re)));
    }
    if z.re < -1e4 {
        let reflected = ln_gamma_complex(1.0 - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected);
    }
    if z.re >= SHIFT_TARGET {
        return Ok(stirling(z));
    }
    let n = (SHIFT_TARGET - z.re).ceil() as usize;
    Ok(stirling(z + n as f64) - ln_rising(z, n))
}

/// `Γ(z)` for complex `z`.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma_complex(z)?.exp())
}

/// `ln |Γ(x)|` for real `x`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::Domain(format!("ln_gamma at {x}")));
    }
    Ok(libm::lgamma_r(x).0)
}

/// `Γ(x)` for real `x`; overflows to infinity beyond `x ≈ 171.6`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::Domain(format!("gamma at {x}")));
    }
    Ok(libm::tgamma(x))
}

/// `1/Γ(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x).expect("non-pole argument")
    }
}
