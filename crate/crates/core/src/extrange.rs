//! Extended-exponent real and complex scalars.
//!
//! An [`XReal`] is a decimal mantissa in `[1, 10)` paired with a signed 64-bit
//! power-of-ten exponent, giving a dynamic range of roughly `10^(±9e18)` with the
//! precision of an `f64` mantissa. Transfer-matrix coefficients that grow like
//! `e^{ρΔx}` across wide forbidden regions live in this representation so that no
//! intermediate ever overflows to infinity or collapses to zero.
//!
//! Arithmetic through the `std::ops` traits panics on exponent overflow; the
//! `checked_*` methods return [`RangeError`] instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Largest representable decimal exponent magnitude.
pub const MAX_EXPONENT: i64 = 9_000_000_000_000_000_000;

/// Exponent gap beyond which the smaller addend cannot affect the sum.
const ADD_CUTOFF: i64 = 20;

const LOG10_E: f64 = std::f64::consts::LOG10_E;
const LN10_HI: f64 = std::f64::consts::LN_10;
// ln(10) - LN10_HI
const LN10_LO: f64 = -2.170_756_223_382_249_4e-16;

/// Exponent outside the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RangeError {
    #[error("decimal exponent overflow (|exponent| > 9e18)")]
    ExponentOverflow,
    #[error("non-finite input to extended-range arithmetic")]
    NonFinite,
}

/// Flag returned by [`XReal::to_f64_checked`] when the value has no normal `f64`
/// representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloatRange {
    Overflow,
    Underflow,
}

fn pow10_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (POW10_MIN..=POW10_MAX)
            .map(|e| format!("1e{e}").parse::<f64>().expect("valid float literal"))
            .collect()
    })
}

const POW10_MIN: i64 = -340;
const POW10_MAX: i64 = 308;

/// Correctly rounded `10^e` for `e` in `[-340, 308]`.
fn pow10(e: i64) -> f64 {
    debug_assert!((POW10_MIN..=POW10_MAX).contains(&e));
    pow10_table()[(e - POW10_MIN) as usize]
}

/// Multiply `m` by `10^k` for moderate `k`, using exact powers where possible.
fn scale10(m: f64, k: i64) -> f64 {
    if k == 0 {
        m
    } else if (0..=22).contains(&k) {
        m * pow10(k)
    } else if (-22..0).contains(&k) {
        m / pow10(-k)
    } else if k > 0 {
        m * pow10(k.min(POW10_MAX))
    } else if k >= -300 {
        m * pow10(k)
    } else {
        m * 1e-300 * pow10((k + 300).max(POW10_MIN))
    }
}

/// Extended-exponent real: `mantissa × 10^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XReal {
    mantissa: f64,
    exponent: i64,
}

impl Default for XReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl XReal {
    pub const ZERO: XReal = XReal {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: XReal = XReal {
        mantissa: 1.0,
        exponent: 0,
    };

    /// Build from an arbitrary finite mantissa and exponent, normalizing.
    pub fn from_parts(mantissa: f64, exponent: i64) -> Result<Self, RangeError> {
        if !mantissa.is_finite() {
            return Err(RangeError::NonFinite);
        }
        if mantissa == 0.0 {
            return Ok(Self::ZERO);
        }
        let mut m = mantissa;
        let mut e = exponent as i128;
        if m.abs() < 1e-290 {
            m *= 1e300;
            e -= 300;
        }
        let k = m.abs().log10().floor() as i64;
        m = scale10(m, -k);
        e += k as i128;
        while m.abs() >= 10.0 {
            m /= 10.0;
            e += 1;
        }
        while m.abs() < 1.0 {
            m *= 10.0;
            e -= 1;
        }
        if e.abs() > MAX_EXPONENT as i128 {
            return Err(RangeError::ExponentOverflow);
        }
        Ok(Self {
            mantissa: m,
            exponent: e as i64,
        })
    }

    /// Convert a finite `f64`. Panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Self {
        Self::try_from_f64(v).expect("XReal::from_f64 requires a finite value")
    }

    pub fn try_from_f64(v: f64) -> Result<Self, RangeError> {
        Self::from_parts(v, 0)
    }

    /// `e^x` for a standard-precision exponent, with the result carried in the
    /// decimal exponent. Accurate to a few ulp of `|x|` in absolute terms.
    pub fn exp(x: f64) -> Result<Self, RangeError> {
        if !x.is_finite() {
            return Err(RangeError::NonFinite);
        }
        let n = (x * LOG10_E).round();
        if n.abs() > MAX_EXPONENT as f64 {
            return Err(RangeError::ExponentOverflow);
        }
        let r = (-n).mul_add(LN10_HI, x) - n * LN10_LO;
        Self::from_parts(r.exp(), n as i64)
    }

    /// `10^x` for a real exponent.
    pub fn pow10(x: f64) -> Result<Self, RangeError> {
        if !x.is_finite() {
            return Err(RangeError::NonFinite);
        }
        let n = x.floor();
        if n.abs() > MAX_EXPONENT as f64 {
            return Err(RangeError::ExponentOverflow);
        }
        Self::from_parts(10f64.powf(x - n), n as i64)
    }

    pub fn mantissa(self) -> f64 {
        self.mantissa
    }

    pub fn exponent(self) -> i64 {
        self.exponent
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn abs(self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// `log10 |self|`; `-inf` for zero.
    pub fn log10_abs(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.exponent as f64 + self.mantissa.abs().log10()
        }
    }

    /// Multiply by `10^shift` without touching the mantissa.
    pub fn shift_exponent(self, shift: i64) -> Result<Self, RangeError> {
        if self.is_zero() {
            return Ok(self);
        }
        let e = self
            .exponent
            .checked_add(shift)
            .filter(|e| e.abs() <= MAX_EXPONENT)
            .ok_or(RangeError::ExponentOverflow)?;
        Ok(Self {
            mantissa: self.mantissa,
            exponent: e,
        })
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, RangeError> {
        if rhs.is_zero() {
            return Ok(self);
        }
        if self.is_zero() {
            return Ok(rhs);
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = big.exponent as i128 - small.exponent as i128;
        if gap > ADD_CUTOFF as i128 {
            return Ok(big);
        }
        let m = big.mantissa + scale10(small.mantissa, -(gap as i64));
        Self::from_parts(m, big.exponent)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, RangeError> {
        self.checked_add(-rhs)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, RangeError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::ZERO);
        }
        let e = self.exponent as i128 + rhs.exponent as i128;
        if e.abs() > MAX_EXPONENT as i128 + 1 {
            return Err(RangeError::ExponentOverflow);
        }
        Self::from_parts(self.mantissa * rhs.mantissa, 0)?.shift_exponent(e as i64)
    }

    /// Reciprocal; `None` for zero.
    pub fn recip(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/m lies in (0.1, 1]; exponent negation cannot overflow the symmetric range.
        Self::from_parts(1.0 / self.mantissa, -self.exponent).ok()
    }

    /// Division as multiplication by the reciprocal.
    pub fn checked_div(self, rhs: Self) -> Result<Self, RangeError> {
        let inv = rhs.recip().ok_or(RangeError::NonFinite)?;
        self.checked_mul(inv)
    }

    pub fn sqrt(self) -> Self {
        assert!(self.mantissa >= 0.0, "sqrt of negative XReal");
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.exponent.rem_euclid(2) == 0 {
            (self.mantissa, self.exponent)
        } else {
            (self.mantissa * 10.0, self.exponent - 1)
        };
        Self::from_parts(m.sqrt(), e / 2).expect("sqrt halves the exponent")
    }

    /// Nearest `f64`, or a range flag when the value is outside the normal range.
    pub fn to_f64_checked(self) -> Result<f64, FloatRange> {
        if self.is_zero() {
            return Ok(0.0);
        }
        if self.exponent > 308 {
            return Err(FloatRange::Overflow);
        }
        if self.exponent < -308 {
            return Err(FloatRange::Underflow);
        }
        let v = scale10(self.mantissa, self.exponent);
        if v.is_infinite() {
            Err(FloatRange::Overflow)
        } else if v.abs() < f64::MIN_POSITIVE {
            Err(FloatRange::Underflow)
        } else {
            Ok(v)
        }
    }

    /// `f64` value with underflow flushed to zero. Panics on overflow.
    pub fn to_f64_flush(self) -> f64 {
        match self.to_f64_checked() {
            Ok(v) => v,
            Err(FloatRange::Underflow) => 0.0,
            Err(FloatRange::Overflow) => panic!("XReal {self} overflows f64"),
        }
    }
}

impl From<f64> for XReal {
    fn from(v: f64) -> Self {
        Self::from_f64(v)
    }
}

impl Neg for XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        if self.is_zero() {
            self
        } else {
            XReal {
                mantissa: -self.mantissa,
                exponent: self.exponent,
            }
        }
    }
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        self.checked_add(rhs).expect("XReal addition overflow")
    }
}

impl Sub for XReal {
    type Output = XReal;
    fn sub(self, rhs: XReal) -> XReal {
        self.checked_sub(rhs).expect("XReal subtraction overflow")
    }
}

impl Mul for XReal {
    type Output = XReal;
    fn mul(self, rhs: XReal) -> XReal {
        self.checked_mul(rhs).expect("XReal multiplication overflow")
    }
}

impl Div for XReal {
    type Output = XReal;
    fn div(self, rhs: XReal) -> XReal {
        self.checked_div(rhs).expect("XReal division by zero or overflow")
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.partial_cmp(&sb);
        }
        if sa == 0.0 {
            return Some(Ordering::Equal);
        }
        let by_magnitude = self
            .exponent
            .cmp(&other.exponent)
            .then(self.mantissa.abs().total_cmp(&other.mantissa.abs()));
        Some(if sa > 0.0 {
            by_magnitude
        } else {
            by_magnitude.reverse()
        })
    }
}

impl fmt::Display for XReal {
    /// Renders as `±m.mmmmmmmmmmmmmmmE±e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut text = format!("{:+.15}", self.mantissa);
        let mut exponent = self.exponent;
        if text[1..].starts_with("10") {
            text = format!("{:+.15}", self.mantissa / 10.0);
            exponent += 1;
        }
        write!(f, "{text}E{exponent:+}")
    }
}

/// Failure to parse the textual `±mE±e` rendering.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed extended-range literal: {0}")]
pub struct ParseXRealError(String);

impl FromStr for XReal {
    type Err = ParseXRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseXRealError(s.to_string());
        let (m, e) = s.trim().split_once(['E', 'e']).ok_or_else(bad)?;
        let m: f64 = m.parse().map_err(|_| bad())?;
        let e: i64 = e.parse().map_err(|_| bad())?;
        XReal::from_parts(m, e).map_err(|_| bad())
    }
}

/// Complex number with [`XReal`] components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct XComplex {
    pub re: XReal,
    pub im: XReal,
}

impl XComplex {
    pub const ZERO: XComplex = XComplex {
        re: XReal::ZERO,
        im: XReal::ZERO,
    };
    pub const ONE: XComplex = XComplex {
        re: XReal::ONE,
        im: XReal::ZERO,
    };
    pub const I: XComplex = XComplex {
        re: XReal::ZERO,
        im: XReal::ONE,
    };

    pub fn new(re: XReal, im: XReal) -> Self {
        Self { re, im }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(XReal::from_f64(z.re), XReal::from_f64(z.im))
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Multiply by `i`.
    pub fn mul_i(self) -> Self {
        Self::new(-self.im, self.re)
    }

    pub fn scale(self, s: XReal) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    pub fn norm_sqr(self) -> XReal {
        self.re * self.re + self.im * self.im
    }

    pub fn norm(self) -> XReal {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Largest component exponent, `None` for zero.
    pub fn max_exponent(self) -> Option<i64> {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => None,
            (false, true) => Some(self.re.exponent()),
            (true, false) => Some(self.im.exponent()),
            (false, false) => Some(self.re.exponent().max(self.im.exponent())),
        }
    }

    pub fn shift_exponent(self, shift: i64) -> Result<Self, RangeError> {
        Ok(Self::new(
            self.re.shift_exponent(shift)?,
            self.im.shift_exponent(shift)?,
        ))
    }

    pub fn log10_abs(self) -> f64 {
        match self.max_exponent() {
            None => f64::NEG_INFINITY,
            Some(e) => {
                let shifted = self.shift_exponent(-e).expect("shift toward zero");
                e as f64 + shifted.to_complex_flush().norm().log10()
            }
        }
    }

    pub fn recip(self) -> Option<Self> {
        let d = self.norm_sqr().recip()?;
        Some(self.conj().scale(d))
    }

    /// Convert with underflowing components flushed to zero; errors on overflow.
    pub fn to_complex_checked(self) -> Result<Complex64, FloatRange> {
        let part = |x: XReal| match x.to_f64_checked() {
            Err(FloatRange::Underflow) => Ok(0.0),
            other => other,
        };
        Ok(Complex64::new(part(self.re)?, part(self.im)?))
    }

    pub fn to_complex_flush(self) -> Complex64 {
        Complex64::new(self.re.to_f64_flush(), self.im.to_f64_flush())
    }
}

impl Neg for XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        XComplex::new(-self.re, -self.im)
    }
}

impl Add for XComplex {
    type Output = XComplex;
    fn add(self, rhs: XComplex) -> XComplex {
        XComplex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for XComplex {
    type Output = XComplex;
    fn sub(self, rhs: XComplex) -> XComplex {
        XComplex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for XComplex {
    type Output = XComplex;
    fn mul(self, rhs: XComplex) -> XComplex {
        XComplex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<XReal> for XComplex {
    type Output = XComplex;
    fn mul(self, rhs: XReal) -> XComplex {
        self.scale(rhs)
    }
}

impl Div for XComplex {
    type Output = XComplex;
    fn div(self, rhs: XComplex) -> XComplex {
        self * rhs.recip().expect("XComplex division by zero")
    }
}
