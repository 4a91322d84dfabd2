//! Special-function kernel: Bessel functions of orders 1/3 and 2/3 and the
//! gamma function.

mod bessel;
mod gamma;

pub use bessel::{bessel_ik_scaled, bessel_jy, hankel_jy, IkScaled, JyValues};
pub(crate) use bessel::{ascending_sums, SERIES_MAX};
pub use gamma::{gamma, gamma_complex, ln_gamma, ln_gamma_complex, rgamma};

use crate::error::{Error, Result};
use crate::extrange::XReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselFamily {
    J,
    Y,
    I,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    OneThird,
    TwoThirds,
}

impl BesselOrder {
    pub fn value(self) -> f64 {
        match self {
            BesselOrder::OneThird => 1.0 / 3.0,
            BesselOrder::TwoThirds => 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BesselKind {
    pub family: BesselFamily,
    pub order: BesselOrder,
}

impl BesselKind {
    pub fn new(family: BesselFamily, order: BesselOrder) -> Self {
        Self { family, order }
    }
}

/// Evaluate one cylinder Bessel function at `y > 0`.
///
/// For the modified functions `scaled` returns `e^{-y} I_ν(y)` or
/// `e^{y} K_ν(y)`; otherwise the exponential factor is folded into the
/// extended exponent, so `I_ν(1e6)` is representable. `scaled` has no effect
/// on `J` and `Y`.
pub fn cyl_bessel(kind: BesselKind, y: f64, scaled: bool) -> Result<XReal> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be positive, got {y}")));
    }
    let nu = kind.order.value();
    let value = match kind.family {
        BesselFamily::J => XReal::try_from_f64(bessel_jy(nu, y).j)?,
        BesselFamily::Y => XReal::try_from_f64(bessel_jy(nu, y).y)?,
        BesselFamily::I => {
            let s = XReal::try_from_f64(bessel_ik_scaled(nu, y).i)?;
            if scaled {
                s
            } else {
                s.checked_mul(XReal::exp(y)?)?
            }
        }
        BesselFamily::K => {
            let s = XReal::try_from_f64(bessel_ik_scaled(nu, y).k)?;
            if scaled {
                s
            } else {
                s.checked_mul(XReal::exp(-y)?)?
            }
        }
    };
    Ok(value)
}
