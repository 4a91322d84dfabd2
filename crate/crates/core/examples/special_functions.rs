//! Fractional-order Bessel functions, complex log-gamma and the extended
//! range real type that keeps `I_{1/3}(10^6)` finite.

use mazer::extrange::XReal;
use mazer::specfun::{bessel_ik_scaled, bessel_jy, cyl_bessel, ln_gamma_complex, BesselFamily, BesselKind, BesselOrder};
use num_complex::Complex64;

fn main() -> mazer::Result<()> {
    println!("{:>8} {:>22} {:>22} {:>22}", "y", "J_1/3", "Y_1/3", "W·πy/2 - 1");
    for y in [0.1, 1.0, 2.0, 10.0, 50.0, 1e4] {
        let v = bessel_jy(1.0 / 3.0, y);
        let w = v.j * v.yp - v.jp * v.y;
        println!("{y:>8} {:>22.15e} {:>22.15e} {:>22.3e}", v.j, v.y, w * std::f64::consts::FRAC_PI_2 * y - 1.0);
    }

    println!("\nscaled modified functions at 2/3 order");
    for y in [0.5, 5.0, 500.0] {
        let s = bessel_ik_scaled(2.0 / 3.0, y);
        println!("  y = {y:>6}: e^-y I = {:.15e}, e^y K = {:.15e}", s.i, s.k);
    }

    let kind = BesselKind::new(BesselFamily::I, BesselOrder::OneThird);
    let big = cyl_bessel(kind, 1e6, false)?;
    println!("\nI_1/3(1e6) = {big}  (f64 would overflow: {:?})", big.to_f64_checked().is_err());
    let product = big * cyl_bessel(BesselKind::new(BesselFamily::K, BesselOrder::OneThird), 1e6, false)?;
    println!("I·K at 1e6 = {product}  (≈ 1/(2y) = {})", XReal::from_f64(0.5e-6));

    for z in [Complex64::new(0.5, 0.0), Complex64::new(0.5, 20.0), Complex64::new(3.0, -1e4)] {
        println!("lnΓ({z}) = {}", ln_gamma_complex(z)?);
    }
    Ok(())
}
