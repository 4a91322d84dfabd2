//! Rectangular barrier and well: the single-segment solve against the closed
//! form, then tunnelling through barriers so wide that |t| underflows f64.

use mazer::grid::{Branch, Shape};
use mazer::mazer::{elementary_amplitudes, MazerParams};
use mazer::oracles::mesa_analytic;

fn main() -> mazer::Result<()> {
    println!("{:>6} {:>6} {:>26} {:>12}", "kL", "branch", "t (numeric)", "|Δt|/|t|");
    for kappa_l in [1.0, 5.0, 20.0] {
        for branch in [Branch::Plus, Branch::Minus] {
            let p = MazerParams::new(Shape::Mesa, 0.1, kappa_l);
            let got = elementary_amplitudes(&p, branch)?;
            let want = mesa_analytic(0.1, kappa_l, branch)?;
            println!(
                "{kappa_l:>6} {branch:>6} {:>26.12} {:>12.2e}",
                got.t,
                (got.t - want.t).norm() / want.t.norm()
            );
        }
    }
    println!("\ndeep tunnelling, k/κ = 0.01");
    for kappa_l in [10.0, 100.0, 1000.0, 10000.0] {
        let r = elementary_amplitudes(&MazerParams::new(Shape::Mesa, 0.01, kappa_l), Branch::Plus)?;
        println!("  κL = {kappa_l:>7}: log10|t| = {:>12.4}, |r|² - 1 = {:.1e}", r.log10_abs_t, r.r.norm_sqr() - 1.0);
    }
    Ok(())
}
