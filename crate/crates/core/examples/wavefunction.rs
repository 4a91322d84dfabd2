//! Scattering wavefunction for one branch, printed as CSV, plus the
//! coefficient magnitudes carried across each join.

use mazer::grid::{build_grid, Branch, GridOptions, ModeProfile, Shape};
use mazer::transfer::solve_scattering_seeded;
use num_complex::Complex64;

fn main() -> mazer::Result<()> {
    let profile = ModeProfile::new(Shape::Sech2, 4.0)?;
    let grid = build_grid(&profile, Branch::Plus, 0.3, &GridOptions::new(200))?;
    println!("# turning points {:?}", grid.turning_points());
    let sol = solve_scattering_seeded(&grid, Complex64::new(1.0, 0.0))?;
    println!("# t = {:.10}, r = {:.10}", sol.result.t, sol.result.r);
    let xs: Vec<f64> = (0..=200).map(|i| -20.0 + 0.2 * i as f64).collect();
    println!("x,re,im,abs");
    for (x, psi) in sol.wavefunction(&xs)? {
        let c = psi.to_complex_flush();
        println!("{x:.2},{:.8},{:.8},{:.8}", c.re, c.im, c.norm());
    }
    let joins = sol.join_records();
    let peak = joins.iter().map(|j| j.log10_abs_c.max(j.log10_abs_d) + j.scale as f64).fold(f64::MIN, f64::max);
    println!("# {} joins, largest log10|C|,|D| before rescaling: {peak:.2}", joins.len());
    Ok(())
}
