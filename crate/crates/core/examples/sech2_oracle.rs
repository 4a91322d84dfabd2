//! P_em for the sech² mode against the exact Γ-function result, over the same
//! κL range and grid size as the published comparison.

use mazer::grid::Shape;
use mazer::mazer::{kappa_l_range, sweep_kappa_l, MazerParams};
use mazer::oracles::sech2_analytic;
use mazer::grid::Branch;
use mazer::mazer::EventProbabilities;

fn main() -> mazer::Result<()> {
    let k: f64 = std::env::args().nth(1).map_or(Ok(0.1), |s| s.parse()).expect("k/κ must be a number");
    let values = kappa_l_range(0.0, 20.0, 0.5)?;
    let rows = sweep_kappa_l(&MazerParams::new(Shape::Sech2, k, 0.0).with_points(200), &values)?;
    let mut worst: f64 = 0.0;
    println!("{:>6} {:>12} {:>12} {:>10}", "κL", "numeric", "exact", "|Δ|");
    for row in rows {
        let num = row.outcome.map_err(mazer::Error::Regime)?;
        let p = sech2_analytic(k, row.kappa_l, Branch::Plus)?;
        let m = sech2_analytic(k, row.kappa_l, Branch::Minus)?;
        let exact = EventProbabilities::from_amplitudes((p.t, p.r), (m.t, m.r)).p_em;
        worst = worst.max((num.p_em - exact).abs());
        println!("{:>6.1} {:>12.8} {:>12.8} {:>10.2e}", row.kappa_l, num.p_em, exact, (num.p_em - exact).abs());
    }
    println!("max |Δ| = {worst:.3e}");
    Ok(())
}
