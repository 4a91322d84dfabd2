//! Fundamental sine mode at κL ≈ 10^5: resonances for ultracold atoms,
//! a flat P_em ≈ 1/2 for warmer ones.

use mazer::grid::Shape;
use mazer::mazer::{kappa_l_range, sweep_kappa_l, MazerParams};

fn main() -> mazer::Result<()> {
    let values = kappa_l_range(100_000.0, 100_010.0, 0.02)?;
    for k in [0.01, 0.1] {
        let rows = sweep_kappa_l(&MazerParams::new(Shape::SinFundamental, k, 0.0).with_points(100), &values)?;
        let p: Vec<f64> = rows.iter().map(|r| r.outcome.as_ref().map_or(f64::NAN, |e| e.p_em)).collect();
        let (lo, hi) = p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        println!("k/κ = {k}: P_em in [{lo:.4}, {hi:.4}]");
        for (row, v) in rows.iter().zip(&p).step_by(25) {
            let bar = "#".repeat((v * 60.0).round() as usize);
            println!("  {:>10.2} {v:.4} {bar}", row.kappa_l);
        }
    }
    Ok(())
}
