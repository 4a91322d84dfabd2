//! First excited sine mode: the numeric P_em against the WKB law sin²(Δ),
//! and the WKB period.

use mazer::grid::Shape;
use mazer::mazer::{kappa_l_range, sweep_kappa_l, MazerParams};
use mazer::oracles::wkb_first_excited;

fn main() -> mazer::Result<()> {
    let values = kappa_l_range(100_000.0, 100_020.0, 0.5)?;
    for k in [0.1, 0.01] {
        let wkb0 = wkb_first_excited(k, 1.0)?;
        println!("k/κ = {k}: WKB period T = {:.4} (P_em period {:.4})", wkb0.period_t(), wkb0.p_em_period());
        let rows = sweep_kappa_l(&MazerParams::new(Shape::SinFirstExcited, k, 0.0), &values)?;
        let mut rms = 0.0;
        for row in &rows {
            let num = row.outcome.as_ref().map_or(f64::NAN, |e| e.p_em);
            let wkb = wkb_first_excited(k, row.kappa_l)?.p_em;
            rms += (num - wkb).powi(2);
            println!("  {:>10.1} numeric {num:.4}  wkb {wkb:.4}", row.kappa_l);
        }
        println!("  rms deviation {:.3e}", (rms / rows.len() as f64).sqrt());
    }
    Ok(())
}
