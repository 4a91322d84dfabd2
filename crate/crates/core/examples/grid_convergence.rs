//! Settling of P_em as the grid is refined (sech², ultracold atom).

use mazer::grid::Shape;
use mazer::mazer::{convergence_study, MazerParams};

fn main() -> mazer::Result<()> {
    let params = MazerParams::new(Shape::Sech2, 0.01, 10.0);
    let table = convergence_study(&params, &[10, 25, 50, 100, 200, 400, 800, 1600])?;
    for (j, p) in &table.rows {
        println!("J = {j:>5}  P_em = {:.10}", p.p_em);
    }
    println!("settling over the upper half: {:.2e}", table.settling());
    Ok(())
}
