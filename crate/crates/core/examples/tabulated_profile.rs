//! A measured or custom mode profile given as `x u` samples (x in units of L).

use mazer::grid::{Shape, TabulatedProfile};
use mazer::mazer::{event_probabilities, MazerParams};

fn main() -> mazer::Result<()> {
    let text = "# trapezoidal field\n0 0\n0.2 1\n0.8 1\n1 0\n";
    let table = TabulatedProfile::parse(text)?;
    for kappa_l in [2.0, 5.0, 10.0, 20.0] {
        let mesa = event_probabilities(&MazerParams::new(Shape::Mesa, 0.1, kappa_l))?;
        let trap = event_probabilities(&MazerParams::new(Shape::Tabulated(table.clone()), 0.1, kappa_l))?;
        println!("κL = {kappa_l:>5}: P_em trapezoid {:.6}, mesa {:.6}", trap.p_em, mesa.p_em);
    }
    Ok(())
}
