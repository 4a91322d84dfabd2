//! Gaussian and sech² modes of equal area: how long the resonances persist.

use mazer::grid::Shape;
use mazer::mazer::{kappa_l_range, sweep_kappa_l, MazerParams};

fn main() -> mazer::Result<()> {
    let values = kappa_l_range(0.0, 20.0, 0.25)?;
    let mut curves = Vec::new();
    for shape in [Shape::Sech2, Shape::Gaussian] {
        let rows = sweep_kappa_l(&MazerParams::new(shape, 0.1, 0.0).with_points(300), &values)?;
        curves.push(rows.into_iter().map(|r| r.outcome.map_or(f64::NAN, |e| e.p_em)).collect::<Vec<_>>());
    }
    println!("{:>6} {:>10} {:>10}", "κL", "sech2", "gaussian");
    for (i, x) in values.iter().enumerate() {
        println!("{x:>6.2} {:>10.6} {:>10.6}", curves[0][i], curves[1][i]);
    }
    let contrast = |c: &[f64]| {
        let tail: Vec<f64> = values.iter().zip(c).filter(|(x, _)| **x >= 15.0).map(|(_, v)| *v).collect();
        tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - tail.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    println!("contrast over κL ∈ [15, 20]: sech2 {:.4e}, gaussian {:.4e}", contrast(&curves[0]), contrast(&curves[1]));
    Ok(())
}
