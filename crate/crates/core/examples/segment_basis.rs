//! Exact solutions of `φ'' + (a + bx)φ = 0` on one segment, evaluated across a
//! turning point where the basis changes from oscillating to growing/decaying.

use mazer::segment::Segment;

fn main() -> mazer::Result<()> {
    // z = 1 - x: allowed for x < 1, forbidden beyond
    for (lo, hi) in [(-3.0, 1.0), (1.0, 5.0)] {
        let seg = Segment::linear(1.0, -1.0, lo, hi)?;
        println!("segment [{lo}, {hi}] regime {} wronskian {}", seg.regime(), seg.wronskian());
        if let Some(lim) = seg.turning_point_limits() {
            println!("  turning-point limits f+ f- g+ g- = {lim:.12?}");
        }
        for i in 0..=8 {
            let x = lo + (hi - lo) * i as f64 / 8.0;
            let e = seg.eval(x)?;
            println!(
                "  x = {x:>6.3}  f+ = {}  f- = {}  W-check = {}",
                e.f_plus,
                e.f_minus,
                e.wronskian()
            );
        }
    }
    // a steep forbidden ramp: values leave f64 range but stay exact in XReal
    let steep = Segment::linear(-1.0, -50.0, 0.0, 400.0)?;
    let e = steep.eval(400.0)?;
    println!("steep ramp at x = 400: f+ = {}, f- = {}", e.f_plus, e.f_minus);
    Ok(())
}
