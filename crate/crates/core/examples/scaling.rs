//! Finite-size scaling of the critical strength for three impurity positions.
//!
//! `cargo run --release --example scaling`

use ptlattice::phase::{scaling_fit, BisectionOptions, MuMode};

fn main() -> ptlattice::Result<()> {
    let opts = BisectionOptions::default();
    let even: Vec<usize> = (20..=200).step_by(20).collect();
    let odd: Vec<usize> = even.iter().map(|n| n + 1).collect();

    for (alpha, mode, ns) in [
        (1.0, MuMode::Farthest, &even),
        (1.0, MuMode::Fixed(0.25), &even),
        (0.0, MuMode::Fixed(0.25), &even),
        (1.0, MuMode::Closest, &even),
        (1.0, MuMode::Closest, &odd),
    ] {
        let fit = scaling_fit(ns, alpha, 1.0, mode, &opts)?;
        print!("alpha={alpha} {:<9} exponent {:+.3}", mode.label(), fit.exponent);
        if let Some(a) = fit.asymptote {
            print!("  (excess over A = {a:.4}, N = {}..)", ns[0]);
        }
        println!("  rms {:.1e}", fit.residual);
    }
    Ok(())
}
