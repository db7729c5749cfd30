//! Number of complex eigenvalues as the impurity strength grows.
//!
//! `cargo run --example staircase`

use ptlattice::lattice::LatticeSpec;
use ptlattice::phase::{breaking_staircase, BisectionOptions};

fn main() -> ptlattice::Result<()> {
    for (n, alpha, m0) in [(20, 2.0, 10), (21, 2.0, 10), (30, 1.0, 4), (12, 0.0, 6)] {
        let spec = LatticeSpec::new(n, alpha, 1.0, m0, 0.0)?;
        let stairs = breaking_staircase(&spec, None, &BisectionOptions::default())?;
        println!("N={n} alpha={alpha} m0={m0}: saturates at {} (2 m0 = {})", stairs.max_count, 2 * m0);
        for j in &stairs.jumps {
            println!("    gamma/Delta = {:8.5}: {:>2} -> {:>2}", j.gamma_over_delta, j.from, j.to);
        }
    }
    Ok(())
}
