//! Degree of PT breaking for the closest-impurity chains with alpha = 2.
//!
//! `cargo run --example spectrum`

use ptlattice::lattice::{clean_bandwidth, ImpurityPosition, LatticeSpec};
use ptlattice::spectral::{analyze, complex_eigenvalue_locations, DEFAULT_REL_TOL};

fn main() -> ptlattice::Result<()> {
    for (n, ratio) in [(21, 0.63), (20, 1.08), (20, 0.9)] {
        let bw = clean_bandwidth(n, 2.0, 1.0)?;
        let m0 = ImpurityPosition::Closest.resolve(n)?;
        let spec = LatticeSpec::new(n, 2.0, 1.0, m0, ratio * bw.delta)?;
        let report = analyze(&spec, &bw, DEFAULT_REL_TOL)?;
        println!(
            "N={n:>2} m0={m0:>2} gamma/Delta={ratio:<5} complex {:>2}/{n}  degree {:.3}",
            report.n_complex, report.degree_of_breaking
        );
        for (re, im) in complex_eigenvalue_locations(&report, &bw) {
            println!("    E/2Delta = {re:+.4} {im:+.4}i");
        }
    }
    Ok(())
}
