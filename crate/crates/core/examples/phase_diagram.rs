//! Critical gain/loss strength against impurity position for N = 100.
//!
//! `cargo run --release --example phase_diagram`

use ptlattice::lattice::max_impurity_site;
use ptlattice::phase::{phase_diagram, BisectionOptions};

fn main() -> ptlattice::Result<()> {
    let n = 100;
    let sites: Vec<usize> = (1..=max_impurity_site(n)).collect();
    let opts = BisectionOptions::default();
    let curves = [0.0, 1.0, 2.0]
        .map(|alpha| phase_diagram(n, alpha, 1.0, &sites, &opts));

    println!("{:>6} {:>10} {:>10} {:>10}", "mu", "alpha=0", "alpha=1", "alpha=2");
    let curves = curves.into_iter().collect::<ptlattice::Result<Vec<_>>>()?;
    let last = sites.len() - 1;
    for (i, m0) in sites.iter().copied().enumerate().step_by(5).chain([(last, sites[last])]) {
        print!("{:>6.3}", m0 as f64 / n as f64);
        for c in &curves {
            print!(" {:>10.5}", c.points[i].gamma_pt_scaled);
        }
        println!();
    }
    for c in &curves {
        println!(
            "alpha={}: {} failed points, {} downward steps in mu",
            c.alpha,
            c.failures.len(),
            c.monotonicity_violations().len()
        );
    }
    Ok(())
}
