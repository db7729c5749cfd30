//! Matrix exponential against the eigendecomposition, on both sides of the
//! threshold.
//!
//! `cargo run --example propagator`

use nalgebra::{DMatrix, DVector};
use ptlattice::dynamics::propagator;
use ptlattice::lattice::LatticeSpec;
use ptlattice::linalg::{eigen, C64};
use ptlattice::phase::{critical_gamma, BisectionOptions};

fn main() -> ptlattice::Result<()> {
    let clean = LatticeSpec::new(16, 1.0, 1.0, 5, 0.0)?;
    let gamma_pt = critical_gamma(&clean, &BisectionOptions::default())?.gamma_pt;
    for factor in [0.0, 0.5, 0.99, 1.5] {
        let h = clean.with_gamma(factor * gamma_pt)?.hamiltonian();
        let (vals, vecs) = eigen::eigen_decomposition(&h.entries).expect("converges");
        let inv = vecs.clone().try_inverse().expect("diagonalizable");
        let t = 1.3;
        let phases = DVector::from_iterator(vals.len(), vals.iter().map(|e| (-C64::i() * e * t).exp()));
        let oracle = &vecs * DMatrix::from_diagonal(&phases) * inv;
        let g = propagator(&h, t)?;
        let max_im = vals.iter().map(|e| e.im).fold(f64::NEG_INFINITY, f64::max);
        println!(
            "gamma = {factor:4} gamma_PT: |expm - V e^(-iDt) V^-1| / |.| = {:.2e}, max Im E = {max_im:.2e}",
            (&g - &oracle).norm() / oracle.norm()
        );
    }
    Ok(())
}
