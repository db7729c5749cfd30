//! Slow switch-on of the gain: even and odd chains driven just above their
//! thresholds, starting on the gain site.
//!
//! `cargo run --release --example gain_ramp`

use ptlattice::dynamics::{evolve_ramp, localized_state, uniform_times, GainRamp, DEFAULT_RAMP_STEP};
use ptlattice::lattice::{ImpurityPosition, LatticeSpec};

fn main() -> ptlattice::Result<()> {
    let times = uniform_times(50.0, 11);
    let mut totals = Vec::new();
    for (n, gamma_l) in [(20, 1.06), (21, 0.60)] {
        let m0 = ImpurityPosition::Closest.resolve(n)?;
        let spec = LatticeSpec::new(n, 1.0, 1.0, m0, 0.0)?;
        let ramp = GainRamp::from_scaled(gamma_l, 5.0, &spec.bandwidth())?;
        let trace = evolve_ramp(&spec, &ramp, &localized_state(m0, n)?, &times, DEFAULT_RAMP_STEP)?;
        totals.push(trace.total);
    }
    println!("{:>6} {:>12} {:>12}", "t/T", "N=20", "N=21");
    for (i, t) in times.iter().enumerate() {
        println!("{t:>6.1} {:>12.5} {:>12.5}", totals[0][i], totals[1][i]);
    }
    Ok(())
}
