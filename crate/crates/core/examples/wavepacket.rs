//! Site-resolved intensity below and above the PT threshold, written as CSV
//! and PGM heatmaps.
//!
//! `cargo run --example wavepacket [out-dir]`

use std::path::PathBuf;

use ptlattice::dynamics::{evolve_static, localized_state, uniform_times};
use ptlattice::lattice::LatticeSpec;
use ptlattice::phase::{critical_gamma, BisectionOptions};
use ptlattice::sweep::{emit_heatmap, write_atomic, ColorScale, HeatmapOptions};

fn main() -> ptlattice::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ptlattice-wavepacket"));
    let clean = LatticeSpec::new(21, 2.0, 1.0, 10, 0.0)?;
    let gamma_pt = critical_gamma(&clean, &BisectionOptions::default())?.gamma_pt;
    let psi0 = localized_state(1, 21)?;
    let times = uniform_times(40.0, 400);

    for (label, factor) in [("below", 0.8), ("above", 2.5)] {
        let spec = clean.with_gamma(factor * gamma_pt)?;
        let trace = evolve_static(&spec, &psi0, &times)?;
        write_atomic(&out.join(format!("{label}.csv")), trace.to_csv().as_bytes())?;
        let opts = HeatmapOptions {
            scale: ColorScale::Log,
            ..Default::default()
        };
        emit_heatmap(&trace, &opts, &out.join(format!("{label}.pgm")))?;
        println!(
            "{label:>5} threshold: total intensity at 40 T = {:.4e}, peak site intensity {:.4e}",
            trace.total.last().unwrap(),
            trace.max_intensity()
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}
