//! Driving the batch front end from code with a TOML config.
//!
//! `cargo run --example batch [out-dir]`

use ptlattice::sweep::{run_sweep, RunConfig, Settings};

const CONFIG: &str = r#"
command = "phase-diagram"
n = [40, 41]
alpha = [1, 2]
m0-values = [1, 5, 10, 15, 20]
"#;

fn main() -> ptlattice::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("ptlattice-batch").display().to_string());
    let mut settings = Settings::from_toml(CONFIG)?;
    settings.out = Some(out.into());
    let cfg = RunConfig::from_settings(settings)?;
    let outcome = run_sweep(&cfg)?;
    println!("status {:?}, manifest {}", outcome.status, outcome.manifest.display());
    for f in &outcome.outputs {
        println!("    {}", f.display());
    }
    Ok(())
}
