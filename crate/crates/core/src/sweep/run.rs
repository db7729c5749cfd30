//! Executes a [`RunConfig`] and writes its result files.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::dynamics::{evolve_ramp, evolve_static, localized_state, uniform_times, GainRamp, IntensityTrace};
use crate::error::{Error, Result};
use crate::lattice::{max_impurity_site, LatticeSpec};
use crate::phase::{
    breaking_staircase, critical_gamma, default_staircase_grid, fit_scaling, phase_diagram, BisectionOptions, MuMode,
    ScalingFit, ScalingSample,
};
use crate::spectral::analyze;

use super::config::{Command, RunConfig, Strength};
use super::heatmap::{render_heatmap, shared_range};
use super::output::{write_atomic, write_manifest, RunInfo, RunStatus};

/// One output file, not yet written.
struct Artifact {
    name: String,
    bytes: Vec<u8>,
}

impl Artifact {
    fn text(name: impl Into<String>, text: String) -> Self {
        Artifact {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }
}

#[derive(Default)]
struct Collected {
    artifacts: Vec<Artifact>,
    failures: Vec<String>,
}

impl Collected {
    fn fail(&mut self, label: &str, err: impl std::fmt::Display) {
        self.failures.push(format!("{label}: {err}"));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    /// Written result files, relative to the output directory.
    pub outputs: Vec<PathBuf>,
    pub failures: Vec<String>,
    pub manifest: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

/// Runs the configured command on a pool of `workers` threads.
///
/// Per-point numerical failures do not abort the run: they are listed in the
/// outcome and the manifest. Without `keep_going` no result files are
/// written in that case. I/O failures are returned as errors.
pub fn run_sweep(cfg: &RunConfig) -> Result<RunOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let collected = pool.install(|| match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::PhaseDiagram => phase(cfg),
        Command::Scaling => scaling(cfg),
        Command::Staircase => staircase(cfg),
        Command::Evolve | Command::EvolveRamp => evolve(cfg),
    });

    let status = match (collected.failures.is_empty(), cfg.keep_going) {
        (true, _) => RunStatus::Complete,
        (false, true) => RunStatus::Partial,
        (false, false) => RunStatus::Failed,
    };
    let mut outputs = Vec::new();
    if status != RunStatus::Failed {
        for a in &collected.artifacts {
            write_atomic(&cfg.out.join(&a.name), &a.bytes)?;
            outputs.push(PathBuf::from(&a.name));
        }
    }
    let info = RunInfo {
        status,
        version: env!("CARGO_PKG_VERSION").into(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        failures: collected.failures.clone(),
    };
    let manifest = write_manifest(&cfg.out, &cfg.settings, &info)?;
    Ok(RunOutcome {
        status,
        outputs,
        failures: collected.failures,
        manifest,
    })
}

fn bisection(cfg: &RunConfig) -> BisectionOptions {
    BisectionOptions {
        tol_over_delta: cfg.gamma_tol_over_delta,
        rel_tol: cfg.rel_tol,
    }
}

/// File name `{stem}.{ext}`, tagged when the run covers several cases.
fn file_name(stem: &str, tag: &str, multi: bool, ext: &str) -> String {
    if multi {
        format!("{stem}_{tag}.{ext}")
    } else {
        format!("{stem}.{ext}")
    }
}

/// A lattice at the configured position with the given strength.
struct Case {
    spec: LatticeSpec,
    tag: String,
}

fn cases(cfg: &RunConfig) -> Vec<std::result::Result<Case, (String, Error)>> {
    let strengths: Vec<Option<Strength>> = if cfg.strengths.is_empty() {
        vec![None]
    } else {
        cfg.strengths.iter().copied().map(Some).collect()
    };
    let mut out = Vec::new();
    for &n in &cfg.n_values {
        for &alpha in &cfg.alphas {
            for &strength in &strengths {
                let mut tag = format!("n{n}_alpha{alpha}");
                if let Some(s) = strength {
                    tag.push('_');
                    tag.push_str(&s.label());
                }
                let make = || -> Result<LatticeSpec> {
                    let m0 = cfg.position.expect("validated").resolve(n)?;
                    let clean = LatticeSpec::new(n, alpha, cfg.t0, m0, 0.0)?;
                    match strength {
                        Some(s) => clean.with_gamma(s.resolve(clean.bandwidth().delta)),
                        None => Ok(clean),
                    }
                };
                out.push(make().map(|spec| Case { spec, tag: tag.clone() }).map_err(|e| (tag, e)));
            }
        }
    }
    out
}

fn spectrum(cfg: &RunConfig) -> Collected {
    let all = cases(cfg);
    let multi = all.len() > 1;
    let results: Vec<_> = all
        .into_par_iter()
        .map(|c| {
            let c = c?;
            let bw = c.spec.bandwidth();
            match analyze(&c.spec, &bw, cfg.rel_tol) {
                Ok(r) => Ok((c, bw, r)),
                Err(e) => Err((c.tag, e)),
            }
        })
        .collect();

    let mut out = Collected::default();
    let mut summary = String::from("n,alpha,m0,gamma,gamma_over_delta,delta,n_complex,n_real,degree_of_breaking\n");
    for r in results {
        match r {
            Ok((c, bw, report)) => {
                let s = &c.spec;
                let _ = writeln!(
                    summary,
                    "{},{},{},{},{},{},{},{},{}",
                    s.n_sites(),
                    s.alpha(),
                    s.m0(),
                    s.gamma(),
                    s.gamma() / bw.delta,
                    bw.delta,
                    report.n_complex,
                    report.n_real,
                    report.degree_of_breaking
                );
                out.artifacts
                    .push(Artifact::text(file_name("spectrum", &c.tag, multi, "csv"), report.to_csv(s, &bw)));
                if cfg.dump_matrix {
                    out.artifacts
                        .push(Artifact::text(file_name("hamiltonian", &c.tag, multi, "csv"), s.hamiltonian().to_csv()));
                }
            }
            Err((tag, e)) => out.fail(&tag, e),
        }
    }
    out.artifacts.push(Artifact::text("spectrum_summary.csv", summary));
    out
}

fn phase(cfg: &RunConfig) -> Collected {
    let opts = bisection(cfg);
    let multi_n = cfg.n_values.len() > 1;
    let mut out = Collected::default();
    for &n in &cfg.n_values {
        for &alpha in &cfg.alphas {
            let m0s: Vec<usize> = match &cfg.m0_values {
                Some(v) => v.clone(),
                None => (1..=max_impurity_site(n)).collect(),
            };
            let label = format!("N={n},alpha={alpha}");
            match phase_diagram(n, alpha, cfg.t0, &m0s, &opts) {
                Ok(curve) => {
                    for (m0, msg) in &curve.failures {
                        out.fail(&format!("{label},m0={m0}"), msg);
                    }
                    let name = if multi_n {
                        format!("phase_curve_n{n}_alpha{alpha}.csv")
                    } else {
                        format!("phase_curve_alpha{alpha}.csv")
                    };
                    out.artifacts.push(Artifact::text(name, curve.to_csv()));
                }
                Err(e) => out.fail(&label, e),
            }
        }
    }
    out
}

fn scaling_series(mode: MuMode, n_values: &[usize]) -> Vec<(&'static str, Vec<usize>)> {
    match mode {
        MuMode::Closest => [("even", 0), ("odd", 1)]
            .into_iter()
            .map(|(name, p)| (name, n_values.iter().copied().filter(|n| n % 2 == p).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect(),
        _ => vec![("all", n_values.to_vec())],
    }
}

fn fit_row(out: &mut String, alpha: f64, series: &str, fit: &ScalingFit) {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        alpha,
        fit.mu_mode.label(),
        series,
        fit.samples.len(),
        fit.exponent,
        fit.log_prefactor.exp(),
        opt(fit.asymptote),
        opt(fit.asymptote_slope),
        fit.residual
    );
}

fn scaling(cfg: &RunConfig) -> Collected {
    use crate::lattice::ImpurityPosition;
    let opts = bisection(cfg);
    let mode = match cfg.position.expect("validated") {
        ImpurityPosition::Farthest => MuMode::Farthest,
        ImpurityPosition::Closest => MuMode::Closest,
        ImpurityPosition::Fraction(mu) => MuMode::Fixed(mu),
        ImpurityPosition::Site(_) => unreachable!("rejected by config validation"),
    };
    let mut out = Collected::default();
    let mut fits = String::from("alpha,mode,series,points,exponent,prefactor,asymptote,asymptote_slope,residual\n");
    for &alpha in &cfg.alphas {
        for (series, ns) in scaling_series(mode, &cfg.n_values) {
            let label = format!("alpha={alpha},series={series}");
            let points: Vec<_> = ns
                .par_iter()
                .map(|&n| {
                    let spec = LatticeSpec::new(n, alpha, cfg.t0, mode.position().resolve(n)?, 0.0)?;
                    critical_gamma(&spec, &opts).map(|p| ScalingSample {
                        n,
                        m0: spec.m0(),
                        gamma_pt_scaled: p.gamma_pt_scaled,
                    })
                })
                .collect();
            let mut samples = Vec::new();
            for (n, p) in ns.iter().zip(points) {
                match p {
                    Ok(s) => samples.push(s),
                    Err(e) => out.fail(&format!("{label},N={n}"), e),
                }
            }
            match fit_scaling(&samples, mode) {
                Ok(fit) => {
                    fit_row(&mut fits, alpha, series, &fit);
                    let name = match series {
                        "all" => format!("scaling_alpha{alpha}.csv"),
                        s => format!("scaling_alpha{alpha}_{s}.csv"),
                    };
                    out.artifacts.push(Artifact::text(name, fit.to_csv()));
                }
                Err(e) => out.fail(&label, e),
            }
        }
    }
    out.artifacts.push(Artifact::text("scaling_fits.csv", fits));
    out
}

fn staircase(cfg: &RunConfig) -> Collected {
    let opts = bisection(cfg);
    let all = cases(cfg);
    let multi = all.len() > 1;
    let results: Vec<_> = all
        .into_par_iter()
        .map(|c| {
            let c = c?;
            let run = || -> Result<_> {
                let grid = match cfg.grid_max_over_delta {
                    Some(top) => linspace(top, cfg.grid_points),
                    None => {
                        let top = *default_staircase_grid(&c.spec, &opts)?.last().expect("non-empty grid");
                        linspace(top, cfg.grid_points)
                    }
                };
                breaking_staircase(&c.spec, Some(&grid), &opts)
            };
            run().map(|s| (c.tag.clone(), s)).map_err(|e| (c.tag, e))
        })
        .collect();
    let mut out = Collected::default();
    for r in results {
        match r {
            Ok((tag, stairs)) => {
                out.artifacts.push(Artifact::text(file_name("staircase", &tag, multi, "csv"), stairs.to_csv()));
                let mut jumps = String::from("gamma_over_delta,from,to\n");
                for j in &stairs.jumps {
                    let _ = writeln!(jumps, "{},{},{}", j.gamma_over_delta, j.from, j.to);
                }
                out.artifacts.push(Artifact::text(file_name("staircase_jumps", &tag, multi, "csv"), jumps));
            }
            Err((tag, e)) => out.fail(&tag, e),
        }
    }
    out
}

fn linspace(top: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect()
}

fn evolve(cfg: &RunConfig) -> Collected {
    let dynamics = cfg.dynamics.as_ref().expect("validated");
    let times = uniform_times(dynamics.horizon, dynamics.samples);
    let all = cases(cfg);
    let multi = all.len() > 1;
    let results: Vec<std::result::Result<(String, IntensityTrace), (String, Error)>> = all
        .into_par_iter()
        .map(|c| {
            let c = c?;
            let run = || -> Result<IntensityTrace> {
                let n = c.spec.n_sites();
                match &cfg.ramp {
                    None => {
                        let psi0 = localized_state(dynamics.init_site.unwrap_or(1), n)?;
                        evolve_static(&c.spec, &psi0, &times)
                    }
                    Some(r) => {
                        let bw = c.spec.bandwidth();
                        let ramp = GainRamp::new(r.gamma_l.resolve(bw.delta), r.tau_over_t * bw.t_alpha_unit)?;
                        let psi0 = localized_state(dynamics.init_site.unwrap_or(c.spec.m0()), n)?;
                        evolve_ramp(&c.spec, &ramp, &psi0, &times, r.step)
                    }
                }
            };
            run().map(|t| (c.tag.clone(), t)).map_err(|e| (c.tag, e))
        })
        .collect();

    let mut out = Collected::default();
    let traces: Vec<(String, IntensityTrace)> = results
        .into_iter()
        .filter_map(|r| r.map_err(|(tag, e)| out.fail(&tag, e)).ok())
        .collect();
    let common = (dynamics.shared_range && dynamics.heatmap.is_some_and(|h| h.range.is_none()))
        .then(|| shared_range(traces.iter().map(|(_, t)| t)));
    for (tag, trace) in &traces {
        out.artifacts.push(Artifact::text(file_name("trace", tag, multi, "csv"), trace.to_csv()));
        if let Some(mut opts) = dynamics.heatmap {
            if common.is_some() {
                opts.range = common;
            }
            match render_heatmap(trace, &opts) {
                Ok(bytes) => out.artifacts.push(Artifact {
                    name: file_name("heatmap", tag, multi, opts.format.extension()),
                    bytes,
                }),
                Err(e) => out.fail(tag, e),
            }
        }
    }
    out
}
