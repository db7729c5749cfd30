//! Command-line flags, TOML config files and their resolution into a
//! validated [`RunConfig`].
//!
//! Flags and config-file keys share one schema ([`Settings`]): every flag
//! `--foo-bar` is the key `foo-bar` in the file. Flags win over the file.
//! A run manifest is a config file with every default filled in, plus a
//! `[run]` table that is ignored on input.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ImpurityPosition, LatticeSpec};
use crate::phase::{DEFAULT_GAMMA_TOL, DEFAULT_STAIRCASE_POINTS};
use crate::spectral::DEFAULT_REL_TOL;

use super::heatmap::{ColorScale, HeatmapOptions, Orientation, RasterFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Eigenvalues and their classification.
    Spectrum,
    /// Critical strength for every impurity site of one lattice.
    PhaseDiagram,
    /// Finite-size scaling of the critical strength.
    Scaling,
    /// Complex-eigenvalue count as a function of gamma.
    Staircase,
    /// Wavepacket evolution under a static Hamiltonian.
    Evolve,
    /// Wavepacket evolution under the gain ramp.
    EvolveRamp,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::PhaseDiagram => "phase-diagram",
            Command::Scaling => "scaling",
            Command::Staircase => "staircase",
            Command::Evolve => "evolve",
            Command::EvolveRamp => "evolve-ramp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositionKeyword {
    Closest,
    Farthest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatmapKind {
    Pgm,
    Png,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatmapRows {
    Sites,
    Time,
}

fn one_or_many<'de, D, T>(de: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(Some(match OneOrMany::deserialize(de)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    }))
}

/// Every tunable of a run. `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// Lattice size(s) N; comma-separated for several lattices.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,

    /// Hopping exponent(s) alpha [default: 0].
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,

    /// Hopping scale t0 [default: 1].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,

    /// Gain impurity site (1-based).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<usize>,

    /// Fractional impurity position mu = m0 / N.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,

    /// Impurity position keyword.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<PositionKeyword>,

    /// Impurity strength(s) in energy units.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,

    /// Impurity strength(s) in units of Delta_alpha.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub gamma_over_delta: Option<Vec<f64>>,

    /// Impurity sites for phase-diagram [default: 1..=N/2].
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub m0_values: Option<Vec<usize>>,

    /// Initial site of the wavepacket [default: 1 for evolve, m0 for evolve-ramp].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_site: Option<usize>,

    /// Time horizon in units of T_alpha [default: 50].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,

    /// Number of time samples [default: 600].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Ramp loss strength in energy units.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_l: Option<f64>,

    /// Ramp loss strength in units of Delta_alpha.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_l_over_delta: Option<f64>,

    /// Ramp time constant in units of T_alpha.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_over_t: Option<f64>,

    /// Largest ramp integration step in units of T_alpha [default: 0.005].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,

    /// Complex-classification threshold relative to 2 Delta_alpha [default: 1e-8].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,

    /// Bisection tolerance in units of Delta_alpha [default: 1e-6].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_tol_over_delta: Option<f64>,

    /// Staircase grid size [default: 400].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,

    /// Staircase grid end in units of Delta_alpha [default: max(2 gamma_PT, 8)].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_max_over_delta: Option<f64>,

    /// Worker threads [default: available parallelism].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,

    /// Output directory [default: ptlattice-out].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Heatmap format for evolve runs [default: pgm].
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap: Option<HeatmapKind>,

    /// Use a logarithmic color scale.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_scale: Option<bool>,

    /// Heatmap row axis [default: sites for evolve, time for evolve-ramp].
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap_rows: Option<HeatmapRows>,

    /// Fixed color range `min,max` (intensity units).
    #[arg(long, value_delimiter = ',', num_args = 2)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap_range: Option<Vec<f64>>,

    /// Give every heatmap of the run the same color range.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shared_range: Option<bool>,

    /// Write the Hamiltonian matrix CSV for spectrum runs.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_matrix: Option<bool>,

    /// Keep going after per-point failures (exit status 3).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep_going: Option<bool>,

    /// Run metadata written into manifests; ignored on input.
    #[arg(skip)]
    #[serde(default, skip_serializing)]
    pub run: Option<toml::Value>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr; $($field:ident),+ $(,)?) => {
        Settings {
            $($field: $hi.$field.or($lo.$field),)+
            run: None,
        }
    };
}

impl Settings {
    /// Field-wise `self`, falling back to `base`.
    pub fn over(self, base: Settings) -> Settings {
        overlay!(self, base;
            command, n, alpha, t0, m0, mu, position, gamma, gamma_over_delta, m0_values,
            init_site, horizon, samples, gamma_l, gamma_l_over_delta, tau_over_t, step,
            rel_tol, gamma_tol_over_delta, grid_points, grid_max_over_delta, workers, out,
            heatmap, log_scale, heatmap_rows, heatmap_range, shared_range, dump_matrix, keep_going)
    }

    pub fn from_toml(text: &str) -> Result<Settings> {
        toml::from_str(text).map_err(|e| Error::Usage(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Usage(format!("{}: {}", path.display(), e.message())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("settings serialize to TOML")
    }

    /// Fills every defaulted key, so that the result re-runs identically.
    fn with_defaults(mut self, command: Command) -> Settings {
        self.command = Some(command);
        self.run = None;
        self.alpha.get_or_insert_with(|| vec![0.0]);
        self.t0.get_or_insert(1.0);
        self.rel_tol.get_or_insert(DEFAULT_REL_TOL);
        self.gamma_tol_over_delta.get_or_insert(DEFAULT_GAMMA_TOL);
        self.workers
            .get_or_insert_with(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        self.out.get_or_insert_with(|| PathBuf::from("ptlattice-out"));
        self.keep_going.get_or_insert(false);
        match command {
            Command::Spectrum => {
                self.dump_matrix.get_or_insert(false);
            }
            Command::Staircase => {
                self.grid_points.get_or_insert(DEFAULT_STAIRCASE_POINTS);
            }
            Command::Evolve | Command::EvolveRamp => {
                self.horizon.get_or_insert(50.0);
                self.samples.get_or_insert(600);
                self.heatmap.get_or_insert(HeatmapKind::Pgm);
                self.log_scale.get_or_insert(false);
                self.shared_range.get_or_insert(false);
                self.heatmap_rows.get_or_insert(if command == Command::Evolve {
                    HeatmapRows::Sites
                } else {
                    HeatmapRows::Time
                });
                if command == Command::EvolveRamp {
                    self.step.get_or_insert(crate::dynamics::DEFAULT_RAMP_STEP);
                }
            }
            Command::PhaseDiagram | Command::Scaling => {}
        }
        self
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ptlattice",
    version,
    about = "Spectra, critical points and wavepacket dynamics of PT-symmetric tight-binding chains"
)]
pub struct Cli {
    /// What to compute (may instead come from the config file).
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// TOML config file (keys are the long flag names); flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub settings: Settings,
}

/// A strength given either in energy units or relative to `Delta_alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strength {
    Raw(f64),
    OverDelta(f64),
}

impl Strength {
    pub fn resolve(self, delta: f64) -> f64 {
        match self {
            Strength::Raw(g) => g,
            Strength::OverDelta(r) => r * delta,
        }
    }

    /// Short label for file names.
    pub fn label(self) -> String {
        match self {
            Strength::Raw(g) => format!("g{g}"),
            Strength::OverDelta(r) => format!("gd{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    /// Explicit initial site; `None` means the command default.
    pub init_site: Option<usize>,
    pub horizon: f64,
    pub samples: usize,
    pub heatmap: Option<HeatmapOptions>,
    pub shared_range: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RampConfig {
    pub gamma_l: Strength,
    pub tau_over_t: f64,
    pub step: f64,
}

/// A validated run. Built only through [`RunConfig::from_settings`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_values: Vec<usize>,
    pub alphas: Vec<f64>,
    pub t0: f64,
    pub position: Option<ImpurityPosition>,
    pub strengths: Vec<Strength>,
    pub m0_values: Option<Vec<usize>>,
    pub rel_tol: f64,
    pub gamma_tol_over_delta: f64,
    pub grid_points: usize,
    pub grid_max_over_delta: Option<f64>,
    pub dynamics: Option<DynamicsConfig>,
    pub ramp: Option<RampConfig>,
    pub dump_matrix: bool,
    pub workers: usize,
    pub out: PathBuf,
    pub keep_going: bool,
    /// Fully resolved settings, as written to the manifest.
    pub settings: Settings,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn forbid(present: bool, key: &str, command: Command) -> Result<()> {
    if present {
        Err(usage(format!("`{key}` does not apply to `{}`", command.name())))
    } else {
        Ok(())
    }
}

fn positive(v: f64, key: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("`{key}` must be a positive number, got {v}")))
    }
}

impl RunConfig {
    pub fn from_settings(settings: Settings) -> Result<RunConfig> {
        let command = settings
            .command
            .ok_or_else(|| usage("no command given (one of spectrum, phase-diagram, scaling, staircase, evolve, evolve-ramp)"))?;
        let s = settings.with_defaults(command);

        let n_values = s.n.clone().ok_or_else(|| usage("missing required key `n`"))?;
        if n_values.is_empty() {
            return Err(usage("`n` is empty"));
        }
        if let Some(bad) = n_values.iter().find(|&&n| n < 2) {
            return Err(usage(format!("`n` must be >= 2, got {bad}")));
        }
        let alphas = s.alpha.clone().unwrap_or_default();
        if alphas.is_empty() {
            return Err(usage("`alpha` is empty"));
        }
        let t0 = s.t0.unwrap_or(1.0);

        let given = [s.m0.is_some(), s.mu.is_some(), s.position.is_some()];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(usage("give at most one of `m0`, `mu`, `position`"));
        }
        let position = match (s.m0, s.mu, s.position) {
            (Some(m0), _, _) => Some(ImpurityPosition::Site(m0)),
            (_, Some(mu), _) => Some(ImpurityPosition::Fraction(mu)),
            (_, _, Some(PositionKeyword::Closest)) => Some(ImpurityPosition::Closest),
            (_, _, Some(PositionKeyword::Farthest)) => Some(ImpurityPosition::Farthest),
            _ => None,
        };

        let strengths = match (&s.gamma, &s.gamma_over_delta) {
            (Some(_), Some(_)) => return Err(usage("give only one of `gamma`, `gamma-over-delta`")),
            (Some(g), None) => g.iter().map(|&g| Strength::Raw(g)).collect(),
            (None, Some(r)) => r.iter().map(|&r| Strength::OverDelta(r)).collect(),
            (None, None) => vec![],
        };

        let dynamic = matches!(command, Command::Evolve | Command::EvolveRamp);
        let needs_position = !matches!(command, Command::PhaseDiagram);
        let needs_strength = matches!(command, Command::Spectrum | Command::Evolve);

        if needs_position && position.is_none() {
            return Err(usage(format!("`{}` needs one of `m0`, `mu`, `position`", command.name())));
        }
        if !needs_position && position.is_some() {
            return Err(usage("`phase-diagram` sweeps impurity sites; use `m0-values` instead of a position"));
        }
        if needs_strength && strengths.is_empty() {
            return Err(usage(format!("`{}` needs `gamma` or `gamma-over-delta`", command.name())));
        }
        if !needs_strength {
            forbid(!strengths.is_empty(), "gamma", command)?;
        }
        if command == Command::Scaling {
            if matches!(position, Some(ImpurityPosition::Site(_))) {
                return Err(usage("`scaling` follows a fractional position; use `mu` or `position`"));
            }
            if n_values.len() < crate::phase::MIN_SCALING_POINTS {
                return Err(usage(format!(
                    "`scaling` needs at least {} lattice sizes",
                    crate::phase::MIN_SCALING_POINTS
                )));
            }
        }
        forbid(s.m0_values.is_some() && command != Command::PhaseDiagram, "m0-values", command)?;
        forbid(s.dump_matrix == Some(true) && command != Command::Spectrum, "dump-matrix", command)?;
        let staircase = command == Command::Staircase;
        forbid(!staircase && s.grid_points.is_some(), "grid-points", command)?;
        forbid(!staircase && s.grid_max_over_delta.is_some(), "grid-max-over-delta", command)?;
        for (present, key) in [
            (s.init_site.is_some(), "init-site"),
            (s.horizon.is_some(), "horizon"),
            (s.samples.is_some(), "samples"),
            (s.heatmap.is_some(), "heatmap"),
            (s.log_scale.is_some(), "log-scale"),
            (s.heatmap_rows.is_some(), "heatmap-rows"),
            (s.heatmap_range.is_some(), "heatmap-range"),
            (s.shared_range.is_some(), "shared-range"),
        ] {
            forbid(present && !dynamic, key, command)?;
        }
        let ramp_keys = [
            (s.gamma_l.is_some(), "gamma-l"),
            (s.gamma_l_over_delta.is_some(), "gamma-l-over-delta"),
            (s.tau_over_t.is_some(), "tau-over-t"),
            (s.step.is_some(), "step"),
        ];
        if command != Command::EvolveRamp {
            for (present, key) in ramp_keys {
                forbid(present, key, command)?;
            }
        } else {
            forbid(!strengths.is_empty(), "gamma", command)?;
        }

        let rel_tol = positive(s.rel_tol.unwrap_or(DEFAULT_REL_TOL), "rel-tol")?;
        let gamma_tol_over_delta = positive(s.gamma_tol_over_delta.unwrap_or(DEFAULT_GAMMA_TOL), "gamma-tol-over-delta")?;
        let grid_points = s.grid_points.unwrap_or(DEFAULT_STAIRCASE_POINTS);
        if staircase && grid_points < 2 {
            return Err(usage("`grid-points` must be >= 2"));
        }
        let grid_max_over_delta = s.grid_max_over_delta.map(|g| positive(g, "grid-max-over-delta")).transpose()?;
        let workers = s.workers.unwrap_or(1);
        if workers == 0 {
            return Err(usage("`workers` must be >= 1"));
        }

        let dynamics = if dynamic {
            let horizon = positive(s.horizon.unwrap_or(50.0), "horizon")?;
            let samples = s.samples.unwrap_or(600);
            if samples < 2 {
                return Err(usage("`samples` must be >= 2"));
            }
            let range = match &s.heatmap_range {
                None => None,
                Some(r) if r.len() == 2 && r[0].is_finite() && r[1].is_finite() && r[0] >= 0.0 && r[0] < r[1] => {
                    Some((r[0], r[1]))
                }
                Some(r) => return Err(usage(format!("`heatmap-range` must be `min,max` with 0 <= min < max, got {r:?}"))),
            };
            let heatmap = match s.heatmap.unwrap_or(HeatmapKind::Pgm) {
                HeatmapKind::None => None,
                kind => Some(HeatmapOptions {
                    format: if kind == HeatmapKind::Png { RasterFormat::Png } else { RasterFormat::Pgm },
                    scale: if s.log_scale == Some(true) { ColorScale::Log } else { ColorScale::Linear },
                    orientation: match s.heatmap_rows {
                        Some(HeatmapRows::Time) => Orientation::TimeAsRows,
                        _ => Orientation::SitesAsRows,
                    },
                    range,
                }),
            };
            Some(DynamicsConfig {
                init_site: s.init_site,
                horizon,
                samples,
                heatmap,
                shared_range: s.shared_range == Some(true),
            })
        } else {
            None
        };

        let ramp = if command == Command::EvolveRamp {
            let gamma_l = match (s.gamma_l, s.gamma_l_over_delta) {
                (Some(_), Some(_)) => return Err(usage("give only one of `gamma-l`, `gamma-l-over-delta`")),
                (Some(g), None) => Strength::Raw(positive(g, "gamma-l")?),
                (None, Some(r)) => Strength::OverDelta(positive(r, "gamma-l-over-delta")?),
                (None, None) => return Err(usage("`evolve-ramp` needs `gamma-l` or `gamma-l-over-delta`")),
            };
            let tau_over_t = positive(s.tau_over_t.ok_or_else(|| usage("`evolve-ramp` needs `tau-over-t`"))?, "tau-over-t")?;
            let step = positive(s.step.unwrap_or(crate::dynamics::DEFAULT_RAMP_STEP), "step")?;
            Some(RampConfig {
                gamma_l,
                tau_over_t,
                step,
            })
        } else {
            None
        };

        let config = RunConfig {
            command,
            n_values,
            alphas,
            t0,
            position,
            strengths,
            m0_values: s.m0_values.clone(),
            rel_tol,
            gamma_tol_over_delta,
            grid_points,
            grid_max_over_delta,
            dynamics,
            ramp,
            dump_matrix: s.dump_matrix == Some(true),
            workers,
            out: s.out.clone().unwrap_or_else(|| PathBuf::from("ptlattice-out")),
            keep_going: s.keep_going == Some(true),
            settings: s,
        };
        config.validate_lattices()?;
        Ok(config)
    }

    /// Every lattice the run will touch must pass `LatticeSpec` validation.
    fn validate_lattices(&self) -> Result<()> {
        for &n in &self.n_values {
            for &alpha in &self.alphas {
                let m0s = match (self.position, &self.m0_values) {
                    (Some(p), _) => vec![p.resolve(n)?],
                    (None, Some(v)) => v.clone(),
                    (None, None) => vec![1],
                };
                for m0 in m0s {
                    LatticeSpec::new(n, alpha, self.t0, m0, 0.0)?;
                }
                for s in &self.strengths {
                    let g = match s {
                        Strength::Raw(g) | Strength::OverDelta(g) => *g,
                    };
                    if !(g.is_finite() && g >= 0.0) {
                        return Err(Error::InvalidSpec(format!("gamma must be finite and >= 0, got {g}")));
                    }
                }
                if let (Some(d), Some(p)) = (&self.dynamics, self.position) {
                    if let Some(site) = d.init_site {
                        if site < 1 || site > n {
                            return Err(usage(format!("`init-site` {site} outside 1..={n}")));
                        }
                    }
                    p.resolve(n)?;
                }
            }
        }
        if let Some(v) = &self.m0_values {
            if v.is_empty() || v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(usage("`m0-values` must be non-empty and strictly ascending"));
            }
        }
        Ok(())
    }
}

/// Parses `argv` (including the program name) and an optional config file.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    resolve_cli(cli)
}

pub fn resolve_cli(cli: Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let mut flags = cli.settings;
    flags.command = cli.command;
    RunConfig::from_settings(flags.over(file))
}
