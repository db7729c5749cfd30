//! Non-unitary single-particle dynamics.
//!
//! States evolve as `psi(t) = exp(-i H t) psi(0)` with hbar = 1. Intensities
//! use the ordinary inner product, so the total intensity is not conserved
//! once gain and loss are present and can grow without bound in the broken
//! phase.
//!
//! All time arguments of [`evolve_static`] and [`evolve_ramp`] are in units
//! of `T_alpha = 1 / Delta_alpha`; [`propagator`] and [`GainRamp`] work in raw
//! units.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, Bandwidth, HamiltonianMatrix, LatticeSpec};
use crate::linalg::{expm, C64};
use crate::spectral::spectrum;

/// Propagator norms above this are treated as overflow.
pub const GROWTH_LIMIT: f64 = 1e300;

/// Largest ramp sub-step, in units of `T_alpha`.
pub const DEFAULT_RAMP_STEP: f64 = 1.0 / 200.0;
/// Accepted relative change between a ramp pass and its half-step repeat.
pub const RAMP_REL_TOL: f64 = 1e-6;
/// Step halvings tried before giving up.
pub const MAX_HALVINGS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketState {
    pub amplitudes: DVector<C64>,
}

impl WavepacketState {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("empty wavepacket".into()));
        }
        if amplitudes.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("wavepacket has non-finite amplitudes".into()));
        }
        Ok(WavepacketState { amplitudes })
    }

    /// `sum_k |psi_k|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.amplitudes.norm();
        if n == 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero state".into()));
        }
        Ok(WavepacketState {
            amplitudes: &self.amplitudes / C64::new(n, 0.0),
        })
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// State localized on one site (1-based).
pub fn localized_state(site: usize, n_sites: usize) -> Result<WavepacketState> {
    if site < 1 || site > n_sites {
        return Err(Error::InvalidInput(format!("site {site} outside 1..={n_sites}")));
    }
    let mut v = DVector::zeros(n_sites);
    v[site - 1] = C64::new(1.0, 0.0);
    WavepacketState::new(v)
}

/// Gain ramp `gamma_G(t) = 2 gamma_L (1 - exp(-t / tau))` on the gain site,
/// against a constant loss `gamma_L` on the mirror site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainRamp {
    /// Loss strength (energy units).
    pub gamma_l: f64,
    /// Ramp time constant (raw time units).
    pub tau: f64,
}

impl GainRamp {
    pub fn new(gamma_l: f64, tau: f64) -> Result<Self> {
        if !(gamma_l.is_finite() && gamma_l > 0.0) {
            return Err(Error::InvalidInput(format!("gamma_L must be > 0, got {gamma_l}")));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidInput(format!("tau must be > 0, got {tau}")));
        }
        Ok(GainRamp { gamma_l, tau })
    }

    /// Ramp from `gamma_L / Delta` and `tau / T_alpha`.
    pub fn from_scaled(gamma_l_over_delta: f64, tau_over_t: f64, bw: &Bandwidth) -> Result<Self> {
        GainRamp::new(gamma_l_over_delta * bw.delta, tau_over_t * bw.t_alpha_unit)
    }

    /// Bare gain `gamma_G(t)`.
    pub fn gain(&self, t: f64) -> f64 {
        2.0 * self.gamma_l * -(-t / self.tau).exp_m1()
    }

    /// Net gain `gamma_e(t) = gamma_G(t) - gamma_L`.
    pub fn effective_gain(&self, t: f64) -> f64 {
        self.gamma_l * (1.0 - 2.0 * (-t / self.tau).exp())
    }

    /// Instantaneous Hamiltonian at raw time `t`.
    pub fn hamiltonian(&self, spec: &LatticeSpec, t: f64) -> Result<HamiltonianMatrix> {
        build_hamiltonian(spec, self.effective_gain(t), self.gamma_l)
    }
}

/// Site-resolved intensities on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTrace {
    /// Sample times in units of `T_alpha`.
    pub times: Vec<f64>,
    /// `grid[i][k]` is `|psi_{k+1}(times[i])|^2`.
    pub grid: Vec<Vec<f64>>,
    pub total: Vec<f64>,
}

impl IntensityTrace {
    fn with_capacity(n: usize) -> Self {
        IntensityTrace {
            times: Vec::with_capacity(n),
            grid: Vec::with_capacity(n),
            total: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, t: f64, psi: &DVector<C64>) {
        let row: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        self.total.push(row.iter().sum());
        self.grid.push(row);
        self.times.push(t);
    }

    pub fn n_sites(&self) -> usize {
        self.grid.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_intensity(&self) -> f64 {
        self.grid.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// `t_over_T_alpha,site_1..site_N,total`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_over_T_alpha");
        for k in 1..=self.n_sites() {
            let _ = write!(out, ",site_{k}");
        }
        out.push_str(",total\n");
        for ((t, row), total) in self.times.iter().zip(&self.grid).zip(&self.total) {
            let _ = write!(out, "{t}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{total}");
        }
        out
    }
}

fn max_imag(h: &HamiltonianMatrix) -> f64 {
    spectrum(h)
        .map(|ev| ev.iter().map(|e| e.im).fold(f64::NEG_INFINITY, f64::max))
        .unwrap_or(f64::NAN)
}

/// `G(t) = exp(-i H t)` for raw time `t >= 0`, by Padé scaling and squaring.
pub fn propagator(h: &HamiltonianMatrix, t: f64) -> Result<DMatrix<C64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidInput(format!("propagation time must be >= 0, got {t}")));
    }
    let a = &h.entries * C64::new(0.0, -t);
    match expm::expm(&a) {
        Some(g) if expm::norm1(&g) <= GROWTH_LIMIT => Ok(g),
        _ => Err(Error::GrowthOverflow { t, max_imag: max_imag(h) }),
    }
}

fn check_initial(spec: &LatticeSpec, psi0: &WavepacketState) -> Result<()> {
    if psi0.amplitudes.len() != spec.n_sites() {
        return Err(Error::InvalidInput(format!(
            "state has {} sites, lattice has {}",
            psi0.amplitudes.len(),
            spec.n_sites()
        )));
    }
    if (psi0.norm_sqr() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "initial state must be normalized (norm^2 = {})",
            psi0.norm_sqr()
        )));
    }
    Ok(())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("times must be finite, >= 0 and ascending".into()));
    }
    Ok(())
}

fn check_growth(psi: &DVector<C64>, t: f64, h: &HamiltonianMatrix) -> Result<()> {
    let n = psi.norm_squared();
    if n.is_finite() && n <= GROWTH_LIMIT {
        Ok(())
    } else {
        Err(Error::GrowthOverflow { t, max_imag: max_imag(h) })
    }
}

/// Evolution under the balanced Hamiltonian of `spec`, sampled at `times`
/// (units of `T_alpha`).
pub fn evolve_static(spec: &LatticeSpec, psi0: &WavepacketState, times: &[f64]) -> Result<IntensityTrace> {
    check_initial(spec, psi0)?;
    check_times(times)?;
    let unit = spec.bandwidth().t_alpha_unit;
    let h = spec.hamiltonian();

    let mut trace = IntensityTrace::with_capacity(times.len());
    let mut psi = psi0.amplitudes.clone();
    let mut now = 0.0;
    let mut cached: Option<(f64, DMatrix<C64>)> = None;
    for &t in times {
        let dt = (t - now) * unit;
        if dt > 0.0 {
            let reuse = matches!(&cached, Some((d, _)) if (d - dt).abs() <= 1e-13 * dt);
            if !reuse {
                cached = Some((dt, propagator(&h, dt)?));
            }
            let g = &cached.as_ref().unwrap().1;
            psi = g * psi;
            check_growth(&psi, t * unit, &h)?;
        }
        now = t;
        trace.push(t, &psi);
    }
    Ok(trace)
}

/// One pass of the piecewise-constant midpoint integrator with maximum
/// sub-step `h` (raw units).
fn integrate_ramp(
    spec: &LatticeSpec,
    ramp: &GainRamp,
    psi0: &WavepacketState,
    times: &[f64],
    unit: f64,
    h: f64,
) -> Result<IntensityTrace> {
    let mut trace = IntensityTrace::with_capacity(times.len());
    let mut psi = psi0.amplitudes.clone();
    let mut now = 0.0;
    // Late in the ramp the midpoint gain stops changing; reuse the step.
    let mut cached: Option<(f64, f64, DMatrix<C64>)> = None;
    for &t_scaled in times {
        let target = t_scaled * unit;
        let span = target - now;
        if span > 0.0 {
            let n_sub = (span / h).ceil().max(1.0) as usize;
            let sub = span / n_sub as f64;
            for j in 0..n_sub {
                let start = now + j as f64 * sub;
                let gain = ramp.effective_gain(start + 0.5 * sub);
                let reuse = matches!(&cached, Some((g, d, _)) if *g == gain && *d == sub);
                if !reuse {
                    let hm = build_hamiltonian(spec, gain, ramp.gamma_l)?;
                    cached = Some((gain, sub, propagator(&hm, sub)?));
                }
                psi = &cached.as_ref().unwrap().2 * psi;
            }
            let hm = build_hamiltonian(spec, ramp.effective_gain(target), ramp.gamma_l)?;
            check_growth(&psi, target, &hm)?;
        }
        now = target;
        trace.push(t_scaled, &psi);
    }
    Ok(trace)
}

/// Largest change between two passes, relative to `max(|I_k(t)|, total(t))`.
fn relative_change(a: &IntensityTrace, b: &IntensityTrace) -> f64 {
    a.grid
        .iter()
        .zip(&b.grid)
        .zip(&b.total)
        .flat_map(|((ra, rb), &total)| {
            ra.iter().zip(rb).map(move |(x, y)| {
                let scale = y.abs().max(total);
                if scale == 0.0 {
                    0.0
                } else {
                    (x - y).abs() / scale
                }
            })
        })
        .fold(0.0, f64::max)
}

/// Evolution with the gain site following `ramp` and the loss site fixed at
/// `gamma_L`. The impurity strength stored in `spec` is ignored.
///
/// `times` and `step` are in units of `T_alpha`. Each sub-step of length
/// `h = min(step, T_alpha / 200)` uses the Hamiltonian frozen at the
/// sub-step midpoint. The pass is repeated at `h / 2` and accepted once no
/// intensity moves by more than 1e-6 relative; otherwise `h` is halved
/// again, at most four times.
pub fn evolve_ramp(
    spec: &LatticeSpec,
    ramp: &GainRamp,
    psi0: &WavepacketState,
    times: &[f64],
    step: f64,
) -> Result<IntensityTrace> {
    check_initial(spec, psi0)?;
    check_times(times)?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be > 0, got {step}")));
    }
    let unit = spec.bandwidth().t_alpha_unit;
    let mut h = step.min(DEFAULT_RAMP_STEP) * unit;

    let mut coarse = integrate_ramp(spec, ramp, psi0, times, unit, h)?;
    let mut change = f64::INFINITY;
    for _ in 0..=MAX_HALVINGS {
        h *= 0.5;
        let fine = integrate_ramp(spec, ramp, psi0, times, unit, h)?;
        change = relative_change(&coarse, &fine);
        if change < RAMP_REL_TOL {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::StepNotConverged {
        halvings: MAX_HALVINGS,
        change,
    })
}

/// `n` uniform samples on `[0, horizon]`.
pub fn uniform_times(horizon: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|i| horizon * i as f64 / (n - 1) as f64).collect(),
    }
}
