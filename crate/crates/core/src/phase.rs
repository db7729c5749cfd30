//! Critical impurity strength, phase diagrams, finite-size scaling and
//! breaking-count staircases.
//!
//! The critical strength `gamma_PT` is located by bisection on the
//! predicate "every eigenvalue is real". The predicate is evaluated through
//! the complex-eigenvalue count. Above saturation (2 m0 complex levels) the
//! count can fall again as gamma grows, so staircases are monotone only on
//! grids that stop short of that regime.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Bandwidth, ImpurityPosition, LatticeSpec};
use crate::spectral::{analyze, DEFAULT_REL_TOL};

/// Default bisection tolerance, relative to the quarter-bandwidth.
pub const DEFAULT_GAMMA_TOL: f64 = 1e-6;

/// Upper limit of the bracket search, in units of the full bandwidth.
const BRACKET_CAP: f64 = 64.0;

/// Evenly spaced re-checks of the symmetric side after bisection.
const MONOTONE_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionOptions {
    /// Bracket width to stop at, in units of `Delta`.
    pub tol_over_delta: f64,
    /// Classification threshold relative to `2 Delta`.
    pub rel_tol: f64,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        BisectionOptions {
            tol_over_delta: DEFAULT_GAMMA_TOL,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

impl BisectionOptions {
    fn tol_for(&self, bw: &Bandwidth) -> f64 {
        self.tol_over_delta * bw.delta
    }
}

fn complex_count(spec: &LatticeSpec, gamma: f64, bw: &Bandwidth, rel_tol: f64) -> Result<usize> {
    Ok(analyze(&spec.with_gamma(gamma)?, bw, rel_tol)?.n_complex)
}

/// True iff the balanced Hamiltonian of `spec` has a purely real spectrum.
pub fn is_pt_symmetric(spec: &LatticeSpec) -> Result<bool> {
    is_pt_symmetric_with(spec, &spec.bandwidth(), DEFAULT_REL_TOL)
}

pub fn is_pt_symmetric_with(spec: &LatticeSpec, bw: &Bandwidth, rel_tol: f64) -> Result<bool> {
    Ok(complex_count(spec, spec.gamma(), bw, rel_tol)? == 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub mu: f64,
    pub m0: usize,
    pub gamma_pt: f64,
    pub gamma_pt_scaled: f64,
    pub bracket_width: f64,
    /// Complex-eigenvalue count at the upper end of the final bracket.
    pub n_complex_above: usize,
}

/// Critical impurity strength for the lattice and impurity site of `spec`.
///
/// The `gamma` stored in `spec` is ignored.
pub fn critical_gamma(spec: &LatticeSpec, opts: &BisectionOptions) -> Result<PhasePoint> {
    let bw = spec.bandwidth();
    let tol = opts.tol_for(&bw);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("bisection tolerance must be > 0, got {tol}")));
    }
    let count = |g: f64| complex_count(spec, g, &bw, opts.rel_tol);

    let c0 = count(0.0)?;
    if c0 != 0 {
        return Err(Error::NonMonotone {
            detail: format!("{c0} complex eigenvalues at gamma = 0"),
        });
    }

    let cap = BRACKET_CAP * bw.delta_full;
    let mut hi = 2.0 * bw.delta_full;
    let mut c_hi = count(hi)?;
    while c_hi == 0 {
        hi *= 2.0;
        if hi > cap {
            return Err(Error::BracketFailure {
                n_sites: spec.n_sites(),
                m0: spec.m0(),
                alpha: spec.alpha(),
                cap,
            });
        }
        c_hi = count(hi)?;
    }

    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let c = count(mid)?;
        if c == 0 {
            lo = mid;
        } else {
            hi = mid;
            c_hi = c;
        }
    }

    // Bisection only sees one transition; probe the symmetric side for an
    // earlier broken window it may have stepped over.
    for i in 1..=MONOTONE_PROBES {
        let g = lo * i as f64 / (MONOTONE_PROBES + 1) as f64;
        let c = count(g)?;
        if c != 0 {
            return Err(Error::NonMonotone {
                detail: format!(
                    "N={}, m0={}, alpha={}: {c} complex eigenvalues at gamma={g}, below the located threshold {lo}",
                    spec.n_sites(),
                    spec.m0(),
                    spec.alpha()
                ),
            });
        }
    }

    let gamma_pt = 0.5 * (lo + hi);
    Ok(PhasePoint {
        mu: spec.mu(),
        m0: spec.m0(),
        gamma_pt,
        gamma_pt_scaled: gamma_pt / bw.delta,
        bracket_width: hi - lo,
        n_complex_above: c_hi,
    })
}

/// Critical strength vs fractional impurity position for one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    pub n_sites: usize,
    pub alpha: f64,
    pub points: Vec<PhasePoint>,
    /// Impurity sites whose bisection failed, with the error message.
    pub failures: Vec<(usize, String)>,
}

impl PhaseCurve {
    /// Adjacent point pairs `(m0_a, m0_b)` along which `gamma_pt_scaled`
    /// drops by more than the larger of the two bracket widths.
    ///
    /// The critical strength generally rises toward `mu = 1/2`, but not
    /// monotonically, so this is reported rather than enforced.
    pub fn monotonicity_violations(&self) -> Vec<(usize, usize)> {
        self.points
            .windows(2)
            .filter(|w| {
                let slack = w[0].bracket_width.max(w[1].bracket_width) / (w[0].gamma_pt / w[0].gamma_pt_scaled);
                w[1].gamma_pt_scaled < w[0].gamma_pt_scaled - slack
            })
            .map(|w| (w[0].m0, w[1].m0))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu,m0,gamma_pt,gamma_pt_over_delta,bracket_width\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.mu, p.m0, p.gamma_pt, p.gamma_pt_scaled, p.bracket_width
            );
        }
        out
    }
}

/// One critical point per impurity site, computed in parallel.
///
/// Per-point failures are collected in [`PhaseCurve::failures`] and the
/// sweep continues.
pub fn phase_diagram(
    n_sites: usize,
    alpha: f64,
    t0: f64,
    m0_values: &[usize],
    opts: &BisectionOptions,
) -> Result<PhaseCurve> {
    if m0_values.is_empty() {
        return Err(Error::InvalidInput("no impurity sites given".into()));
    }
    if m0_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("impurity sites must be strictly ascending".into()));
    }
    let specs = m0_values
        .iter()
        .map(|&m0| LatticeSpec::new(n_sites, alpha, t0, m0, 0.0))
        .collect::<Result<Vec<_>>>()?;

    let results: Vec<Result<PhasePoint>> = specs.par_iter().map(|s| critical_gamma(s, opts)).collect();

    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (m0, r) in m0_values.iter().zip(results) {
        match r {
            Ok(p) => points.push(p),
            Err(e) => failures.push((*m0, e.to_string())),
        }
    }
    Ok(PhaseCurve {
        n_sites,
        alpha,
        points,
        failures,
    })
}

/// Which impurity position a scaling series follows as N grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuMode {
    /// `m0 = 1`.
    Farthest,
    /// `m0 = round(mu N)`.
    Fixed(f64),
    /// `m0 = floor(N / 2)`; each parity is its own series.
    Closest,
}

impl MuMode {
    pub fn position(self) -> ImpurityPosition {
        match self {
            MuMode::Farthest => ImpurityPosition::Farthest,
            MuMode::Fixed(mu) => ImpurityPosition::Fraction(mu),
            MuMode::Closest => ImpurityPosition::Closest,
        }
    }

    pub fn label(self) -> String {
        match self {
            MuMode::Farthest => "farthest".into(),
            MuMode::Fixed(mu) => format!("mu={mu}"),
            MuMode::Closest => "closest".into(),
        }
    }
}

/// Smallest lattice admitted into a scaling fit.
pub const MIN_SCALING_N: usize = 20;
/// Fewest lattice sizes a scaling fit accepts.
pub const MIN_SCALING_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSample {
    pub n: usize,
    pub m0: usize,
    pub gamma_pt_scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub mu_mode: MuMode,
    /// Slope of the log-log fit.
    pub exponent: f64,
    /// Intercept of the log-log fit (natural log).
    pub log_prefactor: f64,
    /// `gamma_PT(N -> inf) / Delta`, closest mode only.
    pub asymptote: Option<f64>,
    /// Coefficient `B` of the `A + B / N` asymptote fit, closest mode only.
    pub asymptote_slope: Option<f64>,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    pub samples: Vec<ScalingSample>,
}

impl ScalingFit {
    /// Model value of `gamma_PT / Delta` at size `n`.
    pub fn predicted(&self, n: usize) -> f64 {
        let power = (self.log_prefactor + self.exponent * (n as f64).ln()).exp();
        match self.asymptote {
            Some(a) => {
                // the log-log fit is of |y - A|; keep the sign the data has
                let above = self
                    .samples
                    .iter()
                    .filter(|s| s.gamma_pt_scaled >= a)
                    .count()
                    * 2
                    >= self.samples.len();
                if above {
                    a + power
                } else {
                    a - power
                }
            }
            None => power,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m0,gamma_pt_over_delta,fit_gamma_pt_over_delta,fit_exponent,fit_asymptote\n");
        let asym = self.asymptote.map(|a| a.to_string()).unwrap_or_default();
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.n,
                s.m0,
                s.gamma_pt_scaled,
                self.predicted(s.n),
                self.exponent,
                asym
            );
        }
        out
    }
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, rms residual)`.
fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * n * mx.abs().max(1.0) {
        return Err(Error::DegenerateFit("zero variance in the abscissa".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rss: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - a - b * xi).powi(2)).sum();
    Ok((a, b, (rss / n).sqrt()))
}

/// Fits already-computed critical points.
///
/// Sizes below [`MIN_SCALING_N`] are dropped. In closest mode the sizes
/// must share a parity.
pub fn fit_scaling(samples: &[ScalingSample], mu_mode: MuMode) -> Result<ScalingFit> {
    let mut samples: Vec<ScalingSample> = samples.iter().filter(|s| s.n >= MIN_SCALING_N).cloned().collect();
    samples.sort_by_key(|s| s.n);
    if samples.len() < MIN_SCALING_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} lattice sizes with N >= {MIN_SCALING_N}, need {MIN_SCALING_POINTS}",
            samples.len()
        )));
    }
    let log_n: Vec<f64> = samples.iter().map(|s| (s.n as f64).ln()).collect();

    let (asymptote, asymptote_slope, ys) = match mu_mode {
        MuMode::Closest => {
            let parity = samples[0].n % 2;
            if samples.iter().any(|s| s.n % 2 != parity) {
                return Err(Error::InvalidInput(
                    "closest-impurity scaling needs lattice sizes of one parity".into(),
                ));
            }
            let upper = &samples[samples.len() / 2..];
            let inv_n: Vec<f64> = upper.iter().map(|s| 1.0 / s.n as f64).collect();
            let y: Vec<f64> = upper.iter().map(|s| s.gamma_pt_scaled).collect();
            let (a, b, _) = linear_fit(&inv_n, &y)?;
            let excess: Vec<f64> = samples.iter().map(|s| (s.gamma_pt_scaled - a).abs()).collect();
            (Some(a), Some(b), excess)
        }
        _ => (None, None, samples.iter().map(|s| s.gamma_pt_scaled).collect()),
    };
    if let Some(bad) = ys.iter().find(|y| !(**y > 0.0 && y.is_finite())) {
        return Err(Error::DegenerateFit(format!("cannot take the log of {bad}")));
    }
    let log_y: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (intercept, slope, residual) = linear_fit(&log_n, &log_y)?;
    Ok(ScalingFit {
        mu_mode,
        exponent: slope,
        log_prefactor: intercept,
        asymptote,
        asymptote_slope,
        residual,
        samples,
    })
}

/// Computes `gamma_PT(N)` over `n_values` (in parallel) and fits its scaling.
pub fn scaling_fit(
    n_values: &[usize],
    alpha: f64,
    t0: f64,
    mu_mode: MuMode,
    opts: &BisectionOptions,
) -> Result<ScalingFit> {
    let usable: Vec<usize> = n_values.iter().copied().filter(|&n| n >= MIN_SCALING_N).collect();
    if usable.len() < MIN_SCALING_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} lattice sizes with N >= {MIN_SCALING_N}, need {MIN_SCALING_POINTS}",
            usable.len()
        )));
    }
    let specs = usable
        .iter()
        .map(|&n| {
            let m0 = mu_mode.position().resolve(n)?;
            LatticeSpec::new(n, alpha, t0, m0, 0.0)
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = specs
        .par_iter()
        .map(|s| {
            critical_gamma(s, opts).map(|p| ScalingSample {
                n: s.n_sites(),
                m0: s.m0(),
                gamma_pt_scaled: p.gamma_pt_scaled,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    fit_scaling(&samples, mu_mode)
}

/// Number of grid points used when no grid is supplied.
pub const DEFAULT_STAIRCASE_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StairPoint {
    pub gamma_over_delta: f64,
    pub n_complex: usize,
}

/// A change of the complex count, resolved to the bisection tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    /// Location (bracket midpoint) in units of `Delta`.
    pub gamma_over_delta: f64,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    /// Grid and refinement points, sorted by gamma.
    pub points: Vec<StairPoint>,
    pub jumps: Vec<Jump>,
    pub max_count: usize,
}

impl Staircase {
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[0].n_complex <= w[1].n_complex)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma_over_delta,n_complex\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.gamma_over_delta, p.n_complex);
        }
        out
    }
}

/// Default grid, in units of `Delta`: 400 points on `[0, max(2 gamma_PT, 8 Delta)]`.
pub fn default_staircase_grid(spec: &LatticeSpec, opts: &BisectionOptions) -> Result<Vec<f64>> {
    let p = critical_gamma(spec, opts)?;
    let top = (2.0 * p.gamma_pt_scaled).max(8.0);
    let n = DEFAULT_STAIRCASE_POINTS;
    Ok((0..n).map(|i| top * i as f64 / (n - 1) as f64).collect())
}

/// Complex-eigenvalue count along an ascending grid of `gamma / Delta`
/// values, with each count change refined by bisection.
pub fn breaking_staircase(spec: &LatticeSpec, grid: Option<&[f64]>, opts: &BisectionOptions) -> Result<Staircase> {
    let owned;
    let grid = match grid {
        Some(g) => g,
        None => {
            owned = default_staircase_grid(spec, opts)?;
            &owned
        }
    };
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty gamma grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] < 0.0 {
        return Err(Error::InvalidInput("gamma grid must be non-negative and strictly ascending".into()));
    }
    let bw = spec.bandwidth();
    let tol = opts.tol_for(&bw) / bw.delta;
    let count = |g: f64| complex_count(spec, g * bw.delta, &bw, opts.rel_tol);

    let counts = grid.par_iter().map(|&g| count(g)).collect::<Result<Vec<_>>>()?;
    let mut points: Vec<StairPoint> = grid
        .iter()
        .zip(&counts)
        .map(|(&g, &c)| StairPoint {
            gamma_over_delta: g,
            n_complex: c,
        })
        .collect();

    let mut extra = Vec::new();
    for w in grid.windows(2).zip(counts.windows(2)) {
        let ((g0, g1), (c0, c1)) = ((w.0[0], w.0[1]), (w.1[0], w.1[1]));
        if c0 != c1 {
            refine(&count, g0, c0, g1, c1, tol, &mut extra)?;
        }
    }
    points.extend(extra);
    points.sort_by(|a, b| a.gamma_over_delta.total_cmp(&b.gamma_over_delta));
    drop_unresolved_spikes(&mut points, tol);
    let jumps = points
        .windows(2)
        .filter(|w| w[0].n_complex != w[1].n_complex)
        .map(|w| Jump {
            gamma_over_delta: 0.5 * (w[0].gamma_over_delta + w[1].gamma_over_delta),
            from: w[0].n_complex,
            to: w[1].n_complex,
        })
        .collect();
    let max_count = points.iter().map(|p| p.n_complex).max().unwrap_or(0);
    Ok(Staircase {
        points,
        jumps,
        max_count,
    })
}

/// Removes samples whose count exceeds both neighbours while the
/// neighbours lie within `tol` of each other. At a higher-order exceptional
/// point roundoff splits the defective eigenvalue by `eps^(1/k)`, far above
/// the classification threshold, so such a sample carries no information.
fn drop_unresolved_spikes(points: &mut Vec<StairPoint>, tol: f64) {
    let mut keep = vec![true; points.len()];
    for i in 1..points.len().saturating_sub(1) {
        let (a, p, b) = (points[i - 1], points[i], points[i + 1]);
        if b.gamma_over_delta - a.gamma_over_delta <= 2.0 * tol && p.n_complex > a.n_complex.max(b.n_complex) {
            keep[i] = false;
        }
    }
    let mut k = keep.into_iter();
    points.retain(|_| k.next().unwrap());
}

fn refine(
    count: &(impl Fn(f64) -> Result<usize> + Sync),
    lo: f64,
    c_lo: usize,
    hi: f64,
    c_hi: usize,
    tol: f64,
    extra: &mut Vec<StairPoint>,
) -> Result<()> {
    if hi - lo <= tol {
        return Ok(());
    }
    let mid = 0.5 * (lo + hi);
    let c_mid = count(mid)?;
    extra.push(StairPoint {
        gamma_over_delta: mid,
        n_complex: c_mid,
    });
    if c_mid != c_lo {
        refine(count, lo, c_lo, mid, c_mid, tol, extra)?;
    }
    if c_mid != c_hi {
        refine(count, mid, c_mid, hi, c_hi, tol, extra)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, alpha: f64, m0: usize) -> LatticeSpec {
        LatticeSpec::new(n, alpha, 1.0, m0, 0.0).unwrap()
    }

    #[test]
    fn pt_symmetric_at_zero_gamma() {
        for (n, alpha, m0) in [(2, 0.0, 1), (9, 1.0, 3), (30, 2.0, 15)] {
            assert!(is_pt_symmetric(&spec(n, alpha, m0)).unwrap());
        }
    }

    #[test]
    fn even_bracket_endpoints() {
        let s = spec(20, 2.0, 10);
        let d = s.bandwidth().delta;
        assert!(is_pt_symmetric(&s.with_gamma(1.070 * d).unwrap()).unwrap());
        assert!(!is_pt_symmetric(&s.with_gamma(1.08 * d).unwrap()).unwrap());
    }

    #[test]
    fn two_site_threshold_is_t0() {
        for alpha in [0.0, 1.0, 2.0] {
            let p = critical_gamma(&spec(2, alpha, 1), &BisectionOptions::default()).unwrap();
            assert!((p.gamma_pt - 1.0).abs() < 1e-6, "{}", p.gamma_pt);
            assert!(p.bracket_width <= 1e-6 * 0.5);
            assert_eq!(p.n_complex_above, 2);
        }
    }

    #[test]
    fn bisection_brackets_the_transition() {
        let opts = BisectionOptions::default();
        for (n, alpha, m0) in [(12, 0.0, 3), (15, 1.0, 7), (20, 2.0, 1)] {
            let s = spec(n, alpha, m0);
            let p = critical_gamma(&s, &opts).unwrap();
            let tol = DEFAULT_GAMMA_TOL * s.bandwidth().delta;
            assert!(p.bracket_width <= tol);
            assert!(is_pt_symmetric(&s.with_gamma(p.gamma_pt - tol).unwrap()).unwrap());
            assert!(!is_pt_symmetric(&s.with_gamma(p.gamma_pt + tol).unwrap()).unwrap());
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        let opts = BisectionOptions {
            tol_over_delta: 0.0,
            ..Default::default()
        };
        assert!(matches!(critical_gamma(&spec(4, 0.0, 1), &opts), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn phase_diagram_validates_sites() {
        let opts = BisectionOptions::default();
        assert!(phase_diagram(10, 1.0, 1.0, &[], &opts).is_err());
        assert!(phase_diagram(10, 1.0, 1.0, &[3, 2], &opts).is_err());
        assert!(phase_diagram(10, 1.0, 1.0, &[2, 2], &opts).is_err());
        assert!(phase_diagram(10, 1.0, 1.0, &[1, 6], &opts).is_err());
    }

    #[test]
    fn phase_diagram_small_lattice() {
        let curve = phase_diagram(16, 1.0, 1.0, &[1, 2, 4, 8], &BisectionOptions::default()).unwrap();
        assert!(curve.failures.is_empty());
        assert_eq!(curve.points.len(), 4);
        assert_eq!(curve.points[3].m0, 8);
        assert!((curve.points[3].mu - 0.5).abs() < 1e-15);
        for p in &curve.points {
            assert!((p.gamma_pt_scaled * (p.gamma_pt / p.gamma_pt_scaled) - p.gamma_pt).abs() < 1e-12);
        }
        let csv = curve.to_csv();
        assert!(csv.starts_with("mu,m0,gamma_pt,gamma_pt_over_delta,bracket_width\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn monotonicity_violations_are_reported() {
        let mk = |m0: usize, g: f64| PhasePoint {
            mu: m0 as f64 / 10.0,
            m0,
            gamma_pt: g,
            gamma_pt_scaled: g,
            bracket_width: 1e-6,
            n_complex_above: 2,
        };
        let curve = PhaseCurve {
            n_sites: 10,
            alpha: 1.0,
            points: vec![mk(1, 0.2), mk(2, 0.3), mk(3, 0.25), mk(4, 0.25 - 5e-7), mk(5, 1.0)],
            failures: vec![],
        };
        assert_eq!(curve.monotonicity_violations(), vec![(2, 3)]);
    }

    fn synthetic(ns: &[usize], f: impl Fn(f64) -> f64) -> Vec<ScalingSample> {
        ns.iter()
            .map(|&n| ScalingSample {
                n,
                m0: 1,
                gamma_pt_scaled: f(n as f64),
            })
            .collect()
    }

    #[test]
    fn pure_power_law_is_recovered() {
        let ns = [20, 40, 60, 80, 100, 150];
        let fit = fit_scaling(&synthetic(&ns, |n| 1.7 * n.powf(-0.4)), MuMode::Farthest).unwrap();
        assert!((fit.exponent + 0.4).abs() < 1e-12);
        assert!((fit.log_prefactor - 1.7f64.ln()).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(fit.asymptote.is_none());
        assert!((fit.predicted(60) - 1.7 * 60f64.powf(-0.4)).abs() < 1e-12);
    }

    #[test]
    fn closest_mode_recovers_asymptote() {
        let ns = [20, 40, 60, 80, 100, 120, 140, 160, 180, 200];
        let fit = fit_scaling(&synthetic(&ns, |n| 1.0 + 1.05 / n), MuMode::Closest).unwrap();
        assert!((fit.asymptote.unwrap() - 1.0).abs() < 1e-10);
        assert!((fit.asymptote_slope.unwrap() - 1.05).abs() < 1e-8);
        assert!((fit.exponent + 1.0).abs() < 1e-6);
        assert!((fit.predicted(50) - 1.021).abs() < 1e-8);
    }

    #[test]
    fn scaling_input_errors() {
        let few = synthetic(&[20, 40, 60, 80], |n| 1.0 / n);
        assert!(matches!(fit_scaling(&few, MuMode::Farthest), Err(Error::InsufficientData(_))));
        let small = synthetic(&[10, 12, 14, 16, 18, 20], |n| 1.0 / n);
        assert!(matches!(fit_scaling(&small, MuMode::Farthest), Err(Error::InsufficientData(_))));
        let same = synthetic(&[40, 40, 40, 40, 40], |n| 1.0 / n);
        assert!(matches!(fit_scaling(&same, MuMode::Farthest), Err(Error::DegenerateFit(_))));
        let mixed = synthetic(&[20, 21, 40, 41, 60], |n| 1.0 / n);
        assert!(fit_scaling(&mixed, MuMode::Closest).is_err());
        assert!(matches!(
            scaling_fit(&[20, 40], 1.0, 1.0, MuMode::Farthest, &BisectionOptions::default()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn staircase_even_closest_is_simultaneous() {
        let s = spec(20, 2.0, 10);
        let grid: Vec<f64> = (0..=60).map(|i| i as f64 * 0.05).collect();
        let st = breaking_staircase(&s, Some(&grid), &BisectionOptions::default()).unwrap();
        assert_eq!(st.jumps[0].from, 0);
        assert_eq!(st.jumps[0].to, 20);
        assert!(st.jumps[0].gamma_over_delta > 1.070 && st.jumps[0].gamma_over_delta < 1.074);
        assert!(st.is_monotone());
        assert_eq!(st.max_count, 20);
    }

    #[test]
    fn staircase_odd_closest_first_jump_is_four() {
        let s = spec(21, 2.0, 10);
        let st = breaking_staircase(&s, None, &BisectionOptions::default()).unwrap();
        assert_eq!((st.jumps[0].from, st.jumps[0].to), (0, 4));
        assert_eq!(st.max_count, 20);
        assert!(st.is_monotone());
        assert!(st.points.len() > DEFAULT_STAIRCASE_POINTS);
        assert!(st.to_csv().starts_with("gamma_over_delta,n_complex\n"));
    }

    #[test]
    fn staircase_rejects_bad_grid() {
        let s = spec(6, 1.0, 2);
        let opts = BisectionOptions::default();
        assert!(breaking_staircase(&s, Some(&[]), &opts).is_err());
        assert!(breaking_staircase(&s, Some(&[0.0, 0.5, 0.4]), &opts).is_err());
        assert!(breaking_staircase(&s, Some(&[-1.0, 0.5]), &opts).is_err());
    }

    #[test]
    fn staircase_through_triple_exceptional_point() {
        // N = 3: spectrum {0, +-sqrt(2 t^2 - gamma^2)}, all three coalesce at gamma = 2 Delta
        let s = spec(3, 1.0, 1);
        let st = breaking_staircase(&s, None, &BisectionOptions::default()).unwrap();
        assert_eq!(st.max_count, 2);
        assert_eq!(st.jumps.len(), 1);
        assert!((st.jumps[0].gamma_over_delta - 2.0).abs() < 1e-6);
    }
}
