//! Lattice geometry, hopping profile, single-particle Hamiltonian and the
//! clean-lattice bandwidth used to make every energy dimensionless.
//!
//! Sites are labelled 1..=N in every public interface. The impurity pair
//! sits at `m0` (gain, `+i gamma`) and its mirror image `N + 1 - m0`
//! (loss, `-i gamma`).

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Bond amplitudes `t0 * [k (N - k)]^(alpha / 2)` for bonds k = 1..N-1.
///
/// Element `k - 1` of the returned vector couples sites `k` and `k + 1`.
pub fn hopping_profile(n_sites: usize, alpha: f64, t0: f64) -> Result<Vec<f64>> {
    validate_chain(n_sites, alpha, t0)?;
    let n = n_sites as f64;
    Ok((1..n_sites)
        .map(|k| {
            let k = k as f64;
            t0 * (k * (n - k)).powf(alpha / 2.0)
        })
        .collect())
}

fn validate_chain(n_sites: usize, alpha: f64, t0: f64) -> Result<()> {
    if n_sites < 2 {
        return Err(Error::InvalidSpec(format!("need at least 2 sites, got {n_sites}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidSpec(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::InvalidSpec(format!("t0 must be finite and > 0, got {t0}")));
    }
    Ok(())
}

/// Largest admissible position of the gain impurity.
pub fn max_impurity_site(n_sites: usize) -> usize {
    n_sites / 2
}

/// Mirror-symmetric partner `N + 1 - m0` of an impurity site.
pub fn mirror_site(m0: usize, n_sites: usize) -> Result<usize> {
    if m0 < 1 || m0 > max_impurity_site(n_sites) {
        return Err(Error::InvalidSpec(format!(
            "impurity site m0={m0} outside 1..={} for N={n_sites}",
            max_impurity_site(n_sites)
        )));
    }
    Ok(n_sites + 1 - m0)
}

/// How the gain impurity position is requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImpurityPosition {
    Site(usize),
    /// Fractional position `mu = m0 / N`; rounded and clamped to a valid site.
    Fraction(f64),
    /// Adjacent pair for even N, one site apart for odd N.
    Closest,
    /// Impurities on the two end sites.
    Farthest,
}

impl ImpurityPosition {
    pub fn resolve(self, n_sites: usize) -> Result<usize> {
        let hi = max_impurity_site(n_sites);
        if hi == 0 {
            return Err(Error::InvalidSpec(format!("need at least 2 sites, got {n_sites}")));
        }
        match self {
            ImpurityPosition::Site(m0) => mirror_site(m0, n_sites).map(|_| m0),
            ImpurityPosition::Fraction(mu) => {
                if !(mu.is_finite() && mu > 0.0 && mu <= 0.5) {
                    return Err(Error::InvalidSpec(format!("mu must lie in (0, 1/2], got {mu}")));
                }
                Ok(((mu * n_sites as f64).round() as usize).clamp(1, hi))
            }
            ImpurityPosition::Closest => Ok(hi),
            ImpurityPosition::Farthest => Ok(1),
        }
    }
}

/// Lattice and impurity-pair parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    n_sites: usize,
    alpha: f64,
    t0: f64,
    m0: usize,
    gamma: f64,
}

impl LatticeSpec {
    pub fn new(n_sites: usize, alpha: f64, t0: f64, m0: usize, gamma: f64) -> Result<Self> {
        validate_chain(n_sites, alpha, t0)?;
        mirror_site(m0, n_sites)?;
        check_gamma(gamma)?;
        Ok(LatticeSpec {
            n_sites,
            alpha,
            t0,
            m0,
            gamma,
        })
    }

    /// Same lattice with a different impurity strength.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(LatticeSpec { gamma, ..*self })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mirror(&self) -> usize {
        self.n_sites + 1 - self.m0
    }

    /// Fractional impurity position `m0 / N`.
    pub fn mu(&self) -> f64 {
        self.m0 as f64 / self.n_sites as f64
    }

    /// Number of bonds spanned by the impurity pair, `1 + N - 2 m0`.
    pub fn distance(&self) -> usize {
        1 + self.n_sites - 2 * self.m0
    }

    pub fn hopping(&self) -> Vec<f64> {
        let n = self.n_sites as f64;
        (1..self.n_sites)
            .map(|k| {
                let k = k as f64;
                self.t0 * (k * (n - k)).powf(self.alpha / 2.0)
            })
            .collect()
    }

    pub fn bandwidth(&self) -> Bandwidth {
        Bandwidth::from_hopping(&self.hopping())
    }

    /// Balanced Hamiltonian with gain = loss = gamma.
    pub fn hamiltonian(&self) -> HamiltonianMatrix {
        HamiltonianMatrix::assemble(self, self.gamma, self.gamma)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidSpec(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    Ok(())
}

/// Clean-lattice bandwidth `Delta'` and the quarter-bandwidth `Delta = Delta' / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    pub delta_full: f64,
    pub delta: f64,
    /// Time unit `1 / Delta` (hbar = 1).
    pub t_alpha_unit: f64,
}

impl Bandwidth {
    fn from_hopping(hopping: &[f64]) -> Self {
        let n = hopping.len() + 1;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (k, &t) in hopping.iter().enumerate() {
            m[(k, k + 1)] = -t;
            m[(k + 1, k)] = -t;
        }
        let ev = m.symmetric_eigenvalues();
        let (lo, hi) = ev
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        let delta_full = hi - lo;
        let delta = delta_full / 4.0;
        Bandwidth {
            delta_full,
            delta,
            t_alpha_unit: 1.0 / delta,
        }
    }

    /// Half-bandwidth `2 Delta`, the scale used for spectral plots.
    pub fn half(&self) -> f64 {
        2.0 * self.delta
    }
}

/// Spread of the gamma = 0 spectrum, computed numerically.
pub fn clean_bandwidth(n_sites: usize, alpha: f64, t0: f64) -> Result<Bandwidth> {
    let hopping = hopping_profile(n_sites, alpha, t0)?;
    Ok(Bandwidth::from_hopping(&hopping))
}

/// Dense single-particle Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub entries: DMatrix<C64>,
    /// Coefficient of `+i` on the diagonal at `m0`.
    pub gain_value: f64,
    /// Coefficient of `-i` on the diagonal at the mirror site.
    pub loss_value: f64,
}

impl HamiltonianMatrix {
    fn assemble(spec: &LatticeSpec, gain: f64, loss: f64) -> Self {
        let n = spec.n_sites;
        let mut h = DMatrix::<C64>::zeros(n, n);
        for (k, t) in spec.hopping().into_iter().enumerate() {
            h[(k, k + 1)] = C64::new(-t, 0.0);
            h[(k + 1, k)] = C64::new(-t, 0.0);
        }
        h[(spec.m0 - 1, spec.m0 - 1)] = C64::new(0.0, gain);
        h[(spec.mirror() - 1, spec.mirror() - 1)] = C64::new(0.0, -loss);
        HamiltonianMatrix {
            entries: h,
            gain_value: gain,
            loss_value: loss,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `P conj(H) P` with `P` the site reflection k -> N + 1 - k.
    pub fn pt_transformed(&self) -> DMatrix<C64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entries[(n - 1 - i, n - 1 - j)].conj())
    }

    /// CSV dump with 1-based `row,col,re,im` records for every entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[(i, j)];
                let _ = writeln!(out, "{},{},{},{}", i + 1, j + 1, z.re, z.im);
            }
        }
        out
    }
}

/// Hamiltonian with independent gain and loss coefficients.
///
/// `gain` may be negative (a lossy "gain" site, as at the start of a gain
/// ramp); the balanced case is `build_hamiltonian(spec, spec.gamma(), spec.gamma())`.
pub fn build_hamiltonian(spec: &LatticeSpec, gain: f64, loss: f64) -> Result<HamiltonianMatrix> {
    if !(gain.is_finite() && loss.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite impurity strengths ({gain}, {loss})")));
    }
    Ok(HamiltonianMatrix::assemble(spec, gain, loss))
}
