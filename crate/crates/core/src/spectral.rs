//! Spectra of the non-Hermitian Hamiltonian and their classification into
//! real levels and complex-conjugate pairs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{Bandwidth, HamiltonianMatrix, LatticeSpec};
use crate::linalg::{eigen, C64};

/// Default threshold on `|Im E|`, relative to the half-bandwidth `2 Delta`.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// All eigenvalues of `h`, sorted by real part and then imaginary part.
pub fn spectrum(h: &HamiltonianMatrix) -> Result<Vec<C64>> {
    let mut ev = eigen::eigenvalues(&h.entries).map_err(|e| Error::EigenNotConverged {
        context: format!(
            "N={} Hamiltonian (gain {}, loss {})",
            h.dim(),
            h.gain_value,
            h.loss_value
        ),
        index: e.index,
        iterations: e.iterations,
    })?;
    sort_energies(&mut ev);
    Ok(ev)
}

/// Spectrum of the balanced Hamiltonian of `spec`.
pub fn spectrum_of(spec: &LatticeSpec) -> Result<Vec<C64>> {
    spectrum(&spec.hamiltonian()).map_err(|e| match e {
        Error::EigenNotConverged { index, iterations, .. } => Error::EigenNotConverged {
            context: format!(
                "N={}, alpha={}, m0={}, gamma={}",
                spec.n_sites(),
                spec.alpha(),
                spec.m0(),
                spec.gamma()
            ),
            index,
            iterations,
        },
        other => other,
    })
}

pub fn sort_energies(ev: &mut [C64]) {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    /// Absolute threshold on `|Im E|` used for the classification.
    pub tol_imag: f64,
    pub n_complex: usize,
    pub n_real: usize,
    /// Fraction of eigenvalues that are complex.
    pub degree_of_breaking: f64,
    pub is_broken: bool,
}

impl SpectrumReport {
    pub fn is_complex(&self, e: C64) -> bool {
        e.im.abs() > self.tol_imag
    }

    pub fn complex_eigenvalues(&self) -> impl Iterator<Item = C64> + '_ {
        self.eigenvalues.iter().copied().filter(|&e| self.is_complex(e))
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.im).fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with a `#` metadata line followed by `index,re,im,is_complex` rows.
    pub fn to_csv(&self, spec: &LatticeSpec, bandwidth: &Bandwidth) -> String {
        let mut out = format!(
            "# N={},alpha={},m0={},gamma={},delta={}\nindex,re,im,is_complex\n",
            spec.n_sites(),
            spec.alpha(),
            spec.m0(),
            spec.gamma(),
            bandwidth.delta
        );
        for (i, e) in self.eigenvalues.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", i + 1, e.re, e.im, u8::from(self.is_complex(*e)));
        }
        out
    }
}

/// Splits a spectrum into real and complex levels.
///
/// A level counts as complex when `|Im E| > rel_tol * 2 Delta`.
pub fn classify(eigenvalues: &[C64], bandwidth: &Bandwidth, rel_tol: f64) -> SpectrumReport {
    let tol_imag = rel_tol * bandwidth.half();
    let mut eigenvalues = eigenvalues.to_vec();
    sort_energies(&mut eigenvalues);
    let n_complex = eigenvalues.iter().filter(|e| e.im.abs() > tol_imag).count();
    let n = eigenvalues.len();
    SpectrumReport {
        eigenvalues,
        tol_imag,
        n_complex,
        n_real: n - n_complex,
        degree_of_breaking: if n == 0 { 0.0 } else { n_complex as f64 / n as f64 },
        is_broken: n_complex > 0,
    }
}

/// Spectrum and classification of the balanced Hamiltonian of `spec`.
pub fn analyze(spec: &LatticeSpec, bandwidth: &Bandwidth, rel_tol: f64) -> Result<SpectrumReport> {
    Ok(classify(&spectrum_of(spec)?, bandwidth, rel_tol))
}

/// Greedy nearest-neighbour matching of two multisets of equal size.
fn multiset_matches(a: &[C64], b: &[C64], abs_tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        match best {
            Some((j, d)) if d <= abs_tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// True iff the eigenvalue multiset is closed under `E -> -E` and `E -> conj(E)`.
pub fn check_spectral_symmetry(eigenvalues: &[C64], abs_tol: f64) -> bool {
    let negated: Vec<C64> = eigenvalues.iter().map(|e| -e).collect();
    let conjugated: Vec<C64> = eigenvalues.iter().map(|e| e.conj()).collect();
    multiset_matches(eigenvalues, &negated, abs_tol) && multiset_matches(eigenvalues, &conjugated, abs_tol)
}

/// Complex-classified eigenvalues in units of the half-bandwidth, as
/// `(Re E / 2 Delta, Im E / 2 Delta)`.
pub fn complex_eigenvalue_locations(report: &SpectrumReport, bandwidth: &Bandwidth) -> Vec<(f64, f64)> {
    let half = bandwidth.half();
    report.complex_eigenvalues().map(|e| (e.re / half, e.im / half)).collect()
}
