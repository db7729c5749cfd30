//! Dense eigenvalues of general complex matrices.
//!
//! The matrix is reduced to upper Hessenberg form with Householder
//! reflectors and then driven to upper triangular (complex Schur) form by
//! implicitly shifted single-shift QR sweeps built from complex Givens
//! rotations. Eigenvalues are read off the diagonal; eigenvectors, when
//! requested, come from back substitution on the triangular factor.

use nalgebra::DMatrix;

use super::C64;

const ULP: f64 = f64::EPSILON;
const SAFE_MIN: f64 = f64::MIN_POSITIVE;

/// Iteration budget per eigenvalue, as in LAPACK's `zlahqr`.
const ITERS_PER_EIGENVALUE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotConverged {
    /// 0-based index of the eigenvalue that failed to deflate.
    pub index: usize,
    pub iterations: usize,
}

/// Complex Schur factorization `A = Z T Z^H`.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: DMatrix<C64>,
    pub z: DMatrix<C64>,
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Plane rotation `[c s; -conj(s) c]` that maps `(a, b)` to `(r, 0)`.
#[derive(Debug, Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    fn zeroing(a: C64, b: C64) -> (Self, C64) {
        let bn = b.norm();
        if bn == 0.0 {
            return (Givens { c: 1.0, s: C64::new(0.0, 0.0) }, a);
        }
        let an = a.norm();
        if an == 0.0 {
            return (Givens { c: 0.0, s: b.conj() / bn }, C64::new(bn, 0.0));
        }
        let norm = an.hypot(bn);
        let phase = a / an;
        let g = Givens {
            c: an / norm,
            s: phase * b.conj() / norm,
        };
        (g, phase * norm)
    }

    /// Rows `k, k+1` of `m`, columns `cols`, are replaced by `G * rows`.
    fn apply_left(&self, m: &mut DMatrix<C64>, k: usize, cols: std::ops::RangeInclusive<usize>) {
        for j in cols {
            let x = m[(k, j)];
            let y = m[(k + 1, j)];
            m[(k, j)] = x * self.c + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Columns `k, k+1` of `m`, rows `rows`, are replaced by `cols * G^H`.
    fn apply_right(&self, m: &mut DMatrix<C64>, k: usize, rows: std::ops::RangeInclusive<usize>) {
        for i in rows {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.c + self.s.conj() * y;
            m[(i, k + 1)] = -self.s * x + y * self.c;
        }
    }
}

/// Reduces `a` to upper Hessenberg form in place, accumulating the unitary
/// similarity into `q` when given (`a_original = q * a * q^H`).
pub fn hessenberg(a: &mut DMatrix<C64>, mut q: Option<&mut DMatrix<C64>>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        // v = x - alpha e1, normalised so that P = I - 2 v v^H.
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[(i, k)];
        }
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut().take(n).skip(k + 1) {
            *vi /= vnorm;
        }

        // Left: rows k+1.., all columns from k.
        for j in k..n {
            let dot: C64 = (k + 1..n).map(|i| v[i].conj() * a[(i, j)]).sum();
            let dot = dot * 2.0;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * dot;
            }
        }
        // Right: columns k+1.., all rows.
        for i in 0..n {
            let dot: C64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum();
            let dot = dot * 2.0;
            for j in k + 1..n {
                a[(i, j)] -= dot * v[j].conj();
            }
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let dot: C64 = (k + 1..n).map(|j| q[(i, j)] * v[j]).sum();
                let dot = dot * 2.0;
                for j in k + 1..n {
                    q[(i, j)] -= dot * v[j].conj();
                }
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// True when the subdiagonal entry `h[k, k-1]` is negligible.
fn negligible_subdiagonal(h: &DMatrix<C64>, k: usize) -> bool {
    let sub = abs1(h[(k, k - 1)]);
    if sub <= SAFE_MIN {
        return true;
    }
    let mut tst = abs1(h[(k - 1, k - 1)]) + abs1(h[(k, k)]);
    if tst == 0.0 {
        let n = h.nrows();
        if k >= 2 {
            tst += h[(k - 1, k - 2)].re.abs();
        }
        if k + 1 < n {
            tst += h[(k + 1, k)].re.abs();
        }
    }
    if sub > ULP * tst {
        return false;
    }
    // Ahues & Tisseur refinement of the classical criterion.
    let ab = sub.max(abs1(h[(k - 1, k)]));
    let ba = sub.min(abs1(h[(k - 1, k)]));
    let diff = abs1(h[(k - 1, k - 1)] - h[(k, k)]);
    let aa = abs1(h[(k, k)]).max(diff);
    let bb = abs1(h[(k, k)]).min(diff);
    let s = aa + ab;
    ba * (ab / s) <= SAFE_MIN.max(ULP * (bb * (aa / s)))
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Drives an upper Hessenberg matrix to upper triangular form.
///
/// With `z` present, rotations are applied to the full matrix (so `h`
/// becomes the Schur factor `T`) and accumulated into `z`; otherwise only
/// the active window is updated and just the diagonal is meaningful.
fn hessenberg_qr(h: &mut DMatrix<C64>, mut z: Option<&mut DMatrix<C64>>) -> Result<(), NotConverged> {
    let n = h.nrows();
    if n == 0 {
        return Ok(());
    }
    let full = z.is_some();
    let max_its = ITERS_PER_EIGENVALUE * n.max(10);

    let mut i = n - 1;
    loop {
        if i == 0 {
            break;
        }
        let mut its = 0;
        loop {
            // Find the start of the unreduced block ending at i.
            let mut l = i;
            while l > 0 && !negligible_subdiagonal(h, l) {
                l -= 1;
            }
            if l > 0 {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
            }
            if l == i {
                break;
            }
            if its >= max_its {
                return Err(NotConverged { index: i, iterations: its });
            }
            its += 1;

            let shift = match its {
                10 => h[(l, l)] + 0.75 * h[(l + 1, l)].re.abs(),
                20 => h[(i, i)] + 0.75 * h[(i, i - 1)].re.abs(),
                _ => wilkinson_shift(h[(i - 1, i - 1)], h[(i - 1, i)], h[(i, i - 1)], h[(i, i)]),
            };

            let (col_lo, col_hi) = if full { (0, n - 1) } else { (l, i) };

            // Introduce the bulge, then chase it down the subdiagonal.
            let (g, _) = Givens::zeroing(h[(l, l)] - shift, h[(l + 1, l)]);
            g.apply_left(h, l, l..=col_hi);
            g.apply_right(h, l, col_lo..=(l + 2).min(i));
            if let Some(z) = z.as_deref_mut() {
                g.apply_right(z, l, 0..=n - 1);
            }
            for k in l + 1..i {
                let (g, r) = Givens::zeroing(h[(k, k - 1)], h[(k + 1, k - 1)]);
                h[(k, k - 1)] = r;
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
                g.apply_left(h, k, k..=col_hi);
                g.apply_right(h, k, col_lo..=(k + 2).min(i));
                if let Some(z) = z.as_deref_mut() {
                    g.apply_right(z, k, 0..=n - 1);
                }
            }
        }
        i -= 1;
    }
    Ok(())
}

/// All eigenvalues of `a`, with multiplicity, in the order they appear on
/// the diagonal of the Schur form.
pub fn eigenvalues(a: &DMatrix<C64>) -> Result<Vec<C64>, NotConverged> {
    assert!(a.is_square(), "eigenvalues: matrix must be square");
    let mut h = a.clone();
    hessenberg(&mut h, None);
    hessenberg_qr(&mut h, None)?;
    Ok(h.diagonal().iter().copied().collect())
}

/// Complex Schur factorization of `a`.
pub fn schur(a: &DMatrix<C64>) -> Result<Schur, NotConverged> {
    assert!(a.is_square(), "schur: matrix must be square");
    let n = a.nrows();
    let mut t = a.clone();
    let mut z = DMatrix::identity(n, n);
    hessenberg(&mut t, Some(&mut z));
    hessenberg_qr(&mut t, Some(&mut z))?;
    // Clear rounding debris below the diagonal.
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t, z })
}

/// Eigenvalues and unit-norm right eigenvectors (columns) of `a`.
///
/// Meaningful only for diagonalizable matrices; at an exceptional point the
/// returned vectors are (nearly) parallel.
pub fn eigen_decomposition(a: &DMatrix<C64>) -> Result<(Vec<C64>, DMatrix<C64>), NotConverged> {
    let Schur { t, z } = schur(a)?;
    let n = t.nrows();
    let norm = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let small = (ULP * norm).max(SAFE_MIN);

    let mut x = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let rhs: C64 = (j + 1..=k).map(|m| t[(j, m)] * x[(m, k)]).sum();
            let mut pivot = t[(j, j)] - lambda;
            if pivot.norm() < small {
                pivot = C64::new(small, 0.0);
            }
            x[(j, k)] = -rhs / pivot;
        }
    }
    let mut v = z * x;
    for mut col in v.column_iter_mut() {
        let nrm = col.norm();
        if nrm > 0.0 {
            col /= C64::new(nrm, 0.0);
        }
    }
    Ok((t.diagonal().iter().copied().collect(), v))
}
