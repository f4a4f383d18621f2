//! Hermitian eigendecomposition: unitary Householder reduction to a Hermitian
//! tridiagonal matrix, a diagonal phase change that makes it real symmetric,
//! then implicit QL with Wilkinson-style shifts on the real tridiagonal.

use alloc::vec;
use alloc::vec::Vec;

use super::ComplexMatrix;
use crate::{C64, Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 30;

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `k` is the eigenvector for `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Dimension of the decomposed operator.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector `k` as a vector.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.dim()).map(|r| self.eigenvectors[(r, k)]).collect()
    }

    /// `V f(Lambda) V^dagger` for a function of the eigenvalues.
    pub fn reassemble(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let weights: Vec<C64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let vi = v.row(i);
            for j in 0..n {
                let vj = v.row(j);
                out[(i, j)] = (0..n).map(|k| vi[k] * weights[k] * vj[k].conj()).sum();
            }
        }
        out
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reassemble(|x| C64::new(x, 0.0))
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] if any `|h_ij - conj(h_ji)|` exceeds
/// `1e-10 * max(1, max|h_ij|)` and with [`Error::NoConvergence`] if the QL
/// iteration stalls.
pub fn eigh(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.rows(), found: h.cols() });
    }
    if h.as_slice().iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite);
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    if n == 0 {
        return Ok(SpectralDecomposition { eigenvalues: Vec::new(), eigenvectors: h.clone() });
    }

    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }

    let (diag, offdiag, q) = tridiagonalize(a);

    // Phase D with D^dagger T D real: D_0 = 1, D_{k+1} = D_k e_k / |e_k|.
    let mut phases = vec![C64::new(1.0, 0.0); n];
    let mut sub = vec![0.0; n];
    for k in 0..n - 1 {
        let mag = offdiag[k].norm();
        sub[k] = mag;
        phases[k + 1] = if mag > 0.0 { phases[k] * (offdiag[k] / mag) } else { phases[k] };
    }

    let mut eigenvalues = diag;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut eigenvalues, &mut sub, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eigenvalues[x].total_cmp(&eigenvalues[y]));

    // V = Q D Z, columns in ascending eigenvalue order.
    let mut qd = q;
    for r in 0..n {
        for (j, p) in phases.iter().enumerate() {
            qd[(r, j)] *= p;
        }
    }
    let mut vectors = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        let qrow = qd.row(r);
        for (c, &src) in order.iter().enumerate() {
            let zc = &z[src * n..(src + 1) * n];
            vectors[(r, c)] = qrow.iter().zip(zc).map(|(q, &zz)| q * zz).sum();
        }
    }
    let sorted = order.iter().map(|&k| eigenvalues[k]).collect();
    Ok(SpectralDecomposition { eigenvalues: sorted, eigenvectors: vectors })
}

/// Returns `(diag, subdiag, Q)` with `A = Q T Q^dagger`, `T` Hermitian
/// tridiagonal, `T[k+1, k] = subdiag[k]`.
fn tridiagonalize(mut a: ComplexMatrix) -> (Vec<f64>, Vec<C64>, ComplexMatrix) {
    let n = a.rows();
    let zero = C64::new(0.0, 0.0);
    let mut q = ComplexMatrix::identity(n);
    let mut diag = vec![0.0; n];
    let mut sub = vec![zero; n.saturating_sub(1)];
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        diag[k] = a[(k, k)].re;
        let m = n - k - 1;
        let x0 = a[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            sub[k] = x0;
            continue;
        }
        let x0_abs = x0.norm();
        let alpha = libm::sqrt(tail + x0.norm_sqr());
        let phase = if x0_abs > 0.0 { x0 / x0_abs } else { C64::new(1.0, 0.0) };

        let v = &mut v[..m];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = a[(k + 1 + i, k)];
        }
        v[0] += phase * alpha;
        let tau = 1.0 / (alpha * (alpha + x0_abs));
        sub[k] = -phase * alpha;

        // Trailing block B <- P B P with P = I - tau v v^dagger.
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a.row(k + 1 + i)[k + 1..];
            *pi = row.iter().zip(v.iter()).map(|(b, vj)| b * vj).sum::<C64>() * tau;
        }
        let beta: f64 = v.iter().zip(p.iter()).map(|(vi, pi)| (vi.conj() * pi).re).sum();
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= vi * (0.5 * tau * beta);
        }
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a.as_mut_slice()[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for ((b, vj), wj) in row.iter_mut().zip(v.iter()).zip(p.iter()) {
                *b -= vi * wj.conj() + wi * vj.conj();
            }
        }

        // Q <- Q P.
        for r in 0..n {
            let row = &mut q.as_mut_slice()[r * n + k + 1..(r + 1) * n];
            let s: C64 = row.iter().zip(v.iter()).map(|(qr, vi)| qr * vi).sum::<C64>() * tau;
            for (qr, vi) in row.iter_mut().zip(v.iter()) {
                *qr -= s * vi.conj();
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2, n - 2)].re;
        sub[n - 2] = a[(n - 1, n - 2)];
    }
    diag[n - 1] = a[(n - 1, n - 1)].re;
    (diag, sub, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[k]` the coupling between `k` and `k+1`
/// (`e[n-1]` is ignored). `z` is column-major and is multiplied on the right
/// by the accumulated rotations. Eigenvalues are left unsorted in `d`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let max_iterations = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut iterations = 0usize;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iterations {
                    return Err(Error::NoConvergence { iterations });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let zi = &mut left[i * n..];
                    let zi1 = &mut right[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
