//! Jacobi decompositions for small dense matrices.
//!
//! Every rank decision in this crate hinges on singular values being
//! accurate relative to the largest one, so the factorizations here use
//! Jacobi iterations: slower than implicit-shift bidiagonal methods, but
//! with high relative accuracy and no convergence edge cases at the sizes
//! this crate handles.

use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 64;
const ORTHO_EPS: f64 = 1e-14;

/// One-sided Jacobi SVD: returns `(u, sigma, v)` with `m = u · diag(sigma) · vᵀ`,
/// `u` having orthonormal columns where `sigma > 0` and `v` orthogonal.
/// Singular values are unordered; entries at numerical zero stay at the
/// rounding floor instead of being inflated by squaring.
pub fn svd(m: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
    let cols = m.ncols();
    let mut work = m.clone_owned();
    let mut v = DMatrix::identity(cols, cols);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let ci = work.column(i);
                let cj = work.column(j);
                let a = ci.dot(&ci);
                let b = cj.dot(&cj);
                let g = ci.dot(&cj);
                if g.abs() <= ORTHO_EPS * (a * b).sqrt() || a == 0.0 || b == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (b - a) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut work, i, j, c, s);
                rotate_columns(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = DVector::zeros(cols);
    let mut u = DMatrix::zeros(m.nrows(), cols);
    for j in 0..cols {
        let norm = work.column(j).norm();
        sigma[j] = norm;
        if norm > 0.0 {
            u.set_column(j, &(work.column(j) / norm));
        }
    }
    (u, sigma, v)
}

/// Applies the rotation `[c −s; s c]` to columns `i`, `j`.
fn rotate_columns(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let x = m[(r, i)];
        let y = m[(r, j)];
        m[(r, i)] = c * x - s * y;
        m[(r, j)] = s * x + c * y;
    }
}

/// Classical Jacobi eigendecomposition of a symmetric matrix: returns
/// `(eigenvalues, eigenvectors)` with `m = V · diag(λ) · Vᵀ`, eigenvectors in
/// columns, unordered.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let k = m.nrows();
    debug_assert_eq!(k, m.ncols());
    let mut a = m.clone_owned();
    let mut v = DMatrix::identity(k, k);
    let scale = m.amax().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..k {
            for q in (p + 1)..k {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= ORTHO_EPS * scale {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a[(p, q)];
                if apq.abs() <= ORTHO_EPS * scale * 1e-2 {
                    continue;
                }
                let zeta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // A ← JᵀAJ on rows/columns p, q.
                for r in 0..k {
                    let x = a[(r, p)];
                    let y = a[(r, q)];
                    a[(r, p)] = c * x - s * y;
                    a[(r, q)] = s * x + c * y;
                }
                for col in 0..k {
                    let x = a[(p, col)];
                    let y = a[(q, col)];
                    a[(p, col)] = c * x - s * y;
                    a[(q, col)] = s * x + c * y;
                }
                rotate_columns(&mut v, p, q, c, s);
            }
        }
    }

    let eigenvalues = DVector::from_fn(k, |i, _| a[(i, i)]);
    (eigenvalues, v)
}
