//! Tolerance-aware dense subspace algebra.
//!
//! Every subspace is kept as an orthonormal column basis, so equality and
//! membership reduce to projections, and rank decisions are made once, at
//! construction, by a relative singular-value cutoff.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::jacobi;
use crate::tol::Tolerance;

/// A linear subspace of ℝᵈ, stored as an orthonormal column basis.
///
/// `dim() == 0` represents the zero subspace (empty basis).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    /// d × k matrix with orthonormal columns.
    basis: DMatrix<f64>,
}

/// Outcome of a membership query: the verdict plus the projection residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub contained: bool,
    pub residual: f64,
}

impl Subspace {
    /// The zero subspace of ℝᵈ.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    /// All of ℝᵈ, with the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the given vectors, orthonormalized by SVD with rank decided
    /// relative to the largest singular value.
    pub fn spanned_by(
        ambient_dim: usize,
        vectors: &[DVector<f64>],
        tol: &Tolerance,
    ) -> Result<Self, Error> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let m = DMatrix::from_columns(vectors);
        Ok(Self::span_of_columns(&m, tol))
    }

    /// Span of the columns of `m`.
    pub fn span_of_columns(m: &DMatrix<f64>, tol: &Tolerance) -> Self {
        Self::span_with_scale_floor(m, 0.0, tol)
    }

    /// Span of the columns of a matrix whose meaningful entries are of unit
    /// scale (blocks of orthonormal bases, projectors): the rank cutoff is
    /// floored at `rank_rtol · 1`, so pure-noise input collapses to zero
    /// instead of being ranked by its own rounding errors.
    pub(crate) fn span_of_unit_scale_columns(m: &DMatrix<f64>, tol: &Tolerance) -> Self {
        Self::span_with_scale_floor(m, 1.0, tol)
    }

    /// Span of the columns with the rank cutoff taken relative to
    /// `max(σ_max, scale_floor)`.
    fn span_with_scale_floor(m: &DMatrix<f64>, scale_floor: f64, tol: &Tolerance) -> Self {
        let ambient_dim = m.nrows();
        if m.ncols() == 0 {
            return Self::zero(ambient_dim);
        }
        let (u, sigma, _) = jacobi::svd(m);
        let smax = sigma.iter().cloned().fold(scale_floor, f64::max);
        let cutoff = tol.rank_rtol * smax;
        let mut kept: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > cutoff).collect();
        // Largest directions first, for a reproducible basis order.
        kept.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
        let mut basis = DMatrix::zeros(ambient_dim, kept.len());
        for (j, &i) in kept.iter().enumerate() {
            basis.set_column(j, &u.column(i));
        }
        Self { ambient_dim, basis }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    ///
    /// Used for images of orthonormal bases under orthogonal maps (block
    /// swaps, sign flips), where re-orthonormalization would only add noise.
    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        debug_assert!(
            (basis.transpose() * &basis - DMatrix::<f64>::identity(basis.ncols(), basis.ncols()))
                .amax()
                < 1e-8,
            "columns must be orthonormal"
        );
        Self {
            ambient_dim: basis.nrows(),
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal basis, one column per dimension.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<DVector<f64>> {
        (0..self.dim()).map(|j| self.basis.column(j).into_owned()).collect()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.dim() == 0 {
            return DVector::zeros(self.ambient_dim);
        }
        &self.basis * (self.basis.transpose() * v)
    }

    /// Membership test with the projection residual, scaled by `max(1, ‖v‖)`.
    pub fn contains(&self, v: &DVector<f64>, tol: &Tolerance) -> Result<Membership, Error> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let residual = (v - self.project(v)).norm();
        Ok(Membership {
            contained: residual <= tol.atol * 1.0_f64.max(v.norm()),
            residual,
        })
    }

    /// Orthogonal complement (the annihilator under the standard pairing).
    pub fn complement(&self, tol: &Tolerance) -> Self {
        let d = self.ambient_dim;
        // I - B Bᵀ projects onto the complement; its singular values are
        // exactly 0 and 1, so with the scale floored at 1 the rank cutoff
        // is crisp even when the complement is zero.
        let mut p = DMatrix::identity(d, d);
        if self.dim() > 0 {
            p -= &self.basis * self.basis.transpose();
        }
        Self::span_of_unit_scale_columns(&p, tol)
    }

    /// Span of the union of the two bases.
    pub fn sum(&self, other: &Self, tol: &Tolerance) -> Result<Self, Error> {
        self.check_ambient(other)?;
        let mut cols = self.basis_columns();
        cols.extend(other.basis_columns());
        Subspace::spanned_by(self.ambient_dim, &cols, tol)
    }

    /// Intersection, computed by De Morgan: `(S⊥ + T⊥)⊥`.
    pub fn intersect(&self, other: &Self, tol: &Tolerance) -> Result<Self, Error> {
        self.check_ambient(other)?;
        let joined = self.complement(tol).sum(&other.complement(tol), tol)?;
        Ok(joined.complement(tol))
    }

    /// Tolerance-level equality: equal dimensions and mutual containment of
    /// basis vectors.
    pub fn subspace_equal(&self, other: &Self, tol: &Tolerance) -> Result<bool, Error> {
        self.check_ambient(other)?;
        Ok(self.dim() == other.dim() && self.equality_residual(other) <= tol.atol)
    }

    /// Largest projection residual among the basis vectors of either side
    /// against the other; zero-ish iff the spans coincide (given equal dims).
    pub fn equality_residual(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for v in self.basis_columns() {
            worst = worst.max((&v - other.project(&v)).norm());
        }
        for v in other.basis_columns() {
            worst = worst.max((&v - self.project(&v)).norm());
        }
        worst
    }

    fn check_ambient(&self, other: &Self) -> Result<(), Error> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Orthonormal-span constructor matching the operation name used throughout
/// the docs: rank decided by singular values relative to the largest.
pub fn orthonormalize(
    ambient_dim: usize,
    vectors: &[DVector<f64>],
    tol: &Tolerance,
) -> Result<Subspace, Error> {
    Subspace::spanned_by(ambient_dim, vectors, tol)
}

/// Eigen-analysis of a symmetric matrix: spectrum, pseudoinverse, and the
/// orthogonal projector onto the numerical range.
#[derive(Debug, Clone)]
pub struct SymmetricForm {
    dim: usize,
    matrix: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    pseudo_inverse: DMatrix<f64>,
    range_projector: DMatrix<f64>,
    min_eigenvalue: f64,
    spectral_radius: f64,
}

impl SymmetricForm {
    /// Symmetrizes `m` as `(M + Mᵀ)/2` and eigen-analyzes it; assembled
    /// products accumulate asymmetry at machine precision.
    ///
    /// The pseudoinverse inverts eigenvalues above the rank cutoff
    /// (`rank_rtol · max(1, spectral radius)`, the same flooring as the PSD
    /// verdict) and zeroes the rest; the range projector spans the
    /// corresponding eigenvectors. The floor keeps structurally-zero
    /// matrices, which arrive as pure rounding noise, at rank zero.
    pub fn analyze(m: &DMatrix<f64>, tol: &Tolerance) -> Result<Self, Error> {
        Self::analyze_with_floor(m, 1.0, tol)
    }

    /// Like [`SymmetricForm::analyze`], with the rank scale floored at
    /// `max(1, floor)` for matrices assembled from data of a known larger
    /// scale (e.g. products with a pseudoinverse).
    pub fn analyze_with_floor(m: &DMatrix<f64>, floor: f64, tol: &Tolerance) -> Result<Self, Error> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let k = m.nrows();
        if k == 0 {
            return Ok(Self {
                dim: 0,
                matrix: DMatrix::zeros(0, 0),
                eigenvalues: DVector::zeros(0),
                eigenvectors: DMatrix::zeros(0, 0),
                pseudo_inverse: DMatrix::zeros(0, 0),
                range_projector: DMatrix::zeros(0, 0),
                min_eigenvalue: f64::INFINITY,
                spectral_radius: 0.0,
            });
        }
        let sym = (m + m.transpose()) * 0.5;
        let (eigenvalues, eigenvectors) = jacobi::symmetric_eigen(&sym);
        let spectral_radius = eigenvalues.iter().fold(0.0_f64, |a, &l| a.max(l.abs()));
        let min_eigenvalue = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let cutoff = tol.rank_rtol * spectral_radius.max(1.0).max(floor);

        let mut pseudo_inverse = DMatrix::zeros(k, k);
        let mut range_projector = DMatrix::zeros(k, k);
        for i in 0..k {
            let lambda = eigenvalues[i];
            if lambda.abs() > cutoff {
                let v = eigenvectors.column(i);
                pseudo_inverse += v * v.transpose() / lambda;
                range_projector += v * v.transpose();
            }
        }
        Ok(Self {
            dim: k,
            matrix: sym,
            eigenvalues,
            eigenvectors,
            pseudo_inverse,
            range_projector,
            min_eigenvalue,
            spectral_radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn pseudo_inverse(&self) -> &DMatrix<f64> {
        &self.pseudo_inverse
    }

    pub fn range_projector(&self) -> &DMatrix<f64> {
        &self.range_projector
    }

    /// Smallest eigenvalue; `+∞` for the empty form.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// PSD verdict: min eigenvalue ≥ −psd_tol · max(1, spectral radius).
    pub fn is_psd(&self, tol: &Tolerance) -> bool {
        self.min_eigenvalue >= -tol.psd_tol * 1.0_f64.max(self.spectral_radius)
    }

    /// Unit eigenvector for the most negative eigenvalue, if any eigenvalue
    /// is negative.
    pub fn most_negative_direction(&self) -> Option<DVector<f64>> {
        if self.dim == 0 || self.min_eigenvalue >= 0.0 {
            return None;
        }
        let i = (0..self.dim)
            .min_by(|&a, &b| self.eigenvalues[a].total_cmp(&self.eigenvalues[b]))
            .unwrap();
        Some(self.eigenvectors.column(i).into_owned())
    }

    /// Range membership: `‖(I − R) b‖ ≤ atol · max(1, ‖b‖)`.
    pub fn in_range(&self, b: &DVector<f64>, tol: &Tolerance) -> bool {
        self.range_defect(b) <= tol.atol * 1.0_f64.max(b.norm())
    }

    /// Norm of the component of `b` outside the numerical range.
    pub fn range_defect(&self, b: &DVector<f64>) -> f64 {
        if self.dim == 0 {
            return b.norm();
        }
        (b - &self.range_projector * b).norm()
    }

    /// Component of `b` orthogonal to the numerical range.
    pub fn null_component(&self, b: &DVector<f64>) -> DVector<f64> {
        if self.dim == 0 {
            return b.clone();
        }
        b - &self.range_projector * b
    }

    /// `¼ bᵀ M⁺ b`, the closed-form optimum of `sup_c bᵀc − cᵀMc` on the
    /// range of `M`.
    pub fn quarter_quadratic(&self, b: &DVector<f64>) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        0.25 * b.dot(&(&self.pseudo_inverse * b))
    }
}

/// Free-function alias for [`SymmetricForm::analyze`].
pub fn psd_analyze(m: &DMatrix<f64>, tol: &Tolerance) -> Result<SymmetricForm, Error> {
    SymmetricForm::analyze(m, tol)
}

/// Moore–Penrose pseudoinverse for unit-scale data: the rank cutoff is
/// `rank_rtol · max(1, σ_max)`, so structurally-zero matrices pseudo-invert
/// to zero instead of amplifying their own rounding noise.
pub(crate) fn pinv(m: &DMatrix<f64>, tol: &Tolerance) -> DMatrix<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.ncols(), m.nrows());
    }
    let (u, sigma, v) = jacobi::svd(m);
    let smax = sigma.iter().cloned().fold(1.0_f64, f64::max);
    let cutoff = tol.rank_rtol * smax;
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for i in 0..sigma.len() {
        if sigma[i] > cutoff {
            out += v.column(i) * u.column(i).transpose() / sigma[i];
        }
    }
    out
}

/// Minimum-norm least-squares solution of `A x = b`.
pub(crate) fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, tol: &Tolerance) -> DVector<f64> {
    pinv(a, tol) * b
}

/// Null space of `m` (rows × d), as a subspace of ℝᵈ: the complement of the
/// row space. Rows are treated as unit-scale data, so an all-noise
/// constraint matrix has the full space as its kernel.
pub(crate) fn kernel(m: &DMatrix<f64>, tol: &Tolerance) -> Subspace {
    let row_space = Subspace::span_of_unit_scale_columns(&m.transpose(), tol);
    row_space.complement(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn vecs(rows: &[&[f64]]) -> Vec<DVector<f64>> {
        rows.iter().map(|r| DVector::from_row_slice(r)).collect()
    }

    #[test]
    fn collinear_vectors_span_a_line() {
        let s = Subspace::spanned_by(2, &vecs(&[&[1.0, 0.0], &[2.0, 0.0]]), &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        let m = s
            .contains(&DVector::from_row_slice(&[3.0, 0.0]), &tol())
            .unwrap();
        assert!(m.contained);
        assert_abs_diff_eq!(m.residual, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let s = Subspace::spanned_by(3, &[], &tol()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.ambient_dim(), 3);
        // 0 belongs to every subspace.
        assert!(s.contains(&DVector::zeros(3), &tol()).unwrap().contained);
    }

    #[test]
    fn independent_vectors_span_the_plane() {
        let s = Subspace::spanned_by(2, &vecs(&[&[1.0, 1.0], &[1.0, -1.0]]), &tol()).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s
            .subspace_equal(&Subspace::full(2), &tol())
            .unwrap());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = Subspace::spanned_by(2, &vecs(&[&[1.0, 0.0, 0.0]]), &tol());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_examples() {
        let e1 = Subspace::spanned_by(2, &vecs(&[&[1.0, 0.0]]), &tol()).unwrap();
        let e2 = Subspace::spanned_by(2, &vecs(&[&[0.0, 1.0]]), &tol()).unwrap();
        assert!(e1.complement(&tol()).subspace_equal(&e2, &tol()).unwrap());

        let zero3 = Subspace::zero(3);
        assert!(zero3
            .complement(&tol())
            .subspace_equal(&Subspace::full(3), &tol())
            .unwrap());

        let diag = Subspace::spanned_by(2, &vecs(&[&[1.0, 1.0]]), &tol()).unwrap();
        let anti = Subspace::spanned_by(2, &vecs(&[&[1.0, -1.0]]), &tol()).unwrap();
        assert!(diag.complement(&tol()).subspace_equal(&anti, &tol()).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let s = Subspace::spanned_by(3, &vecs(&[&[1., 0., 0.], &[0., 1., 0.]]), &tol()).unwrap();
        let t = Subspace::spanned_by(3, &vecs(&[&[0., 1., 0.], &[0., 0., 1.]]), &tol()).unwrap();
        let e2 = Subspace::spanned_by(3, &vecs(&[&[0., 1., 0.]]), &tol()).unwrap();
        assert!(s.intersect(&t, &tol()).unwrap().subspace_equal(&e2, &tol()).unwrap());
        // Idempotence.
        assert!(s.intersect(&s, &tol()).unwrap().subspace_equal(&s, &tol()).unwrap());
        // Transversal lines meet at zero.
        let e1 = Subspace::spanned_by(2, &vecs(&[&[1., 0.]]), &tol()).unwrap();
        let f2 = Subspace::spanned_by(2, &vecs(&[&[0., 1.]]), &tol()).unwrap();
        assert_eq!(e1.intersect(&f2, &tol()).unwrap().dim(), 0);
    }

    #[test]
    fn sum_examples() {
        let e1 = Subspace::spanned_by(2, &vecs(&[&[1., 0.]]), &tol()).unwrap();
        let e2 = Subspace::spanned_by(2, &vecs(&[&[0., 1.]]), &tol()).unwrap();
        assert_eq!(e1.sum(&e2, &tol()).unwrap().dim(), 2);
        assert!(e1
            .sum(&Subspace::zero(2), &tol())
            .unwrap()
            .subspace_equal(&e1, &tol())
            .unwrap());
        assert!(e1.sum(&e1, &tol()).unwrap().subspace_equal(&e1, &tol()).unwrap());
    }

    #[test]
    fn contains_reports_residuals() {
        let e1 = Subspace::spanned_by(2, &vecs(&[&[1., 0.]]), &tol()).unwrap();
        let inside = e1.contains(&DVector::from_row_slice(&[3., 0.]), &tol()).unwrap();
        assert!(inside.contained);
        let outside = e1.contains(&DVector::from_row_slice(&[0., 1.]), &tol()).unwrap();
        assert!(!outside.contained);
        assert_abs_diff_eq!(outside.residual, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn subspace_equal_examples() {
        let e1 = Subspace::spanned_by(2, &vecs(&[&[1., 0.]]), &tol()).unwrap();
        let e1_scaled = Subspace::spanned_by(2, &vecs(&[&[2., 0.]]), &tol()).unwrap();
        assert!(e1.subspace_equal(&e1_scaled, &tol()).unwrap());
        let e2 = Subspace::spanned_by(2, &vecs(&[&[0., 1.]]), &tol()).unwrap();
        assert!(!e1.subspace_equal(&e2, &tol()).unwrap());
        let full = e1.sum(&e2, &tol()).unwrap();
        assert!(full.subspace_equal(&Subspace::full(2), &tol()).unwrap());
    }

    #[test]
    fn psd_analyze_examples() {
        let m = DMatrix::from_row_slice(2, 2, &[1., 0., 0., 0.]);
        let f = SymmetricForm::analyze(&m, &tol()).unwrap();
        assert!(f.is_psd(&tol()));
        assert_abs_diff_eq!(f.pseudo_inverse()[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.pseudo_inverse()[(1, 1)], 0.0, epsilon = 1e-12);

        let swap = DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.]);
        let f = SymmetricForm::analyze(&swap, &tol()).unwrap();
        assert!(!f.is_psd(&tol()));
        assert_abs_diff_eq!(f.min_eigenvalue(), -1.0, epsilon = 1e-12);
        let w = f.most_negative_direction().unwrap();
        // (1, -1)/√2 up to sign.
        assert_abs_diff_eq!((w[0] + w[1]).abs(), 0.0, epsilon = 1e-12);

        let one = DMatrix::from_row_slice(1, 1, &[2.0]);
        let f = SymmetricForm::analyze(&one, &tol()).unwrap();
        assert!(f.is_psd(&tol()));
        assert_abs_diff_eq!(f.pseudo_inverse()[(0, 0)], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn psd_analyze_rejects_nonsquare() {
        let m = DMatrix::zeros(2, 3);
        assert!(matches!(
            SymmetricForm::analyze(&m, &tol()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn pinv_solves_on_the_range() {
        let m = DMatrix::from_row_slice(3, 2, &[1., 2., 0., 1., 1., 0.]);
        let p = pinv(&m, &tol());
        let x = DVector::from_row_slice(&[0.3, -1.2]);
        let b = &m * &x;
        let xr = &p * &b;
        assert_abs_diff_eq!((&m * xr - b).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn kernel_of_row_matrix() {
        // Kernel of [1 0 0] in R^3 is the e2-e3 plane.
        let m = DMatrix::from_row_slice(1, 3, &[1., 0., 0.]);
        let k = kernel(&m, &tol());
        assert_eq!(k.dim(), 2);
        assert!(!k
            .contains(&DVector::from_row_slice(&[1., 0., 0.]), &tol())
            .unwrap()
            .contained);
    }
}
