//! Linear relations on ℝⁿ and their algebra.
//!
//! A relation is stored as its graph, a subspace of ℝ²ⁿ under the coordinate
//! convention `(x₁..xₙ, x*₁..x*ₙ)`: the first block is the point, the second
//! the value. The annihilator pairing `⟨y*,a⟩ + ⟨a*,y⟩ = 0` then turns into
//! the explicit block map `(z₁,z₂) ↦ (−z₂,z₁)` used by [`LinearRelation::adjoint`].

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::linalg::{self, Subspace};
use crate::tol::Tolerance;

/// A set-valued operator `A: ℝⁿ ⇉ ℝⁿ` with a linear graph.
///
/// The graph is a linear subspace by representation and therefore closed, so
/// the standing closed-graph hypothesis holds automatically.
#[derive(Debug, Clone)]
pub struct LinearRelation {
    n: usize,
    graph: Subspace,
}

/// The image set `Ax = x₀* + A0`, with the particular solution canonicalized
/// to the least-norm representative (orthogonal to the offset).
#[derive(Debug, Clone)]
pub struct ImageCoset {
    particular: DVector<f64>,
    offset: Subspace,
}

impl ImageCoset {
    /// Least-norm particular solution.
    pub fn particular(&self) -> &DVector<f64> {
        &self.particular
    }

    /// The multivaluedness subspace `A0`.
    pub fn offset(&self) -> &Subspace {
        &self.offset
    }
}

impl LinearRelation {
    /// Embeds a single-valued linear operator: graph `{(x, Mx)}`.
    pub fn from_matrix(m: &DMatrix<f64>, tol: &Tolerance) -> Result<Self, Error> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let n = m.nrows();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let mut g = DVector::zeros(2 * n);
            g[i] = 1.0;
            for r in 0..n {
                g[n + r] = m[(r, i)];
            }
            cols.push(g);
        }
        Ok(Self {
            n,
            graph: Subspace::spanned_by(2 * n, &cols, tol)?,
        })
    }

    /// Relation spanned by explicit graph vectors of length 2n.
    pub fn from_graph_basis(
        n: usize,
        vectors: &[DVector<f64>],
        tol: &Tolerance,
    ) -> Result<Self, Error> {
        Ok(Self {
            n,
            graph: Subspace::spanned_by(2 * n, vectors, tol)?,
        })
    }

    /// Wraps an existing graph subspace of ℝ²ⁿ.
    pub fn from_graph(n: usize, graph: Subspace) -> Result<Self, Error> {
        if graph.ambient_dim() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                got: graph.ambient_dim(),
            });
        }
        Ok(Self { n, graph })
    }

    /// The normal cone operator of a subspace `L`: graph `L × L⊥`.
    pub fn normal_cone(l: &Subspace, tol: &Tolerance) -> Self {
        let n = l.ambient_dim();
        let lperp = l.complement(tol);
        let mut basis = DMatrix::zeros(2 * n, l.dim() + lperp.dim());
        for (j, v) in l.basis_columns().iter().enumerate() {
            for r in 0..n {
                basis[(r, j)] = v[r];
            }
        }
        for (j, w) in lperp.basis_columns().iter().enumerate() {
            for r in 0..n {
                basis[(n + r, l.dim() + j)] = w[r];
            }
        }
        Self {
            n,
            graph: Subspace::from_orthonormal(basis),
        }
    }

    /// Identity operator on ℝⁿ.
    pub fn identity(n: usize, tol: &Tolerance) -> Self {
        Self::from_matrix(&DMatrix::identity(n, n), tol).expect("identity is square")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    /// Splits the graph basis into its point rows `U` and value rows `V`
    /// (each n × k; the stacked `(U; V)` has orthonormal columns).
    pub fn graph_blocks(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let b = self.graph.basis();
        (
            b.rows(0, self.n).into_owned(),
            b.rows(self.n, self.n).into_owned(),
        )
    }

    /// Graph membership of the pair `(x, x*)`.
    pub fn graph_contains(
        &self,
        x: &DVector<f64>,
        xstar: &DVector<f64>,
        tol: &Tolerance,
    ) -> Result<bool, Error> {
        let w = stack_pair(self.n, x, xstar)?;
        Ok(self.graph.contains(&w, tol)?.contained)
    }

    /// Inverse relation: block-swapped graph.
    pub fn inverse(&self) -> Self {
        let b = self.graph.basis();
        let mut swapped = DMatrix::zeros(2 * self.n, b.ncols());
        for j in 0..b.ncols() {
            for r in 0..self.n {
                swapped[(r, j)] = b[(self.n + r, j)];
                swapped[(self.n + r, j)] = b[(r, j)];
            }
        }
        Self {
            n: self.n,
            graph: Subspace::from_orthonormal(swapped),
        }
    }

    /// Adjoint relation: `gra A* = {(x,x*) : (x*,−x) ⊥ gra A}`.
    ///
    /// Computed by complementing the graph in ℝ²ⁿ and applying the block map
    /// `(z₁,z₂) ↦ (−z₂,z₁)`, which is orthogonal and so preserves the basis.
    pub fn adjoint(&self, tol: &Tolerance) -> Self {
        let z = self.graph.complement(tol);
        let b = z.basis();
        let mut mapped = DMatrix::zeros(2 * self.n, b.ncols());
        for j in 0..b.ncols() {
            for r in 0..self.n {
                mapped[(r, j)] = -b[(self.n + r, j)];
                mapped[(self.n + r, j)] = b[(r, j)];
            }
        }
        Self {
            n: self.n,
            graph: Subspace::from_orthonormal(mapped),
        }
    }

    /// Scales the value block: graph `{(x, λx*) : (x,x*) ∈ gra A}`.
    ///
    /// For λ = 0 this collapses the values, leaving `dom A × {0}`.
    pub fn scale(&self, lambda: f64, tol: &Tolerance) -> Self {
        let b = self.graph.basis();
        let mut mapped = b.clone_owned();
        for j in 0..b.ncols() {
            for r in 0..self.n {
                mapped[(self.n + r, j)] *= lambda;
            }
        }
        Self {
            n: self.n,
            graph: Subspace::span_of_columns(&mapped, tol),
        }
    }

    /// `−A`, i.e. `scale(−1)`.
    pub fn negate(&self, tol: &Tolerance) -> Self {
        self.scale(-1.0, tol)
    }

    /// Pointwise Minkowski sum: `(A+B)x = Ax + Bx` on `dom A ∩ dom B`.
    ///
    /// Built structurally: least-norm particulars are added over a basis of
    /// the common domain and the offsets `A0 + B0` are appended.
    pub fn add(&self, other: &Self, tol: &Tolerance) -> Result<Self, Error> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let common = self.dom(tol).intersect(&other.dom(tol), tol)?;
        let mut cols = Vec::new();
        for d in common.basis_columns() {
            let pa = self.least_norm_particular(&d, tol);
            let pb = other.least_norm_particular(&d, tol);
            cols.push(stack_pair(n, &d, &(pa + pb))?);
        }
        let offsets = self.at_zero(tol).sum(&other.at_zero(tol), tol)?;
        for z in offsets.basis_columns() {
            cols.push(stack_pair(n, &DVector::zeros(n), &z)?);
        }
        Ok(Self {
            n,
            graph: Subspace::spanned_by(2 * n, &cols, tol)?,
        })
    }

    /// Projection of the graph onto the point block.
    pub fn dom(&self, tol: &Tolerance) -> Subspace {
        let (u, _) = self.graph_blocks();
        Subspace::span_of_unit_scale_columns(&u, tol)
    }

    /// Projection of the graph onto the value block.
    pub fn ran(&self, tol: &Tolerance) -> Subspace {
        let (_, v) = self.graph_blocks();
        Subspace::span_of_unit_scale_columns(&v, tol)
    }

    /// `{x : 0 ∈ Ax}`, via `gra A ∩ (ℝⁿ × {0})`.
    pub fn ker(&self, tol: &Tolerance) -> Subspace {
        let first_block = self.block_subspace(true);
        let meet = self
            .graph
            .intersect(&first_block, tol)
            .expect("ambient dims agree");
        project_block(&meet, self.n, 0, tol)
    }

    /// `A0 = {x* : (0, x*) ∈ gra A}`, the multivaluedness subspace.
    pub fn at_zero(&self, tol: &Tolerance) -> Subspace {
        let second_block = self.block_subspace(false);
        let meet = self
            .graph
            .intersect(&second_block, tol)
            .expect("ambient dims agree");
        project_block(&meet, self.n, self.n, tol)
    }

    /// The coset `Ax`, or `None` when `x ∉ dom A`.
    pub fn image(&self, x: &DVector<f64>, tol: &Tolerance) -> Result<Option<ImageCoset>, Error> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if !self.dom(tol).contains(x, tol)?.contained {
            return Ok(None);
        }
        Ok(Some(ImageCoset {
            particular: self.least_norm_particular(x, tol),
            offset: self.at_zero(tol),
        }))
    }

    /// Least-norm `x*` with `(P_dom x, x*) ∈ gra A`; callers check domain
    /// membership separately.
    pub(crate) fn least_norm_particular(&self, x: &DVector<f64>, tol: &Tolerance) -> DVector<f64> {
        let (u, v) = self.graph_blocks();
        let c = linalg::least_squares(&u, x, tol);
        let raw = &v * c;
        let a0 = self.at_zero(tol);
        &raw - a0.project(&raw)
    }

    /// `ℝⁿ × {0}` or `{0} × ℝⁿ` inside ℝ²ⁿ.
    fn block_subspace(&self, first: bool) -> Subspace {
        let n = self.n;
        let mut basis = DMatrix::zeros(2 * n, n);
        for i in 0..n {
            basis[(if first { i } else { n + i }, i)] = 1.0;
        }
        Subspace::from_orthonormal(basis)
    }
}

/// Extracts an n-row block of a subspace of ℝ²ⁿ and re-orthonormalizes.
fn project_block(s: &Subspace, n: usize, row_offset: usize, tol: &Tolerance) -> Subspace {
    let block = s.basis().rows(row_offset, n).into_owned();
    Subspace::span_of_unit_scale_columns(&block, tol)
}

/// Stacks `(x, x*)` into a single ℝ²ⁿ vector.
pub fn stack_pair(n: usize, x: &DVector<f64>, xstar: &DVector<f64>) -> Result<DVector<f64>, Error> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if xstar.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: xstar.len(),
        });
    }
    let mut w = DVector::zeros(2 * n);
    for i in 0..n {
        w[i] = x[i];
        w[n + i] = xstar[i];
    }
    Ok(w)
}
