//! A finite-dimensional calculus for monotone linear relations on ℝⁿ.
//!
//! A *linear relation* is a set-valued operator `A: ℝⁿ ⇉ ℝⁿ` whose graph
//! `{(x, x*) : x* ∈ Ax}` is a linear subspace of ℝ²ⁿ. This crate stores
//! relations by an orthonormal basis of that graph and builds everything on
//! top of tolerance-aware subspace algebra:
//!
//! * [`linalg`] — orthonormal subspaces, complements, intersections, PSD
//!   analysis with pseudoinverses;
//! * [`relation`] — the [`LinearRelation`] type and its algebra (inverse,
//!   adjoint, scaling, sums, domain/range/kernel slices);
//! * [`monotone`] — monotonicity, maximality and skewness predicates, the
//!   quadratic form `q_A`, halo membership, and maximal extensions;
//! * [`fitzpatrick`] — closed-form evaluation of the Fitzpatrick function,
//!   its conjugate, partial inf-convolution, and the family singleton test;
//! * [`harness`] — seeded generators for monotone / maximal / skew relations
//!   and randomized suites that exercise the identities relating all of the
//!   above.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so concurrent readers are always safe.

pub mod error;
mod jacobi;
pub mod fitzpatrick;
pub mod harness;
pub mod linalg;
pub mod monotone;
pub mod relation;
pub mod tol;
pub mod value;

pub use error::Error;
pub use fitzpatrick::{GraphForm, PartialQuadratic};
pub use harness::{GeneratorSpec, RelationKind, SuiteResult};
pub use linalg::{Subspace, SymmetricForm};
pub use monotone::{CheckReport, Witness};
pub use relation::{ImageCoset, LinearRelation};
pub use tol::Tolerance;
pub use value::ExtendedValue;
