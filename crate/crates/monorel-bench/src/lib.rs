//! Shared fixtures for the benchmarks.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use monorel_core::harness::{gen_maximal, GeneratorSpec, RelationKind};
use monorel_core::{LinearRelation, Tolerance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

pub fn maximal_instance(n: usize, seed: u64, tol: &Tolerance) -> LinearRelation {
    gen_maximal(
        &GeneratorSpec {
            n,
            dom_dim: n / 2,
            offset_dim: 0,
            kind: RelationKind::Maximal,
            seed,
        },
        tol,
    )
    .expect("generator postcondition")
}
