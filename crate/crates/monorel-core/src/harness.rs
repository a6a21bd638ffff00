//! Seeded generators and randomized verification suites.
//!
//! Relations are generated as `{(x, Sx + z) : x ∈ D, z ∈ Z}` with `S = P + K`
//! (`P` PSD, `K` skew), `D` a random domain subspace, and `Z ⊆ D⊥` the
//! multivaluedness offset; `⟨x, Sx + z⟩ = ⟨x, Px⟩ ≥ 0` makes every output
//! monotone by construction. Forcing `Z = D⊥` yields maximal instances,
//! additionally forcing `P = 0` yields skew ones.
//!
//! Each suite runs `trials` independent repetitions; per-trial seeds are a
//! counter-mode hash of the master seed, so any failure replays in isolation.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::fitzpatrick::{
    conj_partial_quadratic, fitz_partial_quadratic, fitz_sum_check, partial_inf_conv,
    vanishing_on_adjoint_check, GraphForm,
};
use crate::linalg::Subspace;
use crate::monotone::{
    extend_to_maximal, halo_contains, is_maximal_monotone, is_monotone,
    is_monotonically_related, is_skew, q_eval,
};
use crate::relation::{stack_pair, LinearRelation};
use crate::tol::Tolerance;
use crate::value::ExtendedValue;

/// Relative tolerance for comparing the two Fitzpatrick-of-a-sum code paths.
pub const SUM_CHECK_REL_TOL: f64 = 1e-8;

/// What family a generated relation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// Monotone, possibly multivalued, possibly non-maximal.
    Monotone,
    /// Maximal monotone (offset forced to `D⊥`).
    Maximal,
    /// Skew and maximal (symmetric part forced to zero).
    Skew,
    /// A plain random matrix operator, not necessarily monotone.
    Matrix,
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorSpec {
    pub n: usize,
    /// Target domain dimension.
    pub dom_dim: usize,
    /// Slack between the offset `Z` and `D⊥`; 0 for maximal instances.
    pub offset_dim: usize,
    pub kind: RelationKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("ambient dimension must be >= 1".into()));
        }
        if self.dom_dim > self.n {
            return Err(Error::InvalidSpec(format!(
                "dom_dim {} exceeds n {}",
                self.dom_dim, self.n
            )));
        }
        match self.kind {
            RelationKind::Maximal | RelationKind::Skew => {
                if self.offset_dim != 0 {
                    return Err(Error::InvalidSpec(
                        "maximal/skew instances require offset_dim = 0".into(),
                    ));
                }
            }
            RelationKind::Matrix => {
                if self.dom_dim != self.n || self.offset_dim != 0 {
                    return Err(Error::InvalidSpec(
                        "matrix instances are full-domain and single-valued".into(),
                    ));
                }
            }
            RelationKind::Monotone => {}
        }
        Ok(())
    }
}

/// SplitMix64 finalizer; the counter-mode hash behind per-trial seeds.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic, independent seed for one trial of a suite.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    mix64(master ^ mix64(trial))
}

fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

/// Random k-dimensional subspace of ℝᵈ, by orthonormalizing a Gaussian
/// matrix (rotation-invariant).
pub fn random_subspace(rng: &mut impl Rng, d: usize, k: usize, tol: &Tolerance) -> Subspace {
    if k == 0 {
        return Subspace::zero(d);
    }
    Subspace::span_of_columns(&gaussian_matrix(rng, d, k), tol)
}

/// Random k-dimensional subspace inside a given container.
fn random_subspace_within(
    rng: &mut impl Rng,
    container: &Subspace,
    k: usize,
    tol: &Tolerance,
) -> Subspace {
    if k == 0 || container.dim() == 0 {
        return Subspace::zero(container.ambient_dim());
    }
    let coeffs = gaussian_matrix(rng, container.dim(), k.min(container.dim()));
    Subspace::span_of_columns(&(container.basis() * coeffs), tol)
}

/// Random point of a subspace with Gaussian coefficients.
pub fn random_point_in(rng: &mut impl Rng, s: &Subspace, scale: f64) -> DVector<f64> {
    if s.dim() == 0 {
        return DVector::zeros(s.ambient_dim());
    }
    s.basis() * (gaussian_vector(rng, s.dim()) * scale)
}

/// A completely unstructured linear relation: a random graph subspace of any
/// dimension up to 2n. Used by the suites that exercise identities holding
/// for every linear relation, monotone or not.
pub fn random_relation(rng: &mut impl Rng, n: usize, tol: &Tolerance) -> LinearRelation {
    let k = rng.random_range(0..=2 * n);
    let vectors: Vec<DVector<f64>> = (0..k).map(|_| gaussian_vector(rng, 2 * n)).collect();
    LinearRelation::from_graph_basis(n, &vectors, tol).expect("vectors have length 2n")
}

/// Core builder: graph `{(x, Sx + z) : x ∈ D, z ∈ Z}`.
fn build_relation(
    rng: &mut impl Rng,
    n: usize,
    dom_dim: usize,
    offset_dim: usize,
    kind: RelationKind,
    tol: &Tolerance,
) -> LinearRelation {
    let s = match kind {
        RelationKind::Monotone | RelationKind::Maximal => {
            // Condition-bounded PSD part: a symmetric eigenvalue straddling
            // the rank cutoff would put pseudoinverse-based evaluations
            // beyond double precision, which is a conditioning artifact and
            // not one of the identities under test. Redraw the rare
            // near-singular factor.
            let r = loop {
                let r = gaussian_matrix(rng, n, n);
                let (_, sigma, _) = crate::jacobi::svd(&r);
                let smax = sigma.max();
                if sigma.min() >= 1e-3 * smax.max(f64::MIN_POSITIVE) {
                    break r;
                }
            };
            let b = gaussian_matrix(rng, n, n);
            r.transpose() * &r + (&b - b.transpose()) * 0.5
        }
        RelationKind::Skew => {
            let b = gaussian_matrix(rng, n, n);
            (&b - b.transpose()) * 0.5
        }
        RelationKind::Matrix => gaussian_matrix(rng, n, n),
    };
    let d = random_subspace(rng, n, dom_dim, tol);
    let dperp = d.complement(tol);
    let z = match kind {
        RelationKind::Maximal | RelationKind::Skew => dperp,
        RelationKind::Matrix => Subspace::zero(n),
        RelationKind::Monotone => {
            let z_dim = (n - dom_dim).saturating_sub(offset_dim);
            random_subspace_within(rng, &dperp, z_dim, tol)
        }
    };
    graph_from_parts(&s, &d, &z, tol)
}

fn graph_from_parts(
    s: &DMatrix<f64>,
    d: &Subspace,
    z: &Subspace,
    tol: &Tolerance,
) -> LinearRelation {
    let n = d.ambient_dim();
    let mut cols = Vec::with_capacity(d.dim() + z.dim());
    for x in d.basis_columns() {
        cols.push(stack_pair(n, &x, &(s * &x)).expect("length n"));
    }
    for w in z.basis_columns() {
        cols.push(stack_pair(n, &DVector::zeros(n), &w).expect("length n"));
    }
    LinearRelation::from_graph_basis(n, &cols, tol).expect("vectors have length 2n")
}

/// Generates a monotone relation; the offset slack controls how far from
/// maximal it is.
pub fn gen_monotone(spec: &GeneratorSpec, tol: &Tolerance) -> Result<LinearRelation, Error> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let a = build_relation(&mut rng, spec.n, spec.dom_dim, spec.offset_dim, spec.kind, tol);
    let ok = match spec.kind {
        RelationKind::Monotone => is_monotone(&a, tol).verdict,
        RelationKind::Maximal => is_maximal_monotone(&a, tol).verdict,
        RelationKind::Skew => is_skew(&a, tol).verdict && is_maximal_monotone(&a, tol).verdict,
        RelationKind::Matrix => true,
    };
    if !ok {
        return Err(Error::InvalidSpec(format!(
            "generated instance failed its postcondition: {spec:?}"
        )));
    }
    Ok(a)
}

/// Maximal monotone generator: the offset is the whole of `D⊥`.
pub fn gen_maximal(spec: &GeneratorSpec, tol: &Tolerance) -> Result<LinearRelation, Error> {
    gen_monotone(
        &GeneratorSpec {
            kind: RelationKind::Maximal,
            offset_dim: 0,
            ..*spec
        },
        tol,
    )
}

/// Skew generator: symmetric part zero, offset `D⊥`.
pub fn gen_skew(spec: &GeneratorSpec, tol: &Tolerance) -> Result<LinearRelation, Error> {
    gen_monotone(
        &GeneratorSpec {
            kind: RelationKind::Skew,
            offset_dim: 0,
            ..*spec
        },
        tol,
    )
}

/// Monotone but not maximal, near the boundary: the offset is short of
/// `D⊥` by exactly one dimension (requires `dom_dim < n`).
fn build_nonmaximal(rng: &mut impl Rng, n: usize, tol: &Tolerance) -> LinearRelation {
    let dom_dim = rng.random_range(0..n);
    build_relation(rng, n, dom_dim, 1, RelationKind::Monotone, tol)
}

/// Maximal but not skew: a symmetric rank-one added to a skew matrix, with
/// the rank-one direction forced to meet the domain.
fn build_nonskew_maximal(rng: &mut impl Rng, n: usize, tol: &Tolerance) -> LinearRelation {
    let dom_dim = rng.random_range(1..=n);
    let d = random_subspace(rng, n, dom_dim, tol);
    let b = gaussian_matrix(rng, n, n);
    let k = (&b - b.transpose()) * 0.5;
    let r = loop {
        let r = gaussian_vector(rng, n);
        if d.project(&r).norm() > 0.1 {
            break r;
        }
    };
    let s = k + &r * r.transpose();
    graph_from_parts(&s, &d, &d.complement(tol), tol)
}

/// Not monotone: a symmetric rank-one subtracted from a skew matrix.
fn build_nonmonotone(rng: &mut impl Rng, n: usize, tol: &Tolerance) -> LinearRelation {
    let dom_dim = rng.random_range(1..=n);
    let d = random_subspace(rng, n, dom_dim, tol);
    let b = gaussian_matrix(rng, n, n);
    let k = (&b - b.transpose()) * 0.5;
    let r = loop {
        let r = gaussian_vector(rng, n);
        if d.project(&r).norm() > 0.1 {
            break r;
        }
    };
    let s = k - &r * r.transpose();
    graph_from_parts(&s, &d, &Subspace::zero(n), tol)
}

/// Mixed sample points for function-equality checks: graph points,
/// `gra(−A*)` points, Gaussian points, and points of the finiteness domain
/// of `F_A`.
pub fn sample_fitz_points(
    a: &LinearRelation,
    count: usize,
    rng: &mut impl Rng,
    tol: &Tolerance,
) -> Vec<(DVector<f64>, DVector<f64>)> {
    let n = a.n();
    let neg_adj = a.adjoint(tol).negate(tol);
    let fitz_domain = fitz_partial_quadratic(a, tol).ok().map(|p| p.domain().clone());
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let w = match i % 4 {
            0 => random_point_in(rng, a.graph(), 1.5),
            1 => random_point_in(rng, neg_adj.graph(), 1.5),
            2 => gaussian_vector(rng, 2 * n),
            _ => match &fitz_domain {
                Some(dom) => random_point_in(rng, dom, 1.5),
                None => gaussian_vector(rng, 2 * n),
            },
        };
        points.push((w.rows(0, n).into_owned(), w.rows(n, n).into_owned()));
    }
    points
}

/// Mixed sample points for halo-versus-domain agreement: domain points,
/// Gaussian points, and points of `(A0)⊥` (where any halo excess lives).
fn sample_halo_points(
    a: &LinearRelation,
    count: usize,
    rng: &mut impl Rng,
    tol: &Tolerance,
) -> Vec<DVector<f64>> {
    let dom = a.dom(tol);
    let a0_perp = a.at_zero(tol).complement(tol);
    (0..count)
        .map(|i| match i % 3 {
            0 => random_point_in(rng, &dom, 1.5),
            1 => gaussian_vector(rng, a.n()),
            _ => random_point_in(rng, &a0_perp, 1.5),
        })
        .collect()
}

/// One recorded violation: enough to replay the trial in isolation.
#[derive(Debug, Clone)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub instance: String,
    pub invariant: String,
    pub margin: f64,
}

/// Outcome of a suite run; empty `failures` means the suite passed.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All suite names, in the order `run_all` executes them.
pub const SUITE_NAMES: &[&str] = &[
    "linearity",
    "adjoint-pairing",
    "closure-identities",
    "monotone-basics",
    "brezis-browder",
    "adjoint-identities",
    "maximality",
    "halo",
    "extension",
    "fitz-inequality",
    "fitz-vanishing",
    "fitz-conjugate",
    "fitz-sum",
    "skew-family",
];

struct Trial<'a> {
    rng: ChaCha8Rng,
    trial: usize,
    seed: u64,
    n: usize,
    tol: &'a Tolerance,
    instance: String,
    failures: &'a mut Vec<Failure>,
}

impl<'a> Trial<'a> {
    fn describe(&mut self, text: impl Into<String>) {
        self.instance = text.into();
    }

    fn check(&mut self, ok: bool, invariant: &str, margin: f64) {
        if !ok {
            self.failures.push(Failure {
                trial: self.trial,
                seed: self.seed,
                instance: self.instance.clone(),
                invariant: invariant.to_string(),
                margin,
            });
        }
    }

    fn check_report(&mut self, report: &crate::monotone::CheckReport, invariant: &str) {
        self.check(report.verdict, invariant, report.margin);
    }

    fn value_close(&mut self, a: f64, b: f64, invariant: &str) {
        let scale = 1.0_f64.max(a.abs()).max(b.abs());
        self.value_close_scaled(a, b, scale, invariant);
    }

    /// For comparisons whose operands are much larger than the result
    /// (inner-product cancellation), the caller passes the operand scale.
    fn value_close_scaled(&mut self, a: f64, b: f64, scale: f64, invariant: &str) {
        let slack = self.tol.atol * scale.max(1.0) - (a - b).abs();
        self.check(slack >= 0.0, invariant, slack);
    }

    fn subspaces_equal(&mut self, s: &Subspace, t: &Subspace, invariant: &str) {
        let residual = s.equality_residual(t);
        self.check(
            s.dim() == t.dim() && residual <= self.tol.atol,
            invariant,
            -residual,
        );
    }

    fn contained_in(&mut self, s: &Subspace, t: &Subspace, invariant: &str) {
        let mut worst = 0.0_f64;
        for v in s.basis_columns() {
            worst = worst.max((&v - t.project(&v)).norm());
        }
        self.check(worst <= self.tol.atol, invariant, -worst);
    }

    fn monotone_instance(&mut self) -> LinearRelation {
        let n = self.n;
        let dom_dim = self.rng.random_range(0..=n);
        let offset_dim = self.rng.random_range(0..=(n - dom_dim));
        self.describe(format!("monotone n={n} dom={dom_dim} offset={offset_dim}"));
        build_relation(
            &mut self.rng,
            n,
            dom_dim,
            offset_dim,
            RelationKind::Monotone,
            self.tol,
        )
    }

    fn maximal_instance(&mut self) -> LinearRelation {
        let n = self.n;
        let dom_dim = self.rng.random_range(0..=n);
        self.describe(format!("maximal n={n} dom={dom_dim}"));
        build_relation(
            &mut self.rng,
            n,
            dom_dim,
            0,
            RelationKind::Maximal,
            self.tol,
        )
    }
}

type SuiteFn = fn(&mut Trial<'_>);

fn suite_fn(name: &str) -> Option<SuiteFn> {
    Some(match name {
        "linearity" => suite_linearity,
        "adjoint-pairing" => suite_adjoint_pairing,
        "closure-identities" => suite_closure_identities,
        "monotone-basics" => suite_monotone_basics,
        "brezis-browder" => suite_brezis_browder,
        "adjoint-identities" => suite_adjoint_identities,
        "maximality" => suite_maximality,
        "halo" => suite_halo,
        "extension" => suite_extension,
        "fitz-inequality" => suite_fitz_inequality,
        "fitz-vanishing" => suite_fitz_vanishing,
        "fitz-conjugate" => suite_fitz_conjugate,
        "fitz-sum" => suite_fitz_sum,
        "skew-family" => suite_skew_family,
        _ => return None,
    })
}

/// Runs one named suite. Deterministic: identical arguments produce an
/// identical result, independent of execution order.
pub fn run_suite(
    name: &str,
    n_range: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<SuiteResult, Error> {
    let f = suite_fn(name).ok_or_else(|| Error::UnknownSuite {
        name: name.to_string(),
        known: SUITE_NAMES.join(", "),
    })?;
    let lo = (*n_range.start()).max(1);
    let hi = (*n_range.end()).max(lo);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let tseed = trial_seed(seed, trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(tseed);
        let n = rng.random_range(lo..=hi);
        let mut ctx = Trial {
            rng,
            trial,
            seed: tseed,
            n,
            tol,
            instance: String::new(),
            failures: &mut failures,
        };
        f(&mut ctx);
    }
    failures.sort_by_key(|f| f.trial);
    Ok(SuiteResult {
        suite: name.to_string(),
        trials,
        failures,
    })
}

/// Runs every suite with the same parameters.
pub fn run_all(
    n_range: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Vec<SuiteResult> {
    SUITE_NAMES
        .iter()
        .map(|name| {
            run_suite(name, n_range.clone(), trials, seed, tol).expect("known suite name")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Suite bodies.

/// Image cosets respect `A(αx + βy) = αAx + βAy`: same offset, particular
/// solutions congruent modulo `A0`; and `Ax = x* + A0` for graph pairs.
fn suite_linearity(t: &mut Trial<'_>) {
    let n = t.n;
    let a = random_relation(&mut t.rng, n, t.tol);
    t.describe(format!("general n={n} graph_dim={}", a.graph().dim()));
    let dom = a.dom(t.tol);
    if dom.dim() == 0 {
        return;
    }
    let a0 = a.at_zero(t.tol);
    let x = random_point_in(&mut t.rng, &dom, 1.0);
    let y = random_point_in(&mut t.rng, &dom, 1.0);
    let (alpha, beta): (f64, f64) = (t.rng.random_range(-2.0..2.0), t.rng.random_range(-2.0..2.0));
    let combo = &x * alpha + &y * beta;

    let px = a.image(&x, t.tol).unwrap();
    let py = a.image(&y, t.tol).unwrap();
    let pc = a.image(&combo, t.tol).unwrap();
    match (px, py, pc) {
        (Some(px), Some(py), Some(pc)) => {
            let lin =
                px.particular() * alpha + py.particular() * beta - pc.particular();
            let defect = (&lin - a0.project(&lin)).norm();
            let scale = 1.0_f64.max(pc.particular().norm());
            t.check(
                defect <= t.tol.atol * scale,
                "image_linearity_mod_A0",
                -defect,
            );
        }
        _ => t.check(false, "image_defined_on_domain", f64::NEG_INFINITY),
    }

    // A graph pair (x, x*) has Ax = x* + A0.
    let w = random_point_in(&mut t.rng, a.graph(), 1.0);
    let gx = w.rows(0, n).into_owned();
    let gxs = w.rows(n, n).into_owned();
    if let Some(coset) = a.image(&gx, t.tol).unwrap() {
        let diff = &gxs - coset.particular();
        let defect = (&diff - a0.project(&diff)).norm();
        t.check(
            defect <= t.tol.atol * 1.0_f64.max(gxs.norm()),
            "image_coset_contains_graph_value",
            -defect,
        );
    } else {
        t.check(false, "graph_point_in_domain", f64::NEG_INFINITY);
    }
}

/// `⟨A*x, y⟩ = ⟨x, Ay⟩` for x ∈ dom A*, y ∈ dom A; both sides are
/// representative-independent.
fn suite_adjoint_pairing(t: &mut Trial<'_>) {
    let n = t.n;
    let a = random_relation(&mut t.rng, n, t.tol);
    t.describe(format!("general n={n} graph_dim={}", a.graph().dim()));
    let adj = a.adjoint(t.tol);
    let dom_a = a.dom(t.tol);
    let dom_adj = adj.dom(t.tol);
    if dom_a.dim() == 0 || dom_adj.dim() == 0 {
        return;
    }
    for _ in 0..5 {
        let x = random_point_in(&mut t.rng, &dom_adj, 1.0);
        let y = random_point_in(&mut t.rng, &dom_a, 1.0);
        let astar_x = adj.image(&x, t.tol).unwrap();
        let a_y = a.image(&y, t.tol).unwrap();
        match (astar_x, a_y) {
            (Some(axs), Some(ay)) => {
                let lhs = axs.particular().dot(&y);
                let rhs = x.dot(ay.particular());
                // Inner products of possibly large particulars: scale the
                // comparison by the operands, not the (cancelled) values.
                let scale = (axs.particular().norm() * y.norm())
                    .max(x.norm() * ay.particular().norm());
                t.value_close_scaled(lhs, rhs, scale, "adjoint_pairing");
            }
            _ => t.check(false, "image_defined_on_domain", f64::NEG_INFINITY),
        }
    }
}

/// Closure identities (closures trivial in finite dimension): `dom A =
/// (A*0)⊥`, `(ker A)⊥ = ran A*`, `dom A* = (A0)⊥`, `A** = A`, and
/// inverse/adjoint commutation.
fn suite_closure_identities(t: &mut Trial<'_>) {
    let n = t.n;
    let a = random_relation(&mut t.rng, n, t.tol);
    t.describe(format!("general n={n} graph_dim={}", a.graph().dim()));
    let adj = a.adjoint(t.tol);

    let dom = a.dom(t.tol);
    let astar0_perp = adj.at_zero(t.tol).complement(t.tol);
    t.subspaces_equal(&dom, &astar0_perp, "dom_equals_adjoint_at_zero_perp");

    let ker_perp = a.ker(t.tol).complement(t.tol);
    let ran_adj = adj.ran(t.tol);
    t.subspaces_equal(&ker_perp, &ran_adj, "ker_perp_equals_adjoint_range");

    let dom_adj = adj.dom(t.tol);
    let a0_perp = a.at_zero(t.tol).complement(t.tol);
    t.subspaces_equal(&dom_adj, &a0_perp, "adjoint_dom_equals_at_zero_perp");

    let double = adj.adjoint(t.tol);
    t.subspaces_equal(double.graph(), a.graph(), "double_adjoint_restores_graph");

    let left = a.inverse().adjoint(t.tol);
    let right = a.adjoint(t.tol).inverse();
    t.subspaces_equal(left.graph(), right.graph(), "adjoint_inverse_commute");

    t.check(
        a.graph().dim() + adj.graph().dim() == 2 * n,
        "graph_dims_complementary",
        0.0,
    );
}

/// Monotone basics: domain-offset orthogonality, the parallelogram identity
/// of `q_A`, nonnegativity, the monotonically-related normal component, the
/// one-point extension soundness, and a non-monotone negative.
fn suite_monotone_basics(t: &mut Trial<'_>) {
    let n = t.n;
    let a = t.monotone_instance();
    let dom = a.dom(t.tol);
    let a0 = a.at_zero(t.tol);

    t.contained_in(&dom, &a0.complement(t.tol), "dom_subset_at_zero_perp");
    t.contained_in(&a0, &dom.complement(t.tol), "at_zero_subset_dom_perp");

    if dom.dim() > 0 {
        let x = random_point_in(&mut t.rng, &dom, 1.0);
        let y = random_point_in(&mut t.rng, &dom, 1.0);
        let lambda: f64 = t.rng.random_range(-1.0..2.0);
        let q = |v: &DVector<f64>, t: &mut Trial<'_>| -> Option<f64> {
            match q_eval(&a, v, t.tol) {
                Ok(ExtendedValue::Finite(val)) => Some(val),
                _ => None,
            }
        };
        let combo = &x * lambda + &y * (1.0 - lambda);
        let diff = &x - &y;
        match (q(&x, t), q(&y, t), q(&combo, t), q(&diff, t)) {
            (Some(qx), Some(qy), Some(qc), Some(qd)) => {
                t.check(qx >= -t.tol.atol, "q_nonnegative_on_domain", qx);
                let lhs = lambda * qx + (1.0 - lambda) * qy - qc;
                let rhs = lambda * (1.0 - lambda) * qd;
                t.value_close(lhs, rhs, "q_parallelogram_identity");
            }
            _ => t.check(false, "q_finite_on_domain", f64::NEG_INFINITY),
        }

        // A domain point with a (dom A)⊥ perturbation of its value is
        // monotonically related, and its normal component is recovered.
        let base = a.image(&x, t.tol).unwrap().unwrap().particular().clone();
        let w = random_point_in(&mut t.rng, &dom.complement(t.tol), 1.0);
        let xstar = &base + &w;
        let related = is_monotonically_related(&a, &x, &xstar, t.tol).unwrap();
        t.check_report(&related, "dom_perp_shift_is_related");
        let normal = &xstar - &base;
        let defect = dom.project(&normal).norm();
        t.check(
            defect <= t.tol.atol * 1.0_f64.max(normal.norm()),
            "related_offset_in_dom_perp",
            -defect,
        );

        // Extending the graph by a monotonically related point stays
        // monotone.
        let mut cols = a.graph().basis_columns();
        cols.push(stack_pair(n, &x, &xstar).unwrap());
        let extended = LinearRelation::from_graph_basis(n, &cols, t.tol).unwrap();
        t.check_report(
            &is_monotone(&extended, t.tol),
            "one_point_extension_monotone",
        );
    }

    let bad = build_nonmonotone(&mut t.rng, n, t.tol);
    t.check(
        !is_monotone(&bad, t.tol).verdict,
        "nonmonotone_negative_detected",
        0.0,
    );
}

/// Brézis–Browder: maximality of `A`, monotonicity of `A*`, and maximality
/// of `A*` are all equivalent for closed-graph monotone relations.
fn suite_brezis_browder(t: &mut Trial<'_>) {
    let a = t.monotone_instance();
    let adj = a.adjoint(t.tol);
    let max_a = is_maximal_monotone(&a, t.tol).verdict;
    let mono_adj = is_monotone(&adj, t.tol).verdict;
    let max_adj = is_maximal_monotone(&adj, t.tol).verdict;
    t.check(
        max_a == mono_adj && mono_adj == max_adj,
        "brezis_browder_equivalence",
        0.0,
    );
}

/// For maximal monotone relations: `ker A = ker A*`, `ran A = ran A*`,
/// `dom A = dom A* = (A0)⊥ = (A*0)⊥`.
fn suite_adjoint_identities(t: &mut Trial<'_>) {
    let a = t.maximal_instance();
    let adj = a.adjoint(t.tol);
    t.subspaces_equal(&a.ker(t.tol), &adj.ker(t.tol), "ker_equals_adjoint_ker");
    t.subspaces_equal(&a.ran(t.tol), &adj.ran(t.tol), "ran_equals_adjoint_ran");
    let dom = a.dom(t.tol);
    t.subspaces_equal(&dom, &adj.dom(t.tol), "dom_equals_adjoint_dom");
    t.subspaces_equal(
        &dom,
        &a.at_zero(t.tol).complement(t.tol),
        "dom_equals_at_zero_perp",
    );
    t.subspaces_equal(
        &dom,
        &adj.at_zero(t.tol).complement(t.tol),
        "dom_equals_adjoint_at_zero_perp",
    );
}

/// Maximality of one positive and one near-boundary negative instance, by
/// three independent routes: the algebraic criterion, the graph-dimension
/// oracle, and sampled halo-versus-domain agreement.
fn suite_maximality(t: &mut Trial<'_>) {
    let n = t.n;
    let samples = 50;

    let pos = t.maximal_instance();
    maximality_three_ways(t, &pos, true, samples);

    let neg = build_nonmaximal(&mut t.rng, n, t.tol);
    t.describe(format!(
        "nonmaximal n={n} dom={} offset_dim={}",
        neg.dom(t.tol).dim(),
        n - neg.dom(t.tol).dim() - neg.at_zero(t.tol).dim()
    ));
    maximality_three_ways(t, &neg, false, samples);
}

fn maximality_three_ways(t: &mut Trial<'_>, a: &LinearRelation, expected: bool, samples: usize) {
    let criterion = is_maximal_monotone(a, t.tol).verdict;
    let oracle = is_monotone(a, t.tol).verdict && a.graph().dim() == a.n();
    let dom = a.dom(t.tol);
    let mut halo_matches_dom = true;
    let mut mismatch_margin = f64::INFINITY;
    let points = sample_halo_points(a, samples, &mut t.rng, t.tol);
    for x in &points {
        let halo = halo_contains(a, x, t.tol).unwrap();
        let in_dom = dom.contains(x, t.tol).unwrap().contained;
        if halo.verdict != in_dom {
            halo_matches_dom = false;
            mismatch_margin = mismatch_margin.min(halo.margin);
        }
    }
    t.check(criterion == expected, "maximality_criterion", 0.0);
    t.check(oracle == expected, "maximality_dimension_oracle", 0.0);
    t.check(
        halo_matches_dom == expected,
        "maximality_halo_sampling",
        if halo_matches_dom { 0.0 } else { mismatch_margin },
    );
}

/// Halo sandwich `dom A ⊂ halo A ⊂ (A0)⊥`, plus the all-of-ℝⁿ halo of a
/// zero-on-D relation.
fn suite_halo(t: &mut Trial<'_>) {
    let n = t.n;
    let a = t.monotone_instance();
    let dom = a.dom(t.tol);
    let a0 = a.at_zero(t.tol);
    let points = sample_halo_points(&a, 15, &mut t.rng, t.tol);
    for x in &points {
        let report = halo_contains(&a, x, t.tol).unwrap();
        let in_dom = dom.contains(x, t.tol).unwrap().contained;
        if in_dom {
            t.check(report.verdict, "dom_subset_halo", report.margin);
        }
        if report.verdict {
            let a0_part = a0.project(x).norm();
            t.check(
                a0_part <= t.tol.atol * 1.0_f64.max(x.norm()),
                "halo_subset_at_zero_perp",
                -a0_part,
            );
        }
    }

    // Zero on a proper subspace: every point of ℝⁿ is in the halo.
    let dom_dim = t.rng.random_range(0..n);
    let d = random_subspace(&mut t.rng, n, dom_dim, t.tol);
    let zero_on_d = graph_from_parts(&DMatrix::zeros(n, n), &d, &Subspace::zero(n), t.tol);
    t.describe(format!("zero-on-D n={n} dom={dom_dim}"));
    for _ in 0..5 {
        let x = gaussian_vector(&mut t.rng, n);
        let report = halo_contains(&zero_on_d, &x, t.tol).unwrap();
        t.check_report(&report, "zero_on_d_halo_is_everything");
    }
}

/// `extend_to_maximal` produces a maximal extension containing the original
/// graph and fixes already-maximal inputs.
fn suite_extension(t: &mut Trial<'_>) {
    let n = t.n;
    let a = build_nonmaximal(&mut t.rng, n, t.tol);
    t.describe(format!("nonmaximal n={n} dom={}", a.dom(t.tol).dim()));
    match extend_to_maximal(&a, t.tol) {
        Ok(ext) => {
            t.check_report(&is_maximal_monotone(&ext, t.tol), "extension_is_maximal");
            t.check(
                ext.graph().dim() == n,
                "extension_dimension_oracle",
                ext.graph().dim() as f64 - n as f64,
            );
            t.contained_in(a.graph(), ext.graph(), "extension_contains_graph");
            t.subspaces_equal(&ext.dom(t.tol), &a.dom(t.tol), "extension_keeps_domain");
        }
        Err(_) => t.check(false, "extension_applies_to_monotone", f64::NEG_INFINITY),
    }

    let m = t.maximal_instance();
    match extend_to_maximal(&m, t.tol) {
        Ok(ext) => t.subspaces_equal(ext.graph(), m.graph(), "extension_fixes_maximal"),
        Err(_) => t.check(false, "extension_applies_to_monotone", f64::NEG_INFINITY),
    }
}

/// `F_A^{*⊺} ≥ F_A ≥ ⟨·,·⟩` with +∞ dominating, equality of all three on
/// graph points, and the first-block projection of both finiteness domains
/// equal to `dom A`.
fn suite_fitz_inequality(t: &mut Trial<'_>) {
    let a = t.maximal_instance();
    let n = a.n();
    let gf = GraphForm::new(&a, t.tol);
    let points = sample_fitz_points(&a, 50, &mut t.rng, t.tol);
    for (x, xstar) in &points {
        let fitz = gf.fitz_eval(x, xstar, t.tol).unwrap();
        let upper = crate::fitzpatrick::fitz_star_transpose_eval(&a, x, xstar, t.tol).unwrap();
        let pairing = ExtendedValue::finite(x.dot(xstar));
        let scale = 1.0_f64.max(x.norm_squared()).max(xstar.norm_squared());
        let slack = t.tol.atol * scale;
        t.check(
            upper.ge_within(&fitz, slack),
            "star_transpose_dominates_fitz",
            0.0,
        );
        t.check(fitz.ge_within(&pairing, slack), "fitz_dominates_pairing", 0.0);
    }
    // Graph values: both extremes equal the pairing.
    for _ in 0..5 {
        let w = random_point_in(&mut t.rng, a.graph(), 1.0);
        let x = w.rows(0, n).into_owned();
        let xstar = w.rows(n, n).into_owned();
        let pairing = x.dot(&xstar);
        match gf.fitz_eval(&x, &xstar, t.tol).unwrap() {
            ExtendedValue::Finite(v) => t.value_close(v, pairing, "fitz_equals_pairing_on_graph"),
            _ => t.check(false, "fitz_finite_on_graph", f64::NEG_INFINITY),
        }
        match crate::fitzpatrick::fitz_star_transpose_eval(&a, &x, &xstar, t.tol).unwrap() {
            ExtendedValue::Finite(v) => {
                t.value_close(v, pairing, "star_transpose_equals_pairing_on_graph")
            }
            _ => t.check(false, "star_transpose_finite_on_graph", f64::NEG_INFINITY),
        }
    }
    // Domain sandwich collapses in finite dimension.
    let dom = a.dom(t.tol);
    let lower = fitz_partial_quadratic(&a, t.tol).unwrap();
    let first_block = Subspace::span_of_unit_scale_columns(
        &lower.domain().basis().rows(0, n).into_owned(),
        t.tol,
    );
    t.subspaces_equal(&first_block, &dom, "fitz_domain_projects_to_dom");
    let upper = conj_partial_quadratic(&a, t.tol).unwrap();
    let first_block = Subspace::span_of_unit_scale_columns(
        &upper.domain().basis().rows(0, n).into_owned(),
        t.tol,
    );
    t.subspaces_equal(&first_block, &dom, "conj_domain_projects_to_dom");
}

/// `gra(−A*) = (gra A⁻¹)⊥` and `F_A ≡ 0` there, for merely monotone inputs.
fn suite_fitz_vanishing(t: &mut Trial<'_>) {
    let a = t.monotone_instance();
    let report = vanishing_on_adjoint_check(&a, 20, &mut t.rng, t.tol);
    t.check_report(&report, "vanishing_on_graph_of_neg_adjoint");
    let subs = report.subchecks.clone();
    for sub in &subs {
        t.check(sub.verdict, &sub.predicate, sub.margin);
    }
}

/// Conjugate formula and the three-way monotonically-related
/// characterization: related ⟺ `F_A ≤ ⟨·,·⟩` ⟺ graph membership.
fn suite_fitz_conjugate(t: &mut Trial<'_>) {
    let a = t.maximal_instance();
    let gf = GraphForm::new(&a, t.tol);
    let q = crate::monotone::graph_pairing_form(&a, t.tol);
    let points = sample_fitz_points(&a, 15, &mut t.rng, t.tol);
    for (x, xstar) in &points {
        let related =
            crate::monotone::monotonically_related_with(&a, &q, x, xstar, t.tol).verdict;
        let pairing = x.dot(xstar);
        let scale = 1.0_f64.max(x.norm_squared()).max(xstar.norm_squared());
        let fitz_below = match gf.fitz_eval(x, xstar, t.tol).unwrap() {
            ExtendedValue::Finite(v) => v <= pairing + t.tol.atol * scale,
            ExtendedValue::PosInf => false,
        };
        let in_graph = a.graph_contains(x, xstar, t.tol).unwrap();
        t.check(
            related == fitz_below && fitz_below == in_graph,
            "related_fitz_graph_equivalence",
            0.0,
        );
        // Conjugate formula: pairing on the inverse graph, +∞ off it.
        let conj = crate::fitzpatrick::fitzpatrick_conj_eval(&a, xstar, x, t.tol).unwrap();
        match conj {
            ExtendedValue::Finite(v) => {
                t.check(in_graph, "conj_finite_only_on_graph", 0.0);
                t.value_close(v, pairing, "conj_value_is_pairing");
            }
            ExtendedValue::PosInf => t.check(!in_graph, "conj_infinite_off_graph", 0.0),
        }
    }
}

/// `F_{A+B} = F_A □₂ F_B` with exact attainment, `A+B` maximal, and the
/// inf-convolution dominating the pairing.
fn suite_fitz_sum(t: &mut Trial<'_>) {
    let n = t.n;
    let dom_a = t.rng.random_range(0..=n);
    let dom_b = t.rng.random_range(0..=n);
    t.describe(format!("maximal pair n={n} dom_a={dom_a} dom_b={dom_b}"));
    let a = build_relation(&mut t.rng, n, dom_a, 0, RelationKind::Maximal, t.tol);
    let b = build_relation(&mut t.rng, n, dom_b, 0, RelationKind::Maximal, t.tol);
    let sum = a.add(&b, t.tol).unwrap();
    t.check_report(&is_maximal_monotone(&sum, t.tol), "sum_is_maximal_monotone");
    let common = a.dom(t.tol).intersect(&b.dom(t.tol), t.tol).unwrap();
    let offsets = a.at_zero(t.tol).sum(&b.at_zero(t.tol), t.tol).unwrap();
    t.check(
        sum.graph().dim() == common.dim() + offsets.dim(),
        "sum_graph_dimension",
        0.0,
    );

    let points = sample_fitz_points(&sum, 20, &mut t.rng, t.tol);
    let report = fitz_sum_check(&a, &b, &points, SUM_CHECK_REL_TOL, t.tol).unwrap();
    t.check_report(&report, "fitz_sum_equals_inf_conv");

    for (x, xstar) in points.iter().take(8) {
        let (value, argmin) = partial_inf_conv(&a, &b, x, xstar, t.tol).unwrap();
        let pairing = ExtendedValue::finite(x.dot(xstar));
        let scale = 1.0_f64.max(x.norm_squared()).max(xstar.norm_squared());
        t.check(
            value.ge_within(&pairing, t.tol.atol * scale),
            "inf_conv_dominates_pairing",
            0.0,
        );
        if let (ExtendedValue::Finite(v), Some(y)) = (value, argmin.as_ref()) {
            // Exactness: the returned minimizer attains the infimum.
            let fa = crate::fitzpatrick::fitzpatrick_eval(&a, x, &(xstar - y), t.tol).unwrap();
            let fb = crate::fitzpatrick::fitzpatrick_eval(&b, x, y, t.tol).unwrap();
            match fa + fb {
                ExtendedValue::Finite(total) => {
                    let slack =
                        SUM_CHECK_REL_TOL * 1.0_f64.max(v.abs()).max(total.abs()) - (v - total).abs();
                    t.check(slack >= 0.0, "inf_conv_exactness", slack);
                }
                ExtendedValue::PosInf => {
                    t.check(false, "inf_conv_argmin_feasible", f64::NEG_INFINITY)
                }
            }
        }
    }
}

/// Skew relations: `A` and `A*` maximal monotone, the Fitzpatrick family is
/// the singleton `{ι_{gra A}}`; non-skew maximal instances fail the
/// singleton test. Together with the `dom A = dom A*` sub-verdict this
/// checks the characterization in both directions.
fn suite_skew_family(t: &mut Trial<'_>) {
    let n = t.n;
    let dom_dim = t.rng.random_range(0..=n);
    t.describe(format!("skew n={n} dom={dom_dim}"));
    let a = build_relation(&mut t.rng, n, dom_dim, 0, RelationKind::Skew, t.tol);

    t.check_report(&is_skew(&a, t.tol), "generated_skew_is_skew");
    t.check_report(&is_maximal_monotone(&a, t.tol), "skew_is_maximal");
    t.check_report(
        &is_maximal_monotone(&a.adjoint(t.tol), t.tol),
        "skew_adjoint_is_maximal",
    );
    match crate::fitzpatrick::family_is_singleton(&a, t.tol) {
        Ok(report) => {
            t.check_report(&report, "skew_family_is_singleton");
            let domains_equal = report
                .subchecks
                .iter()
                .find(|s| s.predicate == "dom_equals_dom_adjoint")
                .map(|s| s.verdict)
                .unwrap_or(false);
            t.check(domains_equal, "skew_dom_equals_dom_adjoint", 0.0);
            let lower = fitz_partial_quadratic(&a, t.tol).unwrap();
            t.subspaces_equal(lower.domain(), a.graph(), "family_member_domain_is_graph");
            t.check(
                lower.vanishes_on_domain(t.tol),
                "family_member_vanishes_on_graph",
                0.0,
            );
        }
        Err(_) => t.check(false, "family_applies_to_maximal", f64::NEG_INFINITY),
    }

    let b = build_nonskew_maximal(&mut t.rng, n, t.tol);
    t.describe(format!("nonskew maximal n={n}"));
    t.check(!is_skew(&b, t.tol).verdict, "nonskew_negative_detected", 0.0);
    match crate::fitzpatrick::family_is_singleton(&b, t.tol) {
        Ok(report) => t.check(
            !report.verdict,
            "nonskew_family_not_singleton",
            report.margin,
        ),
        Err(_) => t.check(false, "family_applies_to_maximal", f64::NEG_INFINITY),
    }
}
