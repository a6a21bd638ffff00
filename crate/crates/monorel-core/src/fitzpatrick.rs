//! Closed-form Fitzpatrick function machinery.
//!
//! For a monotone relation with graph basis split into `U` (points) and `V`
//! (values), the Fitzpatrick supremum over graph coefficients `c` is the
//! concave quadratic `bᵀc − cᵀQc` with `b = Uᵀx* + Vᵀx` and `Q = sym(UᵀV)`,
//! so
//!
//! ```text
//!   F_A(x, x*) = ¼ bᵀQ⁺b   if b ∈ range(Q),   +∞ otherwise.
//! ```
//!
//! The conjugate is the indicator of the inverse graph plus the pairing, and
//! both objects are quadratics restricted to a subspace of ℝ²ⁿ, which is what
//! [`PartialQuadratic`] carries. Non-monotone inputs are refused: every
//! identity used here assumes monotonicity, and a silently different closed
//! form invites misuse.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::Error;
use crate::linalg::{self, Subspace, SymmetricForm};
use crate::monotone::{CheckReport, Witness};
use crate::relation::{stack_pair, LinearRelation};
use crate::tol::Tolerance;
use crate::value::ExtendedValue;

/// Cached quadratic data of a graph: the block split and the eigen-analyzed
/// pairing form, deterministic for a given graph basis.
#[derive(Debug, Clone)]
pub struct GraphForm {
    n: usize,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
    q: SymmetricForm,
}

impl GraphForm {
    pub fn new(a: &LinearRelation, tol: &Tolerance) -> Self {
        let (u, v) = a.graph_blocks();
        let q = SymmetricForm::analyze(&(u.transpose() * &v), tol).expect("UᵀV is square");
        Self { n: a.n(), u, v, q }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn q(&self) -> &SymmetricForm {
        &self.q
    }

    pub fn is_monotone(&self, tol: &Tolerance) -> bool {
        self.q.is_psd(tol)
    }

    /// `b = Uᵀx* + Vᵀx`, the linear data of the supremum.
    pub fn rhs(&self, x: &DVector<f64>, xstar: &DVector<f64>) -> DVector<f64> {
        self.u.transpose() * xstar + self.v.transpose() * x
    }

    fn check_point(&self, x: &DVector<f64>, xstar: &DVector<f64>) -> Result<(), Error> {
        stack_pair(self.n, x, xstar).map(|_| ())
    }

    fn require_monotone(&self, tol: &Tolerance) -> Result<(), Error> {
        if self.is_monotone(tol) {
            Ok(())
        } else {
            Err(Error::NotMonotone)
        }
    }

    /// Closed-form `F_A(x, x*)`.
    pub fn fitz_eval(
        &self,
        x: &DVector<f64>,
        xstar: &DVector<f64>,
        tol: &Tolerance,
    ) -> Result<ExtendedValue, Error> {
        self.check_point(x, xstar)?;
        self.require_monotone(tol)?;
        let b = self.rhs(x, xstar);
        if !self.q.in_range(&b, tol) {
            return Ok(ExtendedValue::PosInf);
        }
        Ok(ExtendedValue::finite(self.q.quarter_quadratic(&b)))
    }
}

/// `F_A(x, x*)`, the supremum of `⟨x,y*⟩ + ⟨y,x*⟩ − ⟨y,y*⟩` over the graph.
pub fn fitzpatrick_eval(
    a: &LinearRelation,
    x: &DVector<f64>,
    xstar: &DVector<f64>,
    tol: &Tolerance,
) -> Result<ExtendedValue, Error> {
    GraphForm::new(a, tol).fitz_eval(x, xstar, tol)
}

/// `F_A*(x*, x) = ι_{gra A⁻¹}(x*, x) + ⟨x, x*⟩`: the pairing on the graph,
/// +∞ elsewhere.
pub fn fitzpatrick_conj_eval(
    a: &LinearRelation,
    xstar: &DVector<f64>,
    x: &DVector<f64>,
    tol: &Tolerance,
) -> Result<ExtendedValue, Error> {
    let gf = GraphForm::new(a, tol);
    gf.check_point(x, xstar)?;
    gf.require_monotone(tol)?;
    if a.graph_contains(x, xstar, tol)? {
        Ok(ExtendedValue::finite(x.dot(xstar)))
    } else {
        Ok(ExtendedValue::PosInf)
    }
}

/// `F_A^{*⊺}(x, x*) = F_A*(x*, x)`, the transpose-conjugate used by the
/// Fitzpatrick family extremes.
pub fn fitz_star_transpose_eval(
    a: &LinearRelation,
    x: &DVector<f64>,
    xstar: &DVector<f64>,
    tol: &Tolerance,
) -> Result<ExtendedValue, Error> {
    fitzpatrick_conj_eval(a, xstar, x, tol)
}

/// Partial inf-convolution `(F_A □₂ F_B)(x, x*) = inf_{y*} F_A(x, x*−y*) +
/// F_B(x, y*)`, with a minimizer when the value is finite.
///
/// Both closed forms are nonnegative where finite, so the infimum over the
/// (affine) feasible set is attained whenever that set is nonempty; an empty
/// set means the value is +∞.
pub fn partial_inf_conv(
    a: &LinearRelation,
    b: &LinearRelation,
    x: &DVector<f64>,
    xstar: &DVector<f64>,
    tol: &Tolerance,
) -> Result<(ExtendedValue, Option<DVector<f64>>), Error> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    let ga = GraphForm::new(a, tol);
    let gb = GraphForm::new(b, tol);
    ga.check_point(x, xstar)?;
    ga.require_monotone(tol)?;
    gb.require_monotone(tol)?;
    let n = a.n();
    let ka = ga.q().dim();
    let kb = gb.q().dim();

    // Finiteness of both terms is an affine constraint on y*:
    //   N_A Uᵀ_A (x* − y*) + N_A Vᵀ_A x = 0  and  N_B (Uᵀ_B y* + Vᵀ_B x) = 0.
    let na = DMatrix::identity(ka, ka) - ga.q().range_projector();
    let nb = DMatrix::identity(kb, kb) - gb.q().range_projector();
    let ca = &na * ga.u().transpose();
    let cb = &nb * gb.u().transpose();
    let da = &na * ga.rhs(x, xstar);
    let db = -(&nb * gb.v().transpose() * x);

    let mut c_mat = DMatrix::zeros(ka + kb, n);
    c_mat.rows_mut(0, ka).copy_from(&ca);
    c_mat.rows_mut(ka, kb).copy_from(&cb);
    let mut d = DVector::zeros(ka + kb);
    d.rows_mut(0, ka).copy_from(&da);
    d.rows_mut(ka, kb).copy_from(&db);

    let y0 = linalg::least_squares(&c_mat, &d, tol);
    if (&c_mat * &y0 - &d).norm() > tol.atol * 1.0_f64.max(d.norm()) {
        return Ok((ExtendedValue::PosInf, None));
    }
    let w = linalg::kernel(&c_mat, tol);
    let wb = w.basis().clone();

    // Objective on y* = y0 + W t: both terms are quarter-quadratics, the
    // first in b_A(y*) = b_A(0) − Uᵀ_A y*, the second in b_B(y*).
    let ba0 = ga.rhs(x, xstar) - ga.u().transpose() * &y0;
    let bb0 = gb.rhs(x, &y0);
    let ma = ga.u().transpose() * &wb;
    let mb = gb.u().transpose() * &wb;

    let h = 0.5 * ma.transpose() * ga.q().pseudo_inverse() * &ma
        + 0.5 * mb.transpose() * gb.q().pseudo_inverse() * &mb;
    let g = -0.5 * ma.transpose() * ga.q().pseudo_inverse() * &ba0
        + 0.5 * mb.transpose() * gb.q().pseudo_inverse() * &bb0;

    let floor = ga
        .q()
        .pseudo_inverse()
        .amax()
        .max(gb.q().pseudo_inverse().amax());
    let hform = SymmetricForm::analyze_with_floor(&h, floor, tol).expect("H is square");
    let t = -(hform.pseudo_inverse() * &g);
    let argmin = &y0 + &wb * &t;
    // Both quarter terms are nonnegative, so evaluating at the minimizer
    // has no cancellation, unlike a c₀ + gᵀt + ½tᵀHt decomposition.
    let value = ga.q().quarter_quadratic(&(&ba0 - &ma * &t))
        + gb.q().quarter_quadratic(&(&bb0 + &mb * &t));
    Ok((ExtendedValue::finite(value), Some(argmin)))
}

/// Verifies `F_{A+B} = F_A □₂ F_B` at the given sample points, treating two
/// infinities as agreement; finite values compared at `rel_tol`.
pub fn fitz_sum_check(
    a: &LinearRelation,
    b: &LinearRelation,
    points: &[(DVector<f64>, DVector<f64>)],
    rel_tol: f64,
    tol: &Tolerance,
) -> Result<CheckReport, Error> {
    let sum = a.add(b, tol)?;
    let gsum = GraphForm::new(&sum, tol);
    let mut verdict = true;
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for (x, xstar) in points {
        let lhs = gsum.fitz_eval(x, xstar, tol)?;
        let (rhs, _) = partial_inf_conv(a, b, x, xstar, tol)?;
        let slack = match (lhs, rhs) {
            (ExtendedValue::PosInf, ExtendedValue::PosInf) => f64::INFINITY,
            (ExtendedValue::Finite(l), ExtendedValue::Finite(r)) => {
                rel_tol * 1.0_f64.max(l.abs()).max(r.abs()) - (l - r).abs()
            }
            _ => f64::NEG_INFINITY,
        };
        if slack < margin {
            margin = slack;
            witness = Some(Witness::Pair {
                x: x.clone(),
                xstar: xstar.clone(),
            });
        }
        if slack < 0.0 {
            verdict = false;
        }
    }
    Ok(CheckReport {
        predicate: "fitz_sum_check".to_string(),
        verdict,
        margin,
        witness: if verdict { None } else { witness },
        subchecks: Vec::new(),
    })
}

/// Checks `gra(−A*) = (gra A⁻¹)⊥` and that `F_A` vanishes on sampled points
/// of `gra(−A*)`.
pub fn vanishing_on_adjoint_check(
    a: &LinearRelation,
    samples: usize,
    rng: &mut impl Rng,
    tol: &Tolerance,
) -> CheckReport {
    let neg_adj = a.adjoint(tol).negate(tol);
    let inv_perp = a.inverse().graph().complement(tol);
    let graph_residual = neg_adj.graph().equality_residual(&inv_perp);
    let graphs_equal =
        neg_adj.graph().dim() == inv_perp.dim() && graph_residual <= tol.atol;
    let structural = CheckReport {
        predicate: "gra_neg_adjoint_equals_inverse_graph_perp".to_string(),
        verdict: graphs_equal,
        margin: -graph_residual,
        witness: None,
        subchecks: Vec::new(),
    };

    let gf = GraphForm::new(a, tol);
    let n = a.n();
    let mut verdict = structural.verdict;
    let mut margin = structural.margin.max(f64::MIN);
    let mut witness = if graphs_equal {
        None
    } else {
        // A basis direction of either graph that escapes the other.
        neg_adj
            .graph()
            .basis_columns()
            .into_iter()
            .chain(inv_perp.basis_columns())
            .map(|v| {
                let r = (&v - inv_perp.project(&v)).norm()
                    + (&v - neg_adj.graph().project(&v)).norm();
                (v, r)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(v, _)| Witness::Vector(v))
    };
    let basis = neg_adj.graph().basis().clone();
    for _ in 0..samples {
        if basis.ncols() == 0 {
            break;
        }
        let coeff = DVector::from_fn(basis.ncols(), |_, _| rng.random_range(-2.0..2.0));
        let w = &basis * coeff;
        let x = w.rows(0, n).into_owned();
        let xstar = w.rows(n, n).into_owned();
        let value = match gf.fitz_eval(&x, &xstar, tol) {
            Ok(ExtendedValue::Finite(v)) => v,
            _ => f64::INFINITY,
        };
        let slack = tol.atol * 1.0_f64.max(w.norm_squared()) - value.abs();
        if slack < margin {
            margin = slack;
            witness = Some(Witness::Pair {
                x: x.clone(),
                xstar: xstar.clone(),
            });
        }
        if slack < 0.0 {
            verdict = false;
        }
    }
    CheckReport {
        predicate: "vanishing_on_adjoint".to_string(),
        verdict,
        margin,
        witness: if verdict { None } else { witness },
        subchecks: vec![structural],
    }
}

/// A quadratic function restricted to a subspace of ℝ²ⁿ: `wᵀMw + lᵀw + c`
/// on the domain, +∞ off it.
#[derive(Debug, Clone)]
pub struct PartialQuadratic {
    domain: Subspace,
    matrix: DMatrix<f64>,
    linear: DVector<f64>,
    constant: f64,
}

impl PartialQuadratic {
    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn eval(&self, w: &DVector<f64>, tol: &Tolerance) -> Result<ExtendedValue, Error> {
        if !self.domain.contains(w, tol)?.contained {
            return Ok(ExtendedValue::PosInf);
        }
        Ok(ExtendedValue::finite(
            w.dot(&(&self.matrix * w)) + self.linear.dot(w) + self.constant,
        ))
    }

    /// Structural equality: same finiteness domain and matching restrictions
    /// of the quadratic data to it.
    pub fn structurally_equal(&self, other: &Self, tol: &Tolerance) -> Result<bool, Error> {
        if !self.domain.subspace_equal(&other.domain, tol)? {
            return Ok(false);
        }
        let w = self.domain.basis();
        let dm = w.transpose() * (&self.matrix - &other.matrix) * w;
        let dl = w.transpose() * (&self.linear - &other.linear);
        Ok(dm.amax() <= tol.atol
            && (dl.is_empty() || dl.amax() <= tol.atol)
            && (self.constant - other.constant).abs() <= tol.atol)
    }

    /// Whether the restriction to the domain is identically zero.
    pub fn vanishes_on_domain(&self, tol: &Tolerance) -> bool {
        let w = self.domain.basis();
        let dm = w.transpose() * &self.matrix * w;
        let dl = w.transpose() * &self.linear;
        dm.amax() <= tol.atol
            && (dl.is_empty() || dl.amax() <= tol.atol)
            && self.constant.abs() <= tol.atol
    }
}

/// `F_A` as a partial quadratic: domain `{(x,x*) : b ∈ range Q}` (the kernel
/// of `N_Q [Vᵀ Uᵀ]`), value `¼ bᵀQ⁺b`.
pub fn fitz_partial_quadratic(
    a: &LinearRelation,
    tol: &Tolerance,
) -> Result<PartialQuadratic, Error> {
    let gf = GraphForm::new(a, tol);
    gf.require_monotone(tol)?;
    let n = a.n();
    let k = gf.q().dim();
    // b = B w for w = (x; x*), with B = [Vᵀ | Uᵀ].
    let mut bmap = DMatrix::zeros(k, 2 * n);
    bmap.columns_mut(0, n).copy_from(&gf.v().transpose());
    bmap.columns_mut(n, n).copy_from(&gf.u().transpose());
    let nq = DMatrix::identity(k, k) - gf.q().range_projector();
    let domain = linalg::kernel(&(&nq * &bmap), tol);
    let matrix = 0.25 * bmap.transpose() * gf.q().pseudo_inverse() * &bmap;
    Ok(PartialQuadratic {
        domain,
        matrix,
        linear: DVector::zeros(2 * n),
        constant: 0.0,
    })
}

/// `F_A^{*⊺}` as a partial quadratic: the pairing `⟨x, x*⟩` on the graph.
pub fn conj_partial_quadratic(a: &LinearRelation, tol: &Tolerance) -> Result<PartialQuadratic, Error> {
    let gf = GraphForm::new(a, tol);
    gf.require_monotone(tol)?;
    let n = a.n();
    let mut pairing = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        pairing[(i, n + i)] = 0.5;
        pairing[(n + i, i)] = 0.5;
    }
    Ok(PartialQuadratic {
        domain: a.graph().clone(),
        matrix: pairing,
        linear: DVector::zeros(2 * n),
        constant: 0.0,
    })
}

/// Whether the Fitzpatrick family of a maximal monotone relation collapses
/// to a single function, i.e. `F_A = F_A^{*⊺}` structurally.
///
/// Sub-verdicts report `is_skew` and `dom A = dom A*`, so the equivalence
/// "singleton with equal domains ⟺ skew" is checkable in both directions.
pub fn family_is_singleton(a: &LinearRelation, tol: &Tolerance) -> Result<CheckReport, Error> {
    let maximal = crate::monotone::is_maximal_monotone(a, tol);
    if !maximal.verdict {
        return Err(Error::NotMaximal);
    }
    let lower = fitz_partial_quadratic(a, tol)?;
    let upper = conj_partial_quadratic(a, tol)?;
    let verdict = lower.structurally_equal(&upper, tol)?;

    let skew = crate::monotone::is_skew(a, tol);
    let dom = a.dom(tol);
    let dom_adj = a.adjoint(tol).dom(tol);
    let dom_residual = dom.equality_residual(&dom_adj);
    let domains = CheckReport {
        predicate: "dom_equals_dom_adjoint".to_string(),
        verdict: dom.dim() == dom_adj.dim() && dom_residual <= tol.atol,
        margin: -dom_residual,
        witness: None,
        subchecks: Vec::new(),
    };
    let domain_residual = lower.domain().equality_residual(upper.domain());
    let mut report = CheckReport {
        predicate: "family_is_singleton".to_string(),
        verdict,
        margin: -domain_residual,
        witness: None,
        subchecks: vec![skew, domains],
    };
    if !verdict {
        // A point where the extremes differ: any direction of the lower
        // domain outside the graph works when domains differ.
        if let Some(v) = lower
            .domain()
            .basis_columns()
            .into_iter()
            .max_by(|p, q| {
                let rp = (p - upper.domain().project(p)).norm();
                let rq = (q - upper.domain().project(q)).norm();
                rp.total_cmp(&rq)
            })
        {
            report.witness = Some(Witness::Vector(v));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn dvec(s: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(s)
    }

    fn identity1() -> LinearRelation {
        LinearRelation::identity(1, &tol())
    }

    fn rotation_relation() -> LinearRelation {
        let j = DMatrix::from_row_slice(2, 2, &[0., -1., 1., 0.]);
        LinearRelation::from_matrix(&j, &tol()).unwrap()
    }

    fn finite(v: ExtendedValue) -> f64 {
        v.as_finite().expect("expected a finite value")
    }

    #[test]
    fn graph_form_examples() {
        let gf = GraphForm::new(&identity1(), &tol());
        // Orthonormalized (1,1): U = V = [1/√2], Q = [1/2].
        assert_abs_diff_eq!(gf.q().matrix()[(0, 0)], 0.5, epsilon = 1e-12);

        let gf = GraphForm::new(&rotation_relation(), &tol());
        assert_abs_diff_eq!(gf.q().matrix().amax(), 0.0, epsilon = 1e-12);

        let l = Subspace::spanned_by(2, &[dvec(&[1., 0.])], &tol()).unwrap();
        let nl = LinearRelation::normal_cone(&l, &tol());
        let gf = GraphForm::new(&nl, &tol());
        assert_abs_diff_eq!(gf.q().matrix().amax(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fitzpatrick_closed_form_on_identity() {
        // sup_y xy + yx* − y² = (x + x*)²/4.
        let id = identity1();
        assert_abs_diff_eq!(
            finite(fitzpatrick_eval(&id, &dvec(&[1.]), &dvec(&[1.]), &tol()).unwrap()),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            finite(fitzpatrick_eval(&id, &dvec(&[0.]), &dvec(&[1.]), &tol()).unwrap()),
            0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fitzpatrick_indicator_on_rotation() {
        let j = rotation_relation();
        let on = fitzpatrick_eval(&j, &dvec(&[1., 0.]), &dvec(&[0., 1.]), &tol()).unwrap();
        assert_abs_diff_eq!(finite(on), 0.0, epsilon = 1e-12);
        let off = fitzpatrick_eval(&j, &dvec(&[1., 0.]), &dvec(&[1., 0.]), &tol()).unwrap();
        assert_eq!(off, ExtendedValue::PosInf);
    }

    #[test]
    fn fitzpatrick_of_zero_operator() {
        // gra = R^n × {0}: F(x, x*) = 0 if x* = 0 else +∞.
        let zero = LinearRelation::from_matrix(&DMatrix::zeros(2, 2), &tol()).unwrap();
        let v = fitzpatrick_eval(&zero, &dvec(&[3., 1.]), &dvec(&[0., 0.]), &tol()).unwrap();
        assert_abs_diff_eq!(finite(v), 0.0, epsilon = 1e-12);
        let v = fitzpatrick_eval(&zero, &dvec(&[3., 1.]), &dvec(&[0., 1.]), &tol()).unwrap();
        assert_eq!(v, ExtendedValue::PosInf);
    }

    #[test]
    fn fitzpatrick_refuses_non_monotone() {
        let neg = LinearRelation::from_matrix(&(-DMatrix::identity(1, 1)), &tol()).unwrap();
        assert!(matches!(
            fitzpatrick_eval(&neg, &dvec(&[1.]), &dvec(&[1.]), &tol()),
            Err(Error::NotMonotone)
        ));
    }

    #[test]
    fn conjugate_examples() {
        let id = identity1();
        assert_abs_diff_eq!(
            finite(fitzpatrick_conj_eval(&id, &dvec(&[1.]), &dvec(&[1.]), &tol()).unwrap()),
            1.0,
            epsilon = 1e-12
        );
        assert_eq!(
            fitzpatrick_conj_eval(&id, &dvec(&[1.]), &dvec(&[2.]), &tol()).unwrap(),
            ExtendedValue::PosInf
        );

        let j = rotation_relation();
        assert_abs_diff_eq!(
            finite(
                fitzpatrick_conj_eval(&j, &dvec(&[0., 1.]), &dvec(&[1., 0.]), &tol()).unwrap()
            ),
            0.0,
            epsilon = 1e-12
        );

        let l = Subspace::spanned_by(2, &[dvec(&[1., 0.])], &tol()).unwrap();
        let nl = LinearRelation::normal_cone(&l, &tol());
        assert_abs_diff_eq!(
            finite(
                fitzpatrick_conj_eval(&nl, &dvec(&[0., 1.]), &dvec(&[1., 0.]), &tol()).unwrap()
            ),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn star_transpose_dominates_fitz() {
        // F^{*⊺}(0,1) = +∞ while F(0,1) = ¼ for the identity on R.
        let id = identity1();
        assert_eq!(
            fitz_star_transpose_eval(&id, &dvec(&[0.]), &dvec(&[1.]), &tol()).unwrap(),
            ExtendedValue::PosInf
        );
        assert_abs_diff_eq!(
            finite(fitz_star_transpose_eval(&id, &dvec(&[1.]), &dvec(&[1.]), &tol()).unwrap()),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn inf_conv_on_identity_pair() {
        // minimize ¼(1+2−y*)² + ¼(1+y*)² over y*: value 2 at y* = 1.
        let id = identity1();
        let (value, argmin) =
            partial_inf_conv(&id, &id, &dvec(&[1.]), &dvec(&[2.]), &tol()).unwrap();
        assert_abs_diff_eq!(finite(value), 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(argmin.unwrap()[0], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn inf_conv_off_both_domains_is_infinite() {
        let l1 = Subspace::spanned_by(2, &[dvec(&[1., 0.])], &tol()).unwrap();
        let a = LinearRelation::normal_cone(&l1, &tol());
        // x off dom A = span{e1}: every y* leaves both terms infinite.
        let (value, argmin) =
            partial_inf_conv(&a, &a, &dvec(&[0., 1.]), &dvec(&[0., 0.]), &tol()).unwrap();
        assert_eq!(value, ExtendedValue::PosInf);
        assert!(argmin.is_none());
    }

    #[test]
    fn zero_operator_is_identity_for_inf_conv() {
        // B = N_{R^n} is the zero operator; F_B(x, y*) = ι_{y*=0}, so
        // (F_A □₂ F_B) = F_A.
        let a = LinearRelation::from_matrix(
            &DMatrix::from_row_slice(2, 2, &[1., 0., 0., 2.]),
            &tol(),
        )
        .unwrap();
        let b = LinearRelation::normal_cone(&Subspace::full(2), &tol());
        for (x, xstar) in [
            (dvec(&[1., 0.]), dvec(&[0., 1.])),
            (dvec(&[0.3, -1.]), dvec(&[2., 0.5])),
        ] {
            let (value, _) = partial_inf_conv(&a, &b, &x, &xstar, &tol()).unwrap();
            let direct = fitzpatrick_eval(&a, &x, &xstar, &tol()).unwrap();
            assert!(value.approx_eq(&direct, 1e-9));
        }
    }

    #[test]
    fn sum_check_on_identities() {
        let id = identity1();
        let points = vec![
            (dvec(&[1.]), dvec(&[2.])),
            (dvec(&[0.]), dvec(&[0.])),
            (dvec(&[-1.]), dvec(&[3.])),
        ];
        let r = fitz_sum_check(&id, &id, &points, 1e-8, &tol()).unwrap();
        assert!(r.verdict);

        // F_{2·Id}(1,2) = (2·1+2)²/8 = 2.
        let two = LinearRelation::from_matrix(&DMatrix::from_row_slice(1, 1, &[2.0]), &tol())
            .unwrap();
        assert_abs_diff_eq!(
            finite(fitzpatrick_eval(&two, &dvec(&[1.]), &dvec(&[2.]), &tol()).unwrap()),
            2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn vanishing_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // gra(−J*) = gra J, and F_J = 0 there.
        let r = vanishing_on_adjoint_check(&rotation_relation(), 20, &mut rng, &tol());
        assert!(r.verdict);

        // gra(−Id*) = span{(1,−1)}: F_Id(1,−1) = 0.
        let id = identity1();
        assert_abs_diff_eq!(
            finite(fitzpatrick_eval(&id, &dvec(&[1.]), &dvec(&[-1.]), &tol()).unwrap()),
            0.0,
            epsilon = 1e-12
        );
        let r = vanishing_on_adjoint_check(&id, 20, &mut rng, &tol());
        assert!(r.verdict);

        let l = Subspace::spanned_by(2, &[dvec(&[1., 0.])], &tol()).unwrap();
        let nl = LinearRelation::normal_cone(&l, &tol());
        let r = vanishing_on_adjoint_check(&nl, 20, &mut rng, &tol());
        assert!(r.verdict);
    }

    #[test]
    fn family_examples() {
        // The rotation is skew: singleton family, indicator of the graph.
        let j = rotation_relation();
        let r = family_is_singleton(&j, &tol()).unwrap();
        assert!(r.verdict);
        let lower = fitz_partial_quadratic(&j, &tol()).unwrap();
        assert!(lower
            .domain()
            .subspace_equal(j.graph(), &tol())
            .unwrap());
        assert!(lower.vanishes_on_domain(&tol()));

        // The identity is not skew: F(0,1) = ¼ is finite off the graph.
        let id = identity1();
        let r = family_is_singleton(&id, &tol()).unwrap();
        assert!(!r.verdict);
        assert!(r.witness.is_some());

        // Normal cones are skew, hence singleton.
        let l = Subspace::spanned_by(2, &[dvec(&[1., 0.])], &tol()).unwrap();
        let nl = LinearRelation::normal_cone(&l, &tol());
        assert!(family_is_singleton(&nl, &tol()).unwrap().verdict);

        // Non-maximal input is refused.
        let z = LinearRelation::from_graph_basis(2, &[dvec(&[1., 0., 0., 0.])], &tol()).unwrap();
        assert!(matches!(
            family_is_singleton(&z, &tol()),
            Err(Error::NotMaximal)
        ));
    }
}
