//! Monotonicity, maximality, and skewness predicates.
//!
//! With a graph basis split into point rows `U` and value rows `V`, the
//! pairing `⟨x, x*⟩` restricted to the graph is the quadratic form
//! `Q = sym(UᵀV)` in graph coordinates, so monotonicity is a PSD test,
//! and "monotonically related" becomes a constrained quadratic bound.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::linalg::{self, Subspace, SymmetricForm};
use crate::relation::{stack_pair, LinearRelation};
use crate::tol::Tolerance;
use crate::value::ExtendedValue;

/// A vector or pair of vectors attached to a predicate verdict.
#[derive(Debug, Clone)]
pub enum Witness {
    Vector(DVector<f64>),
    Pair {
        x: DVector<f64>,
        xstar: DVector<f64>,
    },
}

/// Structured verdict emitted by every predicate.
///
/// `margin` is the smallest slack encountered (for eigenvalue tests the
/// minimum eigenvalue); a failing verdict always carries a witness.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub predicate: String,
    pub verdict: bool,
    pub margin: f64,
    pub witness: Option<Witness>,
    pub subchecks: Vec<CheckReport>,
}

impl CheckReport {
    fn new(predicate: &str, verdict: bool, margin: f64) -> Self {
        Self {
            predicate: predicate.to_string(),
            verdict,
            margin,
            witness: None,
            subchecks: Vec::new(),
        }
    }

    fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    fn with_subchecks(mut self, subchecks: Vec<CheckReport>) -> Self {
        self.subchecks = subchecks;
        self
    }
}

fn normalized(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// Witness pair from a graph coefficient vector; unit length because the
/// stacked basis is orthonormal. Only for scale-invariant violations
/// (eigenvalue directions), where normalizing preserves the violation.
fn graph_point_witness(a: &LinearRelation, c: &DVector<f64>) -> Witness {
    let (u, v) = a.graph_blocks();
    let w = normalized(stack_pair(a.n(), &(&u * c), &(&v * c)).expect("blocks have length n"));
    let n = a.n();
    Witness::Pair {
        x: w.rows(0, n).into_owned(),
        xstar: w.rows(n, n).into_owned(),
    }
}

/// Witness pair at the exact violating coefficient; the inequality here is
/// not scale-invariant, so the point is kept at its violating scale, with
/// noise-level coefficients snapped to zero.
fn graph_point_at(a: &LinearRelation, c: &DVector<f64>, tol: &Tolerance) -> Witness {
    let c = if c.norm() <= tol.atol {
        DVector::zeros(c.len())
    } else {
        c.clone()
    };
    let (u, v) = a.graph_blocks();
    Witness::Pair {
        x: &u * &c,
        xstar: &v * &c,
    }
}

/// PSD test of the graph pairing form `Q = sym(UᵀV)`.
///
/// PSD on all graph coefficients simultaneously enforces both the
/// single-valuedness of `⟨x, Ax⟩` and its nonnegativity: a negative cross
/// term with an `A0` direction would break PSD along a line.
pub fn is_monotone(a: &LinearRelation, tol: &Tolerance) -> CheckReport {
    let q = graph_pairing_form(a, tol);
    let verdict = q.is_psd(tol);
    let mut report = CheckReport::new("is_monotone", verdict, q.min_eigenvalue());
    if !verdict {
        if let Some(c) = q.most_negative_direction() {
            report = report.with_witness(graph_point_witness(a, &c));
        }
    }
    report
}

/// `Q = sym(UᵀV)` analyzed once; shared by the predicates below.
pub fn graph_pairing_form(a: &LinearRelation, tol: &Tolerance) -> SymmetricForm {
    let (u, v) = a.graph_blocks();
    let q = u.transpose() * &v;
    SymmetricForm::analyze(&q, tol).expect("UᵀV is square")
}

/// `q_A(x) = ½⟨x, Ax⟩` on the domain, +∞ elsewhere.
///
/// The value is independent of the coset representative because the domain
/// of a monotone relation is orthogonal to `A0`; a point in the domain that
/// fails that orthogonality signals non-monotone input and is rejected.
pub fn q_eval(a: &LinearRelation, x: &DVector<f64>, tol: &Tolerance) -> Result<ExtendedValue, Error> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: x.len(),
        });
    }
    if !a.dom(tol).contains(x, tol)?.contained {
        return Ok(ExtendedValue::PosInf);
    }
    let a0 = a.at_zero(tol);
    if a0.project(x).norm() > tol.atol * 1.0_f64.max(x.norm()) {
        return Err(Error::NotSingleValued);
    }
    let p = a
        .image(x, tol)?
        .expect("domain membership checked above")
        .particular()
        .clone();
    Ok(ExtendedValue::finite(0.5 * x.dot(&p)))
}

/// Whether `⟨x − y, x* − y*⟩ ≥ 0` holds against every graph pair.
///
/// With `b = Uᵀx* + Vᵀx`, the inequality over all graph coefficients `c`
/// reads `cᵀQc − bᵀc + ⟨x,x*⟩ ≥ 0`, which holds exactly when `Q` is PSD,
/// `b ∈ range(Q)`, and `⟨x,x*⟩ − ¼ bᵀQ⁺b ≥ 0`.
pub fn is_monotonically_related(
    a: &LinearRelation,
    x: &DVector<f64>,
    xstar: &DVector<f64>,
    tol: &Tolerance,
) -> Result<CheckReport, Error> {
    stack_pair(a.n(), x, xstar)?;
    let q = graph_pairing_form(a, tol);
    Ok(monotonically_related_with(a, &q, x, xstar, tol))
}

pub(crate) fn monotonically_related_with(
    a: &LinearRelation,
    q: &SymmetricForm,
    x: &DVector<f64>,
    xstar: &DVector<f64>,
    tol: &Tolerance,
) -> CheckReport {
    let name = "is_monotonically_related";
    if !q.is_psd(tol) {
        let mut r = CheckReport::new(name, false, q.min_eigenvalue());
        if let Some(c) = q.most_negative_direction() {
            r = r.with_witness(graph_point_witness(a, &c));
        }
        return r;
    }
    let (u, v) = a.graph_blocks();
    let b = u.transpose() * xstar + v.transpose() * x;
    let defect = q.range_defect(&b);
    if defect > tol.atol * 1.0_f64.max(b.norm()) {
        // Along the null component of b the pairing decreases linearly.
        let c = normalized(q.null_component(&b));
        return CheckReport::new(name, false, -defect).with_witness(graph_point_witness(a, &c));
    }
    let pairing = x.dot(xstar);
    let quarter = q.quarter_quadratic(&b);
    let slack = pairing - quarter;
    // Ill-conditioned Q amplifies rounding in the quarter term; compare at
    // the scale of the two operands.
    let scale = 1.0_f64.max(pairing.abs()).max(quarter.abs());
    let verdict = slack >= -tol.atol * scale;
    let mut report = CheckReport::new(name, verdict, slack);
    if !verdict {
        // The minimizing graph coefficient exhibits the violated inequality.
        let c = q.pseudo_inverse() * &b * 0.5;
        report = report.with_witness(graph_point_at(a, &c, tol));
    }
    report
}

/// Halo membership: does some `x*` make `(x, x*)` monotonically related?
///
/// Minimizes `¼ b(x*)ᵀQ⁺b(x*) − ⟨x, x*⟩` over the affine set where
/// `Uᵀx* + Vᵀx ∈ range(Q)`, by null-space parametrization; membership holds
/// iff the infimum is ≤ atol (an infimum of −∞ counts as membership).
pub fn halo_contains(
    a: &LinearRelation,
    x: &DVector<f64>,
    tol: &Tolerance,
) -> Result<CheckReport, Error> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: x.len(),
        });
    }
    let name = "halo_contains";
    let q = graph_pairing_form(a, tol);
    if !q.is_psd(tol) {
        // A non-monotone graph admits no monotonically related point at all.
        let mut r = CheckReport::new(name, false, q.min_eigenvalue());
        if let Some(c) = q.most_negative_direction() {
            r = r.with_witness(graph_point_witness(a, &c));
        }
        return Ok(r);
    }
    let (u, v) = a.graph_blocks();
    let k = u.ncols();

    // Affine feasibility: N_Q (Uᵀ x* + Vᵀ x) = 0 with N_Q = I − R.
    let nq = DMatrix::identity(k, k) - q.range_projector();
    let c_mat = &nq * u.transpose();
    let d = -(&nq * v.transpose() * x);
    let xstar0 = linalg::least_squares(&c_mat, &d, tol);
    let feas_residual = (&c_mat * &xstar0 - &d).norm();
    if feas_residual > tol.atol * 1.0_f64.max(d.norm()) {
        return Ok(
            CheckReport::new(name, false, -feas_residual).with_witness(Witness::Vector(normalized(x.clone()))),
        );
    }
    let w = linalg::kernel(&c_mat, tol);
    let wb = w.basis().clone();

    // Objective on the feasible set x* = x*₀ + W t:
    //   f(t) = ½ tᵀ H t + gᵀ t + c₀,  H = ½ MᵀQ⁺M PSD, M = UᵀW.
    let b0 = u.transpose() * &xstar0 + v.transpose() * x;
    let m = u.transpose() * &wb;
    let h = 0.5 * m.transpose() * q.pseudo_inverse() * &m;
    let g = 0.5 * m.transpose() * q.pseudo_inverse() * &b0 - wb.transpose() * x;
    let c0 = q.quarter_quadratic(&b0) - x.dot(&xstar0);

    // H lives at the scale of Q⁺; floor its rank decisions accordingly.
    let hform = SymmetricForm::analyze_with_floor(&h, q.pseudo_inverse().amax(), tol)
        .expect("H is square");
    let g_defect = hform.range_defect(&g);
    if g_defect > tol.atol * 1.0_f64.max(g.norm()) {
        // Linear decrease along a flat direction of H: unbounded below.
        let dir = normalized(hform.null_component(&g));
        let rate = g.dot(&dir);
        let span = (c0.abs() + 1.0) / rate.abs().max(f64::MIN_POSITIVE);
        let certificate = &xstar0 - &wb * (dir * rate.signum() * span);
        return Ok(CheckReport::new(name, true, f64::INFINITY).with_witness(Witness::Pair {
            x: x.clone(),
            xstar: certificate,
        }));
    }
    let t = -(hform.pseudo_inverse() * &g);
    let minimizer = &xstar0 + &wb * &t;
    // Evaluate the objective directly at the minimizer rather than through
    // the c₀/g/H decomposition, whose large intermediates cancel; compare
    // at the scale of the two terms.
    let b_min = &b0 + &m * &t;
    let quarter = q.quarter_quadratic(&b_min);
    let pairing = x.dot(&minimizer);
    let infimum = quarter - pairing;
    let scale = 1.0_f64.max(quarter.abs()).max(pairing.abs());
    let verdict = infimum <= tol.atol * scale;
    let mut report = CheckReport::new(name, verdict, -infimum);
    report = if verdict {
        report.with_witness(Witness::Pair {
            x: x.clone(),
            xstar: minimizer,
        })
    } else {
        report.with_witness(Witness::Vector(normalized(x.clone())))
    };
    Ok(report)
}

/// Maximal monotonicity by the algebraic criterion `(dom A)⊥ = A0`,
/// conjoined with monotonicity; sub-verdicts are reported.
pub fn is_maximal_monotone(a: &LinearRelation, tol: &Tolerance) -> CheckReport {
    let mono = is_monotone(a, tol);
    let dom_perp = a.dom(tol).complement(tol);
    let a0 = a.at_zero(tol);
    let residual = dom_perp.equality_residual(&a0);
    let criterion_ok = dom_perp.dim() == a0.dim() && residual <= tol.atol;
    let mut criterion = CheckReport::new("dom_perp_equals_at_zero", criterion_ok, -residual);
    if !criterion_ok {
        // A direction of (dom A)⊥ missing from A0, or vice versa.
        let gap = worst_direction(&dom_perp, &a0).or_else(|| worst_direction(&a0, &dom_perp));
        if let Some(v) = gap {
            criterion = criterion.with_witness(Witness::Vector(v));
        }
    }
    let verdict = mono.verdict && criterion.verdict;
    let margin = mono.margin.min(criterion.margin);
    let mut report = CheckReport::new("is_maximal_monotone", verdict, margin)
        .with_subchecks(vec![mono, criterion]);
    if !verdict {
        report.witness = report
            .subchecks
            .iter()
            .find(|s| !s.verdict)
            .and_then(|s| s.witness.clone());
    }
    report
}

/// Basis vector of `from` with the largest residual against `to`.
fn worst_direction(from: &Subspace, to: &Subspace) -> Option<DVector<f64>> {
    from.basis_columns()
        .into_iter()
        .map(|v| {
            let r = (&v - to.project(&v)).norm();
            (v, r)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|(_, r)| *r > 0.0)
        .map(|(v, _)| v)
}

/// Skewness: `gra A* = gra(−A)`.
pub fn is_skew(a: &LinearRelation, tol: &Tolerance) -> CheckReport {
    let adj = a.adjoint(tol);
    let neg = a.negate(tol);
    let residual = adj.graph().equality_residual(neg.graph());
    let verdict = adj.graph().dim() == neg.graph().dim() && residual <= tol.atol;
    let mut report = CheckReport::new("is_skew", verdict, -residual);
    if !verdict {
        let gap = worst_direction(adj.graph(), neg.graph())
            .or_else(|| worst_direction(neg.graph(), adj.graph()));
        if let Some(v) = gap {
            report = report.with_witness(Witness::Vector(v));
        }
    }
    report
}

/// The maximal monotone extension `A + N_{dom A}`: graph plus `{0} × (dom A)⊥`.
pub fn extend_to_maximal(a: &LinearRelation, tol: &Tolerance) -> Result<LinearRelation, Error> {
    if !is_monotone(a, tol).verdict {
        return Err(Error::NotMonotone);
    }
    let n = a.n();
    let dom_perp = a.dom(tol).complement(tol);
    let mut cols: Vec<DVector<f64>> = a.graph().basis_columns();
    for z in dom_perp.basis_columns() {
        cols.push(stack_pair(n, &DVector::zeros(n), &z)?);
    }
    LinearRelation::from_graph_basis(n, &cols, tol)
}
