//! Extended real values: a finite number or +∞.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// A value in ]−∞, +∞], the codomain of `q_A`, the Fitzpatrick function, its
/// conjugate, and partial inf-convolutions.
///
/// `Finite` payloads are never NaN by construction, which makes the ordering
/// total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedValue {
    Finite(f64),
    PosInf,
}

impl ExtendedValue {
    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite());
        ExtendedValue::Finite(v)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            ExtendedValue::Finite(v) => Some(*v),
            ExtendedValue::PosInf => None,
        }
    }

    /// Equality up to a relative tolerance; two infinities agree.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        match (self, other) {
            (ExtendedValue::PosInf, ExtendedValue::PosInf) => true,
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => {
                (a - b).abs() <= rel_tol * 1.0_f64.max(a.abs()).max(b.abs())
            }
            _ => false,
        }
    }

    /// Total order with +∞ greatest.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedValue::PosInf, ExtendedValue::PosInf) => Ordering::Equal,
            (ExtendedValue::PosInf, _) => Ordering::Greater,
            (_, ExtendedValue::PosInf) => Ordering::Less,
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => a.total_cmp(b),
        }
    }

    /// `self ≥ other − slack`, with +∞ dominating everything.
    pub fn ge_within(&self, other: &Self, slack: f64) -> bool {
        match (self, other) {
            (ExtendedValue::PosInf, _) => true,
            (ExtendedValue::Finite(_), ExtendedValue::PosInf) => false,
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => *a >= *b - slack,
        }
    }
}

impl Add for ExtendedValue {
    type Output = ExtendedValue;

    fn add(self, rhs: ExtendedValue) -> ExtendedValue {
        match (self, rhs) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => ExtendedValue::Finite(a + b),
            _ => ExtendedValue::PosInf,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PosInf => write!(f, "+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_absorbs_infinity() {
        let one = ExtendedValue::finite(1.0);
        assert_eq!(one + ExtendedValue::PosInf, ExtendedValue::PosInf);
        assert_eq!(one + one, ExtendedValue::finite(2.0));
    }

    #[test]
    fn ordering_is_total() {
        let a = ExtendedValue::finite(-3.0);
        let b = ExtendedValue::finite(2.0);
        assert_eq!(a.total_cmp(&b), Ordering::Less);
        assert_eq!(ExtendedValue::PosInf.total_cmp(&b), Ordering::Greater);
        assert_eq!(
            ExtendedValue::PosInf.total_cmp(&ExtendedValue::PosInf),
            Ordering::Equal
        );
    }

    #[test]
    fn two_infinities_agree() {
        assert!(ExtendedValue::PosInf.approx_eq(&ExtendedValue::PosInf, 1e-12));
        assert!(!ExtendedValue::PosInf.approx_eq(&ExtendedValue::finite(1e300), 1e-12));
    }
}
