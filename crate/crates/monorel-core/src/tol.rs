//! Numerical tolerances.
//!
//! Exact subspace identities become tolerance-parameterized tests in floating
//! point. One `Tolerance` value travels through every operation so that rank
//! decisions, PSD verdicts, and membership tests share a single set of knobs.

use crate::error::Error;

/// Tolerance knobs for all numerical decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions (dimensionless).
    pub rank_rtol: f64,
    /// Eigenvalue negativity slack for PSD verdicts, scaled by the spectral
    /// radius (dimensionless).
    pub psd_tol: f64,
    /// Absolute floor for membership residuals and value comparisons.
    pub atol: f64,
}

impl Tolerance {
    /// Builds a tolerance, validating that every field is strictly positive
    /// and that the dimensionless cutoffs stay below 1.
    pub fn new(rank_rtol: f64, psd_tol: f64, atol: f64) -> Result<Self, Error> {
        if !(rank_rtol > 0.0 && psd_tol > 0.0 && atol > 0.0) {
            return Err(Error::InvalidTolerance(
                "all fields must be strictly positive".into(),
            ));
        }
        if rank_rtol >= 1.0 || psd_tol >= 1.0 {
            return Err(Error::InvalidTolerance(
                "rank_rtol and psd_tol must be < 1".into(),
            ));
        }
        Ok(Self {
            rank_rtol,
            psd_tol,
            atol,
        })
    }

    /// Scaled absolute comparison: `|a - b| <= atol * max(1, |a|, |b|)`.
    pub fn value_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.atol * 1.0_f64.max(a.abs()).max(b.abs())
    }
}

impl Default for Tolerance {
    /// Defaults sized for small dense problems in double precision.
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            psd_tol: 1e-9,
            atol: 1e-9,
        }
    }
}
