//! The explicit two-dimensional counterexample for `q > 3` and the
//! quadratic equality cases of the main trace inequality.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::funclass::ScalarFunctionSpec;
use crate::ineq::{cor_abq_gap, main_trace_ineq, TrialRecord, Verdict};
use crate::matcore::HermitianMatrix;

/// Relative agreement required between computed sides and closed forms.
pub const REPRO_TOL_REL: f64 = 1e-10;

/// `A = diag(1, 0)` and `B = ½ [[1, 1], [1, 1]]`.
pub fn counterexample_pair() -> (HermitianMatrix, HermitianMatrix) {
    let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
    let b = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
        .expect("symmetric literal");
    (a, b)
}

/// `((1 + √2/2)^q + (1 - √2/2)^q - 2, (2^q - 2) / 2)`.
pub fn closed_forms(q: f64) -> (f64, f64) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    (
        (1.0 + r).powf(q) + (1.0 - r).powf(q) - 2.0,
        (2f64.powf(q) - 2.0) / 2.0,
    )
}

/// COR_ABQ on [`counterexample_pair`].
pub fn repro_counterexample(q: f64) -> Result<TrialRecord> {
    let (a, b) = counterexample_pair();
    cor_abq_gap(&a, &b, q)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproRow {
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_closed: f64,
    pub rhs_closed: f64,
    pub lhs_rel_err: f64,
    pub rhs_rel_err: f64,
    pub verdict: Verdict,
    /// Both relative errors within [`REPRO_TOL_REL`].
    pub matches: bool,
}

fn rel_err(x: f64, exact: f64) -> f64 {
    (x - exact).abs() / exact.abs().max(1.0)
}

pub fn repro_row(q: f64) -> Result<ReproRow> {
    let r = repro_counterexample(q)?;
    let (lhs_closed, rhs_closed) = closed_forms(q);
    let lhs_rel_err = rel_err(r.lhs, lhs_closed);
    let rhs_rel_err = rel_err(r.rhs, rhs_closed);
    Ok(ReproRow {
        q,
        lhs: r.lhs,
        rhs: r.rhs,
        lhs_closed,
        rhs_closed,
        lhs_rel_err,
        rhs_rel_err,
        verdict: r.verdict,
        matches: lhs_rel_err <= REPRO_TOL_REL && rhs_rel_err <= REPRO_TOL_REL,
    })
}

/// Main trace inequality for `g = 1, x, x^2` on [`counterexample_pair`],
/// where both sides equal `-dim`, `0` and `2 tr AB`.
pub fn equality_cases() -> Result<Vec<(TrialRecord, f64)>> {
    let (a, b) = counterexample_pair();
    let tr_ab = a.as_matrix().mul(b.as_matrix())?.trace()?.re;
    [(0.0, -(a.dim() as f64)), (1.0, 0.0), (2.0, 2.0 * tr_ab)]
        .into_iter()
        .map(|(q, expected)| Ok((main_trace_ineq(&ScalarFunctionSpec::power(q)?, &a, &b)?, expected)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_match_closed_forms() {
        for q in [2.5, 3.0, 4.0, 5.0] {
            let row = repro_row(q).unwrap();
            assert!(row.matches, "{row:?}");
            assert_eq!(row.verdict == Verdict::Fail, q > 3.0);
        }
        let (l, r) = closed_forms(4.0);
        assert!((l - 6.5).abs() < 1e-12 && (r - 7.0).abs() < 1e-12);
        let (l, r) = closed_forms(3.0);
        assert!((l - 3.0).abs() < 1e-12 && (r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn equality_cases_hold() {
        for (r, expected) in equality_cases().unwrap() {
            assert!((r.lhs - expected).abs() < 1e-12, "{r:?}");
            assert!((r.rhs - expected).abs() < 1e-12, "{r:?}");
            assert_eq!(r.verdict, Verdict::Pass);
        }
    }
}
