//! The inequality catalog. Each operation evaluates both sides of one
//! inequality on concrete matrices and returns a [`TrialRecord`] with the
//! oriented gap and a verdict.

mod blocks;
mod case;
mod ops;

pub use blocks::{abq3_substitution, cor_abq3_gap, norm_compression_gap, z_spectrum_check, SpectrumMatch};
pub use case::{
    catalog, CaseId, DomainConstraint, Direction, InequalityCase, Orientation, TrialRecord,
    Verdict, DEFAULT_TOL_REL,
};
pub use ops::{
    alt_gap, cor_abq_gap, cor_faltq_gap, cor_pmean_gap, golden_thompson_gap, main_trace_ineq,
    mccarthy_gap, prop_q4_check, trace_subadd_gap, PropQ4Check,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funclass::ScalarFunctionSpec;
    use crate::matcore::{random_psd, GeneralMatrix, HermitianMatrix};

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(d)
    }

    fn pair() -> (HermitianMatrix, HermitianMatrix) {
        let a = diag(&[1.0, 0.0]);
        let b = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        (a, b)
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
    }

    #[test]
    fn mccarthy_examples() {
        let i2 = HermitianMatrix::identity(2);
        let r = mccarthy_gap(&i2, &i2, 2.0).unwrap();
        assert!(close(r.lhs, 8.0, 1e-12) && close(r.rhs, 4.0, 1e-12));
        assert_eq!(r.verdict, Verdict::Pass);
        let r = mccarthy_gap(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 0.5).unwrap();
        assert!(close(r.lhs, 2.0, 1e-12) && close(r.rhs, 2.0, 1e-12));
        let (a, b) = (random_psd(3, 3, 1).unwrap(), random_psd(3, 3, 2).unwrap());
        let r = mccarthy_gap(&a, &b, 1.0).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-12));
        assert!(mccarthy_gap(&a, &b, 0.0).is_err());
    }

    #[test]
    fn golden_thompson_examples() {
        let a = diag(&[1.0, -2.0, 0.5]);
        let b = diag(&[0.3, 1.0, -1.0]);
        let r = golden_thompson_gap(&a, &b, 1.3).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-10));
        let r = golden_thompson_gap(&a, &b, 0.0).unwrap();
        assert!(close(r.lhs, 3.0, 1e-14) && close(r.rhs, 3.0, 1e-14));
        let (a, b) = (random_psd(3, 3, 5).unwrap(), random_psd(3, 3, 6).unwrap());
        let r = golden_thompson_gap(&a, &b, 1.0).unwrap();
        assert!(r.gap > 0.0);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn main_trace_equality_cases() {
        let (a, b) = (random_psd(4, 4, 11).unwrap(), random_psd(4, 2, 12).unwrap());
        let ab = a.as_matrix().mul(b.as_matrix()).unwrap().trace().unwrap().re;
        let sq = main_trace_ineq(&ScalarFunctionSpec::power(2.0).unwrap(), &a, &b).unwrap();
        assert!(close(sq.lhs, 2.0 * ab, 1e-10) && close(sq.rhs, 2.0 * ab, 1e-10));
        let one = main_trace_ineq(&ScalarFunctionSpec::power(0.0).unwrap(), &a, &b).unwrap();
        assert!(close(one.lhs, -4.0, 1e-10) && close(one.rhs, -4.0, 1e-10));
        let lin = main_trace_ineq(&ScalarFunctionSpec::power(1.0).unwrap(), &a, &b).unwrap();
        assert!(lin.lhs.abs() < 1e-10 && lin.rhs.abs() < 1e-10);
        assert!(main_trace_ineq(&ScalarFunctionSpec::power(3.5).unwrap(), &a, &b).is_err());
        assert!(main_trace_ineq(&ScalarFunctionSpec::power(4.0).unwrap(), &a, &b).is_err());
    }

    #[test]
    fn main_trace_cm0_needs_definite_inputs() {
        let (a, b) = (random_psd(3, 3, 1).unwrap(), random_psd(3, 1, 2).unwrap());
        let g = ScalarFunctionSpec::exp_kernel(1.0, 1).unwrap();
        assert!(main_trace_ineq(&g, &a, &b).unwrap_err().is_domain());
        let bf = ScalarFunctionSpec::exp_kernel(1.0, -1).unwrap();
        assert_eq!(main_trace_ineq(&bf, &a, &b).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn abq_counterexample_pair() {
        let (a, b) = pair();
        let r2 = 2f64.sqrt() / 2.0;
        for q in [2.5, 3.0, 4.0, 5.0] {
            let r = cor_abq_gap(&a, &b, q).unwrap();
            let lhs = (1.0 + r2).powf(q) + (1.0 - r2).powf(q) - 2.0;
            let rhs = (2f64.powf(q) - 2.0) / 2.0;
            assert!(close(r.lhs, lhs, 1e-10), "q={q}: {} vs {lhs}", r.lhs);
            assert!(close(r.rhs, rhs, 1e-10), "q={q}: {} vs {rhs}", r.rhs);
            let expected = if q > 3.0 { Verdict::Fail } else { Verdict::Pass };
            assert_eq!(r.verdict, expected, "q={q}");
        }
        let r = cor_abq_gap(&a, &b, 4.0).unwrap();
        assert!(close(r.lhs, 6.5, 1e-12) && close(r.rhs, 7.0, 1e-12));
        let r = cor_abq_gap(&a, &b, 3.0).unwrap();
        assert!((r.lhs - r.rhs).abs() <= 1e-10);
    }

    #[test]
    fn abq_quadratic_and_negative() {
        let (a, b) = (random_psd(3, 3, 3).unwrap(), random_psd(3, 3, 4).unwrap());
        let r = cor_abq_gap(&a, &b, 2.0).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-10));
        assert_eq!(cor_abq_gap(&a, &b, -1.0).unwrap().verdict, Verdict::Pass);
        let (a, b) = pair();
        assert!(cor_abq_gap(&a, &b, -1.0).unwrap_err().is_domain());
    }

    #[test]
    fn pmean_examples() {
        let (a, b) = (random_psd(3, 3, 7).unwrap(), random_psd(3, 3, 8).unwrap());
        let r = cor_pmean_gap(&a, &b, 1.0).unwrap();
        let half = (a.trace() + b.trace()) / 2.0;
        assert!(close(r.lhs, half, 1e-10) && close(r.rhs, half, 1e-10));
        let r = cor_pmean_gap(&a, &a, 2.7).unwrap();
        assert!(close(r.lhs, a.trace(), 1e-9) && close(r.rhs, a.trace(), 1e-9));
        let r = cor_pmean_gap(&a, &b, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(cor_pmean_gap(&a, &b, 0.5).is_err());
    }

    #[test]
    fn faltq_examples() {
        let (a, b) = pair();
        let r = cor_faltq_gap(&a, &b, 4.0).unwrap();
        assert!(close(r.lhs, 6.5, 1e-12) && close(r.rhs, 3.5, 1e-12));
        assert_eq!(r.verdict, Verdict::ConjectureObs);
        assert!(r.gap > 0.0);
        let (a, b) = (random_psd(3, 3, 9).unwrap(), random_psd(3, 3, 10).unwrap());
        let r = cor_faltq_gap(&a, &b, 2.0).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-10));
        let r = cor_faltq_gap(&a, &a, 1.7).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-9));
    }

    #[test]
    fn alt_examples() {
        let (a, b) = (random_psd(3, 3, 13).unwrap(), random_psd(3, 3, 14).unwrap());
        let r = alt_gap(&a, &b, 2.0).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-10));
        let r = alt_gap(&a, &b, 1.0).unwrap();
        assert!(r.lhs <= r.rhs + r.tol);
        let (c, d) = (diag(&[1.0, 2.0, 3.0]), diag(&[0.5, 4.0, 1.0]));
        for q in [-3.0, -1.0, 0.5, 3.0] {
            let r = alt_gap(&c, &d, q).unwrap();
            assert!(close(r.lhs, r.rhs, 1e-12), "q={q}");
        }
    }

    #[test]
    fn prop_q4_examples() {
        let i2 = HermitianMatrix::identity(2);
        let c = prop_q4_check(&i2, &i2).unwrap();
        assert!(close(c.record.lhs, 28.0, 1e-12));
        assert!(c.identity_residual < 1e-12);
        let a = random_psd(2, 2, 1).unwrap();
        let c = prop_q4_check(&a, &HermitianMatrix::zeros(2)).unwrap();
        assert!(c.record.lhs.abs() < 1e-12 && c.record.rhs == 0.0);
        let (a, b) = (random_psd(4, 4, 15).unwrap(), random_psd(4, 4, 16).unwrap());
        let c = prop_q4_check(&a, &b).unwrap();
        assert!(c.identity_holds(1e-9));
        assert_eq!(c.record.verdict, Verdict::Pass);
    }

    #[test]
    fn abq3_examples() {
        let d = random_psd(2, 2, 17).unwrap();
        let zero = GeneralMatrix::zeros(2, 2);
        let r = cor_abq3_gap(&zero, &d, 1.5).unwrap();
        assert!(r.lhs.abs() < 1e-10 && r.rhs.abs() < 1e-10);
        let s = z_spectrum_check(&zero, &d).unwrap();
        assert!(s.within(1e-9));
    }

    #[test]
    fn abq3_matches_faltq_under_substitution() {
        let c = random_psd(3, 3, 18).unwrap().into_matrix();
        let d = random_psd(3, 3, 19).unwrap();
        let (a, b) = abq3_substitution(&c, &d).unwrap();
        for q in [-2.5, 0.5, 1.5, 2.5] {
            let x = cor_abq3_gap(&c, &d, q).unwrap();
            let y = cor_faltq_gap(&a, &b, q).unwrap();
            assert!(close(x.lhs, y.lhs, 1e-9), "q={q}: {} vs {}", x.lhs, y.lhs);
            assert!(close(x.rhs, y.rhs, 1e-9), "q={q}: {} vs {}", x.rhs, y.rhs);
        }
        let r = cor_abq3_gap(&c, &d, 1.5).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.lhs <= r.rhs);
    }

    #[test]
    fn norm_compression_examples() {
        let x = random_psd(2, 2, 20).unwrap();
        let q = 2.5;
        let r = norm_compression_gap(&x, x.as_matrix(), &x, q).unwrap();
        let tx: f64 = crate::matcore::eigh(&x)
            .unwrap()
            .eigenvalues
            .iter()
            .map(|l| l.powf(q))
            .sum();
        assert!(close(r.lhs, 2f64.powf(q) * tx, 1e-9));
        assert!(close(r.rhs, r.lhs, 1e-9));
        let y = random_psd(2, 2, 21).unwrap();
        let r = norm_compression_gap(&x, &GeneralMatrix::zeros(2, 2), &y, q).unwrap();
        assert!(close(r.lhs, r.rhs, 1e-10));
        let big = random_psd(4, 4, 22).unwrap();
        let (b, c, d) = crate::matcore::split_blocks(&big, 2).unwrap();
        let r = norm_compression_gap(&b, &c, &d, 1.5).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let bad = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(norm_compression_gap(&bad, &c, &d, 1.5).is_err());
    }

    #[test]
    fn subadditivity_examples() {
        let a = random_psd(2, 2, 23).unwrap();
        let g = ScalarFunctionSpec::exp_kernel(1.0, 1).unwrap();
        let r = trace_subadd_gap(&g, &a, &HermitianMatrix::zeros(2)).unwrap();
        assert!(close(r.gap, 2.0, 1e-12));
        let i2 = HermitianMatrix::identity(2);
        let r = trace_subadd_gap(&ScalarFunctionSpec::power(2.5).unwrap(), &i2, &i2).unwrap();
        assert!(close(r.lhs, 2f64.powf(2.5) * 2.0, 1e-12) && close(r.rhs, 4.0, 1e-12));
        assert_eq!(r.verdict, Verdict::Pass);
        let bf0 = ScalarFunctionSpec::bfk_discrete(0, vec![0.5, 2.0], vec![1.0, 0.3]).unwrap();
        let r = trace_subadd_gap(&bf0, &diag(&[1.0, 2.0]), &diag(&[0.5, 3.0])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
