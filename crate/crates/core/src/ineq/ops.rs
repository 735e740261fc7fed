use crate::error::{Error, Result};
use crate::funclass::{ClassTag, ScalarFunctionSpec};
use crate::matcore::eigh::{eigh, SpectralDecomposition};
use crate::matcore::matrix::{check_real, trace_of_product, GeneralMatrix, HermitianMatrix};
use crate::matcore::spectral::{apply_to_decomposition, power_trace, prepare_spectrum, Domain};

use super::case::{CaseId, TrialRecord};

pub(crate) fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<usize> {
    if a.dim() != b.dim() {
        return Err(Error::shape(format!(
            "operands have dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.dim())
}

/// Decomposition whose spectrum passed the PSD check (eigenvalues snapped).
pub(crate) fn psd_decomposition(a: &HermitianMatrix, name: &str) -> Result<SpectralDecomposition> {
    let mut sd = eigh(a)?;
    sd.eigenvalues = prepare_spectrum(&sd.eigenvalues, Domain::NonNegative, name)?;
    Ok(sd)
}

pub(crate) fn psd_eigenvalues(a: &HermitianMatrix, name: &str) -> Result<Vec<f64>> {
    Ok(psd_decomposition(a, name)?.eigenvalues)
}

/// `X^s` for a PSD decomposition.
pub(crate) fn power_of(sd: &SpectralDecomposition, s: f64) -> Result<HermitianMatrix> {
    apply_to_decomposition(sd, &ScalarFunctionSpec::power(s)?)
}

/// Real part of `tr(PQ)` for Hermitian `P`, `Q`.
pub(crate) fn real_trace_product(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    let t = trace_of_product(p.as_matrix(), q.as_matrix())?;
    check_real(t, p.frobenius() * q.frobenius())
}

fn sum_decompositions(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<(SpectralDecomposition, SpectralDecomposition, SpectralDecomposition)> {
    same_dim(a, b)?;
    let sa = psd_decomposition(a, "A")?;
    let sb = psd_decomposition(b, "B")?;
    let ss = psd_decomposition(&a.add(b)?, "A+B")?;
    Ok((sa, sb, ss))
}

/// `tr(A+B)^q` against `tr A^q + tr B^q` for PSD `A`, `B` and `q > 0`.
pub fn mccarthy_gap(a: &HermitianMatrix, b: &HermitianMatrix, q: f64) -> Result<TrialRecord> {
    let orientation = CaseId::Mccarthy.orientation(q)?;
    let (sa, sb, ss) = sum_decompositions(a, b)?;
    let lhs = power_trace(&ss.eigenvalues, q)?;
    let rhs = power_trace(&sa.eigenvalues, q)? + power_trace(&sb.eigenvalues, q)?;
    TrialRecord::new(CaseId::Mccarthy, q, a.dim(), lhs, rhs, orientation)
}

/// `tr e^{-(A+B)t} ≤ tr e^{-At} e^{-Bt}` for Hermitian `A`, `B` and `t ≥ 0`.
pub fn golden_thompson_gap(a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> Result<TrialRecord> {
    let orientation = CaseId::GoldenThompson.orientation(t)?;
    same_dim(a, b)?;
    let kernel = ScalarFunctionSpec::exp_kernel(t, 1)?;
    let ss = eigh(&a.add(b)?)?;
    let lhs: f64 = ss.eigenvalues.iter().map(|&l| (-l * t).exp()).sum();
    let ea = apply_to_decomposition(&eigh(a)?, &kernel)?;
    let eb = apply_to_decomposition(&eigh(b)?, &kernel)?;
    let rhs = real_trace_product(&ea, &eb)?;
    TrialRecord::new(CaseId::GoldenThompson, t, a.dim(), lhs, rhs, orientation)
}

/// `tr(g(A+B) - g(A) - g(B))` against
/// `Σ_{k,l} (g(2√(a_k b_l)) - 2 g(√(a_k b_l))) tr(A_k B_l)`,
/// where `A_k`, `B_l` are the spectral projectors of `A` and `B`.
///
/// CM0 functions require `A, B > 0`; the other classes need `A, B ≥ 0`.
pub fn main_trace_ineq(
    g: &ScalarFunctionSpec,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<TrialRecord> {
    let class = g.class_tag();
    let orientation = CaseId::MainTrace.orientation_for_class(class)?;
    let domain = match class {
        ClassTag::Cm0 => Domain::Positive,
        _ => Domain::NonNegative,
    }
    .meet(g.domain());
    let (mut sa, mut sb, ss) = sum_decompositions(a, b)?;
    let label = g.label();
    sa.eigenvalues = prepare_spectrum(&sa.eigenvalues, domain, &label)?;
    sb.eigenvalues = prepare_spectrum(&sb.eigenvalues, domain, &label)?;
    let trace_g = |eigs: &[f64]| -> Result<f64> { eigs.iter().map(|&l| g.eval(l)).sum() };
    let lhs = trace_g(&ss.eigenvalues)? - trace_g(&sa.eigenvalues)? - trace_g(&sb.eigenvalues)?;
    let weights = sa.overlap_weights(&sb)?;
    let mut rhs = 0.0;
    for (k, &ak) in sa.eigenvalues.iter().enumerate() {
        for (l, &bl) in sb.eigenvalues.iter().enumerate() {
            let gm = (ak * bl).sqrt();
            rhs += (g.eval(2.0 * gm)? - 2.0 * g.eval(gm)?) * weights[k][l];
        }
    }
    let q = function_parameter(g);
    Ok(TrialRecord::new(CaseId::MainTrace, q, a.dim(), lhs, rhs, orientation)?.with_function(label))
}

/// `tr(A+B)^q - tr A^q - tr B^q` against `(2^q - 2) tr A^{q/2} B^{q/2}`.
pub fn cor_abq_gap(a: &HermitianMatrix, b: &HermitianMatrix, q: f64) -> Result<TrialRecord> {
    let orientation = CaseId::CorAbq.orientation(q)?;
    let (sa, sb, ss) = sum_decompositions(a, b)?;
    let lhs = power_trace(&ss.eigenvalues, q)?
        - power_trace(&sa.eigenvalues, q)?
        - power_trace(&sb.eigenvalues, q)?;
    let cross = real_trace_product(&power_of(&sa, q / 2.0)?, &power_of(&sb, q / 2.0)?)?;
    let rhs = (2f64.powf(q) - 2.0) * cross;
    TrialRecord::new(CaseId::CorAbq, q, a.dim(), lhs, rhs, orientation)
}

/// Power-mean bound: `tr((A^p + B^p)/2)^{1/p}` against
/// `c tr(A+B)/2 + (1 - c) tr A^{1/2} B^{1/2}` with `c = 2^{1-1/p}`, `p ≥ 1`.
pub fn cor_pmean_gap(a: &HermitianMatrix, b: &HermitianMatrix, p: f64) -> Result<TrialRecord> {
    let orientation = CaseId::CorPmean.orientation(p)?;
    let (sa, sb, _) = sum_decompositions(a, b)?;
    let mean = power_of(&sa, p)?.add(&power_of(&sb, p)?)?.scale(0.5);
    let lhs = power_trace(&psd_eigenvalues(&mean, "(A^p+B^p)/2")?, 1.0 / p)?;
    let c = 2f64.powf(1.0 - 1.0 / p);
    let cross = real_trace_product(&power_of(&sa, 0.5)?, &power_of(&sb, 0.5)?)?;
    let rhs = c * (a.trace() + b.trace()) / 2.0 + (1.0 - c) * cross;
    TrialRecord::new(CaseId::CorPmean, p, a.dim(), lhs, rhs, orientation)
}

/// `tr(A+B)^q - tr A^q - tr B^q` against
/// `(2^q - 2) tr (A^{1/2} B A^{1/2})^{q/2}`.
pub fn cor_faltq_gap(a: &HermitianMatrix, b: &HermitianMatrix, q: f64) -> Result<TrialRecord> {
    let orientation = CaseId::CorFaltq.orientation(q)?;
    let (sa, sb, ss) = sum_decompositions(a, b)?;
    let lhs = power_trace(&ss.eigenvalues, q)?
        - power_trace(&sa.eigenvalues, q)?
        - power_trace(&sb.eigenvalues, q)?;
    let sandwich = sandwich_eigenvalues(&sa, b)?;
    let rhs = (2f64.powf(q) - 2.0) * power_trace(&sandwich, q / 2.0)?;
    TrialRecord::new(CaseId::CorFaltq, q, a.dim(), lhs, rhs, orientation)
}

/// Spectrum of `A^{1/2} B A^{1/2}`.
fn sandwich_eigenvalues(sa: &SpectralDecomposition, b: &HermitianMatrix) -> Result<Vec<f64>> {
    let root = power_of(sa, 0.5)?;
    let m = b.congruence(root.as_matrix())?;
    psd_eigenvalues(&m, "A^{1/2} B A^{1/2}")
}

/// `tr A^{q/2} B^{q/2}` against `tr (A^{1/2} B A^{1/2})^{q/2}`.
pub fn alt_gap(a: &HermitianMatrix, b: &HermitianMatrix, q: f64) -> Result<TrialRecord> {
    let orientation = CaseId::Alt.orientation(q)?;
    let (sa, sb, _) = sum_decompositions(a, b)?;
    let lhs = real_trace_product(&power_of(&sa, q / 2.0)?, &power_of(&sb, q / 2.0)?)?;
    let rhs = power_trace(&sandwich_eigenvalues(&sa, b)?, q / 2.0)?;
    TrialRecord::new(CaseId::Alt, q, a.dim(), lhs, rhs, orientation)
}

/// Quartic check: the record compares `tr(A+B)^4 - tr A^4 - tr B^4` with
/// `12 tr (AB)^2`; the residual compares the same left side, taken from
/// spectra, with its expansion
/// `4 tr(A^3 B + A^2 B^2 + A B^3) + 2 tr (AB)^2` from matrix products.
#[derive(Clone, Debug, PartialEq)]
pub struct PropQ4Check {
    pub record: TrialRecord,
    pub identity_residual: f64,
    pub identity_scale: f64,
}

impl PropQ4Check {
    pub fn identity_holds(&self, rel_tol: f64) -> bool {
        self.identity_residual <= rel_tol * self.identity_scale
    }
}

pub fn prop_q4_check(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<PropQ4Check> {
    let orientation = CaseId::PropQ4.orientation(4.0)?;
    let (sa, sb, ss) = sum_decompositions(a, b)?;
    let lhs = power_trace(&ss.eigenvalues, 4.0)?
        - power_trace(&sa.eigenvalues, 4.0)?
        - power_trace(&sb.eigenvalues, 4.0)?;
    let (am, bm) = (a.as_matrix(), b.as_matrix());
    let a2 = am.mul(am)?;
    let b2 = bm.mul(bm)?;
    let ab = am.mul(bm)?;
    let scale = a.frobenius().max(1.0).powi(2) * b.frobenius().max(1.0).powi(2);
    let tr = |p: &GeneralMatrix, q: &GeneralMatrix| {
        trace_of_product(p, q).and_then(|t| check_real(t, scale))
    };
    let abab = tr(&ab, &ab)?;
    let expansion = 4.0 * (tr(&a2.mul(am)?, bm)? + tr(&a2, &b2)? + tr(am, &b2.mul(bm)?)?) + 2.0 * abab;
    let rhs = 12.0 * abab;
    let record = TrialRecord::new(CaseId::PropQ4, 4.0, a.dim(), lhs, rhs, orientation)?;
    Ok(PropQ4Check {
        record,
        identity_residual: (lhs - expansion).abs(),
        identity_scale: lhs.abs().max(expansion.abs()).max(1.0),
    })
}

/// `tr g(A+B)` against `tr g(A) + tr g(B)`: subadditive for CM0 and BF0,
/// superadditive for BFk with `k ≥ 1`. Requires `A, B ≥ 0`.
pub fn trace_subadd_gap(
    g: &ScalarFunctionSpec,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<TrialRecord> {
    let orientation = CaseId::TraceSubadd.orientation_for_class(g.class_tag())?;
    let domain = Domain::NonNegative.meet(g.domain());
    let (sa, sb, ss) = sum_decompositions(a, b)?;
    let label = g.label();
    let trace_g = |eigs: &[f64]| -> Result<f64> {
        prepare_spectrum(eigs, domain, &label)?
            .iter()
            .map(|&l| g.eval(l))
            .sum()
    };
    let lhs = trace_g(&ss.eigenvalues)?;
    let rhs = trace_g(&sa.eigenvalues)? + trace_g(&sb.eigenvalues)?;
    let q = function_parameter(g);
    Ok(TrialRecord::new(CaseId::TraceSubadd, q, a.dim(), lhs, rhs, orientation)?.with_function(label))
}

/// Scalar parameter recorded for a function-driven case: the exponent for
/// powers, `0` otherwise.
pub(crate) fn function_parameter(g: &ScalarFunctionSpec) -> f64 {
    g.exponent().unwrap_or(0.0)
}
