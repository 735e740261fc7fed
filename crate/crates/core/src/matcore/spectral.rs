//! Spectral calculus: `g(A) = Σ_k g(λ_k) v_k v_k^*`, power traces and
//! Schatten norms.

use super::eigh::{eigh, SpectralDecomposition};
use super::matrix::{GeneralMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::funclass::ScalarFunctionSpec;

/// Functions requiring `x > 0` reject spectra whose minimum eigenvalue is
/// below `POSITIVITY_FLOOR * max(λ_max, 1)`.
pub const POSITIVITY_FLOOR: f64 = 1e-8;

/// Eigenvalues down to `-PSD_SLACK * max(λ_max, 1)` count as rounding noise
/// around zero for functions defined on `[0, ∞)`.
pub const PSD_SLACK: f64 = 1e-10;

/// Where a scalar function may be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    NonNegative,
    Positive,
}

impl Domain {
    /// The stricter of two domains.
    pub fn meet(self, other: Domain) -> Domain {
        use Domain::*;
        match (self, other) {
            (Positive, _) | (_, Positive) => Positive,
            (NonNegative, _) | (_, NonNegative) => NonNegative,
            _ => Real,
        }
    }
}

fn reference_scale(eigs: &[f64]) -> f64 {
    eigs.iter().fold(1.0f64, |m, &l| m.max(l))
}

/// Validates a computed spectrum against `domain` and cleans rounding noise.
///
/// For `NonNegative`, eigenvalues within the PSD slack of zero and those
/// below `16 · n · ε · max|λ|` are set to exactly zero.
pub fn prepare_spectrum(eigs: &[f64], domain: Domain, function: &str) -> Result<Vec<f64>> {
    let scale = reference_scale(eigs);
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    match domain {
        Domain::Real => Ok(eigs.to_vec()),
        Domain::Positive => {
            let floor = POSITIVITY_FLOOR * scale;
            if min < floor {
                return Err(Error::DomainViolation {
                    function: function.to_string(),
                    value: min,
                    floor,
                });
            }
            Ok(eigs.to_vec())
        }
        Domain::NonNegative => {
            let slack = PSD_SLACK * scale;
            if min < -slack {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
            let max_abs = eigs.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
            let snap = 16.0 * eigs.len() as f64 * f64::EPSILON * max_abs;
            Ok(eigs
                .iter()
                .map(|&l| if l <= snap { 0.0 } else { l })
                .collect())
        }
    }
}

pub fn apply_spectral_function(a: &HermitianMatrix, g: &ScalarFunctionSpec) -> Result<HermitianMatrix> {
    apply_to_decomposition(&eigh(a)?, g)
}

pub fn apply_to_decomposition(
    sd: &SpectralDecomposition,
    g: &ScalarFunctionSpec,
) -> Result<HermitianMatrix> {
    let eigs = prepare_spectrum(&sd.eigenvalues, g.domain(), &g.label())?;
    let values = eigs.iter().map(|&l| g.eval(l)).collect::<Result<Vec<_>>>()?;
    sd.synthesize(&values)
}

/// `trace g(A)` straight from the spectrum.
pub fn trace_function(eigs: &[f64], g: &ScalarFunctionSpec) -> Result<f64> {
    let eigs = prepare_spectrum(eigs, g.domain(), &g.label())?;
    eigs.iter().map(|&l| g.eval(l)).sum()
}

/// `Σ λ^q` over the spectrum. `q < 0` requires a strictly positive spectrum;
/// `q = 0` counts eigenvalues.
pub fn power_trace(eigs: &[f64], q: f64) -> Result<f64> {
    trace_function(eigs, &ScalarFunctionSpec::power(q)?)
}

/// `Σ λ^q` over the `count` largest eigenvalues only: the trace of the
/// power taken on the support of a matrix with known rank.
pub fn power_trace_top(eigs: &[f64], count: usize, q: f64) -> Result<f64> {
    if count > eigs.len() {
        return Err(Error::shape(format!(
            "top {count} of {} eigenvalues",
            eigs.len()
        )));
    }
    let mut sorted = eigs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let top = &sorted[eigs.len() - count..];
    if q > 0.0 {
        // The discarded part must still pass the PSD check.
        power_trace(&sorted, q)?;
    }
    power_trace(top, q)
}

/// Singular values of `x`, as square roots of the eigenvalues of `x^* x`,
/// ascending.
pub fn singular_values(x: &GeneralMatrix) -> Result<Vec<f64>> {
    let gram = HermitianMatrix::new(x.adjoint().mul(x)?)?;
    let eigs = prepare_spectrum(&eigh(&gram)?.eigenvalues, Domain::NonNegative, "x^* x")?;
    Ok(eigs.into_iter().map(f64::sqrt).collect())
}

/// `Σ σ_i^q = ‖x‖_q^q`.
pub fn schatten_power_sum(x: &GeneralMatrix, q: f64) -> Result<f64> {
    if q.is_nan() || q <= 0.0 {
        return Err(Error::invalid(format!("Schatten exponent must be > 0, got {q}")));
    }
    Ok(singular_values(x)?.iter().map(|s| s.powf(q)).sum())
}

/// `‖x‖_q = (trace |x|^q)^{1/q}`.
pub fn schatten_norm(x: &GeneralMatrix, q: f64) -> Result<f64> {
    Ok(schatten_power_sum(x, q)?.powf(1.0 / q))
}
