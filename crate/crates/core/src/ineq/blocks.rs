//! Inequalities on 2x2 block matrices.
//!
//! For `C` (`m x n`) and `D > 0` (`m x m`),
//! `Z = [[C^* D^{-1} C, C^*], [C, D]]` is PSD of rank `m`, and its non-zero
//! spectrum equals that of `A + B` with `A = D^{-1/2} C C^* D^{-1/2}` and
//! `B = D`.

use crate::error::{Error, Result};
use crate::matcore::eigh::eigh;
use crate::matcore::matrix::{block2x2, GeneralMatrix, HermitianMatrix};
use crate::matcore::spectral::{power_trace, prepare_spectrum, Domain};
use crate::matcore::spectral::power_trace_top;

use super::case::{CaseId, TrialRecord};
use super::ops::{power_of, psd_decomposition, psd_eigenvalues};

struct BlockParts {
    /// `C^* D^{-1} C`
    w: HermitianMatrix,
    z: HermitianMatrix,
    d_eigs: Vec<f64>,
    /// Eigenvalues of `C^* C` (squared singular values of `C`).
    cc_eigs: Vec<f64>,
}

fn positive_definite(d: &HermitianMatrix) -> Result<crate::matcore::SpectralDecomposition> {
    let sd = eigh(d)?;
    prepare_spectrum(&sd.eigenvalues, Domain::Positive, "D^{-1}")?;
    Ok(sd)
}

fn check_block_shape(c: &GeneralMatrix, d: &HermitianMatrix) -> Result<()> {
    if c.rows() != d.dim() || c.cols() == 0 {
        return Err(Error::shape(format!(
            "C is {}x{} but D is {}x{}",
            c.rows(),
            c.cols(),
            d.dim(),
            d.dim()
        )));
    }
    Ok(())
}

fn block_parts(c: &GeneralMatrix, d: &HermitianMatrix) -> Result<BlockParts> {
    check_block_shape(c, d)?;
    let sd = positive_definite(d)?;
    let d_inv = power_of(&sd, -1.0)?;
    let w = d_inv.congruence(c)?;
    let z = block2x2(&w, c, d)?;
    let cc = HermitianMatrix::new(c.adjoint().mul(c)?)?;
    Ok(BlockParts {
        w,
        z,
        d_eigs: sd.eigenvalues,
        cc_eigs: psd_eigenvalues(&cc, "C^* C")?,
    })
}

/// `(A, B) = (D^{-1/2} C C^* D^{-1/2}, D)`.
pub fn abq3_substitution(
    c: &GeneralMatrix,
    d: &HermitianMatrix,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    check_block_shape(c, d)?;
    let sd = positive_definite(d)?;
    let root_inv = power_of(&sd, -0.5)?;
    let x = root_inv.as_matrix().mul(c)?;
    let a = HermitianMatrix::new(x.mul(&x.adjoint())?)?;
    Ok((a, d.clone()))
}

/// `tr Z^q - tr (C^* D^{-1} C)^q - tr D^q` against `(2^q - 2) tr |C|^q`.
///
/// For `q ≤ 0` the powers of the singular matrices `Z`, `C^* D^{-1} C` and
/// `C^* C` are taken on their supports (the `m` largest eigenvalues), which
/// requires `rank C = m`.
pub fn cor_abq3_gap(c: &GeneralMatrix, d: &HermitianMatrix, q: f64) -> Result<TrialRecord> {
    let orientation = CaseId::CorAbq3.orientation(q)?;
    let parts = block_parts(c, d)?;
    let m = d.dim();
    let z_eigs = psd_eigenvalues(&parts.z, "Z")?;
    let w_eigs = psd_eigenvalues(&parts.w, "C^* D^{-1} C")?;
    let (lhs, cq) = if q > 0.0 {
        (
            power_trace(&z_eigs, q)? - power_trace(&w_eigs, q)? - power_trace(&parts.d_eigs, q)?,
            power_trace(&parts.cc_eigs, q / 2.0)?,
        )
    } else {
        if c.cols() < m {
            return Err(Error::invalid(format!(
                "q = {q} needs rank C = {m}, but C has only {} columns",
                c.cols()
            )));
        }
        (
            power_trace_top(&z_eigs, m, q)?
                - power_trace_top(&w_eigs, m, q)?
                - power_trace(&parts.d_eigs, q)?,
            power_trace_top(&parts.cc_eigs, m, q / 2.0)?,
        )
    };
    let rhs = (2f64.powf(q) - 2.0) * cq;
    TrialRecord::new(CaseId::CorAbq3, q, m, lhs, rhs, orientation)
}

/// Distance between the spectrum of `A + B` and the `m` largest eigenvalues
/// of `Z`, with the scale `max(λ_max(Z), 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumMatch {
    pub distance: f64,
    pub scale: f64,
}

impl SpectrumMatch {
    pub fn within(&self, rel_tol: f64) -> bool {
        self.distance <= rel_tol * self.scale
    }
}

pub fn z_spectrum_check(c: &GeneralMatrix, d: &HermitianMatrix) -> Result<SpectrumMatch> {
    let parts = block_parts(c, d)?;
    let (a, b) = abq3_substitution(c, d)?;
    let sum = psd_eigenvalues(&a.add(&b)?, "A+B")?;
    let z = psd_eigenvalues(&parts.z, "Z")?;
    let top = &z[z.len() - sum.len()..];
    let distance = hausdorff(&sum, top);
    let scale = z.last().copied().unwrap_or(0.0).max(1.0);
    Ok(SpectrumMatch { distance, scale })
}

fn hausdorff(x: &[f64], y: &[f64]) -> f64 {
    let directed = |p: &[f64], r: &[f64]| {
        p.iter()
            .map(|a| r.iter().map(|b| (a - b).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    directed(x, y).max(directed(y, x))
}

/// `tr A^q` for `A = [[B, C^*], [C, D]] ≥ 0` against
/// `(2^q - 2) ‖C‖_q^q + ‖B‖_q^q + ‖D‖_q^q`.
pub fn norm_compression_gap(
    b: &HermitianMatrix,
    c: &GeneralMatrix,
    d: &HermitianMatrix,
    q: f64,
) -> Result<TrialRecord> {
    let orientation = CaseId::NormCompression.orientation(q)?;
    let a = block2x2(b, c, d)?;
    let lhs = power_trace(&psd_decomposition(&a, "A")?.eigenvalues, q)?;
    let b_eigs = psd_eigenvalues(b, "B")?;
    let d_eigs = psd_eigenvalues(d, "D")?;
    let cc = HermitianMatrix::new(c.adjoint().mul(c)?)?;
    let c_power = power_trace(&psd_eigenvalues(&cc, "C^* C")?, q / 2.0)?;
    let rhs = (2f64.powf(q) - 2.0) * c_power + power_trace(&b_eigs, q)? + power_trace(&d_eigs, q)?;
    TrialRecord::new(CaseId::NormCompression, q, a.dim(), lhs, rhs, orientation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::Verdict;

    #[test]
    fn hausdorff_distance() {
        assert_eq!(hausdorff(&[1.0, 2.0], &[1.0, 2.5]), 0.5);
        assert_eq!(hausdorff(&[0.0], &[0.0]), 0.0);
    }

    #[test]
    fn abq3_identity_blocks() {
        // C = D = I_1: Z = [[1, 1], [1, 1]] with spectrum {0, 2}.
        let c = GeneralMatrix::identity(1);
        let d = HermitianMatrix::identity(1);
        let r = cor_abq3_gap(&c, &d, 2.5).unwrap();
        let lhs = 2f64.powf(2.5) - 2.0;
        assert!((r.lhs - lhs).abs() < 1e-12);
        assert!((r.rhs - lhs).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Pass);
        let s = z_spectrum_check(&c, &d).unwrap();
        assert!(s.distance < 1e-12);
    }

    #[test]
    fn negative_power_needs_full_rank() {
        let c = GeneralMatrix::zeros(2, 1);
        let d = HermitianMatrix::identity(2);
        assert!(cor_abq3_gap(&c, &d, -2.5).is_err());
        let singular = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let c = GeneralMatrix::identity(2);
        assert!(cor_abq3_gap(&c, &singular, 2.5).unwrap_err().is_domain());
    }

    #[test]
    fn norm_compression_quadratic_is_exact() {
        let b = HermitianMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        let d = HermitianMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 1.0]]).unwrap();
        let c = GeneralMatrix::from_real_rows(&[&[0.3, 0.1], &[0.2, 0.4]]).unwrap();
        let r = norm_compression_gap(&b, &c, &d, 2.0).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-10 * r.lhs);
        assert!(norm_compression_gap(&b, &c, &d, 0.0).is_err());
    }
}
