//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real plane rotation, so the iterate stays
//! Hermitian with a real diagonal. A rotation is skipped when the pivot is
//! negligible relative to its diagonal entries; the solver stops after a
//! full sweep without rotations.

use super::matrix::{GeneralMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

/// Default rotation cap is `ROTATION_CAP_FACTOR * dim^2`.
pub const ROTATION_CAP_FACTOR: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns. Degenerate eigenvalues appear as separate rank-one
/// terms `λ_k v_k v_k^*`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: GeneralMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `Σ_k values[k] v_k v_k^*` for arbitrary per-eigenvector values.
    pub fn synthesize(&self, values: &[f64]) -> Result<HermitianMatrix> {
        let n = self.dim();
        if values.len() != n {
            return Err(Error::shape(format!(
                "{} spectral values for dimension {n}",
                values.len()
            )));
        }
        let v = &self.eigenvectors;
        let m = GeneralMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * values[k])
                .sum()
        });
        HermitianMatrix::new(m)
    }

    pub fn reconstruct(&self) -> Result<HermitianMatrix> {
        self.synthesize(&self.eigenvalues)
    }

    /// Weights `tr(P_k Q_l) = |v_k^* w_l|^2` between the rank-one projectors
    /// of two decompositions, indexed `[k][l]`.
    pub fn overlap_weights(&self, other: &SpectralDecomposition) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::shape(format!(
                "overlap of dimensions {n} and {}",
                other.dim()
            )));
        }
        let (v, w) = (&self.eigenvectors, &other.eigenvectors);
        Ok((0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        let ip: C64 = (0..n).map(|i| v[(i, k)].conj() * w[(i, l)]).sum();
                        ip.norm_sqr()
                    })
                    .collect()
            })
            .collect())
    }
}

pub fn eigh(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    eigh_with_cap(a, ROTATION_CAP_FACTOR * n * n)
}

pub fn eigh_with_cap(a: &HermitianMatrix, max_rotations: usize) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = GeneralMatrix::identity(n);
    let abs_floor = a.frobenius() * f64::EPSILON * f64::EPSILON;
    let mut rotations = 0usize;

    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                let (app, aqq) = (m[(p, p)].re, m[(q, q)].re);
                if b <= abs_floor || b <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    if b != 0.0 {
                        m[(p, q)] = C64::new(0.0, 0.0);
                        m[(q, p)] = C64::new(0.0, 0.0);
                    }
                    continue;
                }
                if rotations == max_rotations {
                    return Err(Error::NoConvergence { rotations });
                }
                rotate(&mut m, &mut v, p, q, apq, b, app, aqq);
                rotations += 1;
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = GeneralMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies `M <- U^* M U`, `V <- V U` with
/// `U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]` on coordinates (p, q), where
/// `a_pq = b e^{iφ}`. This annihilates `a_pq`.
#[allow(clippy::too_many_arguments)]
fn rotate(
    m: &mut GeneralMatrix,
    v: &mut GeneralMatrix,
    p: usize,
    q: usize,
    apq: C64,
    b: f64,
    app: f64,
    aqq: f64,
) {
    let n = m.rows();
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (apq / b).conj();
    let (upp, upq, uqp, uqq) = (C64::new(c, 0.0), C64::new(s, 0.0), phase * -s, phase * c);

    for k in 0..n {
        let (x, y) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = x * upp + y * uqp;
        m[(k, q)] = x * upq + y * uqq;
    }
    for k in 0..n {
        let (x, y) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = upp.conj() * x + uqp.conj() * y;
        m[(q, k)] = upq.conj() * x + uqq.conj() * y;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(app - t * b, 0.0);
    m[(q, q)] = C64::new(aqq + t * b, 0.0);

    for k in 0..n {
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * upp + y * uqp;
        v[(k, q)] = x * upq + y * uqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::random::random_psd;

    fn orthonormality_defect(v: &GeneralMatrix) -> f64 {
        let g = v.adjoint().mul(v).unwrap();
        g.sub(&GeneralMatrix::identity(v.rows())).unwrap().frobenius()
    }

    #[test]
    fn diagonal_input() {
        let a = HermitianMatrix::from_real_diagonal(&[3.0, 1.0]);
        let sd = eigh(&a).unwrap();
        assert_eq!(sd.eigenvalues, vec![1.0, 3.0]);
        assert_eq!(sd.eigenvector(0), vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(sd.eigenvector(1), vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn swap_matrix() {
        let a = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let sd = eigh(&a).unwrap();
        assert!((sd.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((sd.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = GeneralMatrix::from_row_major(
            2,
            2,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let sd = eigh(&HermitianMatrix::new(m).unwrap()).unwrap();
        assert!((sd.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((sd.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_psd_reconstructs() {
        let a = random_psd(6, 6, 7).unwrap();
        let sd = eigh(&a).unwrap();
        let residual = sd
            .reconstruct()
            .unwrap()
            .as_matrix()
            .sub(a.as_matrix())
            .unwrap()
            .frobenius();
        assert!(residual <= 1e-10 * a.frobenius().max(1.0), "{residual}");
        assert!(orthonormality_defect(&sd.eigenvectors) <= 1e-10);
        assert!(sd.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rotation_cap_is_enforced() {
        let a = random_psd(4, 4, 3).unwrap();
        assert!(matches!(
            eigh_with_cap(&a, 2),
            Err(Error::NoConvergence { rotations: 2 })
        ));
    }

    #[test]
    fn zero_and_scalar_matrices() {
        let sd = eigh(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(sd.eigenvalues, vec![0.0; 3]);
        let sd = eigh(&HermitianMatrix::from_real_diagonal(&[-2.5])).unwrap();
        assert_eq!(sd.eigenvalues, vec![-2.5]);
    }

    #[test]
    fn overlap_weights_sum_to_dimension() {
        let a = eigh(&random_psd(5, 5, 1).unwrap()).unwrap();
        let b = eigh(&random_psd(5, 2, 2).unwrap()).unwrap();
        let w = a.overlap_weights(&b).unwrap();
        let total: f64 = w.iter().flatten().sum();
        assert!((total - 5.0).abs() < 1e-12);
        for row in &w {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
