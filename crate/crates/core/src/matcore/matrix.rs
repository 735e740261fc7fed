use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct GeneralMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl GeneralMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GeneralMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        GeneralMatrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(GeneralMatrix { rows, cols, data })
    }

    /// Builds a real matrix from equally sized rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::shape("ragged rows"));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        GeneralMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: &str, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(GeneralMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sum", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "difference", |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::shape(format!(
                "trace of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest modulus of `self - self^*`, zero for Hermitian matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Copies the `rows x cols` block starting at (`r0`, `c0`).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::shape(format!(
                "block {rows}x{cols} at ({r0},{c0}) of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)]))
    }
}

impl Index<(usize, usize)> for GeneralMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for GeneralMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for GeneralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GeneralMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction symmetrizes, `(M + M^*) / 2`, so the stored entries satisfy
/// the Hermitian relation to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(GeneralMatrix);

impl HermitianMatrix {
    pub fn new(m: GeneralMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::shape(format!(
                "Hermitian matrix must be square and non-empty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let sym = GeneralMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Ok(HermitianMatrix(sym))
    }

    /// Like [`HermitianMatrix::new`] but rejects inputs whose deviation from
    /// Hermitian exceeds `rel_tol * max(1, ‖M‖_F)`.
    pub fn new_checked(m: GeneralMatrix, rel_tol: f64) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        if deviation > rel_tol * m.frobenius().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(GeneralMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(GeneralMatrix::zeros(n, n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        HermitianMatrix(GeneralMatrix::from_real_diagonal(diag))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new_checked(GeneralMatrix::from_real_rows(rows)?, 1e-12)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &GeneralMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> GeneralMatrix {
        self.0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(HermitianMatrix(self.0.add(&other.0)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix(self.0.scale(s))
    }

    /// Real trace; the diagonal of a Hermitian matrix is real by construction.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.frobenius()
    }

    /// `X^* H X`, symmetrized.
    pub fn congruence(&self, x: &GeneralMatrix) -> Result<Self> {
        Self::new(x.adjoint().mul(&self.0)?.mul(x)?)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

pub fn mat_mul(a: &GeneralMatrix, b: &GeneralMatrix) -> Result<GeneralMatrix> {
    a.mul(b)
}

pub fn frobenius(a: &GeneralMatrix) -> f64 {
    a.frobenius()
}

/// Trace of a matrix expected to be real (e.g. a product of Hermitian
/// matrices whose trace is real by symmetry). Fails when the imaginary part
/// exceeds `1e-10 * scale`.
pub fn trace_of(a: &GeneralMatrix, scale: f64) -> Result<f64> {
    let t = a.trace()?;
    check_real(t, scale)
}

/// `trace(PQ)` without forming the product.
pub fn trace_of_product(p: &GeneralMatrix, q: &GeneralMatrix) -> Result<C64> {
    if p.cols() != q.rows() || p.rows() != q.cols() {
        return Err(Error::shape(format!(
            "trace of product of {}x{} and {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            acc += p[(i, j)] * q[(j, i)];
        }
    }
    Ok(acc)
}

pub(crate) fn check_real(t: C64, scale: f64) -> Result<f64> {
    let scale = scale.max(t.re.abs()).max(1.0);
    if t.im.abs() > 1e-10 * scale {
        return Err(Error::ImaginaryTrace { imag: t.im, scale });
    }
    Ok(t.re)
}

/// Assembles the partitioned matrix `[[B, C^*], [C, D]]`, where `C` maps the
/// `B` space into the `D` space (`C` is `dim(D) x dim(B)`).
pub fn block2x2(
    b: &HermitianMatrix,
    c: &GeneralMatrix,
    d: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    let (n, m) = (b.dim(), d.dim());
    if c.rows() != m || c.cols() != n {
        return Err(Error::shape(format!(
            "off-diagonal block is {}x{}, expected {m}x{n}",
            c.rows(),
            c.cols()
        )));
    }
    let full = GeneralMatrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
        (true, true) => b[(i, j)],
        (true, false) => c[(j - n, i)].conj(),
        (false, true) => c[(i - n, j)],
        (false, false) => d[(i - n, j - n)],
    });
    HermitianMatrix::new(full)
}

/// Splits a Hermitian matrix into `(B, C, D)` with `B` the leading
/// `upper x upper` block, inverse of [`block2x2`].
pub fn split_blocks(
    a: &HermitianMatrix,
    upper: usize,
) -> Result<(HermitianMatrix, GeneralMatrix, HermitianMatrix)> {
    let total = a.dim();
    if upper == 0 || upper >= total {
        return Err(Error::shape(format!(
            "cannot split a {total}x{total} matrix at {upper}"
        )));
    }
    let m = a.as_matrix();
    let b = HermitianMatrix::new(m.block(0, 0, upper, upper)?)?;
    let c = m.block(upper, 0, total - upper, upper)?;
    let d = HermitianMatrix::new(m.block(upper, upper, total - upper, total - upper)?)?;
    Ok((b, c, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trace_of_identity() {
        let i3 = GeneralMatrix::identity(3);
        assert_eq!(trace_of(&i3, 1.0).unwrap(), 3.0);
        assert_eq!(HermitianMatrix::identity(3).trace(), 3.0);
    }

    #[test]
    fn multiply_by_identity() {
        let a = GeneralMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64 - 1.0));
        assert_eq!(mat_mul(&a, &GeneralMatrix::identity(3)).unwrap(), a);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = GeneralMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.trace(), Err(Error::ShapeMismatch(_))));
        assert!(HermitianMatrix::new(a).is_err());
    }

    #[test]
    fn construction_symmetrizes() {
        let m = GeneralMatrix::from_row_major(
            2,
            2,
            vec![c(1.0, 0.3), c(2.0, 1.0), c(2.0, -1.0 + 1e-13), c(3.0, 0.0)],
        )
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.as_matrix().hermitian_deviation(), 0.0);
        assert_eq!(h[(0, 0)].im, 0.0);
    }

    #[test]
    fn checked_construction_rejects_asymmetric_input() {
        let m = GeneralMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new_checked(m, 1e-12),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn block_of_scalars_is_identity() {
        let one = HermitianMatrix::identity(1);
        let a = block2x2(&one, &GeneralMatrix::zeros(1, 1), &one).unwrap();
        assert_eq!(a, HermitianMatrix::identity(2));
    }

    #[test]
    fn counterexample_pair_sum_as_blocks() {
        // A = diag(1, 0) plus B = ½[[1,1],[1,1]] written block by block.
        let b = HermitianMatrix::from_real_diagonal(&[1.5]);
        let cblk = GeneralMatrix::from_real_rows(&[&[0.5]]).unwrap();
        let d = HermitianMatrix::from_real_diagonal(&[0.5]);
        let sum = block2x2(&b, &cblk, &d).unwrap();
        let expected = HermitianMatrix::from_real_rows(&[&[1.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert_eq!(sum, expected);
    }

    #[test]
    fn split_then_assemble_round_trips() {
        let m = GeneralMatrix::from_fn(5, 5, |i, j| c((i + j) as f64, i as f64 - j as f64));
        let a = HermitianMatrix::new(m).unwrap();
        let (b, cblk, d) = split_blocks(&a, 2).unwrap();
        assert_eq!((b.dim(), cblk.rows(), cblk.cols(), d.dim()), (2, 3, 2, 3));
        assert_eq!(block2x2(&b, &cblk, &d).unwrap(), a);
    }

    #[test]
    fn imaginary_trace_is_rejected() {
        let m = GeneralMatrix::from_fn(2, 2, |i, j| if i == j { c(1.0, 0.5) } else { c(0.0, 0.0) });
        assert!(matches!(trace_of(&m, 1.0), Err(Error::ImaginaryTrace { .. })));
    }
}
