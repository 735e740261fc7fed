//! Seeded random matrix ensembles.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::{GeneralMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

/// The generator used for every seeded draw in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// `G G^*` with `G` square standard complex normal.
    Wishart,
    /// `G G^*` with `G` of uniformly drawn rank `1..dim` (rank 1 when dim = 1).
    RankDeficient,
    /// `U diag(u) U^*` with `u` uniform on `[0, 1]^dim` and `U` Haar unitary.
    RotatedUniform,
}

impl Ensemble {
    pub const ALL: [Ensemble; 3] = [
        Ensemble::Wishart,
        Ensemble::RankDeficient,
        Ensemble::RotatedUniform,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Ensemble::Wishart => "wishart",
            Ensemble::RankDeficient => "rank_deficient",
            Ensemble::RotatedUniform => "rotated_uniform",
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R, dim: usize) -> HermitianMatrix {
        match self {
            Ensemble::Wishart => gram(&random_gaussian(rng, dim, dim)),
            Ensemble::RankDeficient => {
                let rank = if dim == 1 {
                    1
                } else {
                    rng.random_range(1..dim)
                };
                gram(&random_gaussian(rng, dim, rank))
            }
            Ensemble::RotatedUniform => {
                let u = random_unitary(rng, dim);
                let diag: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
                let d = HermitianMatrix::from_real_diagonal(&diag);
                d.congruence(&u.adjoint())
                    .expect("square factors of matching size")
            }
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown ensemble `{s}`")))
    }
}

/// Standard complex normal draw: real and imaginary parts `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> GeneralMatrix {
    GeneralMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `G G^*`, positive semidefinite by construction.
pub fn gram(g: &GeneralMatrix) -> HermitianMatrix {
    let prod = g.mul(&g.adjoint()).expect("conformable by construction");
    HermitianMatrix::new(prod).expect("square by construction")
}

/// Haar-distributed unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GeneralMatrix {
    loop {
        let g = random_gaussian(rng, n, n);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

fn orthonormalize_columns(g: &GeneralMatrix) -> Option<GeneralMatrix> {
    let n = g.rows();
    let mut q = g.clone();
    for k in 0..q.cols() {
        for j in 0..k {
            let ip: C64 = (0..n).map(|i| q[(i, j)].conj() * q[(i, k)]).sum();
            for i in 0..n {
                let qij = q[(i, j)];
                q[(i, k)] -= ip * qij;
            }
        }
        let norm = (0..n).map(|i| q[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        for i in 0..n {
            q[(i, k)] /= norm;
        }
    }
    Some(q)
}

/// `G G^*` with `G` a `dim x rank` standard complex normal matrix drawn from
/// a generator seeded with `seed`.
pub fn random_psd(dim: usize, rank: usize, seed: u64) -> Result<HermitianMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::invalid(format!(
            "random_psd needs 1 <= rank <= dim, got rank {rank}, dim {dim}"
        )));
    }
    let mut rng = seeded_rng(seed);
    Ok(gram(&random_gaussian(&mut rng, dim, rank)))
}
