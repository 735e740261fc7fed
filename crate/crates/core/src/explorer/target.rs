use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funclass::ScalarFunctionSpec;
use crate::ineq::{self, CaseId, Orientation, TrialRecord, Verdict};
use crate::matcore::random::{gram, random_gaussian};
use crate::matcore::{split_blocks, Ensemble, GeneralMatrix, HermitianMatrix};

/// Relative tolerance on the quartic expansion identity checked alongside
/// every PROP_Q4 trial.
pub const IDENTITY_TOL_REL: f64 = 1e-9;

/// The matrices one trial is evaluated on.
#[derive(Clone, Debug, PartialEq)]
pub enum TrialInputs {
    /// Two operands of the same dimension.
    Pair { a: HermitianMatrix, b: HermitianMatrix },
    /// Off-diagonal block `C` (`m x n`) and `D > 0` (`m x m`).
    Compression { c: GeneralMatrix, d: HermitianMatrix },
    /// Blocks of `[[B, C^*], [C, D]]`.
    Partitioned {
        b: HermitianMatrix,
        c: GeneralMatrix,
        d: HermitianMatrix,
    },
}

/// One inequality at one parameter value: a case plus `q` (or `p`, `t`), or
/// a case plus a scalar function for the function-driven cases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub case: CaseId,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<ScalarFunctionSpec>,
}

impl Target {
    pub fn new(case: CaseId, q: f64) -> Result<Self> {
        let t = if case.uses_function() {
            Target {
                case,
                q,
                function: Some(ScalarFunctionSpec::power(q)?),
            }
        } else {
            Target {
                case,
                q,
                function: None,
            }
        };
        t.orientation()?;
        Ok(t)
    }

    pub fn with_function(case: CaseId, function: ScalarFunctionSpec) -> Result<Self> {
        if !case.uses_function() {
            return Err(Error::invalid(format!("{case} does not take a function")));
        }
        let t = Target {
            case,
            q: function.exponent().unwrap_or(0.0),
            function: Some(function),
        };
        t.orientation()?;
        Ok(t)
    }

    /// Validates the parameter; errors for parameters outside every region.
    pub fn orientation(&self) -> Result<Orientation> {
        match &self.function {
            Some(g) => self.case.orientation_for_class(g.class_tag()),
            None if self.case.uses_function() => Err(Error::invalid(format!(
                "{} needs a scalar function",
                self.case
            ))),
            None => self.case.orientation(self.q),
        }
    }

    pub fn label(&self) -> String {
        match &self.function {
            Some(g) => g.label(),
            None => format!("{}", self.q),
        }
    }

    /// Draws inputs of size `dim` (block size for partitioned cases).
    pub fn draw<R: Rng + ?Sized>(&self, ensemble: Ensemble, dim: usize, rng: &mut R) -> TrialInputs {
        match self.case {
            CaseId::CorAbq3 => {
                let d = ensemble.sample(rng, dim);
                let c = random_gaussian(rng, dim, dim);
                TrialInputs::Compression { c, d }
            }
            CaseId::NormCompression => {
                let full = ensemble.sample(rng, 2 * dim);
                let (b, c, d) = split_blocks(&full, dim).expect("split of a 2n x 2n matrix at n");
                TrialInputs::Partitioned { b, c, d }
            }
            CaseId::GoldenThompson => {
                // Indefinite operands: differences of two ensemble draws.
                let indefinite = |rng: &mut R| {
                    let p = ensemble.sample(rng, dim);
                    let n = ensemble.sample(rng, dim);
                    p.add(&n.scale(-1.0)).expect("equal dimensions")
                };
                let a = indefinite(rng);
                let b = indefinite(rng);
                TrialInputs::Pair { a, b }
            }
            _ => {
                let a = ensemble.sample(rng, dim);
                let b = ensemble.sample(rng, dim);
                TrialInputs::Pair { a, b }
            }
        }
    }

    /// Builds inputs from unconstrained factors: Gram factors for PSD
    /// operands, Hermitian parts for indefinite ones, raw blocks for `C`.
    pub(crate) fn inputs_from_factors(&self, f: &[GeneralMatrix]) -> Result<TrialInputs> {
        Ok(match self.case {
            CaseId::CorAbq3 => TrialInputs::Compression {
                c: f[0].clone(),
                d: gram(&f[1]),
            },
            CaseId::NormCompression => {
                let full = gram(&f[0]);
                let n = full.dim() / 2;
                let (b, c, d) = split_blocks(&full, n)?;
                TrialInputs::Partitioned { b, c, d }
            }
            CaseId::GoldenThompson => TrialInputs::Pair {
                a: HermitianMatrix::new(f[0].clone())?,
                b: HermitianMatrix::new(f[1].clone())?,
            },
            _ => TrialInputs::Pair {
                a: gram(&f[0]),
                b: gram(&f[1]),
            },
        })
    }

    /// Factor shapes `(rows, cols)` matching [`Target::inputs_from_factors`]
    /// for operand size `dim` and Gram rank `rank`.
    pub(crate) fn factor_shapes(&self, dim: usize, rank: usize) -> Vec<(usize, usize)> {
        match self.case {
            CaseId::CorAbq3 => vec![(dim, dim), (dim, rank)],
            CaseId::NormCompression => vec![(2 * dim, 2 * rank)],
            CaseId::GoldenThompson => vec![(dim, dim), (dim, dim)],
            _ => vec![(dim, rank), (dim, rank)],
        }
    }

    /// Evaluates the inequality with tolerance `tol_rel`.
    pub fn evaluate(&self, inputs: &TrialInputs, tol_rel: f64) -> Result<TrialRecord> {
        let g = || {
            self.function
                .as_ref()
                .ok_or_else(|| Error::invalid(format!("{} needs a scalar function", self.case)))
        };
        let q = self.q;
        let record = match (self.case, inputs) {
            (CaseId::Mccarthy, TrialInputs::Pair { a, b }) => ineq::mccarthy_gap(a, b, q)?,
            (CaseId::GoldenThompson, TrialInputs::Pair { a, b }) => ineq::golden_thompson_gap(a, b, q)?,
            (CaseId::MainTrace, TrialInputs::Pair { a, b }) => ineq::main_trace_ineq(g()?, a, b)?,
            (CaseId::CorAbq, TrialInputs::Pair { a, b }) => ineq::cor_abq_gap(a, b, q)?,
            (CaseId::CorPmean, TrialInputs::Pair { a, b }) => ineq::cor_pmean_gap(a, b, q)?,
            (CaseId::CorFaltq, TrialInputs::Pair { a, b }) => ineq::cor_faltq_gap(a, b, q)?,
            (CaseId::Alt, TrialInputs::Pair { a, b }) => ineq::alt_gap(a, b, q)?,
            (CaseId::TraceSubadd, TrialInputs::Pair { a, b }) => ineq::trace_subadd_gap(g()?, a, b)?,
            (CaseId::PropQ4, TrialInputs::Pair { a, b }) => {
                let check = ineq::prop_q4_check(a, b)?;
                let mut record = check.record.clone().with_tolerance(tol_rel);
                if !check.identity_holds(IDENTITY_TOL_REL) {
                    record.verdict = Verdict::Fail;
                }
                return Ok(record);
            }
            (CaseId::CorAbq3, TrialInputs::Compression { c, d }) => ineq::cor_abq3_gap(c, d, q)?,
            (CaseId::NormCompression, TrialInputs::Partitioned { b, c, d }) => {
                ineq::norm_compression_gap(b, c, d, q)?
            }
            (case, _) => {
                return Err(Error::invalid(format!("{case} cannot take these inputs")));
            }
        };
        Ok(record.with_tolerance(tol_rel))
    }
}
