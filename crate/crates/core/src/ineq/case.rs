use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funclass::{subadditivity_direction, ClassTag};

pub const DEFAULT_TOL_REL: f64 = 1e-9;

/// Claimed relation between the two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `lhs ≤ rhs`
    #[serde(rename = "LE")]
    Le,
    /// `lhs ≥ rhs`
    #[serde(rename = "GE")]
    Ge,
    /// `lhs = rhs`; both inequalities hold.
    #[serde(rename = "EQ")]
    Eq,
}

impl Direction {
    /// Gap oriented so that the claim holds iff `gap ≥ 0`.
    pub fn oriented_gap(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Direction::Le => rhs - lhs,
            Direction::Ge => lhs - rhs,
            Direction::Eq => -(lhs - rhs).abs(),
        }
    }

    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        self.oriented_gap(lhs, rhs) >= -tol
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Le => "<=",
            Direction::Ge => ">=",
            Direction::Eq => "==",
        })
    }
}

/// Direction for a parameter value, and whether that value lies in an open
/// (conjectured) region where no verdict may be issued.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub direction: Direction,
    pub conjecture: bool,
}

impl Orientation {
    const fn proven(direction: Direction) -> Self {
        Orientation {
            direction,
            conjecture: false,
        }
    }

    const fn conjectured(direction: Direction) -> Self {
        Orientation {
            direction,
            conjecture: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "CONJECTURE_OBS")]
    ConjectureObs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainConstraint {
    Hermitian,
    Psd,
    StrictlyPd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "MCCARTHY")]
    Mccarthy,
    #[serde(rename = "GOLDEN_THOMPSON")]
    GoldenThompson,
    #[serde(rename = "MAIN_TRACE")]
    MainTrace,
    #[serde(rename = "COR_ABQ")]
    CorAbq,
    #[serde(rename = "COR_PMEAN")]
    CorPmean,
    #[serde(rename = "COR_FALTQ")]
    CorFaltq,
    #[serde(rename = "COR_ABQ3")]
    CorAbq3,
    #[serde(rename = "NORM_COMPRESSION")]
    NormCompression,
    #[serde(rename = "ALT")]
    Alt,
    #[serde(rename = "PROP_Q4")]
    PropQ4,
    #[serde(rename = "TRACE_SUBADD")]
    TraceSubadd,
}

/// Catalog entry describing one inequality.
#[derive(Clone, Copy, Debug)]
pub struct InequalityCase {
    pub id: CaseId,
    pub statement: &'static str,
    pub valid_region: &'static str,
}

impl CaseId {
    pub const ALL: [CaseId; 11] = [
        CaseId::Mccarthy,
        CaseId::GoldenThompson,
        CaseId::MainTrace,
        CaseId::CorAbq,
        CaseId::CorPmean,
        CaseId::CorFaltq,
        CaseId::CorAbq3,
        CaseId::NormCompression,
        CaseId::Alt,
        CaseId::PropQ4,
        CaseId::TraceSubadd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Mccarthy => "MCCARTHY",
            CaseId::GoldenThompson => "GOLDEN_THOMPSON",
            CaseId::MainTrace => "MAIN_TRACE",
            CaseId::CorAbq => "COR_ABQ",
            CaseId::CorPmean => "COR_PMEAN",
            CaseId::CorFaltq => "COR_FALTQ",
            CaseId::CorAbq3 => "COR_ABQ3",
            CaseId::NormCompression => "NORM_COMPRESSION",
            CaseId::Alt => "ALT",
            CaseId::PropQ4 => "PROP_Q4",
            CaseId::TraceSubadd => "TRACE_SUBADD",
        }
    }

    pub fn describe(self) -> InequalityCase {
        let (statement, valid_region) = match self {
            CaseId::Mccarthy => (
                "tr(A+B)^q vs tr A^q + tr B^q",
                "<= on (0,1], >= on [1,inf)",
            ),
            CaseId::GoldenThompson => ("tr e^{-(A+B)t} <= tr e^{-At} e^{-Bt}", "t >= 0"),
            CaseId::MainTrace => (
                "tr(g(A+B)-g(A)-g(B)) vs sum_kl (g(2 sqrt(a_k b_l)) - 2 g(sqrt(a_k b_l))) tr A_k B_l",
                "<= for CM0 (A,B>0) and BF1; >= for BF0 and BF2; == for quadratics",
            ),
            CaseId::CorAbq => (
                "tr(A+B)^q - tr A^q - tr B^q vs (2^q-2) tr A^{q/2} B^{q/2}",
                ">= on (0,1] and [2,3]; <= on q<0 (A,B>0) and [1,2]; fails for some pairs when q>3",
            ),
            CaseId::CorPmean => (
                "tr((A^p+B^p)/2)^{1/p} >= 2^{1-1/p} tr (A+B)/2 + (1-2^{1-1/p}) tr A^{1/2} B^{1/2}",
                "p >= 1",
            ),
            CaseId::CorFaltq => (
                "tr(A+B)^q - tr A^q - tr B^q vs (2^q-2) tr (A^{1/2} B A^{1/2})^{q/2}",
                ">= on (0,1] and [2,3]; <= on q<=-2 (A,B>0) and [1,2]; open for q>3 and -2<q<0",
            ),
            CaseId::CorAbq3 => (
                "tr Z^q - tr (C*D^{-1}C)^q - tr D^q vs (2^q-2) tr |C|^q",
                "<= on q<=-2 and [1,2]; >= on (0,1] and [2,3]; open for q>3 and -2<q<0",
            ),
            CaseId::NormCompression => (
                "tr A^q vs (2^q-2) ||C||_q^q + ||B||_q^q + ||D||_q^q",
                "<= on [1,2]; >= on (0,1] and [2,3]; open for q>3",
            ),
            CaseId::Alt => (
                "tr A^{q/2} B^{q/2} vs tr (A^{1/2} B A^{1/2})^{q/2}",
                "<= for 0<|q|<=2; >= for |q|>=2",
            ),
            CaseId::PropQ4 => (
                "tr(A+B)^4 - tr A^4 - tr B^4 >= 12 tr (AB)^2",
                "q = 4",
            ),
            CaseId::TraceSubadd => (
                "tr g(A+B) vs tr g(A) + tr g(B)",
                "<= for CM0 and BF0; >= for BFk, k>=1",
            ),
        };
        InequalityCase {
            id: self,
            statement,
            valid_region,
        }
    }

    /// True for cases whose direction comes from a function class rather
    /// than the scalar parameter.
    pub fn uses_function(self) -> bool {
        matches!(self, CaseId::MainTrace | CaseId::TraceSubadd)
    }

    pub fn domain_constraint(self, q: f64) -> DomainConstraint {
        match self {
            CaseId::GoldenThompson => DomainConstraint::Hermitian,
            CaseId::CorAbq | CaseId::CorFaltq | CaseId::Alt | CaseId::CorAbq3 if q < 0.0 => {
                DomainConstraint::StrictlyPd
            }
            _ => DomainConstraint::Psd,
        }
    }

    /// Direction and open-region flag for the scalar parameter (`q`, `p` or
    /// `t`). Function-driven cases use [`CaseId::orientation_for_class`].
    pub fn orientation(self, q: f64) -> Result<Orientation> {
        use Direction::*;
        if !q.is_finite() {
            return Err(Error::invalid(format!("{self}: parameter {q} is not finite")));
        }
        let bad = |what: &str| Err(Error::invalid(format!("{self}: {what}, got {q}")));
        let o = match self {
            CaseId::Mccarthy => {
                if q <= 0.0 {
                    return bad("q must be > 0");
                }
                Orientation::proven(if q < 1.0 {
                    Le
                } else if q == 1.0 {
                    Eq
                } else {
                    Ge
                })
            }
            CaseId::GoldenThompson => {
                if q < 0.0 {
                    return bad("t must be >= 0");
                }
                Orientation::proven(Le)
            }
            CaseId::CorAbq => Orientation::proven(match q {
                q if q < 0.0 => Le,
                q if q == 0.0 || q == 1.0 || q == 2.0 => Eq,
                q if q < 1.0 => Ge,
                q if q < 2.0 => Le,
                // Above 3 the stated direction is tested as-is and fails on
                // some pairs.
                _ => Ge,
            }),
            CaseId::CorPmean => {
                if q < 1.0 {
                    return bad("p must be >= 1");
                }
                Orientation::proven(if q == 1.0 { Eq } else { Ge })
            }
            CaseId::CorFaltq | CaseId::CorAbq3 => match q {
                q if q <= -2.0 => Orientation::proven(Le),
                q if q < 0.0 => Orientation::conjectured(Le),
                q if q == 0.0 || q == 1.0 || q == 2.0 => Orientation::proven(Eq),
                q if q < 1.0 => Orientation::proven(Ge),
                q if q < 2.0 => Orientation::proven(Le),
                q if q <= 3.0 => Orientation::proven(Ge),
                _ => Orientation::conjectured(Ge),
            },
            CaseId::NormCompression => match q {
                q if q <= 0.0 => return bad("q must be > 0"),
                q if q == 1.0 || q == 2.0 => Orientation::proven(Eq),
                q if q < 1.0 => Orientation::proven(Ge),
                q if q < 2.0 => Orientation::proven(Le),
                q if q <= 3.0 => Orientation::proven(Ge),
                _ => Orientation::conjectured(Ge),
            },
            CaseId::Alt => {
                let a = q.abs();
                Orientation::proven(if a == 0.0 || a == 2.0 {
                    Eq
                } else if a < 2.0 {
                    Le
                } else {
                    Ge
                })
            }
            CaseId::PropQ4 => Orientation::proven(Ge),
            CaseId::MainTrace | CaseId::TraceSubadd => {
                return Err(Error::invalid(format!(
                    "{self} takes its direction from a function class"
                )))
            }
        };
        Ok(o)
    }

    pub fn orientation_for_class(self, class: ClassTag) -> Result<Orientation> {
        let unsupported = || Error::UnsupportedClass {
            class: class.to_string(),
            case: self.to_string(),
        };
        let direction = match self {
            CaseId::MainTrace => match class {
                ClassTag::Cm0 | ClassTag::Bf(1) => Direction::Le,
                ClassTag::Bf(0) | ClassTag::Bf(2) => Direction::Ge,
                ClassTag::Quadratic => Direction::Eq,
                _ => return Err(unsupported()),
            },
            CaseId::TraceSubadd => subadditivity_direction(class).ok_or_else(unsupported)?,
            _ => {
                return Err(Error::invalid(format!(
                    "{self} takes its direction from the scalar parameter"
                )))
            }
        };
        Ok(Orientation::proven(direction))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == upper)
            .ok_or_else(|| Error::invalid(format!("unknown case `{s}`")))
    }
}

pub fn catalog() -> Vec<InequalityCase> {
    CaseId::ALL.iter().map(|c| c.describe()).collect()
}

/// One evaluation of an inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub case: CaseId,
    /// The scalar parameter: `q`, or `p` for COR_PMEAN, `t` for
    /// GOLDEN_THOMPSON.
    pub q: f64,
    pub dim: usize,
    pub seed: u64,
    pub ensemble: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Oriented gap; the claim holds iff `gap >= -tol`.
    pub gap: f64,
    pub tol: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
}

impl TrialRecord {
    pub fn new(
        case: CaseId,
        q: f64,
        dim: usize,
        lhs: f64,
        rhs: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        if !(lhs.is_finite() && rhs.is_finite()) {
            return Err(Error::invalid(format!(
                "{case} at {q}: non-finite sides lhs={lhs}, rhs={rhs}"
            )));
        }
        let gap = orientation.direction.oriented_gap(lhs, rhs);
        let mut record = TrialRecord {
            case,
            q,
            dim,
            seed: 0,
            ensemble: "explicit".to_string(),
            lhs,
            rhs,
            gap,
            tol: 0.0,
            verdict: if orientation.conjecture {
                Verdict::ConjectureObs
            } else {
                Verdict::Pass
            },
            direction: Some(orientation.direction),
            function: None,
        };
        record.apply_tolerance(DEFAULT_TOL_REL);
        Ok(record)
    }

    /// `max(|lhs|, |rhs|, 1)`.
    pub fn scale(&self) -> f64 {
        self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }

    /// Gap divided by [`TrialRecord::scale`].
    pub fn relative_gap(&self) -> f64 {
        self.gap / self.scale()
    }

    /// Recomputes `tol = tol_rel * scale` and the verdict. Open-region
    /// records stay `CONJECTURE_OBS`.
    pub fn apply_tolerance(&mut self, tol_rel: f64) {
        self.tol = tol_rel * self.scale();
        if self.verdict != Verdict::ConjectureObs {
            self.verdict = if self.gap >= -self.tol {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
        }
    }

    pub fn with_tolerance(mut self, tol_rel: f64) -> Self {
        self.apply_tolerance(tol_rel);
        self
    }

    pub fn with_function(mut self, label: String) -> Self {
        self.function = Some(label);
        self
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}
