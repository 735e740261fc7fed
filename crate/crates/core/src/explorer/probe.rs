use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sweep::{run_sweep, SweepPlan, SweepSummary};
use crate::error::{Error, Result};
use crate::ineq::CaseId;

/// Parameter regions where the direction is conjectured, not proven.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProbeRegion {
    /// COR_FALTQ with `q > 3`.
    #[serde(rename = "FALTQ_HIGH")]
    FaltqHigh,
    /// COR_FALTQ with `-2 < q < 0`, reversed direction.
    #[serde(rename = "FALTQ_NEG")]
    FaltqNeg,
    /// NORM_COMPRESSION with `q > 3`.
    #[serde(rename = "NORMCOMP_HIGH")]
    NormcompHigh,
}

impl ProbeRegion {
    pub const ALL: [ProbeRegion; 3] = [
        ProbeRegion::FaltqHigh,
        ProbeRegion::FaltqNeg,
        ProbeRegion::NormcompHigh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProbeRegion::FaltqHigh => "FALTQ_HIGH",
            ProbeRegion::FaltqNeg => "FALTQ_NEG",
            ProbeRegion::NormcompHigh => "NORMCOMP_HIGH",
        }
    }

    pub fn case(self) -> CaseId {
        match self {
            ProbeRegion::FaltqHigh | ProbeRegion::FaltqNeg => CaseId::CorFaltq,
            ProbeRegion::NormcompHigh => CaseId::NormCompression,
        }
    }

    pub fn contains(self, q: f64) -> bool {
        match self {
            ProbeRegion::FaltqHigh | ProbeRegion::NormcompHigh => q > 3.0 && q.is_finite(),
            ProbeRegion::FaltqNeg => q > -2.0 && q < 0.0,
        }
    }

    pub fn default_grid(self) -> Vec<f64> {
        match self {
            ProbeRegion::FaltqHigh => vec![3.5, 4.0, 6.0],
            ProbeRegion::FaltqNeg => vec![-1.0],
            ProbeRegion::NormcompHigh => vec![4.0],
        }
    }
}

impl fmt::Display for ProbeRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProbeRegion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        ProbeRegion::ALL
            .into_iter()
            .find(|r| r.as_str() == upper)
            .ok_or_else(|| Error::invalid(format!("unknown probe region `{s}`")))
    }
}

/// Runs `plan` restricted to `region`: the plan's case is replaced by the
/// region's case and every grid value must lie inside the region. The
/// summary carries CONJECTURE_OBS records only.
pub fn probe_conjecture(region: ProbeRegion, plan: &SweepPlan) -> Result<SweepSummary> {
    if !plan.functions.is_empty() {
        return Err(Error::invalid("probes take a q grid, not functions"));
    }
    if let Some(q) = plan.q_grid.iter().find(|&&q| !region.contains(q)) {
        return Err(Error::invalid(format!("q = {q} is outside region {region}")));
    }
    let mut plan = plan.clone();
    plan.case = region.case();
    let summary = run_sweep(&plan)?;
    debug_assert_eq!(summary.total_violations, 0);
    Ok(summary)
}
