use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::target::{Target, TrialInputs};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::funclass::ScalarFunctionSpec;
use crate::ineq::{CaseId, TrialRecord, Verdict, DEFAULT_TOL_REL};
use crate::matcore::{seeded_rng, Ensemble};

/// Trials per cell are capped so that the seeds of different cells never
/// overlap.
pub const MAX_TRIALS_PER_CELL: usize = 1_000_000;
const SEED_STRIDE: u64 = 1_000_000;

fn default_tol_rel() -> f64 {
    DEFAULT_TOL_REL
}

/// A grid of cells (parameter x dimension) with a fixed number of seeded
/// trials each.
///
/// For MAIN_TRACE and TRACE_SUBADD the parameter axis is `functions` when
/// non-empty, otherwise power functions `x^q` for `q` in `q_grid`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub case: CaseId,
    #[serde(default)]
    pub q_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<ScalarFunctionSpec>,
    pub dims: Vec<usize>,
    pub trials_per_cell: usize,
    pub ensemble: Ensemble,
    pub base_seed: u64,
    #[serde(default = "default_tol_rel")]
    pub tol_rel: f64,
    #[serde(default, skip)]
    pub execution: Execution,
}

/// One cell of a plan: a target at a dimension, with the identifier its
/// trial seeds derive from.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub target: Target,
    pub dim: usize,
    pub id: u64,
}

impl Cell {
    /// `base_seed + id * 10^6 + index`, wrapping.
    pub fn trial_seed(&self, base_seed: u64, index: usize) -> u64 {
        base_seed
            .wrapping_add(self.id.wrapping_mul(SEED_STRIDE))
            .wrapping_add(index as u64)
    }
}

impl SweepPlan {
    pub fn new(
        case: CaseId,
        q_grid: Vec<f64>,
        dims: Vec<usize>,
        trials_per_cell: usize,
        ensemble: Ensemble,
        base_seed: u64,
    ) -> Self {
        SweepPlan {
            case,
            q_grid,
            functions: Vec::new(),
            dims,
            trials_per_cell,
            ensemble,
            base_seed,
            tol_rel: DEFAULT_TOL_REL,
            execution: Execution::default(),
        }
    }

    pub fn with_functions(mut self, functions: Vec<ScalarFunctionSpec>) -> Self {
        self.functions = functions;
        self
    }

    pub fn with_tol_rel(mut self, tol_rel: f64) -> Self {
        self.tol_rel = tol_rel;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn targets(&self) -> Result<Vec<Target>> {
        if !self.functions.is_empty() {
            return self
                .functions
                .iter()
                .map(|g| Target::with_function(self.case, g.clone()))
                .collect();
        }
        self.q_grid.iter().map(|&q| Target::new(self.case, q)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_cell == 0 || self.trials_per_cell > MAX_TRIALS_PER_CELL {
            return Err(Error::invalid(format!(
                "trials_per_cell must be in 1..={MAX_TRIALS_PER_CELL}, got {}",
                self.trials_per_cell
            )));
        }
        if self.q_grid.is_empty() && self.functions.is_empty() {
            return Err(Error::invalid("parameter grid is empty"));
        }
        if !self.functions.is_empty() && !self.case.uses_function() {
            return Err(Error::invalid(format!("{} does not take functions", self.case)));
        }
        if self.dims.is_empty() {
            return Err(Error::invalid("dimension grid is empty"));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0 || d > 64) {
            return Err(Error::invalid(format!("dimension {d} is outside 1..=64")));
        }
        if !(self.tol_rel >= 0.0 && self.tol_rel.is_finite()) {
            return Err(Error::invalid(format!("tol_rel must be >= 0, got {}", self.tol_rel)));
        }
        self.targets()?;
        Ok(())
    }

    /// Cells in plan order: parameters outermost, dimensions innermost.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let targets = self.targets()?;
        let mut cells = Vec::with_capacity(targets.len() * self.dims.len());
        for target in targets {
            for &dim in &self.dims {
                let id = cell_id(&target, dim, self.ensemble);
                cells.push(Cell {
                    target: target.clone(),
                    dim,
                    id,
                });
            }
        }
        Ok(cells)
    }
}

/// Identifier derived from the cell's content only, so adding or removing
/// other cells leaves its seeds unchanged. 32 bits keep every seed below
/// `2^53` for moderate base seeds.
fn cell_id(target: &Target, dim: usize, ensemble: Ensemble) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    feed(target.case.as_str().as_bytes());
    match &target.function {
        Some(g) => feed(serde_json::to_string(g).unwrap_or_default().as_bytes()),
        None => feed(&target.q.to_bits().to_le_bytes()),
    }
    feed(&(dim as u64).to_le_bytes());
    feed(ensemble.as_str().as_bytes());
    (h >> 32) ^ (h & 0xffff_ffff)
}

/// Per-cell reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub case: CaseId,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub dim: usize,
    pub ensemble: Ensemble,
    pub cell_id: u64,
    pub trials: usize,
    pub evaluated: usize,
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub skip_reasons: BTreeMap<String, usize>,
    /// Number of FAIL verdicts; open-region records never count.
    pub violations: usize,
    pub conjecture_obs: usize,
    pub min_gap: Option<f64>,
    pub max_gap: Option<f64>,
    /// The record with the smallest gap (first in index order on ties).
    pub worst: Option<TrialRecord>,
    pub worst_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub case: CaseId,
    pub ensemble: Ensemble,
    pub base_seed: u64,
    pub tol_rel: f64,
    pub cells: Vec<CellSummary>,
    pub total_trials: usize,
    pub total_violations: usize,
    pub total_skipped: usize,
    /// FAIL if any cell has a violation; CONJECTURE_OBS if every evaluated
    /// record lies in an open region; PASS otherwise.
    pub verdict: Verdict,
}

impl SweepSummary {
    pub fn min_gap(&self) -> Option<f64> {
        self.cells
            .iter()
            .filter_map(|c| c.min_gap)
            .reduce(f64::min)
    }

    /// The overall worst record across cells.
    pub fn worst(&self) -> Option<&TrialRecord> {
        self.cells
            .iter()
            .filter_map(|c| c.worst.as_ref())
            .reduce(|a, b| if b.gap < a.gap { b } else { a })
    }
}

fn skip_reason(e: &Error) -> &'static str {
    match e {
        Error::DomainViolation { .. } => "domain_violation",
        Error::NotPsd { .. } => "not_psd",
        Error::NoConvergence { .. } => "no_convergence",
        Error::ImaginaryTrace { .. } => "imaginary_trace",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::ShapeMismatch(_) => "shape_mismatch",
        Error::NotHermitian { .. } => "not_hermitian",
        Error::UnsupportedClass { .. } => "unsupported_class",
        Error::Json(_) | Error::Io(_) => "io",
    }
}

fn run_trial(plan: &SweepPlan, cell: &Cell, index: usize) -> (TrialInputs, Result<TrialRecord>) {
    let seed = cell.trial_seed(plan.base_seed, index);
    let mut rng = seeded_rng(seed);
    let inputs = cell.target.draw(plan.ensemble, cell.dim, &mut rng);
    let outcome = cell.target.evaluate(&inputs, plan.tol_rel).map(|mut r| {
        r.seed = seed;
        r.ensemble = plan.ensemble.as_str().to_string();
        r.dim = cell.dim;
        r
    });
    (inputs, outcome)
}

/// Regenerates trial `index` of cell `cell` (position in [`SweepPlan::cells`]):
/// the inputs and the outcome.
pub fn reproduce_trial(
    plan: &SweepPlan,
    cell: usize,
    index: usize,
) -> Result<(TrialInputs, Result<TrialRecord>)> {
    plan.validate()?;
    let cells = plan.cells()?;
    let c = cells
        .get(cell)
        .ok_or_else(|| Error::invalid(format!("plan has {} cells, asked for {cell}", cells.len())))?;
    Ok(run_trial(plan, c, index))
}

pub fn run_sweep(plan: &SweepPlan) -> Result<SweepSummary> {
    Ok(sweep(plan, false)?.0)
}

/// Like [`run_sweep`], also returning every evaluated record in plan order.
pub fn run_sweep_with_records(plan: &SweepPlan) -> Result<(SweepSummary, Vec<TrialRecord>)> {
    sweep(plan, true)
}

fn sweep(plan: &SweepPlan, keep: bool) -> Result<(SweepSummary, Vec<TrialRecord>)> {
    plan.validate()?;
    let cells = plan.cells()?;
    let per_cell = plan.trials_per_cell;
    let outcomes = plan.execution.map(cells.len() * per_cell, |t| {
        let (cell, index) = (t / per_cell, t % per_cell);
        run_trial(plan, &cells[cell], index).1
    });

    let mut records = Vec::new();
    let mut summaries = Vec::with_capacity(cells.len());
    for (cell, chunk) in cells.iter().zip(outcomes.chunks(per_cell)) {
        let mut s = CellSummary {
            case: plan.case,
            q: cell.target.q,
            function: cell.target.function.as_ref().map(|g| g.label()),
            dim: cell.dim,
            ensemble: plan.ensemble,
            cell_id: cell.id,
            trials: per_cell,
            evaluated: 0,
            skipped: 0,
            skip_reasons: BTreeMap::new(),
            violations: 0,
            conjecture_obs: 0,
            min_gap: None,
            max_gap: None,
            worst: None,
            worst_seed: None,
        };
        for outcome in chunk {
            match outcome {
                Err(e) => {
                    s.skipped += 1;
                    *s.skip_reasons.entry(skip_reason(e).to_string()).or_default() += 1;
                }
                Ok(r) => {
                    s.evaluated += 1;
                    match r.verdict {
                        Verdict::Fail => s.violations += 1,
                        Verdict::ConjectureObs => s.conjecture_obs += 1,
                        Verdict::Pass => {}
                    }
                    s.max_gap = Some(s.max_gap.map_or(r.gap, |m| m.max(r.gap)));
                    if s.min_gap.is_none_or(|m| r.gap < m) {
                        s.min_gap = Some(r.gap);
                        s.worst_seed = Some(r.seed);
                        s.worst = Some(r.clone());
                    }
                    if keep {
                        records.push(r.clone());
                    }
                }
            }
        }
        summaries.push(s);
    }

    let total_violations = summaries.iter().map(|c| c.violations).sum();
    let evaluated: usize = summaries.iter().map(|c| c.evaluated).sum();
    let conjecture: usize = summaries.iter().map(|c| c.conjecture_obs).sum();
    let verdict = if total_violations > 0 {
        Verdict::Fail
    } else if evaluated > 0 && conjecture == evaluated {
        Verdict::ConjectureObs
    } else {
        Verdict::Pass
    };
    let summary = SweepSummary {
        case: plan.case,
        ensemble: plan.ensemble,
        base_seed: plan.base_seed,
        tol_rel: plan.tol_rel,
        total_trials: summaries.iter().map(|c| c.trials).sum(),
        total_skipped: summaries.iter().map(|c| c.skipped).sum(),
        cells: summaries,
        total_violations,
        verdict,
    };
    Ok((summary, records))
}
