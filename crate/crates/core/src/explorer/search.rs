use rand::Rng;
use rand_distr::StandardNormal;

use super::target::{Target, TrialInputs};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ineq::{CaseId, DomainConstraint, TrialRecord, DEFAULT_TOL_REL};
use crate::matcore::random::random_gaussian;
use crate::matcore::{seeded_rng, GeneralMatrix, C64};

/// Perturbation steps after each random restart.
pub const REFINEMENT_STEPS: usize = 50;
const INITIAL_STEP: f64 = 0.3;

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Most negative normalized gap found (`gap / max(|lhs|, |rhs|, 1)`).
    pub record: TrialRecord,
    pub inputs: TrialInputs,
    pub evaluations: usize,
    pub restarts: usize,
}

/// Random restarts plus Gaussian perturbation of every coordinate of the
/// Gram factors, halving the step after each non-improving move. Each
/// restart costs at most `1 + REFINEMENT_STEPS` evaluations of `budget`.
pub fn search_counterexample(
    case: CaseId,
    q: f64,
    dim: usize,
    budget: usize,
    seed: u64,
) -> Result<SearchResult> {
    search_target(
        &Target::new(case, q)?,
        dim,
        budget,
        seed,
        DEFAULT_TOL_REL,
        Execution::default(),
    )
}

pub fn search_target(
    target: &Target,
    dim: usize,
    budget: usize,
    seed: u64,
    tol_rel: f64,
    execution: Execution,
) -> Result<SearchResult> {
    target.orientation()?;
    if budget == 0 {
        return Err(Error::invalid("search budget must be >= 1"));
    }
    if dim == 0 || dim > 64 {
        return Err(Error::invalid(format!("dimension {dim} is outside 1..=64")));
    }
    let per_restart = 1 + REFINEMENT_STEPS;
    let restarts = budget.div_ceil(per_restart);
    let runs = execution.map(restarts, |r| {
        let evals = per_restart.min(budget - r * per_restart);
        restart(target, dim, seed.wrapping_add(r as u64), evals, tol_rel)
    });
    let evaluations = budget;
    let mut best: Option<(f64, TrialRecord, TrialInputs)> = None;
    for (objective, record, inputs) in runs.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _, _)| objective < *b) {
            best = Some((objective, record, inputs));
        }
    }
    let (_, record, inputs) = best.ok_or_else(|| {
        Error::invalid(format!(
            "search for {} at {} found no input inside the domain",
            target.case,
            target.label()
        ))
    })?;
    Ok(SearchResult {
        record,
        inputs,
        evaluations,
        restarts,
    })
}

fn restart(
    target: &Target,
    dim: usize,
    seed: u64,
    evals: usize,
    tol_rel: f64,
) -> Option<(f64, TrialRecord, TrialInputs)> {
    let mut rng = seeded_rng(seed);
    let rank = match target.case.domain_constraint(target.q) {
        DomainConstraint::StrictlyPd => dim,
        _ => rng.random_range(1..=dim),
    };
    let mut factors: Vec<GeneralMatrix> = target
        .factor_shapes(dim, rank)
        .into_iter()
        .map(|(r, c)| random_gaussian(&mut rng, r, c))
        .collect();
    let score = |f: &[GeneralMatrix]| -> Option<(f64, TrialRecord, TrialInputs)> {
        let inputs = target.inputs_from_factors(f).ok()?;
        let mut record = target.evaluate(&inputs, tol_rel).ok()?;
        record.seed = seed;
        record.ensemble = "search".to_string();
        Some((record.relative_gap(), record, inputs))
    };
    let mut best = score(&factors);
    let mut step = INITIAL_STEP;
    for _ in 1..evals {
        let candidate: Vec<GeneralMatrix> = factors
            .iter()
            .map(|f| perturb(f, step, &mut rng))
            .collect();
        match score(&candidate) {
            Some(s) if best.as_ref().is_none_or(|b| s.0 < b.0) => {
                best = Some(s);
                factors = candidate;
            }
            _ => step *= 0.5,
        }
    }
    best
}

fn perturb<R: Rng + ?Sized>(f: &GeneralMatrix, step: f64, rng: &mut R) -> GeneralMatrix {
    let len = f.as_slice().len().max(1) as f64;
    let scale = (f.frobenius() / len.sqrt()).max(1e-3) * step;
    let mut out = f.clone();
    for z in out.as_mut_slice() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z += C64::new(re, im) * scale;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::Verdict;

    #[test]
    fn finds_the_high_power_counterexample() {
        let r = search_counterexample(CaseId::CorAbq, 4.0, 2, 500, 1).unwrap();
        assert!(r.record.gap < 0.0, "{:?}", r.record);
        assert_eq!(r.record.verdict, Verdict::Fail);
        assert_eq!(r.evaluations, 500);
    }

    #[test]
    fn equality_region_has_nothing_to_find() {
        let r = search_counterexample(CaseId::CorAbq, 2.0, 2, 120, 4).unwrap();
        assert!(r.record.gap >= -r.record.tol);
    }

    #[test]
    fn result_reevaluates_exactly() {
        let t = Target::new(CaseId::CorFaltq, 1.5).unwrap();
        let r = search_target(&t, 3, 100, 8, 1e-9, Execution::Sequential).unwrap();
        let again = t.evaluate(&r.inputs, 1e-9).unwrap();
        assert!((again.gap - r.record.gap).abs() <= 1e-12 * r.record.scale());
    }

    #[test]
    fn deterministic_per_seed() {
        let t = Target::new(CaseId::NormCompression, 2.5).unwrap();
        let a = search_target(&t, 2, 80, 5, 1e-9, Execution::Sequential).unwrap();
        let b = search_target(&t, 2, 80, 5, 1e-9, Execution::Parallel).unwrap();
        assert_eq!(a.record, b.record);
        assert!(search_target(&t, 2, 0, 5, 1e-9, Execution::Sequential).is_err());
    }
}
