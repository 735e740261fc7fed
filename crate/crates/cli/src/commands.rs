use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use tracelab_core::explorer::{
    equality_cases, probe_conjecture, repro_row, run_sweep, run_sweep_with_records, search_target,
    ProbeRegion, ReproRow, SweepPlan, SweepSummary, Target, TrialInputs,
};
use tracelab_core::ineq::{CaseId, TrialRecord, Verdict};
use tracelab_core::matcore::io::to_json;
use tracelab_core::Execution;

use crate::catalogue::{default_functions, default_grid};
use crate::config::{CommandKind, Format, RunConfig, UsageError};
use crate::output::{emit_plot_data, records_csv, sweep_csv, write_jsonl};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const REPRO_GRID: [f64; 4] = [2.5, 3.0, 4.0, 5.0];

/// Where reports go: `--out` when set, otherwise `stdout`. Summaries and
/// diagnostics go to `stderr`.
pub struct Streams<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

pub fn execute(cfg: &RunConfig, s: &mut Streams) -> Result<i32> {
    match cfg.command {
        CommandKind::Verify => cmd_verify(cfg, s),
        CommandKind::Sweep => cmd_sweep(cfg, s),
        CommandKind::Search => cmd_search(cfg, s),
        CommandKind::Probe => cmd_probe(cfg, s),
        CommandKind::Repro => cmd_repro(cfg, s),
    }
}

fn with_report<F>(cfg: &RunConfig, s: &mut Streams, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w).with_context(|| format!("writing {}", path.display()))?;
            w.flush()?;
        }
        None => {
            f(s.stdout)?;
            s.stdout.flush()?;
        }
    }
    Ok(())
}

fn selected_cases(cfg: &RunConfig, default: impl FnOnce() -> Vec<CaseId>) -> Result<Vec<CaseId>, UsageError> {
    match &cfg.cases {
        None => Ok(default()),
        Some(names) if names.is_empty() => Err(UsageError::new("case", "case selection is empty")),
        Some(names) => names
            .iter()
            .map(|n| n.parse().map_err(|_| UsageError::new("case", format!("unknown case `{n}`"))))
            .collect(),
    }
}

fn grid_for(case: CaseId, cfg: &RunConfig) -> Vec<f64> {
    let user = match case {
        CaseId::CorPmean => cfg.p_grid.as_ref().or(cfg.q_grid.as_ref()),
        _ => cfg.q_grid.as_ref(),
    };
    user.cloned().unwrap_or_else(|| default_grid(case))
}

/// Parameter targets for `case`: the configured function, the q grid (as
/// power functions for function-driven cases) or the defaults.
fn targets_for(case: CaseId, cfg: &RunConfig) -> Result<Vec<Target>, UsageError> {
    let bad = |key: &str, e: tracelab_core::Error| UsageError::new(key, format!("{case}: {e}"));
    if case.uses_function() {
        if let Some(g) = &cfg.function {
            return Ok(vec![Target::with_function(case, g.clone()).map_err(|e| bad("function", e))?]);
        }
        if cfg.q_grid.is_none() {
            return default_functions(case)
                .into_iter()
                .map(|g| Target::with_function(case, g).map_err(|e| bad("function", e)))
                .collect();
        }
    }
    let key = if case == CaseId::CorPmean && cfg.p_grid.is_some() { "p" } else { "q" };
    grid_for(case, cfg)
        .into_iter()
        .map(|q| Target::new(case, q).map_err(|e| bad(key, e)))
        .collect()
}

fn plan_for(case: CaseId, cfg: &RunConfig) -> Result<SweepPlan, UsageError> {
    let targets = targets_for(case, cfg)?;
    let mut plan = SweepPlan::new(case, vec![], cfg.dims.clone(), cfg.trials, cfg.ensemble, cfg.seed)
        .with_tol_rel(cfg.tol_rel);
    if case.uses_function() && cfg.q_grid.is_none() {
        plan.functions = targets.into_iter().filter_map(|t| t.function).collect();
    } else {
        plan.q_grid = targets.into_iter().map(|t| t.q).collect();
    }
    plan.validate().map_err(|e| UsageError::new("plan", e.to_string()))?;
    Ok(plan)
}

fn explicit_inputs(case: CaseId, cfg: &RunConfig) -> Result<TrialInputs, UsageError> {
    let m = &cfg.matrices;
    let missing = |names: &str| UsageError::new("matrices", format!("{case} needs {names}"));
    match case {
        CaseId::CorAbq3 => match (&m.c, &m.d) {
            (Some(c), Some(d)) => Ok(TrialInputs::Compression { c: c.clone(), d: d.clone() }),
            _ => Err(missing("c and d")),
        },
        CaseId::NormCompression => match (&m.b, &m.c, &m.d) {
            (Some(b), Some(c), Some(d)) => Ok(TrialInputs::Partitioned {
                b: b.clone(),
                c: c.clone(),
                d: d.clone(),
            }),
            _ => Err(missing("b, c and d")),
        },
        _ => match (&m.a, &m.b) {
            (Some(a), Some(b)) => Ok(TrialInputs::Pair { a: a.clone(), b: b.clone() }),
            _ => Err(missing("a and b")),
        },
    }
}

fn summarize(s: &mut Streams, case: CaseId, records: &[TrialRecord], skipped: usize) -> Result<()> {
    let fails = records.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let min_gap = records.iter().map(|r| r.gap).reduce(f64::min);
    writeln!(
        s.stderr,
        "{case}: {} records, {fails} FAIL, {skipped} skipped, min gap {}",
        records.len(),
        min_gap.map_or("-".to_string(), |g| format!("{g:e}"))
    )?;
    Ok(())
}

fn write_records(cfg: &RunConfig, s: &mut Streams, records: &[TrialRecord]) -> Result<()> {
    with_report(cfg, s, |w| match cfg.format {
        Format::Json => write_jsonl(w, records),
        Format::Csv => w.write_all(records_csv(records).as_bytes()),
    })
}

/// Runs each selected case over its grid (sampled, or on the configured
/// matrices) and writes every record. Exit 1 on any FAIL.
pub fn cmd_verify(cfg: &RunConfig, s: &mut Streams) -> Result<i32> {
    let explicit = cfg.matrices.any();
    let cases = selected_cases(cfg, || {
        if explicit {
            CaseId::ALL
                .into_iter()
                .filter(|&c| explicit_inputs(c, cfg).is_ok())
                .collect()
        } else {
            CaseId::ALL.to_vec()
        }
    })?;
    if cases.is_empty() {
        return Err(UsageError::new("case", "no case matches the given matrices").into());
    }
    let mut all = Vec::new();
    for case in cases {
        if explicit {
            let inputs = explicit_inputs(case, cfg)?;
            let mut records = Vec::new();
            for target in targets_for(case, cfg)? {
                let r = target
                    .evaluate(&inputs, cfg.tol_rel)
                    .map_err(|e| UsageError::new("matrices", format!("{case} at {}: {e}", target.label())))?;
                records.push(r);
            }
            summarize(s, case, &records, 0)?;
            all.extend(records);
        } else {
            let (summary, records) = run_sweep_with_records(&plan_for(case, cfg)?)?;
            summarize(s, case, &records, summary.total_skipped)?;
            all.extend(records);
        }
    }
    write_records(cfg, s, &all)?;
    Ok(if all.iter().any(TrialRecord::is_fail) { EXIT_FAIL } else { EXIT_OK })
}

fn write_summaries(cfg: &RunConfig, s: &mut Streams, summaries: &[SweepSummary]) -> Result<()> {
    with_report(cfg, s, |w| match cfg.format {
        Format::Csv => w.write_all(sweep_csv(summaries).as_bytes()),
        Format::Json => {
            if let [one] = summaries {
                serde_json::to_writer_pretty(&mut *w, one)?;
            } else {
                serde_json::to_writer_pretty(&mut *w, summaries)?;
            }
            w.write_all(b"\n")
        }
    })?;
    if let Some(path) = &cfg.plot {
        emit_plot_data(summaries, path).with_context(|| format!("writing {}", path.display()))?;
    }
    for summary in summaries {
        writeln!(
            s.stderr,
            "{}: {} cells, {} trials, {} violations, {} skipped, min gap {}",
            summary.case,
            summary.cells.len(),
            summary.total_trials,
            summary.total_violations,
            summary.total_skipped,
            summary.min_gap().map_or("-".to_string(), |g| format!("{g:e}"))
        )?;
    }
    Ok(())
}

/// One sweep per selected case. Exit 1 if any cell has a violation.
pub fn cmd_sweep(cfg: &RunConfig, s: &mut Streams) -> Result<i32> {
    let cases = selected_cases(cfg, || CaseId::ALL.to_vec())?;
    let summaries = cases
        .into_iter()
        .map(|case| Ok(run_sweep(&plan_for(case, cfg)?)?))
        .collect::<Result<Vec<_>>>()?;
    write_summaries(cfg, s, &summaries)?;
    let violations: usize = summaries.iter().map(|x| x.total_violations).sum();
    Ok(if violations > 0 { EXIT_FAIL } else { EXIT_OK })
}

fn inputs_json(inputs: &TrialInputs) -> Value {
    match inputs {
        TrialInputs::Pair { a, b } => json!({"a": to_json(a.as_matrix()), "b": to_json(b.as_matrix())}),
        TrialInputs::Compression { c, d } => json!({"c": to_json(c), "d": to_json(d.as_matrix())}),
        TrialInputs::Partitioned { b, c, d } => json!({
            "b": to_json(b.as_matrix()),
            "c": to_json(c),
            "d": to_json(d.as_matrix()),
        }),
    }
}

#[derive(Serialize)]
struct SearchReport {
    dim: usize,
    budget: usize,
    seed: u64,
    restarts: usize,
    record: TrialRecord,
    inputs: Value,
}

/// Searches one case at every grid value and dimension; each report line
/// carries the best record and the matrices that produced it. Exit 1 if
/// any best record is a FAIL.
pub fn cmd_search(cfg: &RunConfig, s: &mut Streams) -> Result<i32> {
    let cases = selected_cases(cfg, Vec::new)?;
    let [case] = cases[..] else {
        return Err(UsageError::new("case", "search takes exactly one case").into());
    };
    let mut reports = Vec::new();
    for target in targets_for(case, cfg)? {
        for &dim in &cfg.dims {
            let r = search_target(&target, dim, cfg.budget, cfg.seed, cfg.tol_rel, Execution::default())?;
            writeln!(
                s.stderr,
                "{case} {} dim {dim}: best gap {:e} ({:?})",
                target.label(),
                r.record.gap,
                r.record.verdict
            )?;
            reports.push(SearchReport {
                dim,
                budget: cfg.budget,
                seed: cfg.seed,
                restarts: r.restarts,
                inputs: inputs_json(&r.inputs),
                record: r.record,
            });
        }
    }
    if cfg.format == Format::Csv {
        let records: Vec<TrialRecord> = reports.iter().map(|r| r.record.clone()).collect();
        write_records(cfg, s, &records)?;
    } else {
        with_report(cfg, s, |w| write_jsonl(w, &reports))?;
    }
    let fail = reports.iter().any(|r| r.record.is_fail());
    Ok(if fail { EXIT_FAIL } else { EXIT_OK })
}

/// Sweeps an open region. Always exits 0 once the sweep completes.
pub fn cmd_probe(cfg: &RunConfig, s: &mut Streams) -> Result<i32> {
    let region = match (&cfg.region, &cfg.cases) {
        (Some(r), _) => *r,
        (None, Some(names)) if names.len() == 1 => names[0]
            .parse::<ProbeRegion>()
            .map_err(|_| UsageError::new("case", format!("`{}` is not a probe region", names[0])))?,
        _ => {
            return Err(UsageError::new("region", "probe needs one of FALTQ_HIGH, FALTQ_NEG, NORMCOMP_HIGH").into())
        }
    };
    let grid = cfg.q_grid.clone().unwrap_or_else(|| region.default_grid());
    let plan = SweepPlan::new(region.case(), grid, cfg.dims.clone(), cfg.trials, cfg.ensemble, cfg.seed)
        .with_tol_rel(cfg.tol_rel);
    let summary = probe_conjecture(region, &plan).map_err(|e| UsageError::new("q", e.to_string()))?;
    write_summaries(cfg, s, std::slice::from_ref(&summary))?;
    Ok(EXIT_OK)
}

/// Compares the explicit counterexample with its closed forms and checks
/// the quadratic equality cases. Exit 0 when everything reproduces.
pub fn cmd_repro(cfg: &RunConfig, s: &mut Streams) -> Result<i32> {
    let grid = cfg.q_grid.clone().unwrap_or_else(|| REPRO_GRID.to_vec());
    let rows = grid
        .iter()
        .map(|&q| repro_row(q).map_err(|e| UsageError::new("q", e.to_string()).into()))
        .collect::<Result<Vec<ReproRow>>>()?;
    with_report(cfg, s, |w| match cfg.format {
        Format::Json => write_jsonl(w, &rows),
        Format::Csv => {
            writeln!(w, "q,lhs,lhs_closed,lhs_rel_err,rhs,rhs_closed,rhs_rel_err,verdict,matches")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    r.q,
                    r.lhs,
                    r.lhs_closed,
                    r.lhs_rel_err,
                    r.rhs,
                    r.rhs_closed,
                    r.rhs_rel_err,
                    serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                    r.matches
                )?;
            }
            Ok(())
        }
    })?;
    let mut ok = rows.iter().all(|r| r.matches);
    for (r, expected) in equality_cases()? {
        let holds = (r.lhs - expected).abs() <= cfg.tol_rel * r.scale()
            && (r.rhs - expected).abs() <= cfg.tol_rel * r.scale();
        ok &= holds;
        writeln!(
            s.stderr,
            "equality g = {}: lhs {} rhs {} expected {} {}",
            r.function.as_deref().unwrap_or("?"),
            r.lhs,
            r.rhs,
            expected,
            if holds { "ok" } else { "MISMATCH" }
        )?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}
