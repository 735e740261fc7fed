//! Report formats: JSON lines for trial streams, CSV for sweep cells and
//! plot data.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use tracelab_core::explorer::SweepSummary;
use tracelab_core::ineq::TrialRecord;

pub const SWEEP_CSV_HEADER: &str = "case,q,dim,ensemble,trials,violations,min_gap,worst_seed";
pub const RECORD_CSV_HEADER: &str = "case,q,dim,seed,ensemble,function,lhs,rhs,gap,tol,verdict";
pub const PLOT_CSV_HEADER: &str = "q,min_gap,max_gap";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn verdict_str(r: &TrialRecord) -> String {
    serde_json::to_value(r.verdict)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// One JSON document per line.
pub fn write_jsonl<T: Serialize>(w: &mut dyn Write, items: &[T]) -> io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut *w, item)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn records_csv(records: &[TrialRecord]) -> String {
    let mut s = String::from(RECORD_CSV_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.case,
            r.q,
            r.dim,
            r.seed,
            r.ensemble,
            r.function.as_deref().unwrap_or(""),
            r.lhs,
            r.rhs,
            r.gap,
            r.tol,
            verdict_str(r)
        );
    }
    s
}

/// One row per cell.
pub fn sweep_csv(summaries: &[SweepSummary]) -> String {
    let mut s = String::from(SWEEP_CSV_HEADER);
    s.push('\n');
    for summary in summaries {
        for c in &summary.cells {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                c.case,
                c.q,
                c.dim,
                c.ensemble,
                c.trials,
                c.violations,
                opt(c.min_gap),
                opt(c.worst_seed)
            );
        }
    }
    s
}

pub fn plot_csv(summaries: &[SweepSummary]) -> String {
    let mut s = String::from(PLOT_CSV_HEADER);
    s.push('\n');
    for summary in summaries {
        for c in &summary.cells {
            let _ = writeln!(s, "{},{},{}", c.q, opt(c.min_gap), opt(c.max_gap));
        }
    }
    s
}

/// Writes `(q, min_gap, max_gap)` per cell to `path`.
pub fn emit_plot_data(summaries: &[SweepSummary], path: &Path) -> io::Result<()> {
    std::fs::write(path, plot_csv(summaries))
}
