use proptest::prelude::*;
use tracelab_core::explorer::{
    reproduce_trial, run_sweep, run_sweep_with_records, search_counterexample, search_target,
    SweepPlan, Target,
};
use tracelab_core::ineq::{CaseId, Verdict};
use tracelab_core::matcore::Ensemble;
use tracelab_core::Execution;

fn plan(case: CaseId, q: Vec<f64>, seed: u64) -> SweepPlan {
    SweepPlan::new(case, q, vec![2, 3], 15, Ensemble::Wishart, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn identical_plans_serialize_identically(seed in any::<u64>()) {
        let p = plan(CaseId::CorFaltq, vec![-3.0, 0.5, 2.5], seed);
        let a = serde_json::to_string(&run_sweep(&p).unwrap()).unwrap();
        let b = serde_json::to_string(&run_sweep(&p).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn execution_mode_does_not_change_results(seed in any::<u64>()) {
        let p = plan(CaseId::NormCompression, vec![0.5, 2.5], seed);
        let seq = run_sweep_with_records(&p.clone().with_execution(Execution::Sequential)).unwrap();
        let par = run_sweep_with_records(&p.with_execution(Execution::Parallel)).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn removing_a_cell_leaves_others_unchanged(seed in any::<u64>(), drop in 0usize..3) {
        let grid = vec![0.5, 1.5, 2.5];
        let full = run_sweep(&plan(CaseId::CorAbq, grid.clone(), seed)).unwrap();
        let mut fewer = grid.clone();
        let dropped = fewer.remove(drop);
        let part = run_sweep(&plan(CaseId::CorAbq, fewer, seed)).unwrap();
        let kept: Vec<_> = full.cells.iter().filter(|c| c.q != dropped).collect();
        prop_assert_eq!(kept.len(), part.cells.len());
        for (x, y) in kept.into_iter().zip(&part.cells) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn records_reproduce_from_cell_and_index(seed in any::<u64>(), index in 0usize..15) {
        let p = plan(CaseId::Alt, vec![-1.0, 3.0], seed);
        let (_, records) = run_sweep_with_records(&p).unwrap();
        let cells = p.cells().unwrap().len();
        for cell in 0..cells {
            let (_, r) = reproduce_trial(&p, cell, index).unwrap();
            let r = r.unwrap();
            prop_assert!(records.contains(&r));
        }
    }
}

#[test]
fn violations_count_fail_verdicts_only() {
    let p = SweepPlan::new(CaseId::CorAbq, vec![4.0], vec![2], 200, Ensemble::RankDeficient, 3);
    let (summary, records) = run_sweep_with_records(&p).unwrap();
    let fails = records.iter().filter(|r| r.verdict == Verdict::Fail).count();
    assert_eq!(summary.total_violations, fails);
    assert!(fails > 0);

    let open = SweepPlan::new(CaseId::CorFaltq, vec![4.0], vec![2], 50, Ensemble::Wishart, 3);
    let (summary, records) = run_sweep_with_records(&open).unwrap();
    assert_eq!(summary.total_violations, 0);
    assert!(records.iter().all(|r| r.verdict == Verdict::ConjectureObs));
}

#[test]
fn search_record_matches_fresh_evaluation() {
    for (case, q) in [(CaseId::CorAbq, 4.0), (CaseId::CorAbq, 2.5), (CaseId::Mccarthy, 0.5)] {
        let r = search_counterexample(case, q, 3, 300, 11).unwrap();
        let target = Target::new(case, q).unwrap();
        let fresh = target.evaluate(&r.inputs, 1e-9).unwrap();
        let s = r.record.lhs.abs().max(r.record.rhs.abs()).max(1.0);
        assert!((fresh.gap - r.record.gap).abs() <= 1e-12 * s, "{case} {q}");
        assert!(r.evaluations <= 300);
    }
}

#[test]
fn search_is_deterministic_across_modes() {
    let target = Target::new(CaseId::CorAbq, 5.0).unwrap();
    let a = search_target(&target, 2, 200, 5, 1e-9, Execution::Sequential).unwrap();
    let b = search_target(&target, 2, 200, 5, 1e-9, Execution::Parallel).unwrap();
    assert_eq!(a.record, b.record);
    assert_eq!(a.record.verdict, Verdict::Fail);
}
