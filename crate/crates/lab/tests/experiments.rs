use perturbed_core::exact_search::Verdict as Certificate;
use perturbed_core::generators::ModelKind;
use perturbed_core::pipeline::Stage;
use perturbed_core::SearchBudget;
use perturbed_lab::experiments::{
    mc_threshold, tightness_report, ConstructionKind, ExperimentError, FrequencyRow, FrequencyTable, Method,
    TrialRecord, Verdict, Z_99,
};
use perturbed_lab::io::RunConfig;

fn config(kind: ModelKind, n: usize, k: usize, grid: &[f64], trials: usize) -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.model.kind = kind;
    cfg.model.n = n;
    cfg.model.k = k;
    cfg.model.seed = 2024;
    cfg.c_grid = grid.to_vec();
    cfg.trials = trials;
    cfg
}

fn row(c: f64, found: usize, not_found: usize, unknown: usize) -> FrequencyRow {
    FrequencyRow { c, trials: found + not_found + unknown, found, not_found, unknown }
}

#[test]
fn verdicts_parse_back() {
    let all = [
        Verdict::Found,
        Verdict::NotFound,
        Verdict::BudgetExceeded,
        Verdict::PipelineFailedAt(Stage::Split),
        Verdict::PipelineFailedAt(Stage::Absorb2),
    ];
    for v in all {
        assert_eq!(v.to_string().parse::<Verdict>().unwrap(), v);
    }
    assert_eq!(Verdict::PipelineFailedAt(Stage::Connect).to_string(), "pipeline_failed_at:connect");
    assert!("pipeline_failed_at:nowhere".parse::<Verdict>().is_err());
    assert!(Verdict::BudgetExceeded.is_unknown());
    assert!(!Verdict::PipelineFailedAt(Stage::Merge).is_unknown());
}

#[test]
fn frequency_rows() {
    assert_eq!(row(1.0, 3, 1, 0).frequency(), Some(0.75));
    assert_eq!(row(1.0, 0, 0, 4).frequency(), None);
    assert!(row(1.0, 4, 4, 2).is_valid());
    assert!(!row(1.0, 4, 4, 3).is_valid());
}

#[test]
fn significant_decreases_use_pooled_error() {
    let table = FrequencyTable {
        rows: vec![row(1.0, 90, 10, 0), row(2.0, 85, 15, 0), row(4.0, 40, 60, 0), row(8.0, 100, 0, 0)],
    };
    assert_eq!(table.significant_decreases(Z_99), vec![(2.0, 4.0)]);
    assert!(table.significant_decreases(100.0).is_empty());
}

#[test]
fn pipeline_failures_count_as_not_found() {
    let recs: Vec<TrialRecord> = [Verdict::Found, Verdict::PipelineFailedAt(Stage::Connect), Verdict::BudgetExceeded]
        .into_iter()
        .enumerate()
        .map(|(i, verdict)| TrialRecord {
            trial_index: i as u64,
            derived_seed: 0,
            c: 1.0,
            verdict,
            elapsed: 0.0,
            witness_digest: None,
        })
        .collect();
    assert_eq!(FrequencyTable::from_records(&recs).rows, vec![row(1.0, 1, 1, 1)]);
}

#[test]
fn complete_random_layer_always_contains_the_power() {
    let run = mc_threshold(&config(ModelKind::CompleteMultipartite, 10, 1, &[10.0, 50.0], 20)).unwrap();
    for r in &run.table.rows {
        assert_eq!(r.frequency(), Some(1.0));
        assert_eq!(r.trials, 20);
    }
    assert!(run.records.iter().all(|r| r.witness_digest.as_ref().is_some_and(|d| d.len() == 16)));
}

#[test]
fn multipartite_without_random_edges_never_contains_the_power() {
    for (n, k) in [(8, 1), (9, 2)] {
        let run = mc_threshold(&config(ModelKind::CompleteMultipartite, n, k, &[0.0], 10)).unwrap();
        assert_eq!(run.table.rows, vec![row(0.0, 0, 10, 0)]);
        assert!(run.records.iter().all(|r| r.witness_digest.is_none()));
    }
}

#[test]
fn small_grid_is_monotone_and_deterministic() {
    let cfg = config(ModelKind::CompleteMultipartite, 12, 1, &[1.0, 2.0, 4.0, 8.0, 16.0], 60);
    let run = mc_threshold(&cfg).unwrap();
    assert!(run.table.is_valid());
    assert!(run.table.significant_decreases(Z_99).is_empty(), "{:?}", run.table);
    let freq: Vec<f64> = run.table.rows.iter().map(|r| r.frequency().unwrap()).collect();
    assert!(freq[4] >= freq[0]);
    let again = mc_threshold(&cfg).unwrap();
    let key = |r: &TrialRecord| (r.trial_index, r.derived_seed, r.verdict, r.witness_digest.clone());
    assert_eq!(run.records.iter().map(key).collect::<Vec<_>>(), again.records.iter().map(key).collect::<Vec<_>>());
    for (i, r) in run.records.iter().enumerate() {
        assert_eq!(r.trial_index, i as u64);
        assert_eq!(r.c, cfg.c_grid[i / cfg.trials]);
    }
}

#[test]
fn tiny_budget_marks_rows_invalid() {
    let mut cfg = config(ModelKind::Gnp, 10, 1, &[8.0], 10);
    cfg.budget = SearchBudget::new(2, 60.0);
    let run = mc_threshold(&cfg).unwrap();
    let r = &run.table.rows[0];
    assert!(r.unknown > 2);
    assert!(!run.table.is_valid());
    assert!(run.warnings.iter().any(|w| w.contains("invalid")));
    // Γ is empty, far below the degree condition.
    assert!(run.warnings.iter().any(|w| w.contains("minimum degree")));
}

#[test]
fn pipeline_trials_are_stage_tagged() {
    let mut cfg = config(ModelKind::CompleteMultipartite, 24, 1, &[8.0], 4);
    cfg.method = Method::Pipeline;
    let run = mc_threshold(&cfg).unwrap();
    for r in &run.records {
        match r.verdict {
            Verdict::Found => assert!(r.witness_digest.is_some()),
            Verdict::PipelineFailedAt(s) => assert!(Stage::ALL.contains(&s)),
            v => panic!("unexpected verdict {v}"),
        }
    }
}

#[test]
fn bad_configs_are_rejected() {
    let cfg = config(ModelKind::Gnp, 10, 1, &[1.0], 0);
    assert!(matches!(mc_threshold(&cfg), Err(ExperimentError::Config(_))));
    let cfg = config(ModelKind::Gnp, 10, 1, &[-1.0], 5);
    assert!(matches!(mc_threshold(&cfg), Err(ExperimentError::Config(_))));
    let cfg = config(ModelKind::Gnp, 10, 1, &[f64::NAN], 5);
    assert!(matches!(mc_threshold(&cfg), Err(ExperimentError::Config(_))));
}

#[test]
fn tightness_without_random_edges_always_passes() {
    let budget = SearchBudget::default();
    for (kind, n, k) in [
        (ConstructionKind::Multipartite, 12, 1),
        (ConstructionKind::Multipartite, 15, 2),
        (ConstructionKind::Xy, 21, 2),
    ] {
        let s = tightness_report(kind, n, k, 0.0, 0.01, 5, 1, &budget).unwrap();
        assert_eq!(s.pass_rate(), Some(1.0), "{}", s.to_text());
        assert_eq!(s.count(Certificate::Pass), 5);
    }
}

#[test]
fn dense_random_layer_is_inapplicable() {
    let s =
        tightness_report(ConstructionKind::Multipartite, 12, 1, 12.0, 0.01, 4, 3, &SearchBudget::default()).unwrap();
    assert_eq!(s.count(Certificate::Inapplicable), 4);
    assert_eq!(s.pass_rate(), None);
    assert!(s.to_text().starts_with("construction=multipartite n=12 k=1 C=12 trials=4 pass=0 fail=0 inapplicable=4"));
}

#[test]
fn xy_report_lists_packings() {
    let s = tightness_report(ConstructionKind::Xy, 21, 2, 5.0, 0.01, 6, 9, &SearchBudget::default()).unwrap();
    assert_eq!(s.reports.len() + s.unknown, 6);
    let text = s.to_text();
    assert_eq!(text.lines().filter(|l| l.starts_with("trial=")).count(), s.reports.len());
    for r in s.reports.iter().filter(|r| r.verdict == Certificate::Pass) {
        assert!(r.max_packing < r.required);
        assert!(r.x_uncovered >= 1);
    }
    assert!(tightness_report(ConstructionKind::Xy, 21, 1, 5.0, 0.01, 1, 0, &SearchBudget::default()).is_err());
}
