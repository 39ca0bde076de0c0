use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use pentile::pipeline::{agrees, load_run, run_search, PipelineError, RunConfig, SystemRecord, SystemVerdict};
use pentile::report::report;
use pentile_oracles::fixtures::{ONE_BLOCK_OUTCOMES, TYPES_PER_N};

fn run(i: u32, out: &Path, jobs: usize) -> pentile::pipeline::Summary {
    let mut cfg = RunConfig::new(i, out);
    cfg.jobs = jobs;
    run_search(&cfg).unwrap()
}

fn matches(systems: &[&SystemRecord]) -> Vec<Vec<u32>> {
    systems.iter().map(|s| s.verdict.matches()).collect()
}

#[test]
fn single_tile_blocks_reproduce_published_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    run(1, dir.path(), 1);
    let (summary, systems) = load_run(dir.path()).unwrap();

    for &(i, n, want) in TYPES_PER_N.iter().filter(|r| r.0 == 1) {
        let here: Vec<&SystemRecord> = systems.iter().filter(|s| s.n.contains(&n)).collect();
        let expected: BTreeSet<u32> = want.iter().copied().collect();
        assert_eq!(agrees(&expected, &here), Ok(()), "i={i} n={n}");
        assert!(pentile_oracles::agrees(want, &matches(&here)), "i={i} n={n}");
    }
    for &(ih, want) in ONE_BLOCK_OUTCOMES {
        let here: Vec<&SystemRecord> = systems.iter().filter(|s| s.ih.contains(ih)).collect();
        let expected: BTreeSet<u32> = want.iter().copied().collect();
        assert_eq!(agrees(&expected, &here), Ok(()), "{ih}");
        assert!(pentile_oracles::agrees(want, &matches(&here)), "{ih}");
    }
    assert!(summary.unresolved.is_empty());
    assert!(systems.iter().all(|s| !matches!(s.verdict, SystemVerdict::NewType { id: None })));
}

#[test]
fn resume_reuses_checkpoints_and_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    run(1, dir.path(), 1);
    let first = fs::read(dir.path().join("systems.jsonl")).unwrap();
    // Drop the final outputs; the per-form checkpoints remain.
    fs::remove_file(dir.path().join("systems.jsonl")).unwrap();
    fs::remove_file(dir.path().join("summary.json")).unwrap();
    let mut cfg = RunConfig::new(1, dir.path());
    cfg.resume = true;
    run_search(&cfg).unwrap();
    assert_eq!(fs::read(dir.path().join("systems.jsonl")).unwrap(), first);
}

#[test]
fn resume_with_other_configuration_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    run(1, dir.path(), 1);
    let mut cfg = RunConfig::new(1, dir.path());
    cfg.resume = true;
    cfg.residual_tol = 1e-6;
    assert!(matches!(run_search(&cfg), Err(PipelineError::ResumeMismatch { .. })));
    // Worker count does not enter the configuration.
    let mut cfg = RunConfig::new(1, dir.path());
    cfg.resume = true;
    cfg.jobs = 2;
    assert!(run_search(&cfg).is_ok());
}

#[test]
fn output_is_independent_of_worker_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(1, a.path(), 1);
    run(1, b.path(), 3);
    for f in ["candidates.jsonl", "systems.jsonl", "summary.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn filters_restrict_the_search() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(1, dir.path());
    cfg.ih = Some(vec!["IH22".into()]);
    run_search(&cfg).unwrap();
    let (_, systems) = load_run(dir.path()).unwrap();
    assert!(!systems.is_empty());
    assert!(systems.iter().all(|s| s.ih.iter().all(|ih| ih == "IH22")));
}

#[test]
fn report_lists_types_per_node_count() {
    let dir = tempfile::tempdir().unwrap();
    run(1, dir.path(), 1);
    let text = report(dir.path()).unwrap();
    let table = text.split("== Pentagon types found per node count ==").nth(1).expect("per-n section");
    let rows: Vec<&str> = table.lines().skip(2).take_while(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 2, "{table}");
    assert!(rows[0].starts_with("5 ") && rows[1].starts_with("6 "), "{table}");
}

#[test]
fn report_of_missing_run_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert!(report(dir.path()).is_err());
    assert!(load_run(dir.path()).is_err());
}

#[test]
fn unknown_block_size_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_search(&RunConfig::new(9, dir.path())).is_err());
}
