use std::process::{Command, Output};

fn pentile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pentile")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = pentile(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn species_lists_one_line_per_species() {
    let text = stdout(&["species", "--i", "2", "--n", "11"]);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("<3^10.6>") && text.contains("<3^9.4^2>"));
}

#[test]
fn partitions_of_pentagon_heptagon_code() {
    let text = stdout(&["partitions", "2111211111"]);
    assert_eq!(text.lines().count(), 22);
}

#[test]
fn filter_types_reports_survivors() {
    let text = stdout(&["filter-types", "--i", "1", "--n", "6"]);
    assert!(text.contains("[3^6]"));
}

#[test]
fn forms_lists_the_catalog() {
    let text = stdout(&["forms", "--i", "2"]);
    assert!(text.lines().any(|l| l.contains("code=2111211111")));
}

#[test]
fn realize_prints_a_triage_report() {
    let text = stdout(&["realize", "C=π-A, D=B, E=A, b=c, d=e"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.is_object());
}

#[test]
fn search_report_and_render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let run = run.to_str().unwrap();
    let text = stdout(&["search", "--i", "1", "--out", run, "--jobs", "2"]);
    assert!(text.contains("n=5: types 1,2,4,5"), "{text}");
    assert!(text.contains("n=6: types 1,2,3"), "{text}");
    let report = stdout(&["report", "--run", run]);
    assert!(report.contains("Pentagon types found per node count"));

    let svg = dir.path().join("p.svg");
    stdout(&["render", "--system", "A=π/3, B=3π/4, C=7π/12, D=π/2, E=5π/6, a=2b=2d=2e", "--out", svg.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polygon"));
}

#[test]
fn errors_exit_nonzero_with_a_message() {
    for args in [
        &["species", "--i", "0"][..],
        &["partitions", "21x1"],
        &["realize", "A=π, B="],
        &["report", "--run", "/nonexistent/run"],
        &["render", "--system", "A=π/2, B=π/2, C=π/2, D=π/2, E=π", "--out", "/dev/null"],
    ] {
        let out = pentile(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
}
