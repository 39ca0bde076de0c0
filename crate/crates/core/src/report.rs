//! Human-readable tables of a finished run.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use crate::isohedral::{database, filter_topological_types};
use crate::pipeline::{load_run, PipelineError, SystemVerdict};
use crate::species::{enumerate_species, node_bounds};

/// Species and surviving topological types for every `(i, n)` with
/// `i <= max_i`.
pub fn species_table(max_i: u32) -> String {
    let mut out = String::new();
    writeln!(out, "{:<3} {:<4} {:<28} topological types", "i", "n", "species").unwrap();
    for i in 1..=max_i {
        let (lo, hi) = node_bounds(i as i64).expect("i is positive");
        for n in lo..=hi {
            for s in enumerate_species(i as i64, n).expect("bounds are valid") {
                let kept = filter_topological_types(&s);
                let topo = if kept.is_empty() {
                    "-".to_string()
                } else {
                    kept.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
                };
                writeln!(out, "{i:<3} {n:<4} {:<28} {topo}", s.to_string()).unwrap();
            }
        }
    }
    out
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() { "-".into() } else { v.join(", ") }
}

/// Ids sorted numerically, with `new` last.
pub fn sorted_labels(types: &BTreeSet<String>) -> Vec<String> {
    let mut v: Vec<String> = types.iter().cloned().collect();
    v.sort_by_key(|t| t.parse::<u32>().unwrap_or(u32::MAX));
    v
}

/// The tables of a run directory: species, types per `n`, outcomes per
/// isohedral type, and the untyped/unresolved ledger.
pub fn report(dir: &Path) -> Result<String, PipelineError> {
    let (summary, systems) = load_run(dir)?;
    let mut out = String::new();
    writeln!(out, "== Block species and topological types (i <= {}) ==", summary.i).unwrap();
    out.push_str(&species_table(summary.i));

    writeln!(out, "\n== Pentagon types found per node count ==").unwrap();
    writeln!(out, "{:<4} {:<28} {:<28} all matches", "n", "types", "realizable types").unwrap();
    for (n, s) in &summary.per_n {
        writeln!(out, "{n:<4} {:<28} {:<28} {}", join(sorted_labels(&s.types)), join(sorted_labels(&s.realizable)), join(&s.matches))
            .unwrap();
    }

    writeln!(out, "\n== Outcomes per isohedral type ==").unwrap();
    writeln!(out, "{:<6} {:<20} all matches", "IH", "types").unwrap();
    for ih in database() {
        let (t, m) = match summary.per_ih.get(&ih.name) {
            Some(s) => (join(sorted_labels(&s.types)), join(&s.matches)),
            None => ("-".into(), "-".into()),
        };
        writeln!(out, "{:<6} {t:<20} {m}", ih.name).unwrap();
    }

    writeln!(out, "\n== Stage ledger ==").unwrap();
    writeln!(out, "{}", serde_json::to_string_pretty(&summary.ledger).unwrap()).unwrap();
    writeln!(out, "outcomes: {}", join(summary.outcomes.iter().map(|(k, v)| format!("{k} {v}")))).unwrap();

    writeln!(out, "\n== Known-type systems no convex pentagon satisfies ==").unwrap();
    for s in systems.iter().filter(|s| s.realizable == Some(false)) {
        writeln!(out, "{:<16} n={} {}", s.verdict.label().unwrap_or_default(), join(&s.n), s.system).unwrap();
    }

    writeln!(out, "\n== Untyped systems ==").unwrap();
    for s in systems.iter().filter(|s| s.triage.is_some()) {
        let t = s.triage.as_ref().unwrap();
        let verdict = match &s.verdict {
            SystemVerdict::Known { id, .. } => format!("Type {id}"),
            SystemVerdict::NewType { id: Some(id) } => format!("new (Type {id})"),
            SystemVerdict::NewType { id: None } => "new".into(),
            SystemVerdict::Impossible => "impossible".into(),
            SystemVerdict::Unresolved => "UNRESOLVED".into(),
        };
        writeln!(out, "{:<14} {:<16} n={} {}", format!("{:?}", t.flag), verdict, join(&s.n), s.system).unwrap();
    }
    Ok(out)
}
