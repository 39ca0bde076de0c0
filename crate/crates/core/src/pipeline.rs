//! The batch search: every candidate symbol application of a run, the
//! distinct reduced systems they produce, and a per-`n` summary.
//!
//! A run directory holds `config.json`, one `parts/<form>.jsonl` per
//! finished block form (the resume checkpoints), and on completion the
//! sorted `candidates.jsonl`, `systems.jsonl`, `summary.json` and the
//! non-deterministic `timing.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{classify, classify_extended, simplify, Classification, Relabel, ReducedSystem, Simplified};
use crate::blockforms::{enumerate_labelings, list_block_forms, parse_catalog, BlockForm};
use crate::boundary::enumerate_partitions;
use crate::isohedral::{database, filter_topological_types, parse_database, IsohedralType};
use crate::matcher::{angles_admissible, valid_assignments, Assignment, Corona};
use crate::realizability::{realize, sampled_pentagon, triage_untyped, with_grid_offset, RealizabilityVerdict, TriageFlag, TriageReport, RESIDUAL_TOL};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("no curated block forms for i = {0}")]
    MissingCatalog(u32),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("run directory was started with a different configuration (stored {stored}, requested {requested})")]
    ResumeMismatch { stored: String, requested: String },
    #[error("corrupt record stream {path}: {msg}")]
    Corrupt { path: String, msg: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Search parameters. Only the fields that affect results enter the
/// configuration hash, so a run may be resumed with another worker count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub i: u32,
    pub n: Option<u32>,
    /// Block-form names to keep.
    pub forms: Option<Vec<String>>,
    /// Isohedral type names to keep.
    pub ih: Option<Vec<String>>,
    /// Alternative block-form catalog.
    pub forms_file: Option<PathBuf>,
    /// Alternative isohedral database.
    pub ih_db: Option<PathBuf>,
    /// Closure residual accepted for feasible witnesses.
    pub residual_tol: f64,
    /// Jitters the realizability grids (per system) when set.
    pub seed: Option<u64>,
    #[serde(skip)]
    pub jobs: usize,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub resume: bool,
}

impl RunConfig {
    pub fn new(i: u32, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            i,
            n: None,
            forms: None,
            ih: None,
            forms_file: None,
            ih_db: None,
            residual_tol: RESIDUAL_TOL,
            seed: None,
            jobs: 1,
            out: out.into(),
            resume: false,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(1e-14..=1e-6).contains(&self.residual_tol) {
            return Err(PipelineError::Config(format!("residual tolerance {} outside [1e-14, 1e-6]", self.residual_tol)));
        }
        if self.jobs == 0 {
            return Err(PipelineError::Config("worker count must be positive".into()));
        }
        Ok(())
    }

    /// Hash of the result-affecting fields and of any external catalogs.
    pub fn hash(&self) -> Result<String, PipelineError> {
        let mut h = Sha256::new();
        h.update(serde_json::to_string(self).expect("config serializes"));
        for p in self.forms_file.iter().chain(&self.ih_db) {
            h.update(fs::read(p)?);
        }
        Ok(hex::encode(h.finalize()))
    }
}

/// Canonical text of an assignment, e.g. `R1:0r,4d,2r,5d,1d,3d`.
pub fn assignment_text(a: &Assignment) -> String {
    let partners: Vec<String> = a.partners.iter().map(|&(m, rev)| format!("{m}{}", if rev { 'r' } else { 'd' })).collect();
    format!("{}{}:{}", if a.mirror { 'M' } else { 'R' }, a.rot, partners.join(","))
}

/// Inverse of [`assignment_text`].
pub fn parse_assignment(text: &str) -> Option<Assignment> {
    let mirror = match text.chars().next()? {
        'M' => true,
        'R' => false,
        _ => return None,
    };
    let (rot, rest) = text[1..].split_once(':')?;
    let partners = rest
        .split(',')
        .map(|p| {
            let (m, d) = p.split_at(p.len().checked_sub(1)?);
            Some((m.parse().ok()?, match d { "r" => true, "d" => false, _ => return None }))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Assignment { mirror, rot: rot.parse().ok()?, partners })
}

/// Stable candidate key: SHA-256 of the canonical texts.
pub fn candidate_key(form: &str, labeling: &str, partition: &str, ih: &str, assignment: &str) -> String {
    hex::encode(Sha256::digest(format!("{form}|{labeling}|{partition}|{ih}|{assignment}")))
}

/// What happened to one candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Outcome {
    Inconsistent,
    Convexity { reason: String },
    /// Consistent: the reduced system and its class under renaming.
    Reduced { system: String, system_id: Option<String> },
}

/// One symbol application to one labeled block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub key: String,
    pub n: u32,
    pub form: String,
    pub labeling: String,
    pub partition: String,
    pub ih: String,
    pub assignment: String,
    pub species: String,
    pub outcome: Outcome,
}

/// Final verdict of a distinct system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SystemVerdict {
    /// A previously known type, directly or after closure analysis.
    Known { id: u32, all: Vec<u32> },
    /// Realizable and outside Types 1–14; `id` when it matches Type 15.
    NewType { id: Option<u32> },
    Impossible,
    Unresolved,
}

impl SystemVerdict {
    /// Label used in tables: the type id, `new`, or `None`.
    pub fn label(&self) -> Option<String> {
        match self {
            SystemVerdict::Known { id, .. } | SystemVerdict::NewType { id: Some(id) } => Some(id.to_string()),
            SystemVerdict::NewType { id: None } => Some("new".into()),
            _ => None,
        }
    }

    /// Every type the system matches.
    pub fn matches(&self) -> Vec<u32> {
        match self {
            SystemVerdict::Known { all, .. } => all.clone(),
            SystemVerdict::NewType { id: Some(id) } => vec![*id],
            _ => Vec::new(),
        }
    }
}

/// A distinct reduced system up to renaming, with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub id: String,
    pub system: String,
    pub candidates: usize,
    pub n: BTreeSet<u32>,
    pub ih: BTreeSet<String>,
    pub classification: Classification,
    pub triage: Option<TriageReport>,
    pub verdict: SystemVerdict,
    /// A feasible witness failed the residual check.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub residual_failure: bool,
    /// See [`Decision::realizable`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizable: Option<bool>,
}

/// Per-stage candidate counts; `generated = prefiltered + persisted`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageLedger {
    pub partitions: usize,
    pub coronas: usize,
    pub coronas_species_rejected: usize,
    pub generated: usize,
    pub prefiltered: usize,
    pub persisted: usize,
    pub inconsistent: usize,
    pub convexity: usize,
    pub reduced: usize,
    pub distinct_systems: usize,
}

impl StageLedger {
    fn add(&mut self, o: &StageLedger) {
        self.partitions += o.partitions;
        self.coronas += o.coronas;
        self.coronas_species_rejected += o.coronas_species_rejected;
        self.generated += o.generated;
        self.prefiltered += o.prefiltered;
        self.persisted += o.persisted;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NSummary {
    /// Reported (smallest) type ids, `new` for unmatched new types.
    pub types: BTreeSet<String>,
    /// Every type matched by some system.
    pub matches: BTreeSet<u32>,
    /// Reported ids of systems not known to be unrealizable.
    pub realizable: BTreeSet<String>,
    pub systems: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub i: u32,
    pub config_hash: String,
    pub ledger: StageLedger,
    pub per_n: BTreeMap<u32, NSummary>,
    pub per_ih: BTreeMap<String, NSummary>,
    pub outcomes: BTreeMap<String, usize>,
    /// Ids of untyped systems with their triage flags.
    pub untyped: Vec<(String, String)>,
    pub unresolved: Vec<String>,
}

/// Work unit output: the records of one block form.
#[derive(Debug, Serialize, Deserialize)]
struct Part {
    form: String,
    ledger: StageLedger,
    records: Vec<SearchRecord>,
}

fn load_database(cfg: &RunConfig) -> Result<&'static [IsohedralType], PipelineError> {
    match &cfg.ih_db {
        None => Ok(database()),
        Some(p) => {
            let db = parse_database(&fs::read_to_string(p)?).map_err(|e| PipelineError::Config(e.to_string()))?;
            Ok(Box::leak(db.into_boxed_slice()))
        }
    }
}

fn load_forms(cfg: &RunConfig) -> Result<Vec<Arc<BlockForm>>, PipelineError> {
    let all = match &cfg.forms_file {
        None => list_block_forms(cfg.i).map_err(|_| PipelineError::MissingCatalog(cfg.i))?,
        Some(p) => parse_catalog(&fs::read_to_string(p)?)
            .map_err(|e| PipelineError::Config(e.to_string()))?
            .into_iter()
            .filter(|f| f.i() == cfg.i)
            .map(Arc::new)
            .collect(),
    };
    let keep: Vec<Arc<BlockForm>> = all
        .into_iter()
        .filter(|f| cfg.n.is_none_or(|n| f.n() == n))
        .filter(|f| cfg.forms.as_ref().is_none_or(|names| names.contains(&f.name)))
        .collect();
    if keep.is_empty() && cfg.forms.is_none() && cfg.n.is_none() {
        return Err(PipelineError::MissingCatalog(cfg.i));
    }
    Ok(keep)
}

/// Every candidate of one block form: partitions, compatible isohedral
/// types, structurally valid assignments (one per corona), labelings.
fn search_form(form: &Arc<BlockForm>, db: &'static [IsohedralType], cfg: &RunConfig) -> Part {
    let i = cfg.i;
    let mut ledger = StageLedger::default();
    let mut records = Vec::new();
    let labelings = enumerate_labelings(form);
    for part in enumerate_partitions(&form.code, i) {
        ledger.partitions += 1;
        let part_text = part.to_string();
        for ih in db {
            if cfg.ih.as_ref().is_some_and(|names| !names.contains(&ih.name)) {
                continue;
            }
            let mut seen = BTreeSet::new();
            for a in valid_assignments(&part, ih, i) {
                let Some(corona) = Corona::build(form, &part, ih, a, i) else { continue };
                if !seen.insert((corona.stars.clone(), corona.symmetric.clone(), corona.same_segment.clone())) {
                    continue;
                }
                ledger.coronas += 1;
                let species = match corona.species() {
                    Some(s) if filter_topological_types(&s).contains(&ih.topo) => s,
                    _ => {
                        ledger.coronas_species_rejected += 1;
                        continue;
                    }
                };
                let assignment = assignment_text(&corona.assignment);
                for l in &labelings {
                    ledger.generated += 1;
                    if !angles_admissible(&corona.angle_rows(l)) {
                        ledger.prefiltered += 1;
                        continue;
                    }
                    let labeling = l.key();
                    let outcome = match simplify(&corona.equations(l)) {
                        Simplified::Inconsistent => Outcome::Inconsistent,
                        Simplified::ConvexityViolation(reason) => Outcome::Convexity { reason },
                        Simplified::Reduced(r) => Outcome::Reduced { system: r.canonical(), system_id: None },
                    };
                    ledger.persisted += 1;
                    records.push(SearchRecord {
                        key: candidate_key(&form.name, &labeling, &part_text, &ih.name, &assignment),
                        n: form.n(),
                        form: form.name.clone(),
                        labeling,
                        partition: part_text.clone(),
                        ih: ih.name.clone(),
                        assignment: assignment.clone(),
                        species: species.to_string(),
                        outcome,
                    });
                }
            }
        }
    }
    records.sort_by(|x, y| x.key.cmp(&y.key));
    Part { form: form.name.clone(), ledger, records }
}

/// Smallest canonical text over the renamings of A..E.
pub fn system_id(red: &ReducedSystem) -> String {
    Relabel::all()
        .filter_map(|g| match simplify(&g.system(&red.to_system())) {
            Simplified::Reduced(r) => Some(r.canonical()),
            _ => None,
        })
        .min()
        .unwrap_or_else(|| red.canonical())
}

/// The stage outcomes of one distinct system.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub classification: Classification,
    pub triage: Option<TriageReport>,
    pub verdict: SystemVerdict,
    pub residual_failure: bool,
    /// For systems matching a known type directly: whether some convex
    /// pentagon satisfies them. Informational; the verdict follows the
    /// match alone.
    pub realizable: Option<bool>,
}

/// Classifies a system and, when untyped, triages it through closure.
pub fn decide(red: &ReducedSystem, residual_tol: f64) -> Decision {
    let classification = classify(red);
    if let Classification::Known { id, all } = &classification {
        let realizable = sampled_pentagon(red) || realize(red).admits_pentagon();
        return Decision {
            verdict: SystemVerdict::Known { id: *id, all: all.clone() },
            classification,
            triage: None,
            residual_failure: false,
            realizable: Some(realizable),
        };
    }
    let report = triage_untyped(red);
    let mut residual_failure = false;
    let verdict = match report.flag {
        TriageFlag::Reclassified => match &report.classification {
            Classification::Known { id, all } => SystemVerdict::Known { id: *id, all: all.clone() },
            Classification::Untyped => SystemVerdict::Unresolved,
        },
        TriageFlag::NewType => {
            if let RealizabilityVerdict::Feasible { witness, .. } = &report.realization.verdict {
                let (r1, r2) = crate::realizability::closure_residual(witness);
                residual_failure = r1.hypot(r2) > residual_tol;
            }
            match classify_extended(red) {
                Classification::Known { id, .. } => SystemVerdict::NewType { id: Some(id) },
                Classification::Untyped => SystemVerdict::NewType { id: None },
            }
        }
        TriageFlag::Impossible => SystemVerdict::Impossible,
        TriageFlag::NeedsReview => SystemVerdict::Unresolved,
    };
    Decision { classification, triage: Some(report), verdict, residual_failure, realizable: None }
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), PipelineError> {
    let tmp = path.with_extension("tmp");
    let mut w = BufWriter::new(fs::File::create(&tmp)?);
    for x in items {
        serde_json::to_writer(&mut w, x).expect("records serialize");
        w.write_all(b"\n")?;
    }
    w.flush()?;
    drop(w);
    fs::rename(tmp, path)?;
    Ok(())
}

/// Reads a line-delimited record file.
pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, PipelineError> {
    let corrupt = |msg: String| PipelineError::Corrupt { path: path.display().to_string(), msg };
    let f = fs::File::open(path).map_err(|e| corrupt(e.to_string()))?;
    let mut out = Vec::new();
    for (k, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| corrupt(format!("line {}: {e}", k + 1)))?);
    }
    Ok(out)
}

fn write_json<T: Serialize>(path: &Path, x: &T) -> Result<(), PipelineError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string_pretty(x).expect("serializes") + "\n")?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// Prepares the run directory; returns the forms already finished.
fn prepare(cfg: &RunConfig, hash: &str) -> Result<BTreeSet<String>, PipelineError> {
    let parts = cfg.out.join("parts");
    let config_path = cfg.out.join("config.json");
    let mut done = BTreeSet::new();
    if cfg.resume && config_path.exists() {
        let stored: serde_json::Value = serde_json::from_str(&fs::read_to_string(&config_path)?)
            .map_err(|e| PipelineError::Corrupt { path: config_path.display().to_string(), msg: e.to_string() })?;
        let stored = stored["hash"].as_str().unwrap_or_default().to_string();
        if stored != hash {
            return Err(PipelineError::ResumeMismatch { stored, requested: hash.to_string() });
        }
        for e in fs::read_dir(&parts)? {
            let p = e?.path();
            if p.extension().is_some_and(|x| x == "jsonl") {
                done.insert(p.file_stem().unwrap().to_string_lossy().into_owned());
            }
        }
        return Ok(done);
    }
    if parts.exists() {
        fs::remove_dir_all(&parts)?;
    }
    fs::create_dir_all(&parts)?;
    write_json(&config_path, &serde_json::json!({ "hash": hash, "config": cfg }))?;
    Ok(done)
}

fn save_part(dir: &Path, part: &Part) -> Result<(), PipelineError> {
    let header = serde_json::json!({ "form": part.form, "ledger": part.ledger });
    let tmp = dir.join(format!("{}.tmp", part.form));
    let mut w = BufWriter::new(fs::File::create(&tmp)?);
    serde_json::to_writer(&mut w, &header).expect("serializes");
    w.write_all(b"\n")?;
    for r in &part.records {
        serde_json::to_writer(&mut w, r).expect("serializes");
        w.write_all(b"\n")?;
    }
    w.flush()?;
    drop(w);
    fs::rename(tmp, dir.join(format!("{}.jsonl", part.form)))?;
    Ok(())
}

fn load_part(dir: &Path, form: &str) -> Result<Part, PipelineError> {
    let path = dir.join(format!("{form}.jsonl"));
    let corrupt = |msg: String| PipelineError::Corrupt { path: path.display().to_string(), msg };
    let text = fs::read_to_string(&path)?;
    let mut lines = text.lines();
    let header: serde_json::Value =
        serde_json::from_str(lines.next().ok_or_else(|| corrupt("empty".into()))?).map_err(|e| corrupt(e.to_string()))?;
    let ledger = serde_json::from_value(header["ledger"].clone()).map_err(|e| corrupt(e.to_string()))?;
    let records = lines.map(serde_json::from_str).collect::<Result<Vec<_>, _>>().map_err(|e| corrupt(e.to_string()))?;
    Ok(Part { form: form.to_string(), ledger, records })
}

/// Runs (or resumes) a search and writes the sorted outputs.
pub fn run_search(cfg: &RunConfig) -> Result<Summary, PipelineError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let db = load_database(cfg)?;
    let forms = load_forms(cfg)?;
    let hash = cfg.hash()?;
    let done = prepare(cfg, &hash)?;
    let parts_dir = cfg.out.join("parts");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| PipelineError::Config(e.to_string()))?;

    pool.install(|| {
        forms.par_iter().filter(|f| !done.contains(&f.name)).try_for_each(|f| save_part(&parts_dir, &search_form(f, db, cfg)))
    })?;
    let t_candidates = t0.elapsed().as_secs_f64();

    let mut ledger = StageLedger::default();
    let mut records = Vec::new();
    for f in &forms {
        let part = load_part(&parts_dir, &f.name)?;
        ledger.add(&part.ledger);
        records.extend(part.records);
    }
    records.sort_by(|x, y| x.key.cmp(&y.key));
    records.dedup_by(|x, y| x.key == y.key);

    // Distinct systems, first by reduced text, then up to renaming.
    let mut by_text: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (k, r) in records.iter().enumerate() {
        match &r.outcome {
            Outcome::Inconsistent => ledger.inconsistent += 1,
            Outcome::Convexity { .. } => ledger.convexity += 1,
            Outcome::Reduced { system, .. } => {
                ledger.reduced += 1;
                by_text.entry(system.clone()).or_default().push(k);
            }
        }
    }
    let texts: Vec<&String> = by_text.keys().collect();
    let ids: Vec<String> = pool.install(|| texts.par_iter().map(|t| system_id(&reparse(t))).collect());
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (id, members) in ids.into_iter().zip(by_text.values()) {
        for &k in members {
            if let Outcome::Reduced { system_id, .. } = &mut records[k].outcome {
                *system_id = Some(id.clone());
            }
        }
        groups.entry(id).or_default().extend(members);
    }
    ledger.distinct_systems = groups.len();
    let group_list: Vec<(&String, &Vec<usize>)> = groups.iter().collect();
    let systems: Vec<SystemRecord> = pool.install(|| {
        group_list
            .par_iter()
            .map(|(id, members)| {
                let canonical = reparse(id);
                let run = || decide(&canonical, cfg.residual_tol);
                let d = match cfg.seed {
                    Some(seed) => with_grid_offset(jitter(seed, id), run),
                    None => run(),
                };
                SystemRecord {
                    id: (*id).clone(),
                    system: canonical.to_string(),
                    candidates: members.len(),
                    n: members.iter().map(|&k| records[k].n).collect(),
                    ih: members.iter().map(|&k| records[k].ih.clone()).collect(),
                    classification: d.classification,
                    triage: d.triage,
                    verdict: d.verdict,
                    residual_failure: d.residual_failure,
                    realizable: d.realizable,
                }
            })
            .collect()
    });
    let t_systems = t0.elapsed().as_secs_f64() - t_candidates;

    let summary = summarize(cfg.i, &hash, ledger, &systems);
    write_jsonl(&cfg.out.join("candidates.jsonl"), &records)?;
    write_jsonl(&cfg.out.join("systems.jsonl"), &systems)?;
    write_json(&cfg.out.join("summary.json"), &summary)?;
    write_json(
        &cfg.out.join("timing.json"),
        &serde_json::json!({ "candidates_s": t_candidates, "systems_s": t_systems, "total_s": t0.elapsed().as_secs_f64(), "jobs": cfg.jobs }),
    )?;
    Ok(summary)
}

/// Grid offset in (0, 1) derived from the seed and the system.
fn jitter(seed: u64, id: &str) -> f64 {
    let h = Sha256::digest(format!("{seed}|{id}"));
    u64::from_le_bytes(h[..8].try_into().unwrap()) as f64 / u64::MAX as f64
}

/// Rebuilds a reduced system from its canonical text.
fn reparse(text: &str) -> ReducedSystem {
    let sys = crate::algebra::EquationSystem::parse(text).expect("canonical text parses");
    match simplify(&sys) {
        Simplified::Reduced(r) => r,
        other => panic!("canonical system {text} no longer reduces: {other:?}"),
    }
}

/// Aggregates system verdicts per node count and per isohedral type.
pub fn summarize(i: u32, hash: &str, ledger: StageLedger, systems: &[SystemRecord]) -> Summary {
    let mut s = Summary { i, config_hash: hash.to_string(), ledger, ..Default::default() };
    for sys in systems {
        let key = serde_json::to_value(&sys.verdict).unwrap()["verdict"].as_str().unwrap().to_string();
        *s.outcomes.entry(key).or_insert(0) += 1;
        if let Some(t) = &sys.triage {
            s.untyped.push((sys.id.clone(), format!("{:?}", t.flag)));
        }
        if sys.verdict == SystemVerdict::Unresolved {
            s.unresolved.push(sys.id.clone());
        }
        let label = sys.verdict.label();
        let matches = sys.verdict.matches();
        let bump = |e: &mut NSummary| {
            e.systems += 1;
            if let Some(l) = &label {
                e.types.insert(l.clone());
                if sys.realizable != Some(false) {
                    e.realizable.insert(l.clone());
                }
            }
            e.matches.extend(&matches);
        };
        for &n in &sys.n {
            bump(s.per_n.entry(n).or_default());
        }
        for ih in &sys.ih {
            bump(s.per_ih.entry(ih.clone()).or_default());
        }
    }
    s
}

/// Loads the summary and systems of a finished run.
pub fn load_run(dir: &Path) -> Result<(Summary, Vec<SystemRecord>), PipelineError> {
    let sp = dir.join("summary.json");
    if !sp.exists() {
        return Err(PipelineError::Corrupt { path: sp.display().to_string(), msg: "no finished run here".into() });
    }
    let summary = serde_json::from_str(&fs::read_to_string(&sp)?)
        .map_err(|e| PipelineError::Corrupt { path: sp.display().to_string(), msg: e.to_string() })?;
    let systems = read_jsonl(&dir.join("systems.jsonl"))?;
    Ok((summary, systems))
}

/// Whether a run's verdicts agree with a table of expected type sets:
/// every expected type is matched by some system, and every typed
/// system matches at least one expected type (types overlap, so a
/// system is judged by all of its matches).
pub fn agrees(expected: &BTreeSet<u32>, systems: &[&SystemRecord]) -> Result<(), String> {
    let mut covered = BTreeSet::new();
    for s in systems {
        let m = s.verdict.matches();
        match &s.verdict {
            SystemVerdict::NewType { id: None } => return Err(format!("unclassified new type {}", s.system)),
            SystemVerdict::Impossible | SystemVerdict::Unresolved => continue,
            _ => {}
        }
        if !m.iter().any(|t| expected.contains(t)) {
            return Err(format!("{} matches {:?}, none expected", s.system, m));
        }
        covered.extend(m.into_iter().filter(|t| expected.contains(t)));
    }
    let missing: Vec<&u32> = expected.difference(&covered).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(format!("types {missing:?} not found"))
    }
}
