//! End-to-end pipeline: generate → audit → mine → evaluate → embed.
//!
//! Every stage is a pure function of its inputs and a [`RunConfig`]; outputs
//! are written atomically and carry no timestamps, so a fixed configuration
//! reproduces every byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complexity::{compute_profile, ComplexityConfig, ComplexityProfile, MetricId};
use crate::data::{split_groups, TabularDataset};
use crate::embedding::{classical_mds, impute, EmbeddingResult};
use crate::error::{Error, Result};
use crate::fairness::{fairness_report, FairnessMetric, FairnessReport};
use crate::io::{dataset_to_csv, load_csv, write_atomic, Manifest, ManifestEntry, ParamValue};
use crate::learners::LearnerId;
use crate::rules::{
    apriori, evaluate_rules, evaluations_to_csv, generate_rules, itemize, rules_to_csv, AssociationRule,
    CorpusRecord, Item, RuleEvaluation, Thresholds,
};
use crate::seed;
use crate::synthgen::{enumerate_catalog, generate, ScmConfig};

pub const CORPUS_FILE: &str = "corpus.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const RUN_CONFIG_FILE: &str = "run_config.json";

/// Resolved settings of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Rows per generated dataset.
    pub n: usize,
    pub min_support: f64,
    pub min_lift: f64,
    pub cmd_threshold: f64,
    pub fair_band: f64,
    pub folds: usize,
    pub epsilon: f64,
    /// Feed the protected attribute to the learners as an extra input.
    pub learners_see_protected: bool,
    pub scm: ScmConfig,
    /// Worker threads across datasets. Does not affect results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n: 5000,
            min_support: 0.1,
            min_lift: 1.0,
            cmd_threshold: 0.1,
            fair_band: crate::fairness::FAIR_BAND,
            folds: 10,
            epsilon: 0.15,
            learners_see_protected: true,
            scm: ScmConfig::default(),
            jobs: None,
        }
    }
}

impl RunConfig {
    /// SHA-256 of the result-affecting settings (everything but `jobs`).
    pub fn hash(&self) -> String {
        let canonical = RunConfig {
            jobs: None,
            ..self.clone()
        };
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            cmd: self.cmd_threshold,
            fair_band: self.fair_band,
        }
    }

    pub fn complexity(&self) -> ComplexityConfig {
        ComplexityConfig {
            epsilon: self.epsilon,
            seed: seed::derive(self.seed, "complexity"),
        }
    }

    pub fn cv_seed(&self) -> u64 {
        seed::derive(self.seed, "cv")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return bad(format!("min_support must lie in (0, 1], got {}", self.min_support));
        }
        if self.folds < 2 {
            return bad(format!("folds must be >= 2, got {}", self.folds));
        }
        if self.n < 100 {
            return bad(format!("n must be >= 100, got {}", self.n));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.jobs == Some(0) {
            return bad("jobs must be >= 1".into());
        }
        Ok(())
    }
}

/// A file consumed by a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRef {
    pub path: String,
    pub sha256: String,
}

impl InputRef {
    pub fn of(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(Self {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        })
    }
}

/// Sidecar written next to every stage's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub inputs: Vec<InputRef>,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

fn write_run_record(out: &Path, command: &str, cfg: &RunConfig, inputs: Vec<InputRef>, outputs: Vec<String>, warnings: Vec<String>) -> Result<()> {
    let record = RunRecord {
        command: command.to_string(),
        config_hash: cfg.hash(),
        config: RunConfig { jobs: None, ..cfg.clone() },
        inputs,
        outputs,
        warnings,
    };
    write_json(&out.join(RUN_CONFIG_FILE), &record)
}

// ---------------------------------------------------------------- generate

/// Write the 73-dataset catalog (one CSV per dataset plus a manifest).
pub fn generate_catalog(cfg: &RunConfig, out: &Path) -> Result<Manifest> {
    cfg.validate()?;
    let specs = enumerate_catalog(cfg.n, cfg.seed);
    let files: Vec<(String, Vec<u8>, ManifestEntry)> = specs
        .par_iter()
        .map(|spec| {
            let g = generate(spec, &cfg.scm)?;
            let label = spec.label();
            let file = format!("data/{label}.csv");
            let bytes = dataset_to_csv(&g.dataset, "A", "Y")?;
            let entry = ManifestEntry {
                file: file.clone(),
                target_column: "Y".into(),
                favorable_value: "1".into(),
                protected_column: "A".into(),
                privileged_value: "1".into(),
                dataset_id: Some(label),
                scenario_id: Some(spec.scenario_id.name().into()),
                parameter: spec.parameter_name.clone(),
                parameter_value: spec.parameter_value,
                variant_index: Some(spec.variant_index),
                n: Some(spec.n),
                seed: Some(spec.seed),
            };
            Ok((file, bytes, entry))
        })
        .collect::<Result<_>>()?;
    let mut outputs = Vec::new();
    let mut datasets = Vec::new();
    for (file, bytes, entry) in files {
        write_atomic(out.join(&file), &bytes)?;
        outputs.push(file);
        datasets.push(entry);
    }
    let manifest = Manifest {
        config_hash: Some(cfg.hash()),
        datasets,
    };
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    outputs.push(MANIFEST_FILE.into());
    write_run_record(out, "generate", cfg, vec![], outputs, vec![])?;
    Ok(manifest)
}

// ------------------------------------------------------------------- audit

/// One fairness value as reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessEntry {
    pub dataset_id: String,
    pub learner: LearnerId,
    pub metric: FairnessMetric,
    pub value: Option<f64>,
    pub fair: bool,
    pub folds_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSizes {
    pub privileged: usize,
    pub unprivileged: usize,
}

/// Scenario metadata carried from a manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub scenario_id: Option<String>,
    pub parameter: Option<String>,
    pub parameter_value: Option<ParamValue>,
}

/// Complexity profile and fairness report of one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub dataset_id: String,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputRef>,
    #[serde(flatten)]
    pub meta: DatasetMeta,
    pub rows: usize,
    pub groups: GroupSizes,
    pub complexity: ComplexityProfile,
    pub fairness: Vec<FairnessEntry>,
    pub warnings: Vec<String>,
}

impl AuditRecord {
    pub fn corpus_record(&self) -> CorpusRecord {
        let mut fairness = [None; 9];
        for e in &self.fairness {
            fairness[Item::Fairness(e.metric, e.learner).bit() as usize - 14] = e.value;
        }
        CorpusRecord {
            dataset_id: self.dataset_id.clone(),
            cmd: self.complexity.cmd_vector(),
            fairness,
        }
    }

    pub fn fairness_value(&self, learner: LearnerId, metric: FairnessMetric) -> Option<f64> {
        self.fairness
            .iter()
            .find(|e| e.learner == learner && e.metric == metric)
            .and_then(|e| e.value)
    }
}

/// Audit an in-memory dataset.
pub fn audit_dataset(ds: &TabularDataset, dataset_id: &str, meta: DatasetMeta, cfg: &RunConfig) -> Result<AuditRecord> {
    let (p, u) = split_groups(ds);
    let groups = GroupSizes {
        privileged: p.len(),
        unprivileged: u.len(),
    };
    let mut warnings = Vec::new();
    if p.len() < 2 || u.len() < 2 {
        warnings.push(format!(
            "degenerate groups (privileged {}, unprivileged {}): complexity differences undefined",
            p.len(),
            u.len()
        ));
    }
    let (complexity, report) = rayon::join(
        || compute_profile(ds, &cfg.complexity()),
        || fairness_report(ds, cfg.folds, cfg.cv_seed(), cfg.learners_see_protected),
    );
    let report: FairnessReport = report?;
    let undefined = complexity.undefined();
    if !undefined.is_empty() && p.len() >= 2 && u.len() >= 2 {
        let names: Vec<&str> = undefined.iter().map(|m| m.name()).collect();
        warnings.push(format!("undefined complexity differences: {}", names.join(", ")));
    }
    let mut fairness = Vec::new();
    for learner in LearnerId::ALL {
        for metric in FairnessMetric::ALL {
            let v = report.get(learner, metric);
            if v.value.is_none() {
                warnings.push(format!("{metric}_{learner} undefined in every fold"));
            } else if v.folds_used < cfg.folds {
                warnings.push(format!(
                    "{metric}_{learner} defined in {} of {} folds",
                    v.folds_used, cfg.folds
                ));
            }
            fairness.push(FairnessEntry {
                dataset_id: dataset_id.to_string(),
                learner,
                metric,
                value: v.value,
                fair: v.is_fair(cfg.fair_band),
                folds_used: v.folds_used,
            });
        }
        let degenerate = report.degenerate_folds.get(&learner).copied().unwrap_or(0);
        if degenerate > 0 {
            warnings.push(format!("{learner}: {degenerate} folds trained on degenerate data"));
        }
    }
    Ok(AuditRecord {
        dataset_id: dataset_id.to_string(),
        config_hash: cfg.hash(),
        input: None,
        meta,
        rows: ds.n_rows(),
        groups,
        complexity,
        fairness,
        warnings,
    })
}

/// Load and audit one manifest entry.
pub fn audit_entry(path: &Path, entry: &ManifestEntry, cfg: &RunConfig) -> Result<AuditRecord> {
    let ds = load_csv(path, &entry.columns())?;
    let meta = DatasetMeta {
        scenario_id: entry.scenario_id.clone(),
        parameter: entry.parameter.clone(),
        parameter_value: entry.parameter_value,
    };
    let mut record = audit_dataset(&ds, &entry.id(), meta, cfg)?;
    // keep the manifest's relative path so reports do not depend on the cwd
    record.input = Some(InputRef {
        path: entry.file.clone(),
        ..InputRef::of(path)?
    });
    Ok(record)
}

/// Audit every dataset of a manifest, write `audits/<id>.json` and merge the
/// rows into `corpus.csv` under `out`.
pub fn audit_manifest(manifest_path: &Path, cfg: &RunConfig, out: &Path) -> Result<Vec<AuditRecord>> {
    cfg.validate()?;
    let manifest = Manifest::read(manifest_path)?;
    if manifest.datasets.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let records: Vec<AuditRecord> = manifest
        .datasets
        .par_iter()
        .map(|entry| audit_entry(&Manifest::resolve(manifest_path, entry), entry, cfg))
        .collect::<Result<_>>()?;
    let mut inputs = vec![InputRef::of(manifest_path)?];
    inputs.extend(records.iter().filter_map(|r| r.input.clone()));
    write_audits(&records, cfg, out, "audit", inputs)?;
    Ok(records)
}

/// Persist audit JSONs and merge them into the corpus table.
pub fn write_audits(records: &[AuditRecord], cfg: &RunConfig, out: &Path, command: &str, inputs: Vec<InputRef>) -> Result<()> {
    let mut outputs = Vec::new();
    for r in records {
        let file = format!("audits/{}.json", r.dataset_id);
        write_json(&out.join(&file), r)?;
        outputs.push(file);
    }
    let corpus_path = out.join(CORPUS_FILE);
    let mut rows: Vec<CorpusRow> = if corpus_path.exists() {
        read_corpus(&corpus_path)?.rows
    } else {
        Vec::new()
    };
    for r in records {
        let row = CorpusRow {
            record: r.corpus_record(),
            meta: r.meta.clone(),
        };
        match rows.iter_mut().find(|x| x.record.dataset_id == r.dataset_id) {
            Some(existing) => *existing = row,
            None => rows.push(row),
        }
    }
    write_atomic(&corpus_path, &corpus_to_csv(&rows)?)?;
    outputs.push(CORPUS_FILE.into());
    let warnings = records
        .iter()
        .flat_map(|r| r.warnings.iter().map(move |w| format!("{}: {w}", r.dataset_id)))
        .collect();
    write_run_record(out, command, cfg, inputs, outputs, warnings)
}

// ------------------------------------------------------------------ corpus

/// One row of the corpus table.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRow {
    pub record: CorpusRecord,
    pub meta: DatasetMeta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub rows: Vec<CorpusRow>,
    /// Item columns present in the file.
    pub columns: Vec<Item>,
}

impl Corpus {
    pub fn records(&self) -> Vec<CorpusRecord> {
        self.rows.iter().map(|r| r.record.clone()).collect()
    }
}

fn item_columns() -> Vec<Item> {
    Item::all().collect()
}

pub fn corpus_to_csv(rows: &[CorpusRow]) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["dataset_id".to_string(), "scenario_id".into(), "parameter".into(), "parameter_value".into()];
    header.extend(item_columns().iter().map(|i| i.to_string()));
    wtr.write_record(&header)?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in rows {
        let mut rec = vec![
            row.record.dataset_id.clone(),
            row.meta.scenario_id.clone().unwrap_or_default(),
            row.meta.parameter.clone().unwrap_or_default(),
            row.meta.parameter_value.map(|v| v.to_string()).unwrap_or_default(),
        ];
        rec.extend(row.record.cmd.iter().map(|v| cell(*v)));
        rec.extend(row.record.fairness.iter().map(|v| cell(*v)));
        wtr.write_record(&rec)?;
    }
    wtr.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

/// Read `corpus.csv` (or a directory containing it).
pub fn read_corpus(path: &Path) -> Result<Corpus> {
    let path: PathBuf = if path.is_dir() { path.join(CORPUS_FILE) } else { path.to_path_buf() };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let id_col = col("dataset_id").ok_or_else(|| Error::MissingColumn("dataset_id".into()))?;
    let item_cols: Vec<(Item, usize)> = item_columns()
        .into_iter()
        .filter_map(|i| col(&i.to_string()).map(|c| (i, c)))
        .collect();
    let mut rows = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let text_at = |c: Option<usize>| c.and_then(|c| record.get(c)).filter(|s| !s.is_empty()).map(str::to_string);
        let mut cmd = [None; 14];
        let mut fairness = [None; 9];
        for &(item, c) in &item_cols {
            let raw = record.get(c).unwrap_or("");
            let value = if raw.is_empty() {
                None
            } else {
                Some(raw.parse::<f64>().map_err(|_| Error::NonNumeric {
                    column: headers[c].clone(),
                    row: r,
                    value: raw.to_string(),
                })?)
            };
            let bit = item.bit() as usize;
            if bit < 14 {
                cmd[bit] = value;
            } else {
                fairness[bit - 14] = value;
            }
        }
        let parameter_value = text_at(col("parameter_value")).map(|s| match s.as_str() {
            "true" => ParamValue::Flag(true),
            "false" => ParamValue::Flag(false),
            other => other.parse().map(ParamValue::Real).unwrap_or(ParamValue::Flag(false)),
        });
        rows.push(CorpusRow {
            record: CorpusRecord {
                dataset_id: record.get(id_col).unwrap_or("").to_string(),
                cmd,
                fairness,
            },
            meta: DatasetMeta {
                scenario_id: text_at(col("scenario_id")),
                parameter: text_at(col("parameter")),
                parameter_value,
            },
        });
    }
    Ok(Corpus {
        rows,
        columns: item_cols.into_iter().map(|(i, _)| i).collect(),
    })
}

// -------------------------------------------------------------------- mine

#[derive(Debug, Clone, PartialEq)]
pub struct Mined {
    pub rules: Vec<AssociationRule>,
    pub transactions: usize,
    pub undefined_items: usize,
}

/// Mine complexity → fairness rules from corpus records.
pub fn mine_records(records: &[CorpusRecord], cfg: &RunConfig) -> Result<Mined> {
    let itemized = itemize(records, &cfg.thresholds())?;
    let sets: Vec<_> = itemized.transactions.iter().map(|t| t.items).collect();
    let frequent = apriori(&sets, cfg.min_support);
    Ok(Mined {
        rules: generate_rules(&frequent, cfg.min_lift),
        transactions: sets.len(),
        undefined_items: itemized.undefined,
    })
}

/// Mine the corpus table in `corpus_dir` and write `rules.json` / `rules.csv`.
pub fn mine_corpus(corpus_dir: &Path, cfg: &RunConfig, out: &Path) -> Result<Mined> {
    cfg.validate()?;
    let corpus_file = if corpus_dir.is_dir() { corpus_dir.join(CORPUS_FILE) } else { corpus_dir.to_path_buf() };
    let corpus = read_corpus(&corpus_file)?;
    let mined = mine_records(&corpus.records(), cfg)?;
    write_json(&out.join("rules.json"), &mined.rules)?;
    write_atomic(out.join("rules.csv"), &rules_to_csv(&mined.rules)?)?;
    let mut warnings = Vec::new();
    if mined.undefined_items > 0 {
        warnings.push(format!("{} undefined values itemized as absent", mined.undefined_items));
    }
    write_run_record(
        out,
        "mine",
        cfg,
        vec![InputRef::of(&corpus_file)?],
        vec!["rules.json".into(), "rules.csv".into()],
        warnings,
    )?;
    Ok(mined)
}

// ---------------------------------------------------------------- evaluate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config_hash: String,
    pub inputs: Vec<InputRef>,
    pub transactions: usize,
    pub undefined_items: usize,
    pub rules: Vec<RuleEvaluation>,
}

pub fn read_rules(path: &Path) -> Result<Vec<AssociationRule>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Re-measure fixed rules on a corpus and write `evaluation.json` / `.csv`.
pub fn evaluate_corpus(rules_file: &Path, corpus_dir: &Path, cfg: &RunConfig, out: &Path) -> Result<EvaluationReport> {
    let rules = read_rules(rules_file)?;
    let corpus_file = if corpus_dir.is_dir() { corpus_dir.join(CORPUS_FILE) } else { corpus_dir.to_path_buf() };
    let corpus = read_corpus(&corpus_file)?;
    for r in &rules {
        if let Some(missing) = r
            .antecedent
            .union(r.consequent)
            .items()
            .find(|i| !corpus.columns.contains(i))
        {
            return Err(Error::Schema(format!(
                "rule `{} -> {}` uses `{missing}`, which the corpus does not have",
                r.antecedent, r.consequent
            )));
        }
    }
    let itemized = itemize(&corpus.records(), &cfg.thresholds())?;
    let evaluations = evaluate_rules(&rules, &itemized.transactions)?;
    let inputs = vec![InputRef::of(rules_file)?, InputRef::of(&corpus_file)?];
    let report = EvaluationReport {
        config_hash: cfg.hash(),
        inputs: inputs.clone(),
        transactions: itemized.transactions.len(),
        undefined_items: itemized.undefined,
        rules: evaluations,
    };
    write_json(&out.join("evaluation.json"), &report)?;
    write_atomic(out.join("evaluation.csv"), &evaluations_to_csv(&report.rules)?)?;
    write_run_record(out, "evaluate", cfg, inputs, vec!["evaluation.json".into(), "evaluation.csv".into()], vec![])?;
    Ok(report)
}

// ------------------------------------------------------------------- embed

/// Embed corpus rows and write `embedding.csv` plus `embedding.json`.
pub fn embed_corpus(corpus_dir: &Path, cfg: &RunConfig, out: &Path) -> Result<EmbeddingResult> {
    let corpus_file = if corpus_dir.is_dir() { corpus_dir.join(CORPUS_FILE) } else { corpus_dir.to_path_buf() };
    let corpus = read_corpus(&corpus_file)?;
    if corpus.rows.len() < 3 {
        return Err(Error::TooFewRecords {
            needed: 3,
            found: corpus.rows.len(),
        });
    }
    let vectors: Vec<Vec<Option<f64>>> = corpus.rows.iter().map(|r| r.record.cmd.to_vec()).collect();
    let (filled, imputed) = impute(&vectors);
    let result = classical_mds(&filled)?;
    write_atomic(out.join("embedding.csv"), &embedding_to_csv(&corpus, &result, cfg.fair_band)?)?;

    #[derive(Serialize)]
    struct Summary<'a> {
        config_hash: String,
        input: InputRef,
        imputed_entries: usize,
        eigenvalues: &'a [f64],
        stress: f64,
        positive_axes: usize,
    }
    let input = InputRef::of(&corpus_file)?;
    write_json(
        &out.join("embedding.json"),
        &Summary {
            config_hash: cfg.hash(),
            input: input.clone(),
            imputed_entries: imputed,
            eigenvalues: &result.eigenvalues,
            stress: result.stress,
            positive_axes: result.positive_axes,
        },
    )?;
    let mut warnings = Vec::new();
    if imputed > 0 {
        warnings.push(format!("{imputed} undefined CMD entries imputed as 0"));
    }
    if result.is_degenerate() {
        warnings.push(format!("only {} positive eigenvalues", result.positive_axes));
    }
    write_run_record(out, "embed", cfg, vec![input], vec!["embedding.csv".into(), "embedding.json".into()], warnings)?;
    Ok(result)
}

fn embedding_to_csv(corpus: &Corpus, result: &EmbeddingResult, band: f64) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let fairness_items: Vec<Item> = Item::all().filter(|i| !i.is_complexity()).collect();
    let mut header = vec!["dataset_id".to_string(), "x".into(), "y".into(), "scenario_id".into(), "bias_parameter".into()];
    header.extend(fairness_items.iter().map(|i| format!("fair_{i}")));
    wtr.write_record(&header)?;
    for (row, xy) in corpus.rows.iter().zip(&result.coords) {
        let mut rec = vec![
            row.record.dataset_id.clone(),
            xy[0].to_string(),
            xy[1].to_string(),
            row.meta.scenario_id.clone().unwrap_or_default(),
            row.meta.parameter_value.map(|v| v.to_string()).unwrap_or_default(),
        ];
        rec.extend(
            row.record
                .fairness
                .iter()
                .map(|v| v.map(|x| (x.abs() <= band).to_string()).unwrap_or_default()),
        );
        wtr.write_record(&rec)?;
    }
    wtr.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

// ---------------------------------------------------------------- pipeline

/// Everything produced by [`run_pipeline`].
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub manifest: Manifest,
    pub audits: Vec<AuditRecord>,
    pub mined: Mined,
    pub embedding: EmbeddingResult,
}

/// generate → audit → mine → embed under `out`.
pub fn run_pipeline(cfg: &RunConfig, out: &Path) -> Result<PipelineOutput> {
    let manifest = generate_catalog(cfg, out)?;
    let audit_dir = out.join("audit");
    let audits = audit_manifest(&out.join(MANIFEST_FILE), cfg, &audit_dir)?;
    let mined = mine_corpus(&audit_dir, cfg, &out.join("rules"))?;
    let embedding = embed_corpus(&audit_dir, cfg, &out.join("embedding"))?;
    Ok(PipelineOutput {
        manifest,
        audits,
        mined,
        embedding,
    })
}

/// CMD values of an audit keyed by metric, for quick inspection.
pub fn cmd_map(record: &AuditRecord) -> BTreeMap<MetricId, Option<f64>> {
    MetricId::ALL.into_iter().map(|m| (m, record.complexity.cmd(m))).collect()
}
