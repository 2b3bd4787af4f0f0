//! `cfair`: generate a bias catalog, audit datasets, mine and evaluate
//! complexity → fairness rules, embed CMD vectors.
//!
//! ```text
//! cfair generate --out catalog
//! cfair audit catalog/manifest.json --out audit
//! cfair mine audit --out rules
//! cfair evaluate rules/rules.json other-audit --out eval
//! cfair embed audit --out embedding
//! cfair pipeline --out run --jobs 4
//! ```
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 warnings under
//! `--strict`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use cfair_core::io::{load_csv, ColumnSpec};
use cfair_core::report::{self, DatasetMeta, InputRef, RunConfig};
use cfair_core::Error;
use clap::{Args, Parser, Subcommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_STRICT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "cfair", version, about = "Group-wise data complexity vs. fairness toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every command. Flags override the config file, which
/// overrides the defaults.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML or JSON file with run settings
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Rows per generated dataset
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub min_support: Option<f64>,
    #[arg(long, global = true)]
    pub min_lift: Option<f64>,
    /// CMD above this becomes a complexity item
    #[arg(long, global = true)]
    pub cmd_threshold: Option<f64>,
    /// Fairness values outside ±band become fairness items
    #[arg(long, global = true)]
    pub fair_band: Option<f64>,
    #[arg(long, global = true)]
    pub folds: Option<usize>,
    /// Worker threads across datasets
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory
    #[arg(long, global = true, default_value = "cfair-out")]
    pub out: PathBuf,
    /// Exit with code 3 when a run produced warnings
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the 73-dataset bias catalog and its manifest
    Generate,
    /// Compute complexity profiles and fairness reports
    Audit(AuditArgs),
    /// Mine complexity → fairness association rules from a corpus
    Mine {
        /// corpus.csv or the directory holding it
        corpus: PathBuf,
    },
    /// Re-measure fixed rules on another corpus
    Evaluate {
        /// rules.json from `mine`
        rules: PathBuf,
        corpus: PathBuf,
    },
    /// Classical MDS of the corpus CMD vectors
    Embed { corpus: PathBuf },
    /// generate, audit, mine and embed in one go
    Pipeline,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// manifest.json, or a single CSV file
    pub input: PathBuf,
    /// Target column (single-CSV mode)
    #[arg(long, default_value = "Y")]
    pub target: String,
    #[arg(long, default_value = "1")]
    pub favorable: String,
    /// Protected attribute column (single-CSV mode)
    #[arg(long, default_value = "A")]
    pub protected: String,
    #[arg(long, default_value = "1")]
    pub privileged: String,
    /// Dataset id; defaults to the file stem
    #[arg(long)]
    pub id: Option<String>,
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Data(other),
        }
    }
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Data(e) => write!(f, "error: {e}"),
        }
    }
}

/// Merge defaults, config file and flags.
pub fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let parsed = if path.extension().is_some_and(|e| e == "json") {
                serde_json::from_str(&text).map_err(|e| e.to_string())
            } else {
                toml::from_str(&text).map_err(|e| e.to_string())
            };
            parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = g.$field { cfg.$field = v; } )* };
    }
    set!(seed, n, min_support, min_lift, cmd_threshold, fair_band, folds);
    if g.jobs.is_some() {
        cfg.jobs = g.jobs;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Outcome of a successful command: warnings decide the `--strict` exit code.
pub struct Outcome {
    pub summary: String,
    pub warnings: Vec<String>,
}

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = resolve_config(&cli.global)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let out = &cli.global.out;
    pool.install(|| dispatch(&cli.command, &cfg, out))
}

fn dispatch(command: &Command, cfg: &RunConfig, out: &Path) -> Result<Outcome, Failure> {
    match command {
        Command::Generate => {
            let m = report::generate_catalog(cfg, out)?;
            Ok(Outcome {
                summary: format!("wrote {} datasets to {}", m.datasets.len(), out.display()),
                warnings: vec![],
            })
        }
        Command::Audit(args) => audit(args, cfg, out),
        Command::Mine { corpus } => {
            let mined = report::mine_corpus(corpus, cfg, out)?;
            let mut warnings = Vec::new();
            if mined.undefined_items > 0 {
                warnings.push(format!("{} undefined values itemized as absent", mined.undefined_items));
            }
            Ok(Outcome {
                summary: format!("{} rules from {} transactions", mined.rules.len(), mined.transactions),
                warnings,
            })
        }
        Command::Evaluate { rules, corpus } => {
            let r = report::evaluate_corpus(rules, corpus, cfg, out)?;
            let undefined = r.rules.iter().filter(|e| e.confidence.is_none()).count();
            let warnings = if undefined > 0 {
                vec![format!("{undefined} rules never fire: confidence undefined")]
            } else {
                vec![]
            };
            Ok(Outcome {
                summary: format!("evaluated {} rules on {} transactions", r.rules.len(), r.transactions),
                warnings,
            })
        }
        Command::Embed { corpus } => {
            let e = report::embed_corpus(corpus, cfg, out)?;
            let warnings = if e.is_degenerate() {
                vec![format!("embedding has {} positive axes", e.positive_axes)]
            } else {
                vec![]
            };
            Ok(Outcome {
                summary: format!("embedded {} records, stress {:.4}", e.coords.len(), e.stress),
                warnings,
            })
        }
        Command::Pipeline => {
            let p = report::run_pipeline(cfg, out)?;
            Ok(Outcome {
                summary: format!(
                    "{} datasets audited, {} rules mined, outputs in {}",
                    p.audits.len(),
                    p.mined.rules.len(),
                    out.display()
                ),
                warnings: p.audits.iter().flat_map(prefixed).collect(),
            })
        }
    }
}

fn prefixed(a: &report::AuditRecord) -> Vec<String> {
    a.warnings.iter().map(|w| format!("{}: {w}", a.dataset_id)).collect()
}

fn audit(args: &AuditArgs, cfg: &RunConfig, out: &Path) -> Result<Outcome, Failure> {
    let records = if args.input.extension().is_some_and(|e| e == "json") {
        report::audit_manifest(&args.input, cfg, out)?
    } else {
        let spec = ColumnSpec {
            target_column: args.target.clone(),
            favorable_value: args.favorable.clone(),
            protected_column: args.protected.clone(),
            privileged_value: args.privileged.clone(),
        };
        let ds = load_csv(&args.input, &spec)?;
        let id = args.id.clone().unwrap_or_else(|| {
            args.input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into())
        });
        let mut record = report::audit_dataset(&ds, &id, DatasetMeta::default(), cfg)?;
        let input = InputRef::of(&args.input)?;
        record.input = Some(input.clone());
        report::write_audits(std::slice::from_ref(&record), cfg, out, "audit", vec![input])?;
        vec![record]
    };
    Ok(Outcome {
        summary: format!("audited {} datasets into {}", records.len(), out.display()),
        warnings: records.iter().flat_map(prefixed).collect(),
    })
}

/// Parse arguments, run, print, and map the result to an exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                log::info!("{w}");
            }
            if !outcome.warnings.is_empty() {
                log::warn!(
                    "{} warnings (details in the run_config.json sidecars; RUST_LOG=info lists them)",
                    outcome.warnings.len()
                );
            }
            println!("{}", outcome.summary);
            if cli.global.strict && !outcome.warnings.is_empty() {
                eprintln!("{} warnings escalated by --strict", outcome.warnings.len());
                EXIT_STRICT
            } else {
                EXIT_OK
            }
        }
        Err(f) => {
            eprintln!("{f}");
            f.code()
        }
    }
}
