//! Command-line front end for the posetmine library.
//!
//! Every subcommand ingests its input, runs one mining routine, and
//! writes JSON-lines output in canonical order (sorted by search level,
//! then coordinates), so identical invocations produce byte-identical
//! bytes regardless of worker count. A `# <count> lines …` summary goes
//! to stderr. Exit codes: 0 success, 2 configuration error, 3 data or
//! input error, 4 resource cap exceeded.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use posetmine::apriori::{apriori_frequent, apriori_infrequent, LevelCaps, LevelItem};
use posetmine::dataset::{ingest, negative_encode, Schema, SupportOracle, TransactionDb};
use posetmine::dualize::{dual_check, DualOutcome, DualizeCfg};
use posetmine::enumerate::generate_minimal_infrequent;
use posetmine::interval::Endpoint;
use posetmine::kbox::gen_maximal_kboxes;
use posetmine::poset::max_antichain;
use posetmine::render::{atoms, consequent_atoms, fmt_scaled, rule_text};
use posetmine::rules::{gen_generalized_rules, gen_rare_rules, gen_rules, RareRuleConfig, Rule};
use posetmine::{ceil_snap, Element, FactorPoset, MineError, NodeId, ProductPoset};

type Result<T> = std::result::Result<T, MineError>;

#[derive(Parser)]
#[command(name = "posetmine", version, about = "Border and rule mining over poset products")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// All frequent elements with their supports.
    Frequent(MineArgs),
    /// All infrequent elements with their supports.
    Infrequent(MineArgs),
    /// Both borders: minimal infrequent and maximal frequent elements.
    MinimalInfrequent(MineArgs),
    /// Irredundant association rules from a binary database.
    Rules(RuleArgs),
    /// Association rules over taxonomies, categories, and value ranges.
    GeneralizedRules(RuleArgs),
    /// Rules whose consequents sit in a low-support window.
    RareRules(RareArgs),
    /// Maximal boxes holding at most k points in their interior.
    Kboxes(KboxArgs),
    /// Decide whether two antichains are dual; report a witness if not.
    Dualize(DualArgs),
}

/// Flags shared by every dataset-driven subcommand.
#[derive(Args)]
struct DataArgs {
    /// Input CSV file.
    #[arg(long)]
    input: PathBuf,
    /// JSON schema: column kinds, precisions, taxonomy files.
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Re-encode a binary database so item absence is a mineable value.
    #[arg(long)]
    negative: bool,
    #[command(flatten)]
    run: RunArgs,
}

/// Plumbing flags shared by every subcommand.
#[derive(Args)]
struct RunArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel sections.
    #[arg(long)]
    workers: Option<usize>,
    /// Maximum elements retained per search level.
    #[arg(long)]
    cap_level_width: Option<usize>,
    /// Maximum search and recursion depth.
    #[arg(long)]
    cap_depth: Option<usize>,
}

#[derive(Args)]
struct MineArgs {
    /// Absolute support threshold t.
    #[arg(long)]
    threshold: Option<usize>,
    /// Support fraction s in (0, 1]; t = ⌈s·|D|⌉.
    #[arg(long)]
    support: Option<f64>,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args)]
struct RuleArgs {
    /// Minimum rule support fraction s in (0, 1].
    #[arg(long)]
    support: f64,
    /// Minimum rule confidence c in (0, 1].
    #[arg(long)]
    confidence: f64,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args)]
struct RareArgs {
    /// Lower support fraction of the consequent window.
    #[arg(long)]
    s1: f64,
    /// Upper support fraction of the consequent window.
    #[arg(long)]
    s2: f64,
    /// Minimum rule confidence c in (0, 1].
    #[arg(long)]
    confidence: f64,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args)]
struct KboxArgs {
    /// Input CSV of points; every non-ID column is one axis.
    #[arg(long)]
    input: PathBuf,
    /// JSON schema, used for per-column precision and ignores.
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Maximum number of interior points per box.
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct DualArgs {
    /// JSON instance: {"factors": [...], "a": [[..]], "b": [[..]]}.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

/// Resolved run configuration shared by the subcommands.
struct RunConfig {
    caps: LevelCaps,
    dcfg: DualizeCfg,
    out: Option<PathBuf>,
    /// Reserved for future stochastic features; every current code path
    /// is deterministic and ignores it.
    #[allow(dead_code)]
    seed: u64,
}

impl RunConfig {
    fn from_args(run: &RunArgs) -> Result<RunConfig> {
        if let Some(w) = run.workers {
            if w == 0 {
                return Err(MineError::config("--workers must be at least 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build_global()
                .map_err(|e| MineError::config(format!("worker pool: {e}")))?;
        }
        let mut caps = LevelCaps::default();
        if let Some(w) = run.cap_level_width {
            caps.level_width = w;
        }
        let mut dcfg = DualizeCfg::default();
        if let Some(d) = run.cap_depth {
            caps.depth = d;
            dcfg.max_depth = d;
        }
        Ok(RunConfig { caps, dcfg, out: run.out.clone(), seed: 0 })
    }

    /// Write the lines plus a trailing newline (empty output stays empty),
    /// then put the one-line summary on stderr.
    fn emit(&self, lines: Vec<String>, summary: &str) -> Result<()> {
        let mut text = lines.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| MineError::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => {
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|source| MineError::Io { path: "<stdout>".into(), source })?;
            }
        }
        eprintln!("# {} lines{summary}", lines.len());
        Ok(())
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                MineError::Config(_) => 2,
                MineError::Data(_) | MineError::NotDualizable(_) | MineError::Io { .. } => 3,
                MineError::Resource(_) => 4,
            })
        }
    }
}

fn run() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Frequent(a) => cmd_levelwise(a, false),
        Cmd::Infrequent(a) => cmd_levelwise(a, true),
        Cmd::MinimalInfrequent(a) => cmd_minimal_infrequent(a),
        Cmd::Rules(a) => cmd_rules(a, false),
        Cmd::GeneralizedRules(a) => cmd_rules(a, true),
        Cmd::RareRules(a) => cmd_rare(a),
        Cmd::Kboxes(a) => cmd_kboxes(a),
        Cmd::Dualize(a) => cmd_dualize(a),
    }
}

fn load_db(args: &DataArgs) -> Result<TransactionDb> {
    let schema = match &args.schema {
        Some(p) => Schema::load(p)?,
        None => Schema::empty(),
    };
    let file = open(&args.input)?;
    let db = ingest(file, &schema)?;
    if args.negative {
        negative_encode(&db)
    } else {
        Ok(db)
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| MineError::Io { path: path.display().to_string(), source })
}

/// Exactly one of --threshold / --support fixes t.
fn resolve_threshold(db_size: usize, args: &MineArgs) -> Result<usize> {
    match (args.threshold, args.support) {
        (Some(t), None) => Ok(t),
        (None, Some(s)) => {
            if !(s > 0.0 && s <= 1.0) {
                return Err(MineError::config(format!("--support must lie in (0, 1], got {s}")));
            }
            Ok(ceil_snap(s * db_size as f64) as usize)
        }
        _ => Err(MineError::config("exactly one of --threshold or --support is required")),
    }
}

/// Display-space filter: only elements that are their own canonical form
/// denote distinct value combinations (crossed interval pairs collapse).
fn canonical(db: &TransactionDb, e: &Element) -> bool {
    db.canonical_form(e).as_ref() == Some(e)
}

fn element_line(db: &TransactionDb, level: u32, support: usize, e: &Element) -> String {
    json!({"items": atoms(db, e), "level": level, "support": support}).to_string()
}

fn cmd_levelwise(args: MineArgs, infrequent: bool) -> Result<()> {
    let cfg = RunConfig::from_args(&args.data.run)?;
    let db = load_db(&args.data)?;
    let t = resolve_threshold(db.db_size(), &args)?;
    let items: Vec<LevelItem> = if infrequent {
        apriori_infrequent(&db, t, &cfg.caps)?
    } else {
        apriori_frequent(&db, t, &cfg.caps)?
    };
    let mut max_level = 0;
    let lines: Vec<String> = items
        .iter()
        .filter(|it| canonical(&db, &it.element))
        .map(|it| {
            max_level = max_level.max(it.level);
            element_line(&db, it.level, it.support, &it.element)
        })
        .collect();
    cfg.emit(lines, &format!(", max level {max_level}"))
}

fn cmd_minimal_infrequent(args: MineArgs) -> Result<()> {
    let cfg = RunConfig::from_args(&args.data.run)?;
    let db = load_db(&args.data)?;
    let t = resolve_threshold(db.db_size(), &args)?;
    let border = generate_minimal_infrequent(&db, t, &cfg.dcfg)?;
    // The minimal side only needs junk dropped (empty value ranges). The
    // maximal side may hold several raw encodings of one value
    // combination (crossed interval pairs), so it is collapsed to
    // distinct canonical forms and re-reduced to the maximal ones.
    let minimal: Vec<Element> =
        border.minimal_infrequent.iter().filter(|e| canonical(&db, e)).cloned().collect();
    let collapsed: BTreeSet<Element> =
        border.maximal_frequent.iter().filter_map(|e| db.canonical_form(e)).collect();
    let collapsed: Vec<Element> = collapsed.into_iter().collect();
    let mut maximal = max_antichain(db.space(), &collapsed);
    maximal.sort_by_key(|e| (db.space().level(e), e.clone()));
    let mut max_level = 0;
    let mut lines = Vec::new();
    for (tag, side) in [("minimal-infrequent", &minimal), ("maximal-frequent", &maximal)] {
        for e in side {
            let level = db.space().level(e);
            max_level = max_level.max(level);
            lines.push(
                json!({
                    "border": tag,
                    "items": atoms(&db, e),
                    "level": level,
                    "support": db.support(e),
                })
                .to_string(),
            );
        }
    }
    cfg.emit(lines, &format!(", max level {max_level}"))
}

fn rule_line(db: &TransactionDb, r: &Rule) -> String {
    json!({
        "antecedent": atoms(db, &r.antecedent),
        "confidence": r.confidence(),
        "consequent": consequent_atoms(db, r),
        "support": r.support(),
        "text": rule_text(db, r),
    })
    .to_string()
}

fn cmd_rules(args: RuleArgs, generalized: bool) -> Result<()> {
    let cfg = RunConfig::from_args(&args.data.run)?;
    let db = load_db(&args.data)?;
    let rules = if generalized {
        gen_generalized_rules(&db, args.confidence, args.support, &cfg.caps, &cfg.dcfg)?
    } else {
        gen_rules(&db, args.confidence, args.support, &cfg.caps, &cfg.dcfg)?
    };
    let lines = rules.iter().map(|r| rule_line(&db, r)).collect();
    cfg.emit(lines, "")
}

fn cmd_rare(args: RareArgs) -> Result<()> {
    let cfg = RunConfig::from_args(&args.data.run)?;
    let db = load_db(&args.data)?;
    let rare = RareRuleConfig { s1: args.s1, s2: args.s2, confidence: args.confidence };
    let rules = gen_rare_rules(&db, &rare, &cfg.caps, &cfg.dcfg)?;
    let lines = rules.iter().map(|r| rule_line(&db, r)).collect();
    cfg.emit(lines, "")
}

/// Read a pointset CSV: TID/ID and schema-ignored columns are skipped,
/// every other column is one numeric axis scaled by its precision.
fn load_points(
    input: &Path,
    schema: &Option<PathBuf>,
) -> Result<(Vec<Vec<Endpoint>>, Vec<f64>)> {
    let schema = match schema {
        Some(p) => Schema::load(p)?,
        None => Schema::empty(),
    };
    let text = std::fs::read_to_string(input).map_err(|source| MineError::Io {
        path: input.display().to_string(),
        source,
    })?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| MineError::data(format!("bad CSV header: {e}")))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    let mut precisions = Vec::new();
    let mut keep = Vec::new();
    for (c, h) in headers.iter().enumerate() {
        if h == "TID" || h == "ID" {
            continue;
        }
        let spec = schema.columns.get(h);
        if spec.map_or(false, |s| s.kind == posetmine::dataset::ColumnKind::Ignore) {
            continue;
        }
        keep.push(c);
        precisions.push(spec.and_then(|s| s.precision).unwrap_or(1.0));
    }
    let mut points = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| MineError::data(format!("row {}: {e}", r + 1)))?;
        let mut p = Vec::with_capacity(keep.len());
        for (axis, &c) in keep.iter().enumerate() {
            let cell = rec.get(c).unwrap_or("").trim();
            let v: f64 = cell.parse().map_err(|_| {
                MineError::data(format!(
                    "row {}, column {:?}: expected a number, got {cell:?}",
                    r + 1,
                    headers[c]
                ))
            })?;
            let scaled = v / precisions[axis];
            if (scaled - scaled.round()).abs() > 1e-6 {
                return Err(MineError::data(format!(
                    "row {}, column {:?}: value {v} is not aligned to precision {}",
                    r + 1,
                    headers[c],
                    precisions[axis]
                )));
            }
            p.push(scaled.round() as Endpoint);
        }
        points.push(p);
    }
    Ok((points, precisions))
}

fn cmd_kboxes(args: KboxArgs) -> Result<()> {
    let cfg = RunConfig::from_args(&args.run)?;
    let (points, precisions) = load_points(&args.input, &args.schema)?;
    let boxes = gen_maximal_kboxes(&points, args.k, None, &cfg.dcfg)?;
    let corner = |vs: &[Endpoint]| -> String {
        vs.iter()
            .zip(&precisions)
            .map(|(&v, &prec)| fmt_scaled(v, prec))
            .collect::<Vec<_>>()
            .join(",")
    };
    let lines = boxes
        .iter()
        .map(|b| {
            format!(
                "{{\"interior_count\":{},\"lower\":[{}],\"upper\":[{}]}}",
                b.interior_count,
                corner(&b.lower),
                corner(&b.upper)
            )
        })
        .collect();
    cfg.emit(lines, "")
}

#[derive(Deserialize)]
struct RawInstance {
    factors: Vec<RawFactor>,
    a: Vec<Element>,
    b: Vec<Element>,
}

#[derive(Deserialize)]
struct RawFactor {
    kind: String,
    labels: Vec<String>,
    #[serde(default)]
    parents: Option<Vec<Option<NodeId>>>,
}

fn cmd_dualize(args: DualArgs) -> Result<()> {
    let cfg = RunConfig::from_args(&args.run)?;
    let text = std::fs::read_to_string(&args.input).map_err(|source| MineError::Io {
        path: args.input.display().to_string(),
        source,
    })?;
    let raw: RawInstance = serde_json::from_str(&text)
        .map_err(|e| MineError::data(format!("instance {}: {e}", args.input.display())))?;
    let mut factors = Vec::with_capacity(raw.factors.len());
    for (i, f) in raw.factors.into_iter().enumerate() {
        let factor = match f.kind.as_str() {
            "chain" => FactorPoset::chain(f.labels)?,
            "tree" => {
                let parents = f.parents.ok_or_else(|| {
                    MineError::data(format!("factor {i}: tree factors need \"parents\""))
                })?;
                FactorPoset::tree(f.labels, parents)?
            }
            other => {
                return Err(MineError::data(format!("factor {i}: unknown kind {other:?}")))
            }
        };
        factors.push(factor);
    }
    let space = ProductPoset::new(factors)?;
    for e in raw.a.iter().chain(raw.b.iter()) {
        if !space.contains(e) {
            return Err(MineError::data(format!("element {e:?} is not in the space")));
        }
    }
    let line = match dual_check(&space, &raw.a, &raw.b, &cfg.dcfg)? {
        DualOutcome::Dual => json!({"dual": true}).to_string(),
        DualOutcome::Witness(w) => json!({"dual": false, "witness": w}).to_string(),
    };
    cfg.emit(vec![line], "")
}
