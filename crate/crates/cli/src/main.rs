//! `partorder`: queries the embedding relations between partitions.
//!
//! Exit codes: 0 holds, 1 fails, 2 unknown or budget exhausted, 64 usage
//! error, 65 malformed input, 70 internal error.

mod doc;
mod gen;
mod report;
mod scan;

use std::io::Write;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use partition_orders::counterexamples::run_battery;
use partition_orders::orders::{self, Budgets, DEFAULT_EMBED_NODES};
use partition_orders::{norms, stable, BigPartition, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::doc::{load_corpus, load_doc, PairDoc, PartitionDoc};
use crate::report::{BulkReport, CheckReport, StableReport, Status, SupermajorizeReport};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
            CliError::Internal(_) => 70,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "bad input: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

fn core_error(e: Error) -> CliError {
    match e {
        Error::Internal(m) => CliError::Internal(m),
        Error::InvalidBase(_) | Error::InvalidScalar(_) | Error::InvalidExponent(_) => CliError::Usage(e.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

#[derive(Parser, Debug)]
#[command(name = "partorder", version, about = "Embedding, supermajorization, bulk and stable relations between partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide one relation (or all) for a pair of partitions.
    Check(CheckArgs),
    /// Re-run the built-in battery of separating examples.
    Repro {
        #[arg(long)]
        json: bool,
    },
    /// Emit seeded random instances as newline-delimited JSON.
    Gen(GenArgs),
    /// Run the catalyst construction on every tight pair of a corpus.
    ConjectureScan {
        /// Newline-delimited JSON, one `{"lhs": .., "rhs": ..}` per line.
        corpus: String,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Relation {
    Embed,
    Supermajorize,
    Bulk,
    Stable,
    All,
}

impl Relation {
    fn name(self) -> &'static str {
        match self {
            Relation::Embed => "embed",
            Relation::Supermajorize => "supermajorize",
            Relation::Bulk => "bulk",
            Relation::Stable => "stable",
            Relation::All => "all",
        }
    }
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Node budget of the exact embedding search.
    #[arg(long, default_value_t = DEFAULT_EMBED_NODES)]
    budget: u64,
    /// Step budget of the catalyst construction.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Treat both sides as powers of this base.
    #[arg(long)]
    base: Option<u64>,
    /// Relative tolerance of the numeric norm comparison.
    #[arg(long, default_value_t = norms::DEFAULT_TOL)]
    tol: f64,
    /// Sample count of the numeric norm comparison.
    #[arg(long, default_value_t = norms::DEFAULT_GRID)]
    grid: usize,
}

impl BudgetArgs {
    fn budgets(&self) -> Result<Budgets, CliError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be a positive number, got {}", self.tol)));
        }
        if self.grid == 0 || self.max_steps == Some(0) || self.budget == 0 {
            return Err(CliError::Usage("--grid, --max-steps and --budget must be positive".into()));
        }
        if let Some(q) = self.base {
            if q < 2 {
                return Err(CliError::Usage(format!("--base must be at least 2, got {q}")));
            }
        }
        Ok(Budgets {
            embed_nodes: self.budget,
            max_steps: self.max_steps,
            tol: self.tol,
            grid: self.grid,
            base: self.base,
        })
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    relation: Relation,
    /// Left side: a file or inline JSON such as '[2,2,2,2]'.
    lhs_doc: Option<String>,
    /// Right side: a file or inline JSON.
    rhs_doc: Option<String>,
    #[arg(long, conflicts_with = "lhs_doc")]
    lhs: Option<String>,
    #[arg(long, conflicts_with = "rhs_doc")]
    rhs: Option<String>,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long)]
    json: bool,
    /// Print the catalyst construction log.
    #[arg(long)]
    log: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Random,
    Powerq,
    Divisible,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Defaults to the clock; always echoed in the document names.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Emit pair lines `{"lhs": .., "rhs": ..}` instead of single documents.
    #[arg(long)]
    pairs: bool,
    /// Largest entry (random).
    #[arg(long, default_value_t = 32)]
    max: u64,
    /// Longest partition (random, divisible).
    #[arg(long, default_value_t = 6)]
    len: usize,
    /// Base (powerq).
    #[arg(long, default_value_t = 2)]
    base: u64,
    /// Number of levels (powerq).
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Largest count per level (powerq).
    #[arg(long, default_value_t = 4)]
    max_count: u64,
    /// Largest ratio between consecutive entries (divisible).
    #[arg(long, default_value_t = 3)]
    max_factor: u64,
}

fn check(args: &CheckArgs) -> Result<(Status, String), CliError> {
    let lhs = args.lhs.as_ref().or(args.lhs_doc.as_ref());
    let rhs = args.rhs.as_ref().or(args.rhs_doc.as_ref());
    let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
        return Err(CliError::Usage("check needs two partitions (positional or --lhs/--rhs)".into()));
    };
    let budgets = args.budgets.budgets()?;
    let (ld, rd) = (load_doc(lhs)?, load_doc(rhs)?);
    let (l, m): (BigPartition, BigPartition) = (ld.partition()?, rd.partition()?);
    if let Some(q) = budgets.base {
        if !(l.is_power_of(q) && m.is_power_of(q)) {
            return Err(CliError::Data(format!("--base {q} given but not every entry is a power of {q}")));
        }
    }
    let mut report = CheckReport {
        relation: args.relation.name().into(),
        lhs: ld,
        rhs: rd,
        embed: None,
        supermajorize: None,
        bulk: None,
        stable: None,
    };
    let rel = args.relation;
    if rel == Relation::All {
        let r = orders::relations(&l, &m, &budgets).map_err(core_error)?;
        report.embed = Some((&r.embeds).into());
        report.supermajorize = Some(SupermajorizeReport::new(&r.supermajorized, &l, &m));
        report.bulk = Some((&r.bulk).into());
        report.stable = Some((&r.stable).into());
    }
    if rel == Relation::Embed {
        let d = orders::decide_embedding(&l, &m, &budgets).map_err(core_error)?;
        report.embed = Some((&d).into());
    }
    if rel == Relation::Supermajorize {
        report.supermajorize = Some(SupermajorizeReport::new(&orders::supermajorizes(&m, &l), &l, &m));
    }
    if rel == Relation::Bulk {
        let b = norms::bulk_verdict(&l, &m, budgets.base_for(&l, &m), budgets.tol, budgets.grid);
        report.bulk = Some(BulkReport::from(&b));
    }
    if rel == Relation::Stable {
        let v = stable::stable_embeds(&l, &m, &budgets).map_err(core_error)?;
        report.stable = Some(StableReport::from(&v));
    }
    let text = if args.json { to_json(&report)? } else { report.render(args.log) };
    Ok((report.status(), text))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimDoc {
    pub id: String,
    pub statement: String,
    pub reproduced: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproReport {
    pub claims: Vec<ClaimDoc>,
    pub reproduced: usize,
    pub total: usize,
}

fn repro(json: bool) -> Result<(Status, String), CliError> {
    let claims: Vec<ClaimDoc> = run_battery()
        .into_iter()
        .map(|c| ClaimDoc { id: c.id.into(), statement: c.statement, reproduced: c.reproduced, detail: c.detail })
        .collect();
    let reproduced = claims.iter().filter(|c| c.reproduced).count();
    let report = ReproReport { total: claims.len(), reproduced, claims };
    let status = if reproduced == report.total { Status::Holds } else { Status::Fails };
    if json {
        return Ok((status, to_json(&report)?));
    }
    let mut out = String::new();
    for c in &report.claims {
        let mark = if c.reproduced { "ok" } else { "FAILED" };
        out.push_str(&format!("[{mark}] {}: {}\n      {}\n", c.id, c.statement, c.detail));
    }
    out.push_str(&format!("{}/{} claims reproduced\n", report.reproduced, report.total));
    for c in report.claims.iter().filter(|c| !c.reproduced) {
        eprintln!("claim not reproduced: {}", c.id);
    }
    Ok((status, out))
}

fn generate(args: &GenArgs) -> Result<String, CliError> {
    let seed = args.seed.unwrap_or_else(|| {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = match args.kind {
        GenKind::Random => "random",
        GenKind::Powerq => "powerq",
        GenKind::Divisible => "divisible",
    };
    let one = |rng: &mut ChaCha8Rng| -> Result<PartitionDoc, CliError> {
        Ok(match args.kind {
            GenKind::Random => PartitionDoc::from_partition(&gen::random(rng, args.len, args.max)?, None),
            GenKind::Powerq => {
                PartitionDoc::from_counts(&gen::powerq(rng, args.base, args.levels, args.max_count)?, None)
            }
            GenKind::Divisible => PartitionDoc::from_partition(&gen::divisible(rng, args.len, args.max_factor)?, None),
        })
    };
    let mut out = String::new();
    for i in 0..args.count {
        let name = format!("{kind}-seed{seed}-{i}");
        let line = if args.pairs {
            let (lhs, rhs) = (one(&mut rng)?, one(&mut rng)?);
            serde_json::to_string(&PairDoc { name: Some(name), lhs, rhs })
        } else {
            let mut d = one(&mut rng)?;
            d.name = Some(name);
            serde_json::to_string(&d)
        };
        out.push_str(&line.map_err(|e| CliError::Internal(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| CliError::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<(Status, String), CliError> {
    match cli.command {
        Command::Check(args) => check(&args),
        Command::Repro { json } => repro(json),
        Command::Gen(args) => Ok((Status::Holds, generate(&args)?)),
        Command::ConjectureScan { corpus, budgets, json } => {
            let budgets = budgets.budgets()?;
            let pairs = load_corpus(&corpus)?;
            let report = scan::scan(&pairs, &budgets)?;
            let text = if json { to_json(&report)? } else { report.render() };
            Ok((Status::Holds, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok((status, text)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("partorder: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
