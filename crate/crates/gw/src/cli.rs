//! `gw` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use gw_core::open::Class::{self, Diamond, Power};
use gw_core::{
    gw_closed, ogw, ogw_linear, ogwb, ConstraintVector, ExactRational, GwError, MemoStore,
};

use crate::cache::{self, CacheError};
use crate::suites::{run_suite, Suite};
use crate::tables::{emit_table, TableName};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gw",
    version,
    about = "Exact closed and open Gromov-Witten invariants of projective space"
)]
struct Cli {
    /// Persistent memo cache, read at start and rewritten when new values were computed.
    #[arg(long, global = true, env = "GW_CACHE", value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Print memo statistics to stderr.
    #[arg(long, global = true)]
    stats: bool,
    /// Worker threads for table cells.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed invariant GW_d(Δ_a1, ..., Δ_al) of CP^n.
    Closed {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Comma-separated indices in 0..=n.
        #[arg(long, default_value = "")]
        classes: String,
    },
    /// Open invariant ogw_{β,k}(Γ_j1, ..., Γ_jl) of (CP^n, RP^n).
    Open {
        #[command(flatten)]
        target: OpenTarget,
        /// Comma-separated indices in 0..=n, or `d` for Γ_⋄.
        #[arg(long, default_value = "")]
        classes: String,
        /// Report ogwb instead of ogw (they differ only for k = 0, even β).
        #[arg(long)]
        raw_ogwb: bool,
    },
    /// Open invariant of rational combinations of classes.
    Linear {
        #[command(flatten)]
        target: OpenTarget,
        /// Insertions separated by `;`, each a `,`-list of `class:coefficient`.
        #[arg(long, allow_hyphen_values = true)]
        combo: String,
    },
    /// Reproduce a table of invariants.
    Table {
        #[arg(long, value_enum)]
        name: TableName,
        #[arg(long)]
        max_beta: u32,
    },
    /// Run a verification suite; exits 1 if any instance fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_beta: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the memo store to a file or merge a file into it.
    #[command(group(ArgGroup::new("action").required(true).args(["save", "load"])))]
    Cache {
        #[arg(long, value_name = "PATH")]
        save: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        load: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct OpenTarget {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    beta: u32,
    #[arg(long)]
    k: u32,
}

/// Everything that ends a run early, with its exit code.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<GwError> for Failure {
    fn from(e: GwError) -> Self {
        match e {
            GwError::InvalidInput(msg) => Failure::Invalid(msg),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<CacheError> for Failure {
    fn from(e: CacheError) -> Self {
        Failure::Invalid(format!("cache: {e}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_FAILED
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut store = match &cli.cache {
        Some(path) if path.exists() => cache::load_file(path)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        _ => MemoStore::new(),
    };
    let loaded = store.len();
    let code = dispatch(&cli.command, &mut store, cli.jobs as usize, out, err)?;
    if cli.stats {
        writeln!(
            err,
            "entries={} loaded={} computed={} hits={} max_depth={}",
            store.len(),
            loaded,
            store.computed(),
            store.hits(),
            store.max_depth()
        )?;
    }
    if let Some(path) = &cli.cache {
        if store.len() != loaded {
            cache::save_file(&store, path)?;
        }
    }
    Ok(code)
}

fn dispatch(
    command: &Command,
    store: &mut MemoStore,
    jobs: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Closed { n, d, classes } => {
            let insertions = parse_closed_classes(classes)?;
            let value = gw_closed(store, *n, *d, &insertions)?;
            writeln!(out, "{value}")?;
        }
        Command::Open {
            target,
            classes,
            raw_ogwb,
        } => {
            let classes = parse_open_classes(classes)?;
            let OpenTarget { n, beta, k } = *target;
            let value = if *raw_ogwb {
                ogwb(store, n, beta, k, &classes)?
            } else {
                ogw(store, n, beta, k, &classes)?
            };
            writeln!(out, "{value}")?;
        }
        Command::Linear { target, combo } => {
            let constraints = parse_combo(combo)?;
            let OpenTarget { n, beta, k } = *target;
            writeln!(out, "{}", ogw_linear(store, n, beta, k, &constraints)?)?;
        }
        Command::Table { name, max_beta } => {
            out.write_all(emit_table(store, *name, *max_beta, jobs)?.as_bytes())?;
        }
        Command::Verify {
            suite,
            n,
            max_beta,
            samples,
            seed,
        } => {
            let report = run_suite(store, *suite, *n, *max_beta, *samples, *seed)?;
            for failure in &report.failures {
                writeln!(err, "FAILED {failure}")?;
            }
            writeln!(
                out,
                "{} {}: checked={} nontrivial={} failed={}",
                suite_name(*suite),
                if report.passed() { "ok" } else { "FAILED" },
                report.checked,
                report.nontrivial,
                report.failures.len()
            )?;
            if !report.passed() {
                return Ok(EXIT_FAILED);
            }
        }
        Command::Cache { save, load } => {
            if let Some(path) = load {
                let other = cache::load_file(path)
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
                store.merge(&other)?;
                writeln!(
                    out,
                    "loaded {} entries from {}",
                    other.len(),
                    path.display()
                )?;
            }
            if let Some(path) = save {
                save_to(store, path)?;
                writeln!(out, "saved {} entries to {}", store.len(), path.display())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn save_to(store: &MemoStore, path: &Path) -> Result<(), Failure> {
    cache::save_file(store, path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn suite_name(suite: Suite) -> String {
    clap::ValueEnum::to_possible_value(&suite)
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn parse_index(token: &str) -> Result<u32, Failure> {
    let token = token.trim();
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Failure::Invalid(format!("`{token}` is not a class index")));
    }
    token
        .parse()
        .map_err(|_| Failure::Invalid(format!("class index `{token}` is out of range")))
}

fn parse_closed_classes(list: &str) -> Result<Vec<u32>, Failure> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',').map(parse_index).collect()
}

fn parse_class(token: &str) -> Result<Class, Failure> {
    if token.trim() == "d" {
        Ok(Diamond)
    } else {
        parse_index(token).map(Power)
    }
}

fn parse_open_classes(list: &str) -> Result<Vec<Class>, Failure> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',').map(parse_class).collect()
}

/// `class:coef,class:coef;...`, one `;`-separated group per insertion.
fn parse_combo(spec: &str) -> Result<Vec<ConstraintVector>, Failure> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(';')
        .map(|group| {
            let mut vector = ConstraintVector::zero();
            for term in group.split(',') {
                let (class, coefficient) = term.split_once(':').ok_or_else(|| {
                    Failure::Invalid(format!("`{term}` is not of the form class:coefficient"))
                })?;
                let coefficient = ExactRational::from_str(coefficient.trim()).map_err(|_| {
                    Failure::Invalid(format!("`{coefficient}` is not an exact fraction"))
                })?;
                vector.add_term(parse_class(class)?, coefficient);
            }
            Ok(vector)
        })
        .collect()
}
