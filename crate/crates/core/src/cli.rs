//! Command-line front end: argument definitions and command runners.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 degenerate result.
use crate::active::{pivot_query_estimate, samples_for_confidence, samples_required, two_stage_optimize, BudgetPolicy};
use crate::data::{Cell, Dataset, GoalStats, Labeler, Metric};
use crate::error::{Error, Result};
use crate::explain::{
    counterfactual, explanation_tree, mdi_importance, permutation_importance, select_features, CounterfactualTarget,
    Explained,
};
use crate::harness::{run_experiment, ExperimentConfig, Protocol, Treatment};
use crate::likelihood::NbParams;
use crate::tree::{NodeRecord, Tree, TreeConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 1234567891;
/// Labels used to grow an explanation tree when `--budget` is not given.
pub const TREE_BUDGET: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "ezr",
    version,
    about = "Label-frugal optimization and explanation for tabular data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recommend the best row after a small number of labels.
    Optimize(OptimizeArgs),
    /// Grow and print an explanation tree.
    Tree(TreeArgs),
    /// Feature importance from an explanation tree.
    Importance(ImportanceArgs),
    /// Decision path and counterfactual edits for one row.
    Explain(ExplainArgs),
    /// Use the explanation tree as a feature selector.
    SelectFeatures(SelectArgs),
    /// Repeated train/test evaluation against random and oracle picks.
    Bench(BenchArgs),
    /// Sample-size calculators.
    Samples(SamplesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// CSV file; header names mark numeric/symbolic columns and goals.
    #[arg(long, short)]
    pub file: PathBuf,
    #[arg(long, env = "EZR_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// d2h or chebyshev.
    #[arg(long, default_value_t = Metric::D2h)]
    pub metric: Metric,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TreeOpts {
    /// Labels spent growing the tree.
    #[arg(long, default_value_t = TREE_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = 2)]
    pub min_leaf: usize,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Active-learning labels; defaults to 50, or 10% of the rows for wide data.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Labels spent checking the top-ranked rows.
    #[arg(long, default_value_t = 10)]
    pub check: usize,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub tree: TreeOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mdi,
    Permutation,
    Both,
}

#[derive(Debug, Args)]
pub struct ImportanceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub tree: TreeOpts,
    #[arg(long, value_enum, default_value_t = Method::Mdi)]
    pub method: Method,
    /// Shuffles per feature for permutation importance.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub tree: TreeOpts,
    /// Row index (0-based, header excluded) of the instance to explain.
    #[arg(long, conflicts_with = "instance", required_unless_present = "instance")]
    pub row: Option<usize>,
    /// Instance as a CSV file (header + one row) or inline `NAME=VALUE,...`.
    #[arg(long)]
    pub instance: Option<String>,
    /// Explain against a saved tree (text rendering or node records)
    /// instead of growing one.
    #[arg(long = "tree")]
    pub tree_file: Option<PathBuf>,
    /// Aim for the better leaf needing fewest edits, not the best leaf.
    #[arg(long)]
    pub nearest: bool,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub min_leaf: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub check: usize,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// train-then-test, train-then-predict or test-pool.
    #[arg(long, default_value = "train-then-test")]
    pub protocol: Protocol,
    /// Treatment in the relative-score denominator.
    #[arg(long, value_enum, default_value_t = Reference::Oracle)]
    pub reference: Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    Oracle,
    Asis,
}

#[derive(Debug, Args)]
pub struct SamplesArgs {
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    /// Probability of the event being sampled for.
    #[arg(long, default_value_t = 0.05)]
    pub p: f64,
    /// Also print the pivot-search query estimate for that many samples.
    #[arg(long)]
    pub pivot: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Maps a library error onto the process exit code.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::DegeneratePool(_) => 3,
        Error::Invalid(_) | Error::NotAProbability { .. } => 1,
        _ => 2,
    }
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::Optimize(a) => optimize(a, out),
        Command::Tree(a) => tree(a, out),
        Command::Importance(a) => importance(a, out),
        Command::Explain(a) => explain(a, out),
        Command::SelectFeatures(a) => select(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Samples(a) => samples(a, out),
    }
}

fn load(c: &Common) -> Result<(Dataset, Vec<usize>)> {
    let data = Dataset::from_path(&c.file)?;
    let pool: Vec<usize> = (0..data.len())
        .filter(|&r| data.distance(r, c.metric).is_ok())
        .collect();
    Ok((data, pool))
}

fn rng(c: &Common) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(c.seed)
}

fn json_line<W: Write, T: serde::Serialize>(out: &mut W, v: &T) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(v).map_err(|e| Error::Invalid(e.to_string()))?
    )?;
    Ok(())
}

fn optimize<W: Write>(a: &OptimizeArgs, out: &mut W) -> Result<()> {
    let (data, pool) = load(&a.common)?;
    let policy = match a.budget {
        Some(b) => BudgetPolicy::fixed(b, a.check),
        None => BudgetPolicy {
            check: a.check,
            ..BudgetPolicy::for_dataset(&data, pool.len())
        },
    };
    let stats = GoalStats::of_pool(&data, &pool, a.common.metric)?;
    let mut labeler = Labeler::new(&data, a.common.metric);
    let sel = two_stage_optimize(
        &mut labeler,
        &pool,
        None,
        &policy,
        NbParams::default(),
        &mut rng(&a.common),
    )?;
    let win = stats.win(sel.d2h)?;
    match a.common.format {
        Format::Text => {
            writeln!(out, "row     {}", sel.row)?;
            for (i, col) in data.columns.iter().enumerate() {
                writeln!(out, "  {:<12} {}", col.name, data.rows[sel.row].cells[i])?;
            }
            writeln!(out, "{}  {:.4}", a.common.metric, sel.d2h)?;
            writeln!(out, "win     {:.1}", win)?;
            writeln!(out, "labels  {}", sel.labels_spent)?;
        }
        Format::Records => {
            let cells: serde_json::Map<String, serde_json::Value> = data
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| (c.name.clone(), data.rows[sel.row].cells[i].to_string().into()))
                .collect();
            json_line(
                out,
                &serde_json::json!({
                    "row": sel.row, "cells": cells, "distance": sel.d2h,
                    "metric": a.common.metric.to_string(), "win": win, "labels": sel.labels_spent,
                }),
            )?;
        }
    }
    Ok(())
}

fn grow(c: &Common, t: &TreeOpts) -> Result<(Dataset, Explained)> {
    let (data, pool) = load(c)?;
    let policy = BudgetPolicy::fixed(t.budget, 0);
    let cfg = TreeConfig { min_leaf: t.min_leaf };
    let e = explanation_tree(&data, &pool, &policy, c.metric, cfg, &mut rng(c))?;
    Ok((data, e))
}

fn write_tree<W: Write>(tree: &Tree, format: Format, out: &mut W) -> Result<()> {
    match format {
        Format::Text => write!(out, "{}", tree.render())?,
        Format::Records => {
            for r in tree.records() {
                json_line(out, &r)?;
            }
        }
    }
    Ok(())
}

fn tree<W: Write>(a: &TreeArgs, out: &mut W) -> Result<()> {
    let (_, e) = grow(&a.common, &a.tree)?;
    write_tree(&e.tree, a.common.format, out)
}

fn importance<W: Write>(a: &ImportanceArgs, out: &mut W) -> Result<()> {
    let (data, e) = grow(&a.common, &a.tree)?;
    let mut tables = Vec::new();
    if matches!(a.method, Method::Mdi | Method::Both) {
        tables.push(mdi_importance(&e.tree, &data.x));
    }
    if matches!(a.method, Method::Permutation | Method::Both) {
        let mut r = ChaCha8Rng::seed_from_u64(a.common.seed.wrapping_add(1));
        tables.push(permutation_importance(&e.tree, &data, &e.labeled, a.repeats, &mut r)?);
    }
    for (i, t) in tables.iter().enumerate() {
        match a.common.format {
            Format::Text => {
                if i > 0 {
                    writeln!(out)?;
                }
                let title = match t.method {
                    crate::explain::ImportanceMethod::Mdi => "mdi",
                    crate::explain::ImportanceMethod::Permutation => "permutation",
                };
                writeln!(out, "# {title}")?;
                write!(out, "{}", t.to_table())?;
            }
            Format::Records => write!(out, "{}", t.to_records())?,
        }
    }
    Ok(())
}

/// Reads a tree saved as text rendering or as node records (JSON lines).
pub fn load_tree(path: &Path, names: &[String]) -> Result<Tree> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str::<NodeRecord>(l).map_err(|e| Error::TreeSyntax {
                    line: i + 1,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Tree::from_records(&records, names)
    } else {
        Tree::parse(&text, names)
    }
}

/// Builds an instance from `NAME=VALUE,...` or from a CSV file holding a
/// header and one row. Columns not mentioned are missing.
pub fn parse_instance(data: &Dataset, source: &str) -> Result<Vec<Cell>> {
    let (names, values): (Vec<String>, Vec<String>) = if source.contains('=') && !Path::new(source).exists() {
        source
            .split(',')
            .map(|kv| {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("expected NAME=VALUE, got {kv:?}")))?;
                Ok((k.trim().to_string(), v.trim().to_string()))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip()
    } else {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(source)?;
        let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let row = rdr
            .records()
            .next()
            .ok_or(Error::EmptyFile)??
            .iter()
            .map(str::to_string)
            .collect();
        (names, row)
    };
    let mut cells = vec!["?".to_string(); data.columns.len()];
    for (n, v) in names.iter().zip(values) {
        let i = data.column_index(n).ok_or_else(|| Error::UnknownColumn(n.clone()))?;
        cells[i] = v;
    }
    let refs: Vec<&str> = cells.iter().map(String::as_str).collect();
    Ok(data.parse_row(&refs)?.cells)
}

fn explain<W: Write>(a: &ExplainArgs, out: &mut W) -> Result<()> {
    let (data, tree) = match &a.tree_file {
        Some(p) => {
            let data = Dataset::from_path(&a.common.file)?;
            let names: Vec<String> = data.columns.iter().map(|c| c.name.clone()).collect();
            let tree = load_tree(p, &names)?;
            (data, tree)
        }
        None => {
            let (data, e) = grow(&a.common, &a.tree)?;
            (data, e.tree)
        }
    };
    let cells = match (&a.instance, a.row) {
        (Some(source), _) => parse_instance(&data, source)?,
        (None, Some(r)) => data
            .rows
            .get(r)
            .ok_or_else(|| Error::Invalid(format!("row {r} out of range (file has {} rows)", data.len())))?
            .cells
            .clone(),
        (None, None) => return Err(Error::Invalid("give --row or --instance".into())),
    };
    let path = tree.route(&cells);
    let target = if a.nearest {
        CounterfactualTarget::Nearest
    } else {
        CounterfactualTarget::Best
    };
    let cf = counterfactual(&tree, &cells, target);
    let leaf = &tree.nodes[path.leaf];
    match a.common.format {
        Format::Text => {
            write!(out, "{}", tree.render_path(&path))?;
            writeln!(out)?;
            writeln!(out, "leaf: win {} n {}", leaf.win.round(), leaf.n)?;
            match &cf {
                Some(c) => {
                    for e in c.describe(&tree) {
                        writeln!(out, "counterfactual: {e}")?;
                    }
                    writeln!(out, "win gain: {:+}", c.win_gain.round())?;
                }
                None => writeln!(out, "counterfactual: none (already in the best leaf)")?,
            }
        }
        Format::Records => {
            for s in &path.steps {
                json_line(
                    out,
                    &serde_json::json!({
                        "node": s.node, "condition": s.condition.render(&tree.names), "n": s.n, "win": s.win,
                    }),
                )?;
            }
            json_line(
                out,
                &serde_json::json!({"leaf": path.leaf, "n": leaf.n, "win": leaf.win}),
            )?;
            if let Some(c) = &cf {
                json_line(
                    out,
                    &serde_json::json!({
                        "edits": c.describe(&tree), "target": c.target, "win_gain": c.win_gain,
                    }),
                )?;
            }
        }
    }
    Ok(())
}

fn select<W: Write>(a: &SelectArgs, out: &mut W) -> Result<()> {
    let (data, pool) = load(&a.common)?;
    let policy = BudgetPolicy::feature_selection(pool.len());
    let cfg = TreeConfig { min_leaf: a.min_leaf };
    let fs = select_features(&data, &pool, &policy, a.common.metric, cfg, &mut rng(&a.common))?;
    match a.common.format {
        Format::Text => {
            writeln!(out, "k {} of {}  labels {}", fs.k, data.x.len(), fs.labels_spent)?;
            for (i, s) in fs.ranked.iter().enumerate() {
                writeln!(out, "{:>4}  {:<12} {:.4}", i + 1, s.name, s.score)?;
            }
            if fs.is_degenerate() {
                writeln!(out, "note: the tree never split; no feature selected")?;
            }
        }
        Format::Records => {
            for (i, s) in fs.ranked.iter().enumerate() {
                json_line(
                    out,
                    &serde_json::json!({"feature": s.name, "score": s.score, "rank": i + 1}),
                )?;
            }
            json_line(out, &serde_json::json!({"k": fs.k, "labels": fs.labels_spent}))?;
        }
    }
    Ok(())
}

fn bench<W: Write>(a: &BenchArgs, out: &mut W) -> Result<()> {
    let data = Dataset::from_path(&a.common.file)?;
    let name = a
        .common
        .file
        .file_stem()
        .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    let config = ExperimentConfig {
        repeats: a.repeats,
        train_fraction: a.train_fraction,
        policy: a.budget.map(|b| BudgetPolicy::fixed(b, a.check)),
        metric: a.common.metric,
        seed: a.common.seed,
        protocol: a.protocol,
        reference: match a.reference {
            Reference::Oracle => Treatment::Oracle,
            Reference::Asis => Treatment::Asis,
        },
        jobs: a.jobs.max(1),
    };
    let config = ExperimentConfig {
        policy: config.policy.or_else(|| {
            let n_train = (data.len() as f64 * a.train_fraction).round() as usize;
            Some(BudgetPolicy {
                check: a.check,
                ..BudgetPolicy::for_dataset(&data, n_train)
            })
        }),
        ..config
    };
    let report = run_experiment(&data, &name, &config)?;
    match a.common.format {
        Format::Text => write!(out, "{}", report.to_text())?,
        Format::Records => write!(out, "{}", report.to_records())?,
    }
    Ok(())
}

fn samples<W: Write>(a: &SamplesArgs, out: &mut W) -> Result<()> {
    let n = samples_required(a.confidence, a.p)?;
    match a.format {
        Format::Text => {
            writeln!(out, "{n}")?;
            if a.pivot {
                writeln!(out, "{}", pivot_query_estimate(n.max(1)))?;
            }
        }
        Format::Records => json_line(
            out,
            &serde_json::json!({
                "confidence": a.confidence, "p": a.p, "samples": n,
                "samples_ceil": samples_for_confidence(a.confidence, a.p)?,
                "pivot_queries": pivot_query_estimate(n.max(1)),
            }),
        )?,
    }
    Ok(())
}
