//! Seeded evaluation: repeated 80/20 splits, three treatments per repeat
//! (the optimizer, a random pick, an exhaustive oracle), win scores against
//! the test pool, and median/relative-score aggregation.
use crate::active::{elite_size, two_stage_optimize, BudgetPolicy};
use crate::data::{median, Dataset, GoalStats, Labeler, Metric};
use crate::error::{Error, Result};
use crate::likelihood::{xploit, Cohort, NbParams};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Where the optimizer learns and where it picks its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Protocol {
    /// Both stages label training rows only. The final model (best/rest
    /// rebuilt from every label) then picks the test row it rates highest,
    /// without labeling it.
    TrainThenPredict,
    /// Active learning on the training split; the check stage ranks the
    /// test split and the answer is the best checked test row.
    #[default]
    TrainThenTest,
    /// Both stages run over the test split.
    TestPool,
}

impl std::str::FromStr for Protocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train-then-test" => Ok(Protocol::TrainThenTest),
            "train-then-predict" => Ok(Protocol::TrainThenPredict),
            "test-pool" => Ok(Protocol::TestPool),
            _ => Err(Error::Invalid(format!(
                "unknown protocol {s:?} (train-then-test, train-then-predict, test-pool)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Treatment {
    Ezr,
    Asis,
    Oracle,
}

impl Treatment {
    pub const ALL: [Treatment; 3] = [Treatment::Ezr, Treatment::Asis, Treatment::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Treatment::Ezr => "ezr",
            Treatment::Asis => "asis",
            Treatment::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub repeats: usize,
    pub train_fraction: f64,
    /// `None` picks per dataset: 50+10 for light data, 10%+10 for heavy.
    pub policy: Option<BudgetPolicy>,
    pub metric: Metric,
    pub seed: u64,
    pub protocol: Protocol,
    /// Denominator of the relative score.
    pub reference: Treatment,
    /// Worker threads for repeats; 1 runs them in order on this thread.
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            repeats: 20,
            train_fraction: 0.8,
            policy: None,
            metric: Metric::D2h,
            seed: 1234567891,
            protocol: Protocol::default(),
            reference: Treatment::Oracle,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatRecord {
    pub repeat: usize,
    pub treatment: Treatment,
    pub row: usize,
    pub d2h: f64,
    pub win: f64,
    pub labels: usize,
    /// Oracle labels are paid by the harness, not by an optimizer.
    pub harness_labels: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub treatment: Treatment,
    pub median_win: f64,
    pub median_labels: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub dataset: String,
    pub rows: usize,
    pub metric: Metric,
    pub seed: u64,
    pub budget: BudgetPolicy,
    pub records: Vec<RepeatRecord>,
    pub aggregates: Vec<Aggregate>,
    pub reference: Treatment,
    /// `100 * median win(ezr) / median win(reference)`.
    pub relative_score: f64,
    /// Repeats skipped because the test pool was degenerate.
    pub skipped: Vec<usize>,
}

impl ExperimentReport {
    pub fn median_win(&self, t: Treatment) -> Option<f64> {
        self.aggregates.iter().find(|a| a.treatment == t).map(|a| a.median_win)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dataset {}  rows {}  metric {}  seed {}  budget {}+{}",
            self.dataset, self.rows, self.metric, self.seed, self.budget.stop, self.budget.check
        );
        let _ = writeln!(out, "{:<8} {:>10} {:>8}", "treat", "median-win", "labels");
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "{:<8} {:>10.1} {:>8}",
                a.treatment.name(),
                a.median_win,
                a.median_labels
            );
        }
        let _ = writeln!(
            out,
            "relative score (ezr vs {}): {:.1}",
            self.reference.name(),
            self.relative_score
        );
        if !self.skipped.is_empty() {
            let _ = writeln!(out, "skipped degenerate repeats: {:?}", self.skipped);
        }
        out
    }

    /// One JSON object per line: every repeat record, then the summary.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out += &serde_json::to_string(r).expect("records serialize");
            out.push('\n');
        }
        for a in &self.aggregates {
            out += &serde_json::json!({ "aggregate": a }).to_string();
            out.push('\n');
        }
        out += &serde_json::json!({
            "relative_score": self.relative_score,
            "reference": self.reference,
            "skipped": self.skipped,
        })
        .to_string();
        out.push('\n');
        out
    }
}

/// A uniformly random row of `pool` (one label).
pub fn random_baseline<R: Rng>(pool: &[usize], rng: &mut R) -> Result<usize> {
    pool.choose(rng)
        .copied()
        .ok_or(Error::PoolTooSmall { pool: 0, needed: 1 })
}

/// The row of `pool` with the lowest true distance; ties go to the
/// earliest position.
pub fn exhaustive_oracle(data: &Dataset, pool: &[usize], metric: Metric) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &r in pool {
        let d = data.distance(r, metric)?;
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((r, d));
        }
    }
    best.map(|(r, _)| r).ok_or(Error::PoolTooSmall { pool: 0, needed: 1 })
}

/// `100 * ours / reference`.
pub fn relative_score(ours: f64, reference: f64) -> f64 {
    100.0 * ours / reference
}

/// Runs `config.repeats` seeded repeats. Repeat `i` uses seed `seed + i`.
pub fn run_experiment(data: &Dataset, name: &str, config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.repeats == 0 {
        return Err(Error::Invalid("repeats must be at least 1".into()));
    }
    if !(config.train_fraction > 0.0 && config.train_fraction < 1.0) {
        return Err(Error::NotAProbability {
            name: "train_fraction",
            value: config.train_fraction,
        });
    }
    // rows with a missing goal can be neither scored nor selected
    let usable: Vec<usize> = (0..data.len())
        .filter(|&r| data.distance(r, config.metric).is_ok())
        .collect();
    let n_train = (usable.len() as f64 * config.train_fraction).round() as usize;
    let policy = config
        .policy
        .unwrap_or_else(|| BudgetPolicy::for_dataset(data, n_train));

    let run = |i: usize| run_repeat(data, &usable, n_train, &policy, config, i);
    let outcomes: Vec<Result<Option<Vec<RepeatRecord>>>> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?;
        pool.install(|| (0..config.repeats).into_par_iter().map(run).collect())
    } else {
        (0..config.repeats).map(run).collect()
    };

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o? {
            Some(r) => records.extend(r),
            None => skipped.push(i),
        }
    }
    if records.is_empty() {
        return Err(Error::DegeneratePool(f64::NAN));
    }

    let aggregates: Vec<Aggregate> = Treatment::ALL
        .iter()
        .map(|&t| {
            let wins: Vec<f64> = records.iter().filter(|r| r.treatment == t).map(|r| r.win).collect();
            let labels: Vec<f64> = records
                .iter()
                .filter(|r| r.treatment == t)
                .map(|r| r.labels as f64)
                .collect();
            Aggregate {
                treatment: t,
                median_win: median(&wins).unwrap_or(f64::NAN),
                median_labels: median(&labels).unwrap_or(f64::NAN),
            }
        })
        .collect();
    let win_of = |t: Treatment| aggregates.iter().find(|a| a.treatment == t).unwrap().median_win;
    Ok(ExperimentReport {
        dataset: name.to_string(),
        rows: data.len(),
        metric: config.metric,
        seed: config.seed,
        budget: policy,
        relative_score: relative_score(win_of(Treatment::Ezr), win_of(config.reference)),
        reference: config.reference,
        records,
        aggregates,
        skipped,
    })
}

fn run_repeat(
    data: &Dataset,
    usable: &[usize],
    n_train: usize,
    policy: &BudgetPolicy,
    config: &ExperimentConfig,
    i: usize,
) -> Result<Option<Vec<RepeatRecord>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i as u64));
    let mut rows = usable.to_vec();
    rows.shuffle(&mut rng);
    let test = rows.split_off(n_train);
    let train = rows;
    let stats = GoalStats::of_pool(data, &test, config.metric)?;
    if stats.is_degenerate() {
        return Ok(None);
    }
    let record = |t: Treatment, row: usize, labels: usize| -> Result<RepeatRecord> {
        let d = data.distance(row, config.metric)?;
        Ok(RepeatRecord {
            repeat: i,
            treatment: t,
            row,
            d2h: d,
            win: stats.win(d)?,
            labels,
            harness_labels: t == Treatment::Oracle,
        })
    };

    let mut labeler = Labeler::new(data, config.metric);
    let params = NbParams::default();
    let (pick, spent) = match config.protocol {
        Protocol::TrainThenPredict => {
            let sel = two_stage_optimize(&mut labeler, &train, None, policy, params, &mut rng)?;
            let (best, rest) = final_cohorts(&labeler, sel.state.labeled().chain(sel.checked.iter().copied()));
            (predict_best(data, &test, &best, &rest, params)?, sel.labels_spent)
        }
        Protocol::TrainThenTest => {
            let sel = two_stage_optimize(&mut labeler, &train, Some(&test), policy, params, &mut rng)?;
            (sel.row, sel.labels_spent)
        }
        Protocol::TestPool => {
            let sel = two_stage_optimize(&mut labeler, &test, None, policy, params, &mut rng)?;
            (sel.row, sel.labels_spent)
        }
    };
    let asis = random_baseline(&test, &mut rng)?;
    let oracle = exhaustive_oracle(data, &test, config.metric)?;
    Ok(Some(vec![
        record(Treatment::Ezr, pick, spent)?,
        record(Treatment::Asis, asis, 1)?,
        record(Treatment::Oracle, oracle, test.len())?,
    ]))
}

/// Splits labeled rows into an elite of `round(sqrt(n))` (by distance,
/// then index) and the rest.
fn final_cohorts(labeler: &Labeler, labeled: impl Iterator<Item = usize>) -> (Cohort, Cohort) {
    let data = labeler.data();
    let mut rows: Vec<(f64, usize)> = labeled.map(|r| (labeler.get(r).expect("labeled row"), r)).collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    rows.dedup_by_key(|p| p.1);
    let cut = elite_size(rows.len());
    let ids: Vec<usize> = rows.iter().map(|p| p.1).collect();
    (
        Cohort::from_rows(data, &ids[..cut]),
        Cohort::from_rows(data, &ids[cut..]),
    )
}

/// The row of `pool` with the highest acquisition score; ties go to the
/// earliest position.
fn predict_best(data: &Dataset, pool: &[usize], best: &Cohort, rest: &Cohort, params: NbParams) -> Result<usize> {
    let mut top: Option<(usize, f64)> = None;
    for &r in pool {
        let s = xploit(data, &data.rows[r], best, rest, params).score;
        if top.is_none_or(|(_, t)| s > t) {
            top = Some((r, s));
        }
    }
    top.map(|(r, _)| r).ok_or(Error::PoolTooSmall { pool: 0, needed: 1 })
}
