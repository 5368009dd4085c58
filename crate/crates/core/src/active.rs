//! Budgeted active learning: label a warm start, split it into an elite
//! `best` cohort of `round(sqrt(n))` rows and a `rest` cohort, then keep
//! labeling whichever unlabeled row looks most like `best` relative to
//! `rest` until the budget runs out.
use crate::data::{Dataset, Labeler};
use crate::error::{Error, Result};
use crate::likelihood::{xploit, Cohort, NbParams};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetMode {
    Fixed,
    Fraction,
}

/// How many labels the optimizer may spend, and in which stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetPolicy {
    /// Labels spent by the active learning stage (warm start included).
    pub stop: usize,
    pub warm_start: usize,
    /// Extra labels spent checking the top-ranked unlabeled rows.
    pub check: usize,
    pub mode: BudgetMode,
}

/// Datasets with at least this many independent columns are "heavy".
pub const HEAVY_FEATURES: usize = 20;

impl BudgetPolicy {
    pub fn fixed(stop: usize, check: usize) -> Self {
        BudgetPolicy {
            stop,
            warm_start: 4,
            check,
            mode: BudgetMode::Fixed,
        }
    }

    /// 50 active labels plus 10 checks.
    pub fn light() -> Self {
        Self::fixed(50, 10)
    }

    /// 10% of the training rows plus `check`.
    pub fn fraction(train_size: usize, check: usize) -> Self {
        BudgetPolicy {
            stop: ((train_size as f64 * 0.10).ceil() as usize).max(4),
            warm_start: 4,
            check,
            mode: BudgetMode::Fraction,
        }
    }

    /// Picks the light or fraction policy from the dataset's width.
    pub fn for_dataset(data: &Dataset, train_size: usize) -> Self {
        if data.x.len() >= HEAVY_FEATURES {
            Self::fraction(train_size, 10)
        } else {
            Self::light()
        }
    }

    /// Budget used when the tree serves as a feature selector:
    /// `min(150, 40% of the training rows)`.
    pub fn feature_selection(train_size: usize) -> Self {
        let forty = (train_size as f64 * 0.4).floor() as usize;
        Self::fixed(150.min(forty).max(4), 0)
    }

    pub fn total(&self) -> usize {
        self.stop + self.check
    }

    fn validate(&self) -> Result<()> {
        if self.warm_start == 0 || self.stop < self.warm_start {
            return Err(Error::Invalid(format!(
                "budget {} must be at least the warm start {}",
                self.stop, self.warm_start
            )));
        }
        Ok(())
    }
}

/// The labeled cohorts and the remaining unlabeled rows.
#[derive(Debug, Clone)]
pub struct LearnState {
    pub best: Cohort,
    pub rest: Cohort,
    pub todo: Vec<usize>,
    pub n_labeled: usize,
    pub budget: usize,
}

impl LearnState {
    /// All labeled rows, best first.
    pub fn labeled(&self) -> impl Iterator<Item = usize> + '_ {
        self.best.rows().iter().chain(self.rest.rows()).copied()
    }
}

/// `round(sqrt(n))`: the size of the elite cohort after `n` labels.
pub fn elite_size(n: usize) -> usize {
    (n as f64).sqrt().round() as usize
}

// Total order on labeled rows: distance, then row index.
fn key(labeler: &Labeler, r: usize) -> (f64, usize) {
    (labeler.get(r).unwrap_or(f64::INFINITY), r)
}

fn cmp_key(a: (f64, usize), b: (f64, usize)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

fn extreme(labeler: &Labeler, rows: &[usize], worst: bool) -> Option<usize> {
    let it = rows.iter().copied();
    if worst {
        it.max_by(|&a, &b| cmp_key(key(labeler, a), key(labeler, b)))
    } else {
        it.min_by(|&a, &b| cmp_key(key(labeler, a), key(labeler, b)))
    }
}

/// Shrinks `best` to `round(sqrt(n))` rows by demoting its weakest members,
/// then swaps across the cut until every best row beats every rest row.
fn rebalance(state: &mut LearnState, labeler: &Labeler) {
    let data = labeler.data();
    let cut = elite_size(state.n_labeled);
    while state.best.len() > cut {
        let w = extreme(labeler, state.best.rows(), true).unwrap();
        state.best.remove(data, w);
        state.rest.add(data, w);
    }
    while let (Some(w), Some(b)) = (
        extreme(labeler, state.best.rows(), true),
        extreme(labeler, state.rest.rows(), false),
    ) {
        if cmp_key(key(labeler, w), key(labeler, b)).is_le() {
            break;
        }
        state.best.remove(data, w);
        state.rest.remove(data, b);
        state.best.add(data, b);
        state.rest.add(data, w);
    }
}

/// Index into `candidates` of the row with the highest acquisition score;
/// ties go to the lowest row index.
pub fn argmax_xploit(
    data: &Dataset,
    candidates: &[usize],
    best: &Cohort,
    rest: &Cohort,
    params: NbParams,
) -> Option<usize> {
    let mut top: Option<(usize, f64)> = None;
    for (i, &r) in candidates.iter().enumerate() {
        let s = xploit(data, &data.rows[r], best, rest, params).score;
        top = match top {
            Some((j, t)) if t > s || (t == s && candidates[j] < r) => Some((j, t)),
            _ => Some((i, s)),
        };
    }
    top.map(|(i, _)| i)
}

/// Runs active learning over `pool` (row indices of `labeler`'s dataset).
pub fn active_learn<R: Rng>(
    labeler: &mut Labeler,
    pool: &[usize],
    policy: &BudgetPolicy,
    params: NbParams,
    rng: &mut R,
) -> Result<LearnState> {
    active_learn_observed(labeler, pool, policy, params, rng, |_, _| {})
}

/// As [`active_learn`], calling `observe` after the warm start and after
/// every subsequent label.
pub fn active_learn_observed<R, F>(
    labeler: &mut Labeler,
    pool: &[usize],
    policy: &BudgetPolicy,
    params: NbParams,
    rng: &mut R,
    mut observe: F,
) -> Result<LearnState>
where
    R: Rng,
    F: FnMut(&LearnState, &Labeler),
{
    policy.validate()?;
    if pool.is_empty() {
        return Err(Error::PoolTooSmall {
            pool: 0,
            needed: policy.warm_start + 1,
        });
    }
    if policy.stop > pool.len() {
        return Err(Error::BudgetExceedsPool {
            budget: policy.stop,
            pool: pool.len(),
        });
    }
    let data = labeler.data();
    let mut rows = pool.to_vec();
    rows.shuffle(rng);
    let todo = rows.split_off(policy.warm_start);

    let mut warm = rows;
    for &r in &warm {
        labeler.label(r)?;
    }
    warm.sort_by(|&a, &b| cmp_key(key(labeler, a), key(labeler, b)));
    let cut = elite_size(warm.len());
    let mut state = LearnState {
        best: Cohort::from_rows(data, &warm[..cut]),
        rest: Cohort::from_rows(data, &warm[cut..]),
        todo,
        n_labeled: warm.len(),
        budget: policy.stop,
    };
    observe(&state, labeler);

    while state.n_labeled < policy.stop && !state.todo.is_empty() {
        let i = argmax_xploit(data, &state.todo, &state.best, &state.rest, params).expect("todo is non-empty");
        let r = state.todo.swap_remove(i);
        labeler.label(r)?;
        state.n_labeled += 1;
        state.best.add(data, r);
        rebalance(&mut state, labeler);
        observe(&state, labeler);
    }
    Ok(state)
}

/// The configuration recommended by [`two_stage_optimize`].
#[derive(Debug, Clone)]
pub struct Selection {
    pub row: usize,
    pub d2h: f64,
    pub labels_spent: usize,
    pub state: LearnState,
    /// Rows labeled by the check stage, in ranking order.
    pub checked: Vec<usize>,
}

/// Active learning over `learn_pool`, then label the `policy.check`
/// unlabeled rows of `candidates` that the final model ranks highest, and
/// return the best labeled candidate.
///
/// With `candidates = None` the check stage ranks the learner's own
/// leftover rows and every labeled row is eligible for selection.
pub fn two_stage_optimize<R: Rng>(
    labeler: &mut Labeler,
    learn_pool: &[usize],
    candidates: Option<&[usize]>,
    policy: &BudgetPolicy,
    params: NbParams,
    rng: &mut R,
) -> Result<Selection> {
    let spent_before = labeler.spent();
    let state = active_learn(labeler, learn_pool, policy, params, rng)?;
    let data = labeler.data();

    let eligible: Vec<usize> = match candidates {
        Some(c) => c.to_vec(),
        None => state.labeled().chain(state.todo.iter().copied()).collect(),
    };
    let mut ranked: Vec<(usize, f64)> = eligible
        .iter()
        .copied()
        .filter(|&r| !labeler.is_labeled(r))
        .map(|r| (r, xploit(data, &data.rows[r], &state.best, &state.rest, params).score))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let checked: Vec<usize> = ranked.iter().take(policy.check).map(|&(r, _)| r).collect();
    for &r in &checked {
        labeler.label(r)?;
    }

    let row = eligible
        .iter()
        .copied()
        .filter(|&r| labeler.is_labeled(r))
        .min_by(|&a, &b| cmp_key(key(labeler, a), key(labeler, b)))
        .ok_or_else(|| Error::Invalid("no labeled candidate to select".into()))?;
    Ok(Selection {
        row,
        d2h: labeler.get(row)?,
        labels_spent: labeler.spent() - spent_before,
        state,
        checked,
    })
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::NotAProbability { name, value })
    }
}

fn exact_samples(c: f64, p: f64) -> Result<f64> {
    check_probability("confidence", c)?;
    check_probability("p", p)?;
    Ok((1.0 - c).ln() / (1.0 - p).ln())
}

/// Samples needed to see, with confidence `c`, at least one event of
/// probability `p`: `log(1-c)/log(1-p)`, rounded to the nearest count.
pub fn samples_required(c: f64, p: f64) -> Result<u64> {
    Ok(exact_samples(c, p)?.round() as u64)
}

/// As [`samples_required`] but rounded up, so that
/// `confidence_of(n, p) >= c` always holds.
pub fn samples_for_confidence(c: f64, p: f64) -> Result<u64> {
    Ok(exact_samples(c, p)?.ceil() as u64)
}

/// Probability of at least one success in `n` trials of probability `p`.
pub fn confidence_of(n: u64, p: f64) -> f64 {
    1.0 - (1.0 - p).powf(n as f64)
}

/// Queries a pivot-style (binary) search needs over `n` candidates:
/// `ceil(2 log2 n)`.
pub fn pivot_query_estimate(n: u64) -> u64 {
    assert!(n >= 1, "pivot_query_estimate needs n >= 1");
    (2.0 * (n as f64).log2()).ceil() as u64
}
