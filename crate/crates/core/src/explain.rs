//! Global and local explanations read off an explanation tree.
use crate::active::{active_learn, BudgetPolicy};
use crate::data::{Cell, Dataset, GoalStats, Labeler, Metric};
use crate::error::{Error, Result};
use crate::likelihood::NbParams;
use crate::tree::{grow_tree, Condition, Labeled, Op, Threshold, Tree, TreeConfig};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportanceMethod {
    Mdi,
    Permutation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureScore {
    pub feature: usize,
    pub name: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureImportance {
    pub method: ImportanceMethod,
    /// One entry per independent column, in column order.
    pub scores: Vec<FeatureScore>,
}

impl FeatureImportance {
    pub fn score(&self, feature: usize) -> Option<f64> {
        self.scores.iter().find(|s| s.feature == feature).map(|s| s.score)
    }

    /// Scores divided by their sum over features with a nonzero score.
    pub fn unit_sum(&self) -> FeatureImportance {
        let total: f64 = self.scores.iter().map(|s| s.score).filter(|s| *s != 0.0).sum();
        let mut out = self.clone();
        if total != 0.0 {
            for s in &mut out.scores {
                s.score /= total;
            }
        }
        out
    }

    /// Highest score first; ties by column position.
    pub fn ranked(&self) -> Vec<FeatureScore> {
        let mut v = self.scores.clone();
        v.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.feature.cmp(&b.feature)));
        v
    }

    /// Aligned `rank feature score` table, best first.
    pub fn to_table(&self) -> String {
        let width = self.scores.iter().map(|s| s.name.len()).max().unwrap_or(7).max(7);
        let mut out = format!("rank  {:<width$}  {:>10}\n", "feature", "score");
        for (i, s) in self.ranked().iter().enumerate() {
            let _ = writeln!(out, "{:>4}  {:<width$}  {:>10.4}", i + 1, s.name, s.score);
        }
        out
    }

    /// One JSON object per feature: feature, score, rank.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.ranked().iter().enumerate() {
            let rec = serde_json::json!({
                "method": self.method,
                "feature": s.name,
                "score": s.score,
                "rank": i + 1,
            });
            out += &rec.to_string();
            out.push('\n');
        }
        out
    }
}

/// Mean decrease in impurity: for every column, the sum over the nodes
/// splitting on it of the size-weighted standard deviations of their
/// children.
pub fn mdi_importance(tree: &Tree, features: &[usize]) -> FeatureImportance {
    let mut raw = vec![0.0; tree.names.len()];
    for (id, node) in tree.nodes.iter().enumerate() {
        if node.is_leaf() {
            continue;
        }
        let f = tree.split_of(id).expect("inner node has a split").feature;
        raw[f] += node_weighted_impurity(tree, id);
    }
    FeatureImportance {
        method: ImportanceMethod::Mdi,
        scores: features
            .iter()
            .map(|&f| FeatureScore {
                feature: f,
                name: tree.names[f].clone(),
                score: raw[f],
            })
            .collect(),
    }
}

/// `Σ_c |c| / Σ_j |j| · Imp(c)` over the children of `node`.
pub fn node_weighted_impurity(tree: &Tree, node: usize) -> f64 {
    let kids = &tree.nodes[node].children;
    let total: usize = kids.iter().map(|&c| tree.nodes[c].n).sum();
    kids.iter()
        .map(|&c| {
            let k = &tree.nodes[c];
            k.n as f64 / total as f64 * k.impurity.unwrap_or(0.0)
        })
        .sum()
}

fn prediction(tree: &Tree, cells: &[Cell]) -> Result<f64> {
    let leaf = tree.route(cells).leaf;
    tree.nodes[leaf]
        .median_d2h
        .ok_or_else(|| Error::Invalid("tree has no node statistics (was it parsed from text?)".into()))
}

fn mean_abs_error(tree: &Tree, rows: &[Vec<Cell>], truth: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (cells, y) in rows.iter().zip(truth) {
        sum += (prediction(tree, cells)? - y).abs();
    }
    Ok(sum / rows.len() as f64)
}

/// Increase in the tree's mean absolute error (leaf median vs. true
/// distance) when one column is shuffled, averaged over `repeats`
/// shuffles. Negative scores mean shuffling helped.
pub fn permutation_importance<R: Rng>(
    tree: &Tree,
    data: &Dataset,
    rows: &[Labeled],
    repeats: usize,
    rng: &mut R,
) -> Result<FeatureImportance> {
    if rows.len() < 2 {
        return Err(Error::PoolTooSmall {
            pool: rows.len(),
            needed: 2,
        });
    }
    if repeats == 0 {
        return Err(Error::Invalid("repeats must be at least 1".into()));
    }
    let cells: Vec<Vec<Cell>> = rows.iter().map(|r| data.rows[r.row].cells.clone()).collect();
    let truth: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
    let baseline = mean_abs_error(tree, &cells, &truth)?;

    let mut scores = Vec::with_capacity(data.x.len());
    for &f in &data.x {
        let mut total = 0.0;
        for _ in 0..repeats {
            let mut column: Vec<Cell> = cells.iter().map(|c| c[f].clone()).collect();
            column.shuffle(rng);
            let shuffled: Vec<Vec<Cell>> = cells
                .iter()
                .zip(column)
                .map(|(c, v)| {
                    let mut c = c.clone();
                    c[f] = v;
                    c
                })
                .collect();
            total += mean_abs_error(tree, &shuffled, &truth)? - baseline;
        }
        scores.push(FeatureScore {
            feature: f,
            name: data.name(f).to_string(),
            score: total / repeats as f64,
        });
    }
    Ok(FeatureImportance {
        method: ImportanceMethod::Permutation,
        scores,
    })
}

/// Which better leaf a counterfactual aims for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CounterfactualTarget {
    /// The leaf with the highest win score.
    #[default]
    Best,
    /// The better-scoring leaf reachable with the fewest edits.
    Nearest,
}

/// Split conditions a row must newly satisfy to land in a better leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterfactualEdit {
    pub edits: Vec<Condition>,
    pub source: usize,
    pub target: usize,
    pub win_gain: f64,
}

impl CounterfactualEdit {
    /// `ACAP > 4`, one per line.
    pub fn describe(&self, tree: &Tree) -> Vec<String> {
        self.edits
            .iter()
            .map(|c| format!("{} {} {}", tree.names[c.feature], c.op.symbol(), c.value))
            .collect()
    }

    /// Returns a copy of `cells` changed just enough to satisfy every
    /// condition on the way to the target leaf. Replacement values are
    /// taken from the dataset when one fits.
    pub fn apply(&self, tree: &Tree, data: &Dataset, cells: &[Cell]) -> Vec<Cell> {
        let mut out = cells.to_vec();
        let path = tree.conditions_to(self.target);
        let mut touched: Vec<usize> = self.edits.iter().map(|c| c.feature).collect();
        touched.sort_unstable();
        touched.dedup();
        for f in touched {
            let conds: Vec<&Condition> = path.iter().filter(|c| c.feature == f).collect();
            let ok = |cell: &Cell| conds.iter().all(|c| c.matches(cell) == Some(true));
            if ok(&out[f]) {
                continue;
            }
            let current = out[f].as_num();
            let mut pick: Option<Cell> = None;
            for row in &data.rows {
                let cand = &row.cells[f];
                if !ok(cand) {
                    continue;
                }
                let closer = match (&pick, current, cand.as_num()) {
                    (None, _, _) => true,
                    (Some(p), Some(x), Some(y)) => (y - x).abs() < (p.as_num().unwrap() - x).abs(),
                    _ => false,
                };
                if closer {
                    pick = Some(cand.clone());
                }
            }
            out[f] = pick.unwrap_or_else(|| synthesize(&conds));
        }
        out
    }
}

// A value meeting numeric bounds when the data offers none.
fn synthesize(conds: &[&Condition]) -> Cell {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for c in conds {
        match (c.op, &c.value) {
            (Op::Le, Threshold::Num(t)) => hi = hi.min(*t),
            (Op::Gt, Threshold::Num(t)) => lo = lo.max(*t),
            (Op::Eq, v) => {
                return match v {
                    Threshold::Num(x) => Cell::Num(*x),
                    Threshold::Sym(s) => Cell::Sym(s.clone()),
                }
            }
            _ => {}
        }
    }
    Cell::Num(match (lo.is_finite(), hi.is_finite()) {
        (_, true) => hi,
        (true, false) => lo + 1.0,
        (false, false) => 0.0,
    })
}

/// Edits that move `cells` from its current leaf to a better one, or
/// `None` when no leaf scores higher than where the row already lands.
pub fn counterfactual(tree: &Tree, cells: &[Cell], target: CounterfactualTarget) -> Option<CounterfactualEdit> {
    let source = tree.route(cells).leaf;
    let from = tree.ancestry(source);
    let win_here = tree.nodes[source].win;
    let edits_to = |leaf: usize| -> Vec<Condition> {
        let to = tree.ancestry(leaf);
        let common = from.iter().zip(&to).take_while(|(a, b)| a == b).count();
        to[common..]
            .iter()
            .filter_map(|&n| tree.nodes[n].condition.clone())
            .filter(|c| c.matches(&cells[c.feature]) != Some(true))
            .collect()
    };
    let leaves: Vec<usize> = tree.leaves().collect();
    let chosen = match target {
        CounterfactualTarget::Best => {
            let best = leaves.iter().copied().fold(None, |acc: Option<usize>, l| match acc {
                Some(a) if tree.nodes[a].win >= tree.nodes[l].win => Some(a),
                _ => Some(l),
            })?;
            if best == source || tree.nodes[best].win <= win_here {
                return None;
            }
            best
        }
        CounterfactualTarget::Nearest => leaves
            .iter()
            .copied()
            .filter(|&l| l != source && tree.nodes[l].win > win_here)
            .min_by(|&a, &b| {
                edits_to(a)
                    .len()
                    .cmp(&edits_to(b).len())
                    .then(tree.nodes[b].win.total_cmp(&tree.nodes[a].win))
                    .then(a.cmp(&b))
            })?,
    };
    Some(CounterfactualEdit {
        edits: edits_to(chosen),
        source,
        target: chosen,
        win_gain: tree.nodes[chosen].win - win_here,
    })
}

/// A tree grown over actively labeled rows, with the labels it saw.
#[derive(Debug, Clone)]
pub struct Explained {
    pub tree: Tree,
    pub labeled: Vec<Labeled>,
    /// Win statistics of the whole pool; node scores use these.
    pub stats: GoalStats,
}

/// Labels `policy.stop` rows of `pool` and grows a tree on them. Node win
/// scores are computed against the whole pool.
pub fn explanation_tree<R: Rng>(
    data: &Dataset,
    pool: &[usize],
    policy: &BudgetPolicy,
    metric: Metric,
    cfg: TreeConfig,
    rng: &mut R,
) -> Result<Explained> {
    let stats = GoalStats::of_pool(data, pool, metric)?;
    if stats.is_degenerate() {
        return Err(Error::DegeneratePool(stats.min));
    }
    let mut labeler = Labeler::new(data, metric);
    let state = active_learn(&mut labeler, pool, policy, NbParams::default(), rng)?;
    let labeled: Vec<Labeled> = state
        .labeled()
        .map(|r| Labeled {
            row: r,
            d2h: labeler.get(r).expect("labeled"),
        })
        .collect();
    let tree = grow_tree(data, &labeled, &stats, cfg)?;
    Ok(Explained { tree, labeled, stats })
}

/// Outcome of using the explanation tree as a feature selector.
#[derive(Debug, Clone)]
pub struct FeatureSelection {
    /// Number of columns with nonzero MDI.
    pub k: usize,
    /// Those columns, best first.
    pub ranked: Vec<FeatureScore>,
    pub labels_spent: usize,
    pub tree: Tree,
}

impl FeatureSelection {
    /// True when the tree never split, so nothing was selected.
    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }
}

/// Actively labels `policy.stop` rows of `pool`, grows a tree on them and
/// keeps the columns the tree actually splits on.
pub fn select_features<R: Rng>(
    data: &Dataset,
    pool: &[usize],
    policy: &BudgetPolicy,
    metric: Metric,
    cfg: TreeConfig,
    rng: &mut R,
) -> Result<FeatureSelection> {
    let mut labeler = Labeler::new(data, metric);
    let state = active_learn(&mut labeler, pool, policy, NbParams::default(), rng)?;
    let rows: Vec<Labeled> = state
        .labeled()
        .map(|r| Labeled {
            row: r,
            d2h: labeler.get(r).expect("labeled"),
        })
        .collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
    let mut stats = GoalStats::from_values(&ys).expect("at least one labeled row");
    if stats.is_degenerate() {
        // every label ties: no split can reduce impurity, keep win finite
        stats.median = stats.min + 1.0;
    }
    let tree = grow_tree(data, &rows, &stats, cfg)?;
    let imp = mdi_importance(&tree, &data.x);
    let ranked: Vec<FeatureScore> = imp.ranked().into_iter().filter(|s| s.score > 0.0).collect();
    Ok(FeatureSelection {
        k: ranked.len(),
        ranked,
        labels_spent: labeler.spent(),
        tree,
    })
}
