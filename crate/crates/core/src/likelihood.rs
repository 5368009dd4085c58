//! Two-class Naive Bayes over the "best" and "rest" cohorts.
use crate::data::{Cell, ColStats, Dataset, Row};

/// Per-column likelihoods are floored here before taking logs.
pub const LIKE_FLOOR: f64 = 1e-32;

/// Smoothing constants: `k` for class priors, `m` for symbol frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbParams {
    pub k: f64,
    pub m: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams { k: 1.0, m: 2.0 }
    }
}

/// A labeled sub-population with sufficient statistics for every
/// independent column of its dataset.
#[derive(Debug, Clone)]
pub struct Cohort {
    rows: Vec<usize>,
    /// Parallel to `Dataset::x`.
    stats: Vec<ColStats>,
}

impl Cohort {
    pub fn new(data: &Dataset) -> Self {
        Cohort {
            rows: Vec::new(),
            stats: data
                .x
                .iter()
                .map(|&c| ColStats::for_kind(data.columns[c].kind))
                .collect(),
        }
    }

    pub fn from_rows(data: &Dataset, rows: &[usize]) -> Self {
        let mut c = Cohort::new(data);
        for &r in rows {
            c.add(data, r);
        }
        c
    }

    pub fn add(&mut self, data: &Dataset, index: usize) {
        let row = &data.rows[index];
        for (s, &c) in self.stats.iter_mut().zip(&data.x) {
            s.add(&row.cells[c]);
        }
        self.rows.push(index);
    }

    /// Removes `index` if present; returns whether it was a member.
    pub fn remove(&mut self, data: &Dataset, index: usize) -> bool {
        let Some(pos) = self.rows.iter().position(|&r| r == index) else {
            return false;
        };
        self.rows.remove(pos);
        let row = &data.rows[index];
        for (s, &c) in self.stats.iter_mut().zip(&data.x) {
            s.sub(&row.cells[c]);
        }
        true
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Statistics for the i-th independent column.
    pub fn stats(&self) -> &[ColStats] {
        &self.stats
    }
}

pub fn gaussian(x: f64, mu: f64, sd: f64) -> f64 {
    let z = (x - mu) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}

/// Log-likelihood that `row` belongs to `cohort`, given `n_all` labeled rows
/// split into `n_classes` classes. Missing cells contribute nothing.
pub fn like(data: &Dataset, row: &Row, cohort: &Cohort, n_all: usize, n_classes: usize, params: NbParams) -> f64 {
    let n = cohort.len() as f64;
    let prior = (n + params.k) / (n_all as f64 + params.k * n_classes as f64);
    let mut out = prior.ln();
    for (s, &c) in cohort.stats.iter().zip(&data.x) {
        let l = match (&row.cells[c], s) {
            (Cell::Missing, _) => continue,
            (Cell::Num(x), ColStats::Num(ns)) => {
                let (lo, hi) = data.stats[c].as_num().map_or((0.0, 0.0), |a| (a.lo, a.hi));
                let floor = 1e-9 * (hi - lo + 1.0);
                gaussian(*x, ns.mu, ns.sd().max(floor))
            }
            (Cell::Sym(v), ColStats::Sym(ss)) => (ss.count(v) as f64 + params.m * prior) / (n + params.m),
            _ => continue,
        };
        out += l.max(LIKE_FLOOR).ln();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcquisitionScore {
    pub log_like_best: f64,
    pub log_like_rest: f64,
    /// `log_like_best - log_like_rest`, i.e. the log of the B/R ratio.
    pub score: f64,
}

/// Scores `row` by how much more it resembles `best` than `rest`.
pub fn xploit(data: &Dataset, row: &Row, best: &Cohort, rest: &Cohort, params: NbParams) -> AcquisitionScore {
    let n_all = best.len() + rest.len();
    let b = like(data, row, best, n_all, 2, params);
    let r = like(data, row, rest, n_all, 2, params);
    AcquisitionScore {
        log_like_best: b,
        log_like_rest: r,
        score: b - r,
    }
}
