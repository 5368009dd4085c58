//! Tables in the MOOT CSV convention, their column statistics, and the
//! scalarizations used to rank rows (distance to heaven, Chebyshev, win).
//!
//! Header names carry the schema:
//!
//! | name      | meaning                         |
//! |-----------|---------------------------------|
//! | `Volume`  | numeric input (leading capital) |
//! | `origin`  | symbolic input                  |
//! | `Lbs-`    | numeric goal, minimize          |
//! | `Mpg+`    | numeric goal, maximize          |
//! | `HpX`     | loaded, but ignored by learners |
//!
//! The literal `?` marks a missing cell.
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

/// Guard added to denominators so degenerate ranges normalize to 0.
pub const TINY: f64 = 1e-32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Numeric,
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Independent,
    Goal(Direction),
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: Kind,
    pub role: Role,
    pub position: usize,
}

impl ColumnSpec {
    /// Classifies a header cell. `honor_ignore` controls whether a trailing
    /// `X` removes the column from learning.
    pub fn classify(name: &str, position: usize, honor_ignore: bool) -> Self {
        let kind = match name.chars().find(|c| c.is_alphabetic()) {
            Some(c) if c.is_uppercase() => Kind::Numeric,
            _ => Kind::Symbolic,
        };
        let role = if name.ends_with('+') {
            Role::Goal(Direction::Maximize)
        } else if name.ends_with('-') || name.ends_with('\u{2212}') {
            Role::Goal(Direction::Minimize)
        } else if honor_ignore && name.ends_with('X') {
            Role::Ignored
        } else {
            Role::Independent
        };
        ColumnSpec {
            name: name.to_string(),
            kind,
            role,
            position,
        }
    }

    pub fn goal_direction(&self) -> Option<Direction> {
        match self.role {
            Role::Goal(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_goal(&self) -> bool {
        matches!(self.role, Role::Goal(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Sym(String),
    Missing,
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{}", x),
            Cell::Sym(s) => f.write_str(s),
            Cell::Missing => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
}

impl Row {
    pub fn new(cells: Vec<Cell>) -> Self {
        Row { cells }
    }
}

/// Running summary of a numeric column (Welford update; removal supported
/// for mean and spread, but the observed range only ever widens).
#[derive(Debug, Clone, PartialEq)]
pub struct NumStats {
    pub lo: f64,
    pub hi: f64,
    pub mu: f64,
    m2: f64,
    pub n: usize,
}

impl Default for NumStats {
    fn default() -> Self {
        NumStats {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            mu: 0.0,
            m2: 0.0,
            n: 0,
        }
    }
}

impl NumStats {
    pub fn add(&mut self, x: f64) {
        self.n += 1;
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
        let d = x - self.mu;
        self.mu += d / self.n as f64;
        self.m2 += d * (x - self.mu);
    }

    pub fn sub(&mut self, x: f64) {
        if self.n <= 1 {
            let (lo, hi) = (self.lo, self.hi);
            *self = NumStats {
                lo,
                hi,
                ..NumStats::default()
            };
            return;
        }
        self.n -= 1;
        let d = x - self.mu;
        self.mu -= d / self.n as f64;
        self.m2 = (self.m2 - d * (x - self.mu)).max(0.0);
    }

    /// Sample standard deviation; 0 below two observations.
    pub fn sd(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0).sqrt()
        }
    }

    /// Maps `x` into [0,1] using the observed range.
    pub fn norm(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        ((x - self.lo) / (self.hi - self.lo + TINY)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymStats {
    pub counts: BTreeMap<String, usize>,
    pub n: usize,
}

impl SymStats {
    pub fn add(&mut self, s: &str) {
        *self.counts.entry(s.to_string()).or_insert(0) += 1;
        self.n += 1;
    }

    pub fn sub(&mut self, s: &str) {
        if let Some(c) = self.counts.get_mut(s) {
            *c -= 1;
            self.n -= 1;
            if *c == 0 {
                self.counts.remove(s);
            }
        }
    }

    pub fn count(&self, s: &str) -> usize {
        self.counts.get(s).copied().unwrap_or(0)
    }

    /// Most frequent symbol; ties go to the lexically smallest.
    pub fn mode(&self) -> Option<&str> {
        let mut best: Option<(&str, usize)> = None;
        for (k, &v) in &self.counts {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((k, v));
            }
        }
        best.map(|(k, _)| k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColStats {
    Num(NumStats),
    Sym(SymStats),
}

impl ColStats {
    pub fn for_kind(kind: Kind) -> Self {
        match kind {
            Kind::Numeric => ColStats::Num(NumStats::default()),
            Kind::Symbolic => ColStats::Sym(SymStats::default()),
        }
    }

    pub fn add(&mut self, cell: &Cell) {
        match (self, cell) {
            (ColStats::Num(s), Cell::Num(x)) => s.add(*x),
            (ColStats::Sym(s), Cell::Sym(v)) => s.add(v),
            _ => {}
        }
    }

    pub fn sub(&mut self, cell: &Cell) {
        match (self, cell) {
            (ColStats::Num(s), Cell::Num(x)) => s.sub(*x),
            (ColStats::Sym(s), Cell::Sym(v)) => s.sub(v),
            _ => {}
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ColStats::Num(s) => s.n,
            ColStats::Sym(s) => s.n,
        }
    }

    pub fn as_num(&self) -> Option<&NumStats> {
        match self {
            ColStats::Num(s) => Some(s),
            ColStats::Sym(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Treat names ending in `X` as ignored columns.
    pub honor_ignore: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { honor_ignore: true }
    }
}

/// An immutable table plus the statistics of every column.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub columns: Vec<ColumnSpec>,
    /// Positions of independent (learnable) columns.
    pub x: Vec<usize>,
    /// Positions of goal columns.
    pub y: Vec<usize>,
    /// Per-column statistics, indexed by position.
    pub stats: Vec<ColStats>,
    pub rows: Vec<Row>,
    /// Ideal normalized value per goal, parallel to `y`.
    pub heaven: Vec<f64>,
}

impl Dataset {
    pub fn load<R: Read>(source: R) -> Result<Self> {
        Self::load_with(source, LoadOptions::default())
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::load(std::fs::File::open(path)?)
    }

    pub fn load_with<R: Read>(source: R, opts: LoadOptions) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(source);
        let mut records = reader.records();
        let header = match records.next() {
            Some(r) => r?,
            None => return Err(Error::EmptyFile),
        };
        let names: Vec<&str> = header.iter().collect();
        let mut data = Self::from_header(&names, opts)?;
        for (i, rec) in records.enumerate() {
            let rec = rec?;
            let cells: Vec<&str> = rec.iter().collect();
            let row = data.parse_row_at(&cells, i + 2)?;
            data.push(row);
        }
        Ok(data)
    }

    /// A table with a schema and no rows.
    pub fn from_header(names: &[&str], opts: LoadOptions) -> Result<Self> {
        if names.iter().all(|n| n.is_empty()) {
            return Err(Error::EmptyFile);
        }
        let columns: Vec<ColumnSpec> = names
            .iter()
            .enumerate()
            .map(|(i, n)| ColumnSpec::classify(n, i, opts.honor_ignore))
            .collect();
        let x = columns
            .iter()
            .filter(|c| c.role == Role::Independent)
            .map(|c| c.position)
            .collect();
        let y: Vec<usize> = columns.iter().filter(|c| c.is_goal()).map(|c| c.position).collect();
        if y.is_empty() {
            return Err(Error::NoGoalColumn);
        }
        for &g in &y {
            if columns[g].kind == Kind::Symbolic {
                return Err(Error::Invalid(format!(
                    "goal column {:?} must be numeric",
                    columns[g].name
                )));
            }
        }
        let heaven = y
            .iter()
            .map(|&g| match columns[g].goal_direction() {
                Some(Direction::Maximize) => 1.0,
                _ => 0.0,
            })
            .collect();
        let stats = columns.iter().map(|c| ColStats::for_kind(c.kind)).collect();
        Ok(Dataset {
            columns,
            x,
            y,
            stats,
            rows: Vec::new(),
            heaven,
        })
    }

    /// Parses one record against this schema without adding it.
    pub fn parse_row(&self, cells: &[&str]) -> Result<Row> {
        self.parse_row_at(cells, 1)
    }

    fn parse_row_at(&self, cells: &[&str], line: usize) -> Result<Row> {
        if cells.len() != self.columns.len() {
            return Err(Error::Arity {
                line,
                expected: self.columns.len(),
                found: cells.len(),
            });
        }
        let cells = cells
            .iter()
            .zip(&self.columns)
            .map(|(raw, col)| {
                if *raw == "?" {
                    return Ok(Cell::Missing);
                }
                match col.kind {
                    Kind::Symbolic => Ok(Cell::Sym(raw.to_string())),
                    Kind::Numeric => raw.parse::<f64>().map(Cell::Num).map_err(|_| Error::BadNumber {
                        line,
                        column: col.name.clone(),
                        cell: raw.to_string(),
                    }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Row { cells })
    }

    fn push(&mut self, row: Row) {
        for (stat, cell) in self.stats.iter_mut().zip(&row.cells) {
            stat.add(cell);
        }
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn name(&self, col: usize) -> &str {
        &self.columns[col].name
    }

    /// Normalizes `value` against column `col`'s full-file range.
    pub fn normalize(&self, col: usize, value: f64) -> Result<f64> {
        match &self.stats[col] {
            ColStats::Num(s) => Ok(s.norm(value)),
            ColStats::Sym(_) => Err(Error::SymbolicColumn(self.columns[col].name.clone())),
        }
    }

    /// Per-goal distances `|heaven - normalized y|`, in goal order.
    fn goal_gaps(&self, row: &Row, index: usize) -> Result<Vec<f64>> {
        self.y
            .iter()
            .zip(&self.heaven)
            .map(|(&g, &h)| {
                let v = row.cells[g].as_num().ok_or(Error::MissingGoal(index))?;
                Ok((h - self.normalize(g, v)?).abs())
            })
            .collect()
    }

    /// Distance to heaven: root-mean-square of the per-goal gaps, in [0,1].
    pub fn d2h(&self, row: &Row) -> Result<f64> {
        self.d2h_at(row, usize::MAX)
    }

    fn d2h_at(&self, row: &Row, index: usize) -> Result<f64> {
        let gaps = self.goal_gaps(row, index)?;
        let sum: f64 = gaps.iter().map(|g| g * g).sum();
        Ok((sum / gaps.len() as f64).sqrt())
    }

    /// Largest per-goal gap, in [0,1].
    pub fn chebyshev(&self, row: &Row) -> Result<f64> {
        self.chebyshev_at(row, usize::MAX)
    }

    fn chebyshev_at(&self, row: &Row, index: usize) -> Result<f64> {
        Ok(self.goal_gaps(row, index)?.into_iter().fold(0.0, f64::max))
    }

    /// Ground-truth distance of row `index` under `metric`. Harness-side:
    /// optimizers go through a [`Labeler`].
    pub fn distance(&self, index: usize, metric: Metric) -> Result<f64> {
        let row = &self.rows[index];
        match metric {
            Metric::D2h => self.d2h_at(row, index),
            Metric::Chebyshev => self.chebyshev_at(row, index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    D2h,
    Chebyshev,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d2h" => Ok(Metric::D2h),
            "chebyshev" | "cheb" => Ok(Metric::Chebyshev),
            other => Err(Error::Invalid(format!("unknown metric {:?}", other))),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Metric::D2h => "d2h",
            Metric::Chebyshev => "chebyshev",
        })
    }
}

/// Median of a slice (mean of the two middle values for even lengths).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

/// Reference points for the win score: best and median distance of a pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalStats {
    pub min: f64,
    pub median: f64,
}

impl GoalStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        let median = median(values)?;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        Some(GoalStats { min, median })
    }

    /// Ground-truth stats over `rows` of `data`.
    pub fn of_pool(data: &Dataset, rows: &[usize], metric: Metric) -> Result<Self> {
        let ds = rows
            .iter()
            .map(|&r| data.distance(r, metric))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(&ds).ok_or(Error::PoolTooSmall { pool: 0, needed: 1 })
    }

    pub fn is_degenerate(&self) -> bool {
        self.median <= self.min
    }

    /// Rescales a distance: 100 at the pool minimum, 0 at the pool median,
    /// negative beyond it.
    pub fn win(&self, x: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegeneratePool(self.min));
        }
        Ok(100.0 * (1.0 - (x - self.min) / (self.median - self.min)))
    }
}

/// Reveals goal values and counts how many distinct rows were revealed.
/// This is the only path by which optimizers see labels.
#[derive(Debug, Clone)]
pub struct Labeler<'a> {
    data: &'a Dataset,
    metric: Metric,
    revealed: Vec<Option<f64>>,
    spent: usize,
}

impl<'a> Labeler<'a> {
    pub fn new(data: &'a Dataset, metric: Metric) -> Self {
        Labeler {
            data,
            metric,
            revealed: vec![None; data.len()],
            spent: 0,
        }
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Labels row `index` (charging one unit the first time) and returns its
    /// distance to heaven under the configured metric.
    pub fn label(&mut self, index: usize) -> Result<f64> {
        if let Some(d) = self.revealed[index] {
            return Ok(d);
        }
        let d = self.data.distance(index, self.metric)?;
        self.revealed[index] = Some(d);
        self.spent += 1;
        Ok(d)
    }

    /// Distance of an already labeled row.
    pub fn get(&self, index: usize) -> Result<f64> {
        self.revealed[index].ok_or(Error::Unlabeled(index))
    }

    pub fn is_labeled(&self, index: usize) -> bool {
        self.revealed[index].is_some()
    }

    pub fn spent(&self) -> usize {
        self.spent
    }
}
