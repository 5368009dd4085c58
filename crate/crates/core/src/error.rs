use thiserror::Error;

/// Errors produced while loading data or running the optimizer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty file")]
    EmptyFile,

    #[error("line {line}: expected {expected} cells, found {found}")]
    Arity { line: usize, expected: usize, found: usize },

    #[error("no goal column")]
    NoGoalColumn,

    #[error("line {line}: column {column:?} expects a number, found {cell:?}")]
    BadNumber { line: usize, column: String, cell: String },

    #[error("column {0:?} is symbolic; numeric normalization is undefined")]
    SymbolicColumn(String),

    #[error("row {0} is missing a goal value")]
    MissingGoal(usize),

    #[error("row {0} has not been labeled")]
    Unlabeled(usize),

    #[error("degenerate pool: median d2h equals min d2h ({0})")]
    DegeneratePool(f64),

    #[error("labeling budget {budget} exceeds pool of {pool} rows")]
    BudgetExceedsPool { budget: usize, pool: usize },

    #[error("pool has {pool} rows; at least {needed} are required")]
    PoolTooSmall { pool: usize, needed: usize },

    #[error("{name} must lie strictly between 0 and 1, got {value}")]
    NotAProbability { name: &'static str, value: f64 },

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("tree text line {line}: {msg}")]
    TreeSyntax { line: usize, msg: String },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
