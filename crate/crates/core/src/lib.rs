//! Label-frugal multi-objective optimization for tabular data.
//!
//! Rows are configurations; columns are either independent choices or
//! goals to minimize / maximize. The optimizer labels (i.e. looks up the
//! goals of) only a few dozen rows, learning a two-class Naive Bayes model
//! of what good rows look like, and recommends the best labeled row. A
//! small regression tree over the labeled rows explains the result.
//!
//! ```no_run
//! use ezr::{active::{two_stage_optimize, BudgetPolicy}, data::{Dataset, Labeler, Metric}};
//! use rand::SeedableRng;
//!
//! let data = Dataset::from_path("data/auto93.csv").unwrap();
//! let pool: Vec<usize> = (0..data.len()).collect();
//! let mut labeler = Labeler::new(&data, Metric::D2h);
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let pick = two_stage_optimize(&mut labeler, &pool, None, &BudgetPolicy::light(),
//!                               Default::default(), &mut rng).unwrap();
//! println!("row {} d2h {:.3} after {} labels", pick.row, pick.d2h, pick.labels_spent);
//! ```
pub mod active;
pub mod cli;
pub mod data;
pub mod error;
pub mod explain;
pub mod harness;
pub mod likelihood;
pub mod tree;

pub use error::{Error, Result};
