//! Repeated 80/20 evaluation against a random pick and an exhaustive
//! oracle.
//!
//!     cargo run --release --example bench [path/to/file.csv]
use ezr::data::Dataset;
use ezr::harness::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/hpo_svm.csv").into());
    let data = Dataset::from_path(&path)?;
    let config = ExperimentConfig {
        repeats: 10,
        jobs: 4,
        ..Default::default()
    };
    let report = run_experiment(&data, &path, &config)?;
    print!("{}", report.to_text());
    Ok(())
}
