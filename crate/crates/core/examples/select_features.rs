//! Keep only the columns the explanation tree splits on.
//!
//!     cargo run --example select_features [path/to/file.csv]
use ezr::active::BudgetPolicy;
use ezr::data::{Dataset, Metric};
use ezr::explain::select_features;
use ezr::tree::TreeConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/fm24.csv").into());
    let data = Dataset::from_path(&path)?;
    let pool: Vec<usize> = (0..data.len()).collect();
    let policy = BudgetPolicy::feature_selection(pool.len());
    let fs = select_features(
        &data,
        &pool,
        &policy,
        Metric::D2h,
        TreeConfig::default(),
        &mut ChaCha8Rng::seed_from_u64(5),
    )?;
    println!(
        "kept {} of {} columns using {} labels",
        fs.k,
        data.x.len(),
        fs.labels_spent
    );
    for s in &fs.ranked {
        println!("  {:<8} {:.4}", s.name, s.score);
    }
    Ok(())
}
