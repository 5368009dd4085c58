//! Grow a small tree over 32 actively chosen rows and print it.
//!
//!     cargo run --example explanation_tree [path/to/file.csv]
use ezr::active::BudgetPolicy;
use ezr::data::{Dataset, Metric};
use ezr::explain::explanation_tree;
use ezr::tree::TreeConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/coc1000.csv").into());
    let data = Dataset::from_path(&path)?;
    let pool: Vec<usize> = (0..data.len()).collect();
    let e = explanation_tree(
        &data,
        &pool,
        &BudgetPolicy::fixed(32, 0),
        Metric::D2h,
        TreeConfig::default(),
        &mut ChaCha8Rng::seed_from_u64(1),
    )?;
    print!("{}", e.tree.render());
    println!("\n{} leaves, depth {}", e.tree.leaves().count(), e.tree.depth());
    Ok(())
}
