//! Rank features two ways: impurity decrease inside the tree, and the
//! error increase when a column is shuffled.
//!
//!     cargo run --example importance [path/to/file.csv]
use ezr::active::BudgetPolicy;
use ezr::data::{Dataset, Metric};
use ezr::explain::{explanation_tree, mdi_importance, permutation_importance};
use ezr::tree::TreeConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/dbconf.csv").into());
    let data = Dataset::from_path(&path)?;
    let pool: Vec<usize> = (0..data.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let e = explanation_tree(
        &data,
        &pool,
        &BudgetPolicy::fixed(50, 0),
        Metric::D2h,
        TreeConfig::default(),
        &mut rng,
    )?;

    println!("MDI (unit sum)");
    print!("{}", mdi_importance(&e.tree, &data.x).unit_sum().to_table());
    println!("\npermutation, 20 shuffles");
    print!(
        "{}",
        permutation_importance(&e.tree, &data, &e.labeled, 20, &mut rng)?.to_table()
    );
    Ok(())
}
