//! Find a good car in auto93 while looking up the goals of only 60 rows.
//!
//!     cargo run --example optimize [path/to/file.csv]
use ezr::active::{two_stage_optimize, BudgetPolicy};
use ezr::data::{Dataset, GoalStats, Labeler, Metric};
use ezr::likelihood::NbParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/auto93.csv").into());
    let data = Dataset::from_path(&path)?;
    let pool: Vec<usize> = (0..data.len()).collect();

    let mut labeler = Labeler::new(&data, Metric::D2h);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pick = two_stage_optimize(
        &mut labeler,
        &pool,
        None,
        &BudgetPolicy::light(),
        NbParams::default(),
        &mut rng,
    )?;

    let stats = GoalStats::of_pool(&data, &pool, Metric::D2h)?;
    println!("picked row {} after {} labels", pick.row, pick.labels_spent);
    for &g in &data.y {
        println!("  {:<6} {}", data.name(g), data.rows[pick.row].cells[g]);
    }
    println!("d2h {:.3}  win {:.0}", pick.d2h, stats.win(pick.d2h)?);
    println!("elite cohort: {:?}", pick.state.best.rows());
    Ok(())
}
