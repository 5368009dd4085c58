//! How many random samples find a top-p% configuration, and how few a
//! pivot-style search needs.
//!
//!     cargo run --example sample_size
use ezr::active::{confidence_of, pivot_query_estimate, samples_for_confidence, samples_required};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>6} {:>8} {:>8}", "conf", "p", "samples", "pivot");
    for (c, p) in [(0.95, 0.05), (0.99, 0.01), (0.999, 0.001)] {
        let n = samples_required(c, p)?;
        println!("{c:>6} {p:>6} {n:>8} {:>8}", pivot_query_estimate(n));
    }
    let n = samples_for_confidence(0.95, 0.05)?;
    println!(
        "\n{n} samples reach confidence {:.4} at p = 0.05",
        confidence_of(n, 0.05)
    );
    Ok(())
}
