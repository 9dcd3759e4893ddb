//! Exact samples of out-degree vectors conditioned on a density window,
//! compared against the exact conditional law of one row.
//!
//! ```text
//! cargo run --release --example conditioned_sampling
//! ```

use digraph_pstar::oracle::{conditional_row_law, ConditionedSampler};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> digraph_pstar::Result<()> {
    let (n, e, s, delta) = (12, 0.5, 0.3, 0.05);
    let sampler = ConditionedSampler::new(n, 2, e, s, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws: Vec<Vec<u32>> = (0..20_000).map(|_| sampler.sample(&mut rng)).collect();
    for rows in draws.iter().take(5) {
        println!("{rows:?}");
    }

    let mut hist = vec![0usize; n as usize + 1];
    for rows in &draws {
        for &d in rows {
            hist[d as usize] += 1;
        }
    }
    let exact = conditional_row_law(n, 2, e, s, delta)?;
    let total = (draws.len() * n as usize) as f64;
    println!("{:>3} {:>9} {:>9}", "d", "sampled", "exact");
    for (d, count) in hist.iter().enumerate() {
        println!("{d:>3} {:>9.5} {:>9.5}", *count as f64 / total, exact.probabilities[d]);
    }
    Ok(())
}
