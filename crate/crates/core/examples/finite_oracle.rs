//! Exact finite-n window probabilities against the limiting entropy, plus
//! the conditional law of one out-degree at the largest n.
//!
//! ```text
//! cargo run --release --example finite_oracle
//! ```

use digraph_pstar::oracle::{conditional_row_law, exact_joint_law};
use digraph_pstar::Model;

fn main() -> digraph_pstar::Result<()> {
    let (e, s, delta) = (0.5, 0.3, 0.05);
    let psi = Model::new(2)?.entropy(e, s)?;
    println!("psi({e}, {s}) = {psi:.6}");
    for n in [4, 8, 12, 16] {
        let law = exact_joint_law(n, 2)?;
        let psi_n = law.window_log_prob(e, s, delta)?;
        println!(
            "n = {n:>2}: {:>6} lattice points, log total / n^2 = {:.6}, psi_n = {psi_n:.6}, gap = {:.6}",
            law.entries().len(),
            law.log_total() / (n * n) as f64,
            (psi_n - psi).abs()
        );
    }
    let row = conditional_row_law(16, 2, e, s, delta)?;
    println!("conditional out-degree law at n = 16:");
    for (d, q) in row.probabilities.iter().enumerate() {
        println!("  d = {d:>2}  {q:.5}  {}", "#".repeat((q * 200.0).round() as usize));
    }
    Ok(())
}
