//! The doubly tilted free energy `ψ(β₁, β₂)` and its maximizers, crossing
//! the transition curve where the maximizer jumps.
//!
//! ```text
//! cargo run --example ergm_free_energy
//! ```

use digraph_pstar::Model;

fn main() -> digraph_pstar::Result<()> {
    let model = Model::new(2)?;
    let beta2 = 3.0;
    for k in 0..=8 {
        let beta1 = -3.4 + 0.1 * k as f64;
        let sol = model.ergm_free_energy(beta1, beta2)?;
        let argmax: Vec<String> = sol.argmax.iter().map(|x| format!("{x:.6}")).collect();
        println!("beta1 = {beta1:>5.2}: psi = {:.10}, argmax = [{}]", sol.value, argmax.join(", "));
    }
    let on_curve = model.ergm_free_energy(-beta2, beta2)?;
    println!("on the curve the two maximizers tie: {:?}", on_curve.argmax);
    Ok(())
}
