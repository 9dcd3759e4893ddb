//! Trace `β₂ = q(β₁)` for p = 3 together with the two tied maximizers and
//! their sensitivities, then invert the curve at a few `β₂`.
//!
//! ```text
//! cargo run --example transition_curve
//! ```

use digraph_pstar::Model;

fn main() -> digraph_pstar::Result<()> {
    let model = Model::new(3)?;
    let c = model.critical_point();
    println!("critical point: beta1 = {:.6}, beta2 = {:.6}", c.beta1_c, c.beta2_c);
    println!("{:>9} {:>10} {:>10} {:>10} {:>10} {:>11}", "beta1", "beta2", "x1", "x2", "q'", "dx1/dbeta1");
    for k in 1..=10 {
        let beta1 = c.beta1_c - 0.5 * k as f64;
        let cp = model.curve_point(beta1)?;
        println!(
            "{:>9.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>11.5}",
            cp.beta1, cp.beta2, cp.x1, cp.x2, cp.qprime, cp.dx1_dbeta1
        );
    }

    // inside the guard band around the critical point the solver refuses;
    // the lenient variant reports the degenerate endpoint instead
    let near = c.beta1_c - 1e-9;
    println!("strict solve at beta1_c - 1e-9: {}", model.curve_point(near).unwrap_err());
    let cp = model.curve_point_or_critical(near)?;
    println!("lenient solve: x1 = x2 = {:.6}, degenerate = {}", cp.x1, cp.degenerate);

    for beta2 in [1.5, 3.0, 6.0] {
        println!("q^-1({beta2}) = {:.10}", model.q_inverse(beta2)?);
    }
    Ok(())
}
