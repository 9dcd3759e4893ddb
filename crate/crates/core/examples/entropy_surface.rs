//! Limiting entropy `ψ(e, s)` and its bipodal optimizer at a few points,
//! comparing the general chord solver with the p = 2 closed form.
//!
//! ```text
//! cargo run --example entropy_surface
//! ```

use digraph_pstar::entropy::entropy_p2_closed;
use digraph_pstar::{Model, SolveMethod};

fn main() -> digraph_pstar::Result<()> {
    let p2 = Model::new(2)?;
    println!("p = 2");
    for (e, s) in [(0.5, 0.3), (0.4, 0.28), (0.2, 0.1), (0.7, 0.5)] {
        let general = p2.entropy_with(e, s, SolveMethod::General)?;
        let closed = entropy_p2_closed(e, s)?;
        let prof = p2.solve_bipodal(e, s)?;
        println!(
            "  psi({e}, {s}) = {general:.12} (closed form {closed:.12}); x1 = {:.5}, x2 = {:.5}, lambda = {:.5}",
            prof.x1, prof.x2, prof.lambda
        );
    }

    let p3 = Model::new(3)?;
    println!("p = 3");
    for (e, s) in [(0.5, 0.2), (0.3, 0.1), (0.8, 0.6)] {
        let prof = p3.solve_bipodal(e, s)?;
        let (de, ds) = p3.entropy_gradient(e, s)?;
        let (re, rs) = prof.residuals(3, e, s);
        println!(
            "  psi({e}, {s}) = {:.10}; grad = ({de:.5}, {ds:.5}); residuals ({re:.1e}, {rs:.1e})",
            p3.entropy(e, s)?
        );
    }

    // boundary and outside values
    println!("psi on s = e^2: {:.10}", p2.entropy(0.3, 0.09)?);
    println!("psi on s = e:   {:.10}", p2.entropy(0.3, 0.3)?);
    println!("psi outside:    {}", p2.entropy(0.3, 0.5)?);
    println!("rate J(0.5, 0.3) = {:.10}", p2.rate_function(0.5, 0.3)?);
    Ok(())
}
