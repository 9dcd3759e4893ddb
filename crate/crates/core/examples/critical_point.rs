//! Critical endpoint of the transition curve for a range of star orders.
//!
//! ```text
//! cargo run --example critical_point
//! ```

use digraph_pstar::Model;

fn main() -> digraph_pstar::Result<()> {
    println!("{:>2} {:>12} {:>12} {:>10} {:>10}", "p", "beta1_c", "beta2_c", "e_c", "s_c");
    for p in 2..=8 {
        let c = Model::new(p)?.critical_point();
        println!("{:>2} {:>12.8} {:>12.8} {:>10.6} {:>10.6}", p, c.beta1_c, c.beta2_c, c.e_c, c.s_c);
    }
    Ok(())
}
