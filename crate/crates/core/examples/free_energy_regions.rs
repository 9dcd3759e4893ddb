//! `ψ(e, β₂)` and `ψ(β₁, s)` across their U-shaped bipodal regions: the
//! uniform branch outside, the affine branch inside, and the conjugate
//! densities.
//!
//! ```text
//! cargo run --example free_energy_regions
//! ```

use digraph_pstar::Model;

fn main() -> digraph_pstar::Result<()> {
    let model = Model::new(2)?;
    let tol = model.settings().region_tol;

    let beta2 = 3.0;
    let slice = model.u_slice_beta2(beta2)?;
    let cp = slice.curve.expect("beta2 above the critical value");
    println!("beta2 = {beta2}: U_e = ({:.6}, {:.6}), slope inside = {:.6}", cp.x1, cp.x2, -cp.beta1);
    println!("{:>6} {:>9} {:>14} {:>12} {:>12}", "e", "region", "psi(e,beta2)", "dpsi/de", "star dens");
    for k in 0..=10 {
        let e = 0.05 + 0.09 * k as f64;
        println!(
            "{:>6.2} {:>9} {:>14.10} {:>12.6} {:>12.8}",
            e,
            model.classify_e_in(e, beta2, &slice, tol).as_str(),
            model.free_energy_e_in(e, beta2, &slice),
            model.free_energy_e_slope_in(e, beta2, &slice),
            model.star_density_in(e, &slice),
        );
    }

    let beta1 = -3.0;
    let slice = model.u_slice_beta1(beta1)?;
    println!();
    println!("beta1 = {beta1}");
    println!("{:>6} {:>9} {:>14} {:>12}", "s", "region", "psi(beta1,s)", "edge dens");
    for k in 0..=9 {
        let s = 0.1 * k as f64 + 0.05;
        println!(
            "{:>6.2} {:>9} {:>14.10} {:>12.8}",
            s,
            model.classify_s_in(beta1, s, &slice, tol).as_str(),
            model.free_energy_s_in(beta1, s, &slice),
            model.edge_density_in(s, &slice),
        );
    }
    Ok(())
}
