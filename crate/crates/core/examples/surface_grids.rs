//! Write the contour-plot grids: `ψ(e, s)`, `∂ψ/∂e` over `(e, β₂)`,
//! `∂ψ/∂s` over `(β₁, s)` and the region tags, as CSV and JSON files.
//!
//! ```text
//! cargo run --release --example surface_grids -- /tmp/pstar-grids
//! ```

use std::path::PathBuf;

use digraph_pstar::grid::{GridSpec, Quantity};
use digraph_pstar::Model;

fn main() -> digraph_pstar::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "grids".into()));
    std::fs::create_dir_all(&dir)?;
    let model = Model::new(2)?;
    for q in [Quantity::PsiEs, Quantity::DpsiDe, Quantity::DpsiDs, Quantity::RegionTag] {
        let grid = model.surface_grid(&GridSpec::new(q, 64))?;
        let stem = format!("{}_{}", q, grid.plane.as_str().replace('-', "_"));
        std::fs::write(dir.join(format!("{stem}.csv")), grid.to_csv())?;
        std::fs::write(dir.join(format!("{stem}.json")), grid.to_json())?;
        let finite = grid.values.iter().filter(|v| v.is_finite()).count();
        println!("{stem}: {}x{} cells, {finite} finite", grid.axis1.len(), grid.axis2.len());
    }
    println!("wrote grids to {}", dir.display());
    Ok(())
}
