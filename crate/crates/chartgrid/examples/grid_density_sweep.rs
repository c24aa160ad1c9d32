//! Compare grid densities on one chart: 25x25 vs 50x50 vs 100x100, the
//! candidate values for tuning the preprocessor.
//!
//! ```bash
//! cargo run --example grid_density_sweep
//! ```

use chartgrid::dataset::{build_dataset, render_chart, DatasetConfig};
use chartgrid::overlay::{sweep_grids, GridConfig};

fn main() -> chartgrid::Result<()> {
    let out = std::path::Path::new("target/example-output/sweep");
    std::fs::create_dir_all(out)?;

    let charts = build_dataset(&DatasetConfig { count: 4, ..Default::default() }, 2)?;
    let gt = &charts[1];
    let (image, _) = render_chart(gt)?;

    let results = sweep_grids(&image, &[25, 50, 100], &GridConfig::default())?;
    for (density, overlaid) in &results {
        let path = out.join(format!("grid-{density}x{density}.png"));
        overlaid.save_png(&path)?;
        println!("{density:>3}x{density:<3} -> {} ({} cells)", path.display(), density * density);
    }
    Ok(())
}
