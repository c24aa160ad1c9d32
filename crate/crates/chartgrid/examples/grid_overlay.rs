//! Apply the spatial-priming preprocessor: a semi-transparent 50x50
//! coordinate grid composited over a chart image before model inference.
//!
//! ```bash
//! cargo run --example grid_overlay
//! ```

use chartgrid::dataset::{build_dataset, render_chart, DatasetConfig};
use chartgrid::overlay::{apply_grid, grid_line_positions, GridConfig};

fn main() -> chartgrid::Result<()> {
    let out = std::path::Path::new("target/example-output/overlay");
    std::fs::create_dir_all(out)?;

    let charts = build_dataset(&DatasetConfig { count: 4, ..Default::default() }, 1)?;
    let gt = &charts[0];
    let (image, _) = render_chart(gt)?;
    image.save_png(&out.join("original.png"))?;

    let cfg = GridConfig::default();
    let overlaid = apply_grid(&image, &cfg)?;
    overlaid.save_png(&out.join("grid-50x50.png"))?;

    let cols = grid_line_positions(image.width(), cfg.cells_per_axis)?;
    let rows = grid_line_positions(image.height(), cfg.cells_per_axis)?;
    println!("chart {} ({}x{})", gt.id, image.width(), image.height());
    println!(
        "grid: {} cells per axis = {} interior vertical + {} horizontal lines = {} cells",
        cfg.cells_per_axis,
        cols.len(),
        rows.len(),
        (cols.len() + 1) * (rows.len() + 1),
    );
    println!(
        "opacity {}: white pixels on a line become ({}, {}, {})",
        cfg.opacity,
        204,
        204,
        204
    );
    println!("wrote {} and {}", out.join("original.png").display(), out.join("grid-50x50.png").display());
    Ok(())
}
