//! Generate the synthetic benchmark: 23 line charts with an exact gold
//! standard, covering all four style variants (black-and-white, legend inside
//! the plot, legend outside, gridlines).
//!
//! ```bash
//! cargo run --example generate_dataset
//! ```

use chartgrid::dataset::{
    build_dataset, render_chart, save_gold, style_coverage, DatasetConfig, GoldDataset,
    StyleVariant, GOLD_SCHEMA_VERSION,
};

fn main() -> chartgrid::Result<()> {
    let out = std::path::Path::new("target/example-output/dataset");
    std::fs::create_dir_all(out)?;

    let config = DatasetConfig::default();
    let seed = 1;
    let charts = build_dataset(&config, seed)?;

    println!("built {} charts, {} points per series, seed {seed}", charts.len(), config.n_points);
    println!("all style variants covered: {}", style_coverage(&charts));
    for gt in &charts {
        let (image, geometry) = render_chart(gt)?;
        image.save_png(&out.join(format!("{}.png", gt.id)))?;
        println!(
            "  {}  {:>4}x{:<4}  {:?}  {} series  plot=({:.0},{:.0})..({:.0},{:.0})  \"{}\"",
            gt.id,
            image.width(),
            image.height(),
            StyleVariant::classify(&gt.style),
            gt.series.len(),
            geometry.left,
            geometry.top,
            geometry.right,
            geometry.bottom,
            gt.title,
        );
    }

    let gold =
        GoldDataset { dataset_version: GOLD_SCHEMA_VERSION.into(), seed, charts };
    let gold_path = out.join("gold.json");
    save_gold(&gold_path, &gold)?;
    println!("gold standard -> {}", gold_path.display());
    println!("images        -> {}", out.display());
    Ok(())
}
