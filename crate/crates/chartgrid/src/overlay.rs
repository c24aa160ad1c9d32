//! Spatial-priming preprocessor: composite a semi-transparent coordinate grid
//! onto a chart image before it is shown to a model.
//!
//! The grid spans the whole image and partitions each axis into
//! `cells_per_axis` cells, so the default 50 yields 2500 cells. Interior lines
//! only: the image border itself is not drawn over. A pixel lying on both a
//! vertical and a horizontal line is blended once, so every grid pixel ends up
//! at exactly `round((1 - opacity) * base + opacity * color)` per channel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{RasterImage, Rgb};

/// Grid overlay parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(default = "default_cells")]
    pub cells_per_axis: u32,
    #[serde(default = "default_opacity")]
    pub opacity: f64,
    #[serde(default = "default_color")]
    pub color: Rgb,
    #[serde(default = "default_thickness")]
    pub thickness_px: u32,
}

fn default_cells() -> u32 {
    50
}

fn default_opacity() -> f64 {
    0.20
}

fn default_color() -> Rgb {
    [0, 0, 0]
}

fn default_thickness() -> u32 {
    1
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            cells_per_axis: default_cells(),
            opacity: default_opacity(),
            color: default_color(),
            thickness_px: default_thickness(),
        }
    }
}

impl GridConfig {
    /// Same parameters at a different grid density.
    pub fn with_cells(&self, cells_per_axis: u32) -> Self {
        Self { cells_per_axis, ..self.clone() }
    }

    /// Validates the config against a concrete image size.
    pub fn validate_for(&self, width: u32, height: u32) -> Result<()> {
        let min_dim = width.min(height);
        if self.cells_per_axis < 2 || self.cells_per_axis > min_dim / 2 {
            return Err(Error::Config(format!(
                "grid.cells_per_axis: {} outside 2..={} for a {}x{} image",
                self.cells_per_axis,
                min_dim / 2,
                width,
                height
            )));
        }
        if !(self.opacity > 0.0 && self.opacity <= 1.0) {
            return Err(Error::Config(format!(
                "grid.opacity: {} outside (0, 1]",
                self.opacity
            )));
        }
        if self.thickness_px == 0 {
            return Err(Error::Config("grid.thickness_px: must be at least 1".into()));
        }
        Ok(())
    }
}

/// Interior grid-line positions for one axis: `cells - 1` values
/// `round(i * dim_px / cells)`, strictly increasing, splitting the axis into
/// exactly `cells` cells.
pub fn grid_line_positions(dim_px: u32, cells: u32) -> Result<Vec<u32>> {
    if cells < 2 || dim_px <= cells {
        return Err(Error::Config(format!(
            "grid lines need dim_px > cells >= 2, got dim_px={dim_px} cells={cells}"
        )));
    }
    let positions = (1..cells)
        .map(|i| {
            // round-half-up of i * dim_px / cells in integer arithmetic
            let num = 2 * u64::from(i) * u64::from(dim_px) + u64::from(cells);
            (num / (2 * u64::from(cells))) as u32
        })
        .collect();
    Ok(positions)
}

/// Returns a copy of `image` with the grid composited on. Non-grid pixels are
/// bit-identical to the input; the input itself is not touched.
pub fn apply_grid(image: &RasterImage, cfg: &GridConfig) -> Result<RasterImage> {
    cfg.validate_for(image.width(), image.height())?;

    let cols = line_pixels(image.width(), cfg)?;
    let rows = line_pixels(image.height(), cfg)?;

    let mut out = image.clone();
    for &y in &rows {
        for x in 0..image.width() {
            out.set(x, y, blend(image.get(x, y), cfg.color, cfg.opacity));
        }
    }
    let row_set: std::collections::HashSet<u32> = rows.iter().copied().collect();
    for &x in &cols {
        for y in 0..image.height() {
            if !row_set.contains(&y) {
                out.set(x, y, blend(image.get(x, y), cfg.color, cfg.opacity));
            }
        }
    }
    Ok(out)
}

/// All pixel rows (or columns) covered by the grid lines along one axis,
/// accounting for line thickness. A line of thickness t covers
/// `pos - (t-1)/2 ..= pos + t/2`, clamped to the image.
fn line_pixels(dim_px: u32, cfg: &GridConfig) -> Result<Vec<u32>> {
    let centers = grid_line_positions(dim_px, cfg.cells_per_axis)?;
    let t = cfg.thickness_px as i64;
    let mut set = std::collections::BTreeSet::new();
    for &c in &centers {
        let lo = c as i64 - (t - 1) / 2;
        let hi = c as i64 + t / 2;
        for p in lo..=hi {
            if p >= 0 && (p as u32) < dim_px {
                set.insert(p as u32);
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Alpha blend with round-half-up per channel, for bit-exact golden tests.
#[inline]
fn blend(base: Rgb, color: Rgb, opacity: f64) -> Rgb {
    let mut out = [0u8; 3];
    for ch in 0..3 {
        let v = (1.0 - opacity) * f64::from(base[ch]) + opacity * f64::from(color[ch]);
        out[ch] = (v + 0.5).floor().clamp(0.0, 255.0) as u8;
    }
    out
}

/// One overlaid image per density, each equal to `apply_grid` at that density.
/// Every density is validated up front; an invalid one fails the whole sweep
/// with no partial output.
pub fn sweep_grids(
    image: &RasterImage,
    densities: &[u32],
    cfg: &GridConfig,
) -> Result<Vec<(u32, RasterImage)>> {
    for &d in densities {
        cfg.with_cells(d)
            .validate_for(image.width(), image.height())
            .map_err(|e| Error::Config(format!("density {d}: {e}")))?;
    }
    densities
        .iter()
        .map(|&d| apply_grid(image, &cfg.with_cells(d)).map(|img| (d, img)))
        .collect()
}
