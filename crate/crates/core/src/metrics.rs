//! Quantitative checks behind the qualitative filtering claims: fidelity,
//! saturation retention, novel-color creation and edge preservation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::imgcore::{color_distance, Image, Region};

/// Flat report of the metrics for one image (optionally against a
/// reference), plus per-region statistics when region metadata is supplied.
#[derive(Debug, Clone)]
pub struct MetricReport {
    /// `None` without a reference; `f64::INFINITY` encodes the exact-match
    /// sentinel, rendered as `exact`.
    pub psnr_db: Option<f64>,
    pub mean_saturation: f64,
    /// `None` without a reference image to take the palette from.
    pub novel_color_fraction: Option<f64>,
    /// `None` without both a reference and an edge mask.
    pub edge_contrast_retention: Option<f64>,
    pub region_scores: Vec<RegionScore>,
}

/// Per-region statistics keyed by challenge metadata.
#[derive(Debug, Clone)]
pub struct RegionScore {
    pub name: String,
    pub mean_saturation: f64,
    /// Root-mean-square channel deviation from the region mean; a smoothness
    /// measure (0 for a perfectly flat region).
    pub color_stddev: f64,
    pub psnr_db: Option<f64>,
}

/// Tolerance used by the CLI and the sweep CSV for novel-color counting.
pub const DEFAULT_NOVEL_TOLERANCE: f64 = 25.0;

/// Peak signal-to-noise ratio in dB, with MSE over all channels. Identical
/// images yield the infinite sentinel.
pub fn psnr(test: &Image, reference: &Image) -> Result<f64> {
    if test.width() != reference.width() || test.height() != reference.height() {
        return Err(Error::DimensionMismatch(format!(
            "psnr: {}x{} vs {}x{}",
            test.width(),
            test.height(),
            reference.width(),
            reference.height()
        )));
    }
    let mut se = 0.0f64;
    for (a, b) in test.pixels().iter().zip(reference.pixels()) {
        for c in 0..3 {
            let d = a[c] - b[c];
            se += d * d;
        }
    }
    let mse = se / (test.pixel_count() as f64 * 3.0);
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Renders a PSNR value, spelling the infinite sentinel as `exact`.
pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "exact".to_string()
    } else {
        format!("{db:.4}")
    }
}

fn saturation(p: [f64; 3]) -> f64 {
    let max = p[0].max(p[1]).max(p[2]);
    let min = p[0].min(p[1]).min(p[2]);
    if max <= 0.0 {
        0.0
    } else {
        (max - min) / max
    }
}

/// Mean HSV saturation over all pixels: `(max - min) / max`, zero for black.
pub fn mean_saturation(img: &Image) -> f64 {
    img.pixels().iter().map(|&p| saturation(p)).sum::<f64>() / img.pixel_count() as f64
}

// Grid-bucketed color lookup: any color within `tolerance` of a query lands
// in one of the 27 cells around the query's cell, since cell edges are at
// least as long as the tolerance.
struct PaletteIndex {
    cell: f64,
    buckets: HashMap<(i64, i64, i64), Vec<[f64; 3]>>,
}

impl PaletteIndex {
    fn build(img: &Image, tolerance: f64) -> Self {
        let cell = tolerance.max(1.0);
        let mut buckets: HashMap<(i64, i64, i64), Vec<[f64; 3]>> = HashMap::new();
        for &p in img.pixels() {
            let key = (
                (p[0] / cell).floor() as i64,
                (p[1] / cell).floor() as i64,
                (p[2] / cell).floor() as i64,
            );
            buckets.entry(key).or_default().push(p);
        }
        PaletteIndex { cell, buckets }
    }

    fn any_within(&self, p: [f64; 3], tolerance: f64) -> bool {
        let kx = (p[0] / self.cell).floor() as i64;
        let ky = (p[1] / self.cell).floor() as i64;
        let kz = (p[2] / self.cell).floor() as i64;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(colors) = self.buckets.get(&(kx + dx, ky + dy, kz + dz)) {
                        if colors.iter().any(|&c| color_distance(c, p) <= tolerance) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Fraction of output pixels farther than `tolerance` from every color in
/// the input image.
pub fn novel_color_fraction(input: &Image, output: &Image, tolerance: f64) -> Result<f64> {
    if input.width() != output.width() || input.height() != output.height() {
        return Err(Error::DimensionMismatch(format!(
            "novel-color: {}x{} vs {}x{}",
            output.width(),
            output.height(),
            input.width(),
            input.height()
        )));
    }
    if tolerance < 0.0 {
        return Err(Error::Param(format!("tolerance must be >= 0, got {tolerance}")));
    }
    let index = PaletteIndex::build(input, tolerance);
    let novel = output
        .pixels()
        .iter()
        .filter(|&&p| !index.any_within(p, tolerance))
        .count();
    Ok(novel as f64 / output.pixel_count() as f64)
}

/// Pixel pairs straddling known edges.
pub type EdgePairs = Vec<((usize, usize), (usize, usize))>;

/// Mean cross-edge color distance in the output divided by the same in the
/// input; 1 means the edges kept their full contrast.
pub fn edge_contrast_retention(input: &Image, output: &Image, pairs: &EdgePairs) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyMask);
    }
    let mean_contrast = |img: &Image| -> f64 {
        pairs
            .iter()
            .map(|&((ax, ay), (bx, by))| color_distance(img.get(ax, ay), img.get(bx, by)))
            .sum::<f64>()
            / pairs.len() as f64
    };
    let input_contrast = mean_contrast(input);
    if input_contrast == 0.0 {
        return Err(Error::Param("edge mask has zero contrast in the input".into()));
    }
    Ok(mean_contrast(output) / input_contrast)
}

/// Pairs straddling a vertical step edge between columns `x` and `x + 1`.
pub fn vertical_step_pairs(x: usize, height: usize) -> EdgePairs {
    (0..height).map(|y| ((x, y), (x + 1, y))).collect()
}

/// Cross-edge pairs from challenge metadata: pixels flanking the two black
/// separator columns plus the frames of the four noisy rectangles.
pub fn challenge_edge_pairs(regions: &[Region], width: usize, height: usize) -> EdgePairs {
    let mut pairs = EdgePairs::new();
    for region in regions {
        let r = region.rect;
        match region.name.as_str() {
            // Vertical black lines: pair the pixels just left and right.
            "separator" | "column_separator" => {
                if r.x0 > 0 && r.x1 + 1 < width {
                    for y in r.y0..=r.y1 {
                        pairs.push(((r.x0 - 1, y), (r.x1 + 1, y)));
                    }
                }
            }
            // Noisy rectangles: pair across the outer boundary.
            name if name.starts_with("noisy_") => {
                for x in r.x0..=r.x1 {
                    if r.y0 > 0 {
                        pairs.push(((x, r.y0 - 1), (x, r.y0)));
                    }
                    if r.y1 + 1 < height {
                        pairs.push(((x, r.y1 + 1), (x, r.y1)));
                    }
                }
                for y in r.y0..=r.y1 {
                    if r.x0 > 0 {
                        pairs.push(((r.x0 - 1, y), (r.x0, y)));
                    }
                    if r.x1 + 1 < width {
                        pairs.push(((r.x1 + 1, y), (r.x1, y)));
                    }
                }
            }
            _ => {}
        }
    }
    pairs
}

/// Assembles the full report. `reference` enables PSNR, novel-color counting
/// and (with `regions`) edge retention; `regions` adds per-region scores.
pub fn metric_report(
    test: &Image,
    reference: Option<&Image>,
    regions: Option<&[Region]>,
    novel_tolerance: f64,
) -> Result<MetricReport> {
    let psnr_db = reference.map(|r| psnr(test, r)).transpose()?;
    let novel = reference
        .map(|r| novel_color_fraction(r, test, novel_tolerance))
        .transpose()?;
    let edge = match (reference, regions) {
        (Some(r), Some(regs)) => {
            let pairs = challenge_edge_pairs(regs, test.width(), test.height());
            if pairs.is_empty() {
                None
            } else {
                Some(edge_contrast_retention(r, test, &pairs)?)
            }
        }
        _ => None,
    };

    let mut region_scores = Vec::new();
    if let Some(regs) = regions {
        for region in regs {
            let r = region.rect;
            if r.x1 >= test.width() || r.y1 >= test.height() {
                return Err(Error::DimensionMismatch(format!(
                    "region {} exceeds image bounds",
                    region.name
                )));
            }
            let n = r.area() as f64;
            let mut sat = 0.0;
            let mut mean = [0.0f64; 3];
            for (x, y) in r.iter() {
                let p = test.get(x, y);
                sat += saturation(p);
                for c in 0..3 {
                    mean[c] += p[c];
                }
            }
            for c in mean.iter_mut() {
                *c /= n;
            }
            let mut var = 0.0;
            for (x, y) in r.iter() {
                let p = test.get(x, y);
                for c in 0..3 {
                    var += (p[c] - mean[c]) * (p[c] - mean[c]);
                }
            }
            let rmse_psnr = reference
                .map(|reference| {
                    let mut se = 0.0;
                    for (x, y) in r.iter() {
                        let a = test.get(x, y);
                        let b = reference.get(x, y);
                        for c in 0..3 {
                            se += (a[c] - b[c]) * (a[c] - b[c]);
                        }
                    }
                    let mse = se / (n * 3.0);
                    if mse == 0.0 {
                        f64::INFINITY
                    } else {
                        10.0 * (255.0 * 255.0 / mse).log10()
                    }
                });
            region_scores.push(RegionScore {
                name: region.name.clone(),
                mean_saturation: sat / n,
                color_stddev: (var / (n * 3.0)).sqrt(),
                psnr_db: rmse_psnr,
            });
        }
    }

    Ok(MetricReport {
        psnr_db,
        mean_saturation: mean_saturation(test),
        novel_color_fraction: novel,
        edge_contrast_retention: edge,
        region_scores,
    })
}

impl MetricReport {
    /// Flat `key = value` text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(p) = self.psnr_db {
            out.push_str(&format!("psnr_db = {}\n", format_psnr(p)));
        }
        out.push_str(&format!("mean_saturation = {:.6}\n", self.mean_saturation));
        if let Some(f) = self.novel_color_fraction {
            out.push_str(&format!("novel_color_fraction = {f:.6}\n"));
        }
        if let Some(e) = self.edge_contrast_retention {
            out.push_str(&format!("edge_contrast_retention = {e:.6}\n"));
        }
        for r in &self.region_scores {
            out.push_str(&format!("region.{}.mean_saturation = {:.6}\n", r.name, r.mean_saturation));
            out.push_str(&format!("region.{}.color_stddev = {:.6}\n", r.name, r.color_stddev));
            if let Some(p) = r.psnr_db {
                out.push_str(&format!("region.{}.psnr_db = {}\n", r.name, format_psnr(p)));
            }
        }
        out
    }

    /// Header and row for CSV aggregation.
    pub fn csv_header() -> Vec<String> {
        [
            "psnr_db",
            "mean_saturation",
            "novel_color_fraction",
            "edge_contrast_retention",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.psnr_db.map(format_psnr).unwrap_or_default(),
            format!("{:.6}", self.mean_saturation),
            self.novel_color_fraction
                .map(|f| format!("{f:.6}"))
                .unwrap_or_default(),
            self.edge_contrast_retention
                .map(|e| format!("{e:.6}"))
                .unwrap_or_default(),
        ]
    }
}
