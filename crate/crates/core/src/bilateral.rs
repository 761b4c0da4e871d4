//! Standard bilateral filtering and the shortest-path variants.
//!
//! The standard path weights every window neighbour by a spatial Gaussian
//! times a range Gaussian. The edge-aware path replaces that double
//! weighting with a single Gaussian of the shortest-path distance on the
//! 4-connected image graph, where edges are weighted by the Euclidean
//! distance between pixel colors; any discontinuity between two pixels then
//! shows up in the path cost. Distances come from a per-pixel Dijkstra
//! search restricted to a spatial window and cut off at `tau_r = 3 sigma_r`
//! (paths are settled in increasing cost order, so the search can stop at
//! the first settled cost beyond the cutoff). A minimax flavour replaces the
//! path sum with the maximum single edge weight along the path, which kills
//! gradients while preserving solid regions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imgcore::{color_distance, Image, PixelRect};
use crate::report::{FilterReport, FilterStats};

/// How path cost accumulates along the 4-connected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMetric {
    /// Sum of edge weights: ordinary shortest path.
    SumPath,
    /// Maximum edge weight along the path: minimax / widest-path cost.
    MaxPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilateralConfig {
    /// Spatial std-dev; only the standard mode weights by it.
    pub sigma_s: f64,
    /// Range std-dev. In edge-aware mode this is the combined spatial-range
    /// parameter applied to path length.
    pub sigma_r: f64,
    /// Window half-width. A work bound in edge-aware mode, not a weight.
    pub spatial_cutoff: usize,
    /// Number of passes (edge-aware mode).
    pub iterations: u32,
    pub metric: PathMetric,
}

/// Default edge-aware window half-width; bounds worst-case work on flat
/// regions where every path cost is zero.
pub const DEFAULT_EDGE_AWARE_CUTOFF: usize = 20;

impl BilateralConfig {
    /// Standard filter parameters; the window half-width defaults to
    /// `ceil(3 sigma_s)`.
    pub fn standard(sigma_s: f64, sigma_r: f64) -> Self {
        BilateralConfig {
            sigma_s,
            sigma_r,
            spatial_cutoff: (3.0 * sigma_s).ceil().max(1.0) as usize,
            iterations: 1,
            metric: PathMetric::SumPath,
        }
    }

    /// Edge-aware filter parameters with the documented default cutoff.
    pub fn edge_aware(sigma_r: f64) -> Self {
        BilateralConfig {
            sigma_s: f64::INFINITY,
            sigma_r,
            spatial_cutoff: DEFAULT_EDGE_AWARE_CUTOFF,
            iterations: 1,
            metric: PathMetric::SumPath,
        }
    }

    fn validate_standard(&self) -> Result<()> {
        if !(self.sigma_s > 0.0) {
            return Err(Error::Param(format!("sigma-s must be > 0, got {}", self.sigma_s)));
        }
        self.validate_common()
    }

    fn validate_edge_aware(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::Param("iters must be >= 1".into()));
        }
        self.validate_common()
    }

    fn validate_common(&self) -> Result<()> {
        if !(self.sigma_r > 0.0) {
            return Err(Error::Param(format!("sigma-r must be > 0, got {}", self.sigma_r)));
        }
        if self.spatial_cutoff < 1 {
            return Err(Error::Param("cutoff must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-pixel path costs from one source pixel, restricted to a window.
/// Pixels the cutoff search never settled are infinite.
#[derive(Debug, Clone)]
pub struct DistanceMap {
    pub origin: (usize, usize),
    pub window: PixelRect,
    cost: Vec<f64>,
    pub expanded_count: usize,
}

impl DistanceMap {
    #[inline]
    fn idx(&self, x: usize, y: usize) -> usize {
        (y - self.window.y0) * self.window.width() + (x - self.window.x0)
    }

    /// Path cost to `(x, y)`, infinite outside the window or beyond the
    /// termination cutoff.
    pub fn cost_at(&self, x: usize, y: usize) -> f64 {
        if self.window.contains(x, y) {
            self.cost[self.idx(x, y)]
        } else {
            f64::INFINITY
        }
    }

    /// Iterates `((x, y), cost)` over the finite-cost pixels.
    pub fn finite(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.window
            .iter()
            .map(move |(x, y)| ((x, y), self.cost[self.idx(x, y)]))
            .filter(|(_, c)| c.is_finite())
    }
}

// Reverse-ordered heap entry so BinaryHeap pops the minimum cost. Costs are
// finite (colors are finite), so the total order below never sees NaN.
#[derive(Clone, Copy, PartialEq)]
struct MinCost(f64, u32);

impl Eq for MinCost {}

impl PartialOrd for MinCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MinCost {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.partial_cmp(&self.0).expect("path costs are never NaN")
    }
}

/// Dijkstra over the 4-connected subgraph inside the window of half-width
/// `spatial_cutoff` around `origin`, terminating once the next settled cost
/// would exceed `tau_r = 3 sigma_r`.
pub fn geodesic_distances(
    img: &Image,
    origin: (usize, usize),
    sigma_r: f64,
    spatial_cutoff: usize,
    metric: PathMetric,
) -> DistanceMap {
    assert!(
        img.contains(origin.0, origin.1),
        "origin {origin:?} outside {}x{} image",
        img.width(),
        img.height()
    );
    let tau_r = 3.0 * sigma_r;
    let window = PixelRect::window(origin.0, origin.1, spatial_cutoff, img.width(), img.height());
    let (ww, wh) = (window.width(), window.height());
    let mut cost = vec![f64::INFINITY; ww * wh];
    let mut settled = vec![false; ww * wh];
    let mut heap = BinaryHeap::with_capacity(ww * wh / 4 + 8);
    let mut expanded = 0usize;

    let origin_idx = (origin.1 - window.y0) * ww + (origin.0 - window.x0);
    cost[origin_idx] = 0.0;
    heap.push(MinCost(0.0, origin_idx as u32));

    while let Some(MinCost(c, idx)) = heap.pop() {
        let idx = idx as usize;
        if settled[idx] {
            continue;
        }
        if c > tau_r {
            break;
        }
        settled[idx] = true;
        expanded += 1;

        let x = window.x0 + idx % ww;
        let y = window.y0 + idx / ww;
        let here = img.get(x, y);

        let relax = |nx: usize, ny: usize, cost: &mut Vec<f64>, heap: &mut BinaryHeap<MinCost>| {
            let nidx = (ny - window.y0) * ww + (nx - window.x0);
            if settled[nidx] {
                return;
            }
            let edge = color_distance(here, img.get(nx, ny));
            let next = match metric {
                PathMetric::SumPath => c + edge,
                PathMetric::MaxPath => c.max(edge),
            };
            if next < cost[nidx] {
                cost[nidx] = next;
                heap.push(MinCost(next, nidx as u32));
            }
        };

        if x > window.x0 {
            relax(x - 1, y, &mut cost, &mut heap);
        }
        if x < window.x1 {
            relax(x + 1, y, &mut cost, &mut heap);
        }
        if y > window.y0 {
            relax(x, y - 1, &mut cost, &mut heap);
        }
        if y < window.y1 {
            relax(x, y + 1, &mut cost, &mut heap);
        }
    }

    // Tentative costs of never-settled nodes all exceed tau_r; report them
    // as unreached so the finite set matches an untruncated run filtered at
    // the cutoff.
    for (c, s) in cost.iter_mut().zip(&settled) {
        if !s {
            *c = f64::INFINITY;
        }
    }

    DistanceMap {
        origin,
        window,
        cost,
        expanded_count: expanded,
    }
}

/// Classic bilateral filter: per pixel, the Gaussian-weighted mean over the
/// square window, weight `exp(-|p-s|^2 / 2 sigma_s^2) * exp(-|I_p - I_s|^2 /
/// 2 sigma_r^2)` normalized to one.
pub fn bilateral_standard(img: &Image, config: &BilateralConfig) -> Result<FilterReport> {
    config.validate_standard()?;
    let start = Instant::now();
    let (w, h) = (img.width(), img.height());
    let inv_2ss = 1.0 / (2.0 * config.sigma_s * config.sigma_s);
    let inv_2sr = 1.0 / (2.0 * config.sigma_r * config.sigma_r);
    let cutoff = config.spatial_cutoff;

    let mut out = Image::new(w, h);
    out.pixels_mut()
        .par_chunks_mut(w)
        .enumerate()
        .for_each(|(y, row)| {
            for (x, slot) in row.iter_mut().enumerate() {
                let center = img.get(x, y);
                let win = PixelRect::window(x, y, cutoff, w, h);
                let mut acc = [0.0f64; 3];
                let mut k = 0.0f64;
                for (px, py) in win.iter() {
                    let p = img.get(px, py);
                    let dx = px as f64 - x as f64;
                    let dy = py as f64 - y as f64;
                    let cd = color_distance(p, center);
                    let wgt = (-(dx * dx + dy * dy) * inv_2ss).exp() * (-cd * cd * inv_2sr).exp();
                    k += wgt;
                    for c in 0..3 {
                        acc[c] += wgt * p[c];
                    }
                }
                *slot = [acc[0] / k, acc[1] / k, acc[2] / k];
            }
        });

    Ok(FilterReport {
        image: out,
        elapsed: start.elapsed(),
        stats: FilterStats::Bilateral {
            iterations: 1,
            mean_expanded: None,
        },
    })
}

/// Shortest-path bilateral filter: per pixel, the Gaussian-of-path-cost
/// weighted mean over the pixels reachable within `tau_r`. Repeats for
/// `iterations` passes, each feeding on the previous output.
pub fn bilateral_edge_aware(img: &Image, config: &BilateralConfig) -> Result<FilterReport> {
    config.validate_edge_aware()?;
    let start = Instant::now();
    let (w, h) = (img.width(), img.height());
    let inv_2sr = 1.0 / (2.0 * config.sigma_r * config.sigma_r);

    let mut current = img.clone();
    let mut total_expanded = 0u64;
    for _ in 0..config.iterations {
        let input = current;
        let mut out = Image::new(w, h);
        let expanded: u64 = out
            .pixels_mut()
            .par_chunks_mut(w)
            .enumerate()
            .map(|(y, row)| {
                let mut row_expanded = 0u64;
                for (x, slot) in row.iter_mut().enumerate() {
                    let dm = geodesic_distances(
                        &input,
                        (x, y),
                        config.sigma_r,
                        config.spatial_cutoff,
                        config.metric,
                    );
                    row_expanded += dm.expanded_count as u64;
                    let mut acc = [0.0f64; 3];
                    let mut k = 0.0f64;
                    for ((px, py), cost) in dm.finite() {
                        let wgt = (-cost * cost * inv_2sr).exp();
                        let p = input.get(px, py);
                        k += wgt;
                        for c in 0..3 {
                            acc[c] += wgt * p[c];
                        }
                    }
                    *slot = [acc[0] / k, acc[1] / k, acc[2] / k];
                }
                row_expanded
            })
            .sum();
        total_expanded += expanded;
        current = out;
    }

    let mean_expanded =
        total_expanded as f64 / (w as f64 * h as f64 * config.iterations as f64);
    Ok(FilterReport {
        image: current,
        elapsed: start.elapsed(),
        stats: FilterStats::Bilateral {
            iterations: config.iterations,
            mean_expanded: Some(mean_expanded),
        },
    })
}
