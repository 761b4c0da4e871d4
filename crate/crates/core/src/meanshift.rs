//! Mean shift filtering in the joint spatial-range domain.
//!
//! Every pixel seeds a hill climb on the joint kernel density estimate: the
//! state carries a continuous spatial position and a range color, and each
//! step moves both to the kernel-weighted mean of the surrounding window.
//! The pixel is finally painted with the color of the mode its climb reaches.
//!
//! Two optional behaviours modify the plain climb:
//!
//! * **Snap-to-feature** (edge-aware mode): after every step the spatial
//!   component is relocated to the pixel of similar color nearest the
//!   arithmetic spatial mean, preventing means from drifting off non-convex
//!   features (the donut problem) onto whatever lies behind them.
//! * **Path caching**: every pixel a trajectory touches remembers the mode
//!   that trajectory found; later climbs landing on a remembered pixel stop
//!   immediately. This makes the filter order-dependent (runs are row-major)
//!   but substantially faster.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imgcore::{color_distance, Color, Image, PixelRect};
use crate::report::{FilterReport, FilterStats};

#[derive(Debug, Clone, PartialEq)]
pub struct MeanShiftConfig {
    /// Spatial bandwidth in pixels.
    pub h_s: f64,
    /// Range bandwidth in channel units.
    pub h_r: f64,
    /// Snap threshold on the normalized squared color distance.
    pub tau: f64,
    /// Stop once the joint (spatial + range) shift magnitude drops below
    /// this.
    pub convergence_eps: f64,
    pub max_iterations: u32,
    pub edge_aware: bool,
    pub use_cache: bool,
}

impl MeanShiftConfig {
    pub fn new(h_s: f64, h_r: f64) -> Self {
        MeanShiftConfig {
            h_s,
            h_r,
            tau: 0.5,
            convergence_eps: 0.01,
            max_iterations: 100,
            edge_aware: false,
            use_cache: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hs", self.h_s),
            ("hr", self.h_r),
            ("tau", self.tau),
            ("eps", self.convergence_eps),
        ] {
            if !(v > 0.0) {
                return Err(Error::Param(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.max_iterations < 1 {
            return Err(Error::Param("max-iters must be >= 1".into()));
        }
        Ok(())
    }

    /// Window half-width used by both the step and the snap search.
    fn window_half(&self) -> usize {
        (3.0 * self.h_s).ceil().max(1.0) as usize
    }
}

/// Joint 5-D state of an in-flight climb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanShiftPoint {
    /// Continuous pixel coordinates (x, y).
    pub spatial: [f64; 2],
    pub range: Color,
}

impl MeanShiftPoint {
    pub fn at_pixel(img: &Image, x: usize, y: usize) -> Self {
        MeanShiftPoint {
            spatial: [x as f64, y as f64],
            range: img.get(x, y),
        }
    }

    fn nearest_pixel(&self, img: &Image) -> (usize, usize) {
        let x = self.spatial[0].round().clamp(0.0, (img.width() - 1) as f64) as usize;
        let y = self.spatial[1].round().clamp(0.0, (img.height() - 1) as f64) as usize;
        (x, y)
    }

    fn joint_distance(&self, other: &MeanShiftPoint) -> f64 {
        let dx = self.spatial[0] - other.spatial[0];
        let dy = self.spatial[1] - other.spatial[1];
        let dc = color_distance(self.range, other.range);
        (dx * dx + dy * dy + dc * dc).sqrt()
    }
}

/// Found modes keyed by pixel, shared by all climbs of one filter run. A
/// pixel's entry never changes once written.
#[derive(Debug, Clone)]
pub struct ModeCache {
    width: usize,
    modes: Vec<Option<Color>>,
}

impl ModeCache {
    pub fn new(width: usize, height: usize) -> Self {
        ModeCache {
            width,
            modes: vec![None; width * height],
        }
    }

    fn get(&self, x: usize, y: usize) -> Option<Color> {
        self.modes[y * self.width + x]
    }

    fn set(&mut self, x: usize, y: usize, mode: Color) {
        let slot = &mut self.modes[y * self.width + x];
        if slot.is_none() {
            *slot = Some(mode);
        }
    }
}

/// One mean shift step: both components move to the kernel-weighted mean
/// over the window of half-width `3 h_s` around the current spatial
/// position. Weight is a spatial Gaussian times a range Gaussian.
pub fn mean_shift_step(
    img: &Image,
    state: &MeanShiftPoint,
    h_s: f64,
    h_r: f64,
) -> Result<MeanShiftPoint> {
    let half = (3.0 * h_s).ceil().max(1.0) as usize;
    let (cx, cy) = state.nearest_pixel(img);
    let win = PixelRect::window(cx, cy, half, img.width(), img.height());
    let inv_2hs = 1.0 / (2.0 * h_s * h_s);
    let inv_2hr = 1.0 / (2.0 * h_r * h_r);

    let mut k = 0.0f64;
    let mut mean_sp = [0.0f64; 2];
    let mut mean_rg = [0.0f64; 3];
    for (px, py) in win.iter() {
        let p = img.get(px, py);
        let dx = px as f64 - state.spatial[0];
        let dy = py as f64 - state.spatial[1];
        let cd = color_distance(p, state.range);
        let w = (-(dx * dx + dy * dy) * inv_2hs).exp() * (-cd * cd * inv_2hr).exp();
        k += w;
        mean_sp[0] += w * px as f64;
        mean_sp[1] += w * py as f64;
        for c in 0..3 {
            mean_rg[c] += w * p[c];
        }
    }
    if k < 1e-12 {
        return Err(Error::DegenerateWeight(k));
    }
    Ok(MeanShiftPoint {
        spatial: [mean_sp[0] / k, mean_sp[1] / k],
        range: [mean_rg[0] / k, mean_rg[1] / k, mean_rg[2] / k],
    })
}

/// Result of a snap: the chosen pixel and whether the similar-color set was
/// empty (fallback to the best-color pixel in the window).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SnapOutcome {
    pub pixel: (usize, usize),
    pub fallback: bool,
}

/// Relocates the spatial mean to the pixel most compatible with the current
/// range color: among window pixels whose normalized squared color distance
/// `|I_p - range|^2 / h_r^2` is below `tau`, the one spatially nearest the
/// pre-snap mean `mu` (row-major order breaks ties). If no window pixel
/// qualifies, falls back to the window pixel with minimum color distance.
pub fn snap_to_feature(
    img: &Image,
    mean: &MeanShiftPoint,
    h_r: f64,
    tau: f64,
    search_window: PixelRect,
) -> SnapOutcome {
    let mu = mean.spatial;
    let mut best: Option<(usize, usize)> = None;
    let mut best_d = f64::INFINITY;
    let mut fallback_best = (search_window.x0, search_window.y0);
    let mut fallback_d = f64::INFINITY;

    for (px, py) in search_window.iter() {
        let cd = color_distance(img.get(px, py), mean.range);
        if cd < fallback_d {
            fallback_d = cd;
            fallback_best = (px, py);
        }
        if cd * cd / (h_r * h_r) < tau {
            let dx = px as f64 - mu[0];
            let dy = py as f64 - mu[1];
            let d = dx * dx + dy * dy;
            // Strict < keeps the row-major-first pixel on ties.
            if d < best_d {
                best_d = d;
                best = Some((px, py));
            }
        }
    }

    match best {
        Some(pixel) => SnapOutcome {
            pixel,
            fallback: false,
        },
        None => SnapOutcome {
            pixel: fallback_best,
            fallback: true,
        },
    }
}

/// Outcome of one mode search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSearch {
    pub mode: Color,
    /// Number of mean shift steps evaluated (0 on a start-pixel cache hit).
    pub iterations: u32,
    pub cache_hit: bool,
    pub converged: bool,
    pub fallbacks: u32,
}

/// Climbs from `start` to its mode. With caching enabled, any visited pixel
/// that already carries a mode ends the climb with that mode, and the found
/// mode is written back to every pixel the trajectory touched.
pub fn find_mode(
    img: &Image,
    start: (usize, usize),
    config: &MeanShiftConfig,
    cache: &mut ModeCache,
) -> Result<ModeSearch> {
    find_mode_impl(img, start, config, Some(cache))
}

fn find_mode_impl(
    img: &Image,
    start: (usize, usize),
    config: &MeanShiftConfig,
    mut cache: Option<&mut ModeCache>,
) -> Result<ModeSearch> {
    assert!(img.contains(start.0, start.1), "start pixel outside image");
    let mut state = MeanShiftPoint::at_pixel(img, start.0, start.1);
    let mut path: Vec<(usize, usize)> = vec![start];
    let mut iterations = 0u32;
    let mut fallbacks = 0u32;
    let half = config.window_half();

    let finish = |mode: Color,
                  path: &[(usize, usize)],
                  cache: Option<&mut ModeCache>,
                  iterations: u32,
                  cache_hit: bool,
                  converged: bool,
                  fallbacks: u32| {
        if let Some(cache) = cache {
            if config.use_cache {
                for &(px, py) in path {
                    cache.set(px, py, mode);
                }
            }
        }
        ModeSearch {
            mode,
            iterations,
            cache_hit,
            converged,
            fallbacks,
        }
    };

    loop {
        if config.use_cache {
            let cached = cache.as_ref().and_then(|c| {
                let (nx, ny) = state.nearest_pixel(img);
                c.get(nx, ny)
            });
            if let Some(mode) = cached {
                return Ok(finish(mode, &path, cache.take(), iterations, true, true, fallbacks));
            }
        }
        if iterations >= config.max_iterations {
            return Ok(finish(
                state.range,
                &path,
                cache.take(),
                iterations,
                false,
                false,
                fallbacks,
            ));
        }

        let stepped = mean_shift_step(img, &state, config.h_s, config.h_r)?;
        iterations += 1;

        let next = if config.edge_aware {
            let (mx, my) = stepped.nearest_pixel(img);
            let window = PixelRect::window(mx, my, half, img.width(), img.height());
            let snap = snap_to_feature(img, &stepped, config.h_r, config.tau, window);
            if snap.fallback {
                fallbacks += 1;
            }
            MeanShiftPoint {
                spatial: [snap.pixel.0 as f64, snap.pixel.1 as f64],
                range: stepped.range,
            }
        } else {
            stepped
        };

        let shift = state.joint_distance(&next);
        state = next;
        let cell = state.nearest_pixel(img);
        if !path.contains(&cell) {
            path.push(cell);
        }

        if shift < config.convergence_eps {
            return Ok(finish(
                state.range,
                &path,
                cache.take(),
                iterations,
                false,
                true,
                fallbacks,
            ));
        }
    }
}

/// Replaces every pixel with the color of its associated mode. Cached runs
/// scan pixels row-major and share mode state (order-dependent); uncached
/// runs are order-independent and execute in parallel.
pub fn mean_shift_filter(img: &Image, config: &MeanShiftConfig) -> Result<FilterReport> {
    config.validate()?;
    let start = Instant::now();
    let (w, h) = (img.width(), img.height());
    let mut out = Image::new(w, h);

    let mut fresh_searches = 0usize;
    let mut cache_hits = 0usize;
    let mut total_steps = 0u64;
    let mut fallbacks = 0u64;
    let mut max_iteration_hits = 0usize;

    if config.use_cache {
        let mut cache = ModeCache::new(w, h);
        for y in 0..h {
            for x in 0..w {
                let search = find_mode(img, (x, y), config, &mut cache)?;
                out.set(x, y, search.mode);
                tally(
                    &search,
                    &mut fresh_searches,
                    &mut cache_hits,
                    &mut total_steps,
                    &mut fallbacks,
                    &mut max_iteration_hits,
                );
            }
        }
    } else {
        let results: Vec<Vec<ModeSearch>> = (0..h)
            .into_par_iter()
            .map(|y| {
                (0..w)
                    .map(|x| find_mode_impl(img, (x, y), config, None))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (y, row) in results.iter().enumerate() {
            for (x, search) in row.iter().enumerate() {
                out.set(x, y, search.mode);
                tally(
                    search,
                    &mut fresh_searches,
                    &mut cache_hits,
                    &mut total_steps,
                    &mut fallbacks,
                    &mut max_iteration_hits,
                );
            }
        }
    }

    let mean_iterations = if fresh_searches > 0 {
        total_steps as f64 / fresh_searches as f64
    } else {
        0.0
    };

    Ok(FilterReport {
        image: out,
        elapsed: start.elapsed(),
        stats: FilterStats::MeanShift {
            pixels: w * h,
            fresh_searches,
            cache_hits,
            total_steps,
            mean_iterations,
            fallbacks,
            max_iteration_hits,
        },
    })
}

fn tally(
    search: &ModeSearch,
    fresh_searches: &mut usize,
    cache_hits: &mut usize,
    total_steps: &mut u64,
    fallbacks: &mut u64,
    max_iteration_hits: &mut usize,
) {
    if search.cache_hit && search.iterations == 0 {
        *cache_hits += 1;
    } else {
        *fresh_searches += 1;
    }
    *total_steps += search.iterations as u64;
    *fallbacks += search.fallbacks as u64;
    if !search.converged {
        *max_iteration_hits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gray(v: f64) -> Color {
        [v, v, v]
    }

    fn random_image(w: usize, h: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_fn(w, h, |_, _| {
            [
                rng.random_range(0.0..=255.0),
                rng.random_range(0.0..=255.0),
                rng.random_range(0.0..=255.0),
            ]
        })
    }

    /// Joint Gaussian KDE over all image pixels -- the function the climb is
    /// supposed to ascend. Test-only oracle, independent of the step code.
    fn kde(img: &Image, p: &MeanShiftPoint, h_s: f64, h_r: f64) -> f64 {
        let mut total = 0.0;
        for y in 0..img.height() {
            for x in 0..img.width() {
                let dx = x as f64 - p.spatial[0];
                let dy = y as f64 - p.spatial[1];
                let cd = color_distance(img.get(x, y), p.range);
                total += (-(dx * dx + dy * dy) / (2.0 * h_s * h_s)).exp()
                    * (-cd * cd / (2.0 * h_r * h_r)).exp();
            }
        }
        total
    }

    #[test]
    fn step_constant_image_range_fixed() {
        let color = [80.0, 160.0, 240.0];
        let img = Image::constant(11, 11, color);
        // Center start: full fixed point.
        let center = MeanShiftPoint::at_pixel(&img, 5, 5);
        let next = mean_shift_step(&img, &center, 1.0, 45.0).unwrap();
        assert!(next.joint_distance(&center) < 1e-9);
        // Off-center start: window truncation may pull the spatial mean
        // inward, but the range component stays put.
        let corner = MeanShiftPoint::at_pixel(&img, 0, 0);
        let next = mean_shift_step(&img, &corner, 1.0, 45.0).unwrap();
        for c in 0..3 {
            assert!((next.range[c] - color[c]).abs() < 1e-9);
        }
    }

    #[test]
    fn step_two_pixel_hand_value() {
        let mut img = Image::new(2, 1);
        img.set(1, 0, gray(200.0));
        let state = MeanShiftPoint::at_pixel(&img, 0, 0);
        let next = mean_shift_step(&img, &state, 1.0, 45.0).unwrap();
        let w = (-0.5f64).exp() * (-(200.0f64 * 200.0 * 3.0) / (2.0 * 45.0 * 45.0)).exp();
        let expected = 200.0 * w / (1.0 + w);
        for c in 0..3 {
            assert!((next.range[c] - expected).abs() < 1e-12);
        }
        assert!((next.spatial[0] - w / (1.0 + w)).abs() < 1e-12);
    }

    #[test]
    fn step_kde_ascends_on_random_images() {
        // h_s large enough that the step window covers the whole 16x16
        // image, so the climb ascends exactly the KDE the oracle evaluates.
        let (h_s, h_r) = (5.0, 35.0);
        for seed in 0..8 {
            let img = random_image(16, 16, seed);
            let mut state = MeanShiftPoint::at_pixel(&img, (seed % 16) as usize, 7);
            let mut density = kde(&img, &state, h_s, h_r);
            for _ in 0..25 {
                let next = mean_shift_step(&img, &state, h_s, h_r).unwrap();
                let next_density = kde(&img, &next, h_s, h_r);
                assert!(
                    next_density >= density - 1e-9,
                    "seed {seed}: KDE fell {density} -> {next_density}"
                );
                if next.joint_distance(&state) < 1e-6 {
                    break;
                }
                state = next;
                density = next_density;
            }
        }
    }

    #[test]
    fn snap_exact_pixel_is_identity() {
        let img = random_image(9, 9, 3);
        let mean = MeanShiftPoint::at_pixel(&img, 4, 6);
        let win = PixelRect::window(4, 6, 3, 9, 9);
        let snap = snap_to_feature(&img, &mean, 45.0, 0.5, win);
        assert_eq!(snap.pixel, (4, 6));
        assert!(!snap.fallback);
    }

    #[test]
    fn snap_ring_never_lands_in_core() {
        // Ring of color A around a core of color B; mean sits in the core
        // with range A. The snap must land on the ring.
        let a = [200.0, 180.0, 40.0];
        let b = [40.0, 180.0, 40.0];
        let img = Image::from_fn(21, 21, |x, y| {
            let dx = x as f64 - 10.0;
            let dy = y as f64 - 10.0;
            let r = (dx * dx + dy * dy).sqrt();
            if (6.0..=9.0).contains(&r) {
                a
            } else {
                b
            }
        });
        let h_r = color_distance(a, b) / 4.0;
        let mean = MeanShiftPoint {
            spatial: [10.0, 10.0],
            range: a,
        };
        let win = PixelRect::window(10, 10, 10, 21, 21);
        let snap = snap_to_feature(&img, &mean, h_r, 0.5, win);
        assert!(!snap.fallback);
        assert_eq!(img.get(snap.pixel.0, snap.pixel.1), a);

        // Exhaustive argmin oracle over qualifying pixels.
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (px, py) in win.iter() {
            let cd = color_distance(img.get(px, py), a);
            if cd * cd / (h_r * h_r) < 0.5 {
                let d = (px as f64 - 10.0).powi(2) + (py as f64 - 10.0).powi(2);
                if d < best_d {
                    best_d = d;
                    best = Some((px, py));
                }
            }
        }
        assert_eq!(snap.pixel, best.unwrap());
    }

    #[test]
    fn snap_tie_breaks_row_major() {
        // Two qualifying pixels equidistant from mu; the earlier one in
        // row-major order wins.
        let target = [100.0, 0.0, 0.0];
        let img = Image::from_fn(3, 1, |x, _| if x == 1 { [0.0; 3] } else { target });
        let mean = MeanShiftPoint {
            spatial: [1.0, 0.0],
            range: target,
        };
        let snap = snap_to_feature(&img, &mean, 45.0, 0.5, PixelRect::new(0, 0, 2, 0));
        assert_eq!(snap.pixel, (0, 0));
    }

    #[test]
    fn snap_fallback_when_no_similar_color() {
        let img = Image::constant(5, 5, [0.0; 3]);
        let mean = MeanShiftPoint {
            spatial: [2.0, 2.0],
            range: [255.0, 255.0, 255.0],
        };
        let snap = snap_to_feature(&img, &mean, 10.0, 0.5, PixelRect::new(0, 0, 4, 4));
        assert!(snap.fallback);
        assert_eq!(snap.pixel, (0, 0), "all equal; first in row-major order");
    }

    #[test]
    fn find_mode_constant_image_one_iteration() {
        let color = [120.0, 30.0, 200.0];
        let img = Image::constant(9, 9, color);
        let cfg = MeanShiftConfig::new(1.0, 45.0);
        let mut cache = ModeCache::new(9, 9);
        let search = find_mode(&img, (4, 4), &cfg, &mut cache).unwrap();
        assert_eq!(search.iterations, 1);
        assert!(search.converged);
        for c in 0..3 {
            assert!((search.mode[c] - color[c]).abs() < 1e-9);
        }
    }

    #[test]
    fn find_mode_separated_clusters_stay_apart() {
        // Left half near dark red, right half near bright blue, far apart
        // relative to h_r.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = [170.0, 30.0, 30.0];
        let b = [30.0, 40.0, 220.0];
        let img = Image::from_fn(16, 16, |x, _| {
            let base = if x < 8 { a } else { b };
            [
                base[0] + rng.random_range(-6.0..6.0),
                base[1] + rng.random_range(-6.0..6.0),
                base[2] + rng.random_range(-6.0..6.0),
            ]
        });
        let cfg = MeanShiftConfig {
            use_cache: false,
            ..MeanShiftConfig::new(2.0, 30.0)
        };
        let mut cache = ModeCache::new(16, 16);
        for y in 0..16 {
            for x in 0..16 {
                let own = if x < 8 { a } else { b };
                let other = if x < 8 { b } else { a };
                let search = find_mode(&img, (x, y), &cfg, &mut cache).unwrap();
                assert!(color_distance(search.mode, own) < 30.0, "({x},{y})");
                assert!(color_distance(search.mode, other) > 150.0, "({x},{y})");
            }
        }
    }

    #[test]
    fn find_mode_cache_returns_in_zero_steps() {
        let img = random_image(12, 12, 9);
        let cfg = MeanShiftConfig::new(2.0, 60.0);
        let mut cache = ModeCache::new(12, 12);
        let first = find_mode(&img, (5, 5), &cfg, &mut cache).unwrap();
        assert!(first.iterations >= 1);
        let second = find_mode(&img, (5, 5), &cfg, &mut cache).unwrap();
        assert!(second.cache_hit);
        assert_eq!(second.iterations, 0);
        assert_eq!(second.mode, first.mode);
    }

    #[test]
    fn filter_constant_unchanged() {
        let img = Image::constant(10, 8, [64.0, 128.0, 32.0]);
        for use_cache in [false, true] {
            let cfg = MeanShiftConfig {
                use_cache,
                ..MeanShiftConfig::new(1.5, 45.0)
            };
            let report = mean_shift_filter(&img, &cfg).unwrap();
            for (a, b) in img.pixels().iter().zip(report.image.pixels()) {
                for c in 0..3 {
                    assert!((a[c] - b[c]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn filter_output_within_input_range() {
        let img = random_image(12, 12, 31);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in img.pixels() {
            for &v in p {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        for edge_aware in [false, true] {
            let cfg = MeanShiftConfig {
                edge_aware,
                ..MeanShiftConfig::new(2.0, 50.0)
            };
            let report = mean_shift_filter(&img, &cfg).unwrap();
            for p in report.image.pixels() {
                for &v in p {
                    assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
                }
            }
        }
    }

    #[test]
    fn filter_runs_are_deterministic() {
        // Caching is order-dependent, so cached and uncached outputs may
        // differ, but each mode must be deterministic run to run.
        let img = random_image(10, 10, 4);
        let cfg_cached = MeanShiftConfig::new(2.0, 45.0);
        let cfg_uncached = MeanShiftConfig {
            use_cache: false,
            ..cfg_cached.clone()
        };
        let a1 = mean_shift_filter(&img, &cfg_cached).unwrap();
        let a2 = mean_shift_filter(&img, &cfg_cached).unwrap();
        assert_eq!(a1.image, a2.image);
        let b1 = mean_shift_filter(&img, &cfg_uncached).unwrap();
        let b2 = mean_shift_filter(&img, &cfg_uncached).unwrap();
        assert_eq!(b1.image, b2.image);
    }

    #[test]
    fn invalid_configs_rejected() {
        let img = Image::new(4, 4);
        for cfg in [
            MeanShiftConfig::new(0.0, 45.0),
            MeanShiftConfig::new(5.0, 0.0),
            MeanShiftConfig {
                tau: 0.0,
                ..MeanShiftConfig::new(5.0, 45.0)
            },
            MeanShiftConfig {
                max_iterations: 0,
                ..MeanShiftConfig::new(5.0, 45.0)
            },
        ] {
            assert!(mean_shift_filter(&img, &cfg).is_err(), "{cfg:?}");
        }
    }
}
