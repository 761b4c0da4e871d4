//! Filter output plus run statistics.

use std::time::Duration;

use crate::imgcore::Image;

/// Result of running one filter: the output image and what the run cost.
#[derive(Debug, Clone)]
pub struct FilterReport {
    pub image: Image,
    pub elapsed: Duration,
    pub stats: FilterStats,
}

/// Per-filter run statistics, surfaced in CLI manifests.
#[derive(Debug, Clone)]
pub enum FilterStats {
    Diffusion {
        iterations: u32,
        /// Mean absolute channel update per pixel, one entry per iteration.
        mean_abs_update: Vec<f64>,
    },
    Bilateral {
        iterations: u32,
        /// Mean Dijkstra-settled nodes per pixel (edge-aware mode only).
        mean_expanded: Option<f64>,
    },
    MeanShift {
        pixels: usize,
        /// Mode searches that actually iterated (start pixel not cached).
        fresh_searches: usize,
        /// Searches answered straight from the mode cache.
        cache_hits: usize,
        total_steps: u64,
        /// `total_steps / fresh_searches`; 0 when everything was cached.
        mean_iterations: f64,
        /// Snap fallback events (similar-color set empty in the window).
        fallbacks: u64,
        /// Searches that hit the iteration cap before converging.
        max_iteration_hits: usize,
    },
}

impl FilterStats {
    /// Flat `key = value` lines for manifests.
    pub fn manifest_lines(&self) -> Vec<(String, String)> {
        match self {
            FilterStats::Diffusion {
                iterations,
                mean_abs_update,
            } => {
                let mut lines = vec![("iterations".to_string(), iterations.to_string())];
                for (i, m) in mean_abs_update.iter().enumerate() {
                    lines.push((format!("mean_abs_update_{}", i + 1), format!("{m:.6}")));
                }
                lines
            }
            FilterStats::Bilateral {
                iterations,
                mean_expanded,
            } => {
                let mut lines = vec![("iterations".to_string(), iterations.to_string())];
                if let Some(m) = mean_expanded {
                    lines.push(("mean_expanded".to_string(), format!("{m:.3}")));
                }
                lines
            }
            FilterStats::MeanShift {
                pixels,
                fresh_searches,
                cache_hits,
                total_steps,
                mean_iterations,
                fallbacks,
                max_iteration_hits,
            } => vec![
                ("pixels".to_string(), pixels.to_string()),
                ("fresh_searches".to_string(), fresh_searches.to_string()),
                ("cache_hits".to_string(), cache_hits.to_string()),
                ("total_steps".to_string(), total_steps.to_string()),
                ("mean_iterations".to_string(), format!("{mean_iterations:.4}")),
                ("snap_fallbacks".to_string(), fallbacks.to_string()),
                ("max_iteration_hits".to_string(), max_iteration_hits.to_string()),
            ],
        }
    }
}
