//! Discontinuity-preserving smoothing filters and their edge-aware variants.
//!
//! The crate implements three classical smoothing filters — variable
//! conductance diffusion, bilateral filtering, and mean shift filtering —
//! together with modified versions of each that keep a pixel's influence on
//! another inversely related to the strongest edge separating them:
//!
//! * [`diffusion`] — explicit-scheme diffusion with per-axis conductivity,
//!   preconditioned either by a separable Gaussian blur or by a small
//!   fixed-size bilateral filter (the edge-aware variant).
//! * [`bilateral`] — the classic spatial×range filter, plus a variant that
//!   weights neighbours by shortest-path distance on the 4-connected color
//!   graph (per-pixel Dijkstra with early termination), and a minimax-path
//!   flavour of the same.
//! * [`meanshift`] — joint spatial-range mode seeking with path caching and
//!   a snap-to-feature correction that keeps means from drifting off
//!   non-convex features.
//!
//! [`imgcore`] provides the float pixel buffer, PNG round-trip, noise
//! injection and the deterministic synthetic challenge image used as a test
//! fixture; [`metrics`] quantifies edge preservation, saturation retention
//! and novel-color creation; [`cli`] wires everything into the `edgeaware`
//! command-line tool.

pub mod bilateral;
pub mod cli;
pub mod diffusion;
pub mod error;
pub mod imgcore;
pub mod meanshift;
pub mod metrics;
pub mod report;

pub use error::{Error, Result};
pub use imgcore::{Color, Image};
pub use report::{FilterReport, FilterStats};
