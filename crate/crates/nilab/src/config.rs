//! Centralized numeric tolerances and solver knobs.
//!
//! Every module reads its residual targets from [`Tolerances`] so that a
//! scenario file can override any of them; mathematical constants stay in
//! the code.

use serde::{Deserialize, Serialize};

/// Residual targets and solver controls shared across the crate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Geometry residuals: cubic-root reconstruction, on-boundary bands.
    pub geometry: f64,
    /// On-boundary classification band for the confocal coordinate.
    pub on_boundary: f64,
    /// Relative target for the Carlson fast path.
    pub elliptic_fast: f64,
    /// Relative target for the adaptive-quadrature oracle.
    pub elliptic_oracle: f64,
    /// Truncated-SVD cutoff as a fraction of the largest singular value.
    pub tsvd_cutoff: f64,
    /// Relative residual target for iterative boundary-integral solves.
    pub bem_iterative: f64,
    /// Unknown count above which the dense LU path gives way to GMRES.
    pub bem_dense_limit: usize,
    /// Step used by finite-difference Laplacian probes.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            geometry: 1e-10,
            on_boundary: 1e-10,
            elliptic_fast: 1e-12,
            elliptic_oracle: 1e-11,
            tsvd_cutoff: 1e-12,
            bem_iterative: 1e-9,
            bem_dense_limit: 3000,
            fd_step: 1e-3,
        }
    }
}

/// Source-surface offsets for the fundamental-solution fitter, calibrated on
/// the concentric-sphere case.
pub const MFS_OUTER_INFLATION: f64 = 1.6;
pub const MFS_INNER_DEFLATION: f64 = 0.6;

/// Hard cap on icosphere subdivision (memory guard).
pub const MAX_SUBDIVISIONS: u32 = 7;
