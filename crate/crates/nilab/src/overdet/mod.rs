//! Residual evaluation of the over-determined shell problem, the
//! fundamental-solution least-squares fitter, and radial-structure checks.

mod mfs;
mod radial;
mod residuals;

pub use mfs::{isotropy_sweep, mfs_fit, AConstraint, MfsConfig, MfsField, MfsFit, MfsGeometry, SweepFamily};
pub use radial::{interior_radii, radial_fit, RadialProfile};
pub use residuals::{residuals, OverdetResiduals};
