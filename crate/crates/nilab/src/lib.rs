//! Numerical potential-theory laboratory for neutrally coated inclusions.
//!
//! A coated inclusion is a core `D` inside a shell `Omega \ D` inside an
//! infinite matrix. This crate constructs the classical analytic solutions
//! on concentric spheres and confocal ellipsoids, checks the over-determined
//! boundary value problem their neutrality induces, searches for solutions
//! on arbitrary shell geometries with a fundamental-solution fitter, solves
//! the transmission problem on meshed geometries with a boundary-integral
//! method, and verifies the Newtonian-potential identities that tie the
//! pieces together.
//!
//! Modules map onto the pipeline:
//!
//! * [`geometry`] — ellipsoids, confocal coordinates, triangle meshes;
//! * [`elliptic`] — the shell integrals `phi_j`, `i0` with a quadrature oracle;
//! * [`analytic`] — closed-form shell solutions and sphere transmission;
//! * [`overdet`]  — residual checks and the fundamental-solution fitter;
//! * [`potential`] — Newtonian potentials, Monte Carlo oracle, quadratic fits;
//! * [`bem`]      — boundary-integral transmission solver and neutrality defect;
//! * [`scenario`] — declarative experiment runner behind the CLI.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod analytic;
pub mod config;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod geometry;
pub mod overdet;
pub mod potential;
pub mod quad;
pub mod sampling;

pub use error::{Error, Result};
