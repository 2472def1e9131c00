//! Newtonian potentials: fundamental solution, closed-form ellipsoid
//! potentials, a seeded Monte Carlo oracle, averaged-potential differences,
//! and the interior quadratic fit.

mod mc;
mod quadfit;

pub use mc::{newtonian_mc, McDomain, McEstimate};
pub use quadfit::{core_samples, quadratic_fit, quadratic_fit_pair, QuadraticFit};

use nalgebra::Vector3;

use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};
use crate::geometry::{rho_coordinate, ConfocalPair, Ellipsoid};

/// Fundamental solution of the Laplace operator, `-1 / (4 pi |x|)`.
pub fn gamma(x: &Vector3<f64>) -> Result<f64> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(-1.0 / (4.0 * std::f64::consts::PI * r))
}

/// Newtonian potential of an ellipsoid, interior and exterior branches.
///
/// Interior: `(c1 c2 c3 / 4) [ sum_j phi_j(0) x_j^2 - i0(0) ]`; outside the
/// surface the argument `0` is replaced by the confocal coordinate of the
/// point. The two branches match in value and gradient across the surface.
pub fn newtonian_ellipsoid(e: &Ellipsoid, x: &Vector3<f64>) -> Result<f64> {
    let ctx = EllipticContext::new([e.semi_axes.x, e.semi_axes.y, e.semi_axes.z])?;
    let local = x - e.center;
    let rho = rho_coordinate(&local, &e.semi_axes)?.max(0.0);
    let phi = ctx.phi_all(rho)?;
    let i0 = ctx.i0(rho)?;
    let scale = e.semi_axes.iter().product::<f64>() / 4.0;
    let quad: f64 = (0..3).map(|j| phi[j] * local[j] * local[j]).sum();
    Ok(scale * (quad - i0))
}

/// Difference of averaged Newtonian potentials `N_outer/|outer| - N_core/|core|`
/// for an analytic confocal pair.
pub fn averaged_difference(pair: &ConfocalPair, x: &Vector3<f64>) -> Result<f64> {
    let outer = pair.outer();
    let core = pair.base;
    let n_outer = newtonian_ellipsoid(&outer, x)?;
    let n_core = newtonian_ellipsoid(&core, x)?;
    Ok(n_outer / outer.volume() - n_core / core.volume())
}

/// Signed defect of the volume/trace relation `k |shell| + tr A |core|`.
pub fn trace_check(k: f64, trace_a: f64, shell_volume: f64, core_volume: f64) -> f64 {
    k * shell_volume + trace_a * core_volume
}
