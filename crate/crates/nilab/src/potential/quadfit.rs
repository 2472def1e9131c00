//! Full quadratic fit of the scaled averaged-potential difference inside the
//! core.
//!
//! The model is `(1/2) x . A x + d . x + C*` with all ten polynomial
//! coefficients free; symmetry of the result is asserted by callers, never
//! assumed by the fit.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::{ConfocalPair, Ellipsoid};
use crate::potential::newtonian_ellipsoid;
use crate::sampling;

#[derive(Debug, Clone)]
pub struct QuadraticFit {
    pub a_fit: Matrix3<f64>,
    pub d_fit: Vector3<f64>,
    pub c_star: f64,
    /// Maximum absolute deviation of the model over the sample points.
    pub residual: f64,
    pub samples: usize,
}

/// Fits `k |outer| (N_outer/|outer| - N_core/|core|)` at the given interior
/// points for a (possibly non-confocal, possibly offset) pair of ellipsoids.
pub fn quadratic_fit(
    outer: &Ellipsoid,
    core: &Ellipsoid,
    k: f64,
    points: &[Vector3<f64>],
) -> Result<QuadraticFit> {
    if points.len() < 200 {
        return Err(Error::IllConditionedFit);
    }
    let scale = k * outer.volume();
    let mut design = DMatrix::zeros(points.len(), 10);
    let mut rhs = DVector::zeros(points.len());
    for (i, x) in points.iter().enumerate() {
        design[(i, 0)] = 0.5 * x.x * x.x;
        design[(i, 1)] = 0.5 * x.y * x.y;
        design[(i, 2)] = 0.5 * x.z * x.z;
        design[(i, 3)] = x.x * x.y;
        design[(i, 4)] = x.x * x.z;
        design[(i, 5)] = x.y * x.z;
        design[(i, 6)] = x.x;
        design[(i, 7)] = x.y;
        design[(i, 8)] = x.z;
        design[(i, 9)] = 1.0;
        let diff = newtonian_ellipsoid(outer, x)? / outer.volume()
            - newtonian_ellipsoid(core, x)? / core.volume();
        rhs[i] = scale * diff;
    }
    let svd = design.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let sigma_min = svd.singular_values.min();
    if !(sigma_min > 1e-10 * sigma_max) {
        return Err(Error::IllConditionedFit);
    }
    let coeffs = svd
        .solve(&rhs, 1e-12 * sigma_max)
        .map_err(|_| Error::IllConditionedFit)?;

    let fitted = &design * &coeffs;
    let residual = (fitted - &rhs).amax();

    let a_fit = Matrix3::new(
        coeffs[0], coeffs[3], coeffs[4],
        coeffs[3], coeffs[1], coeffs[5],
        coeffs[4], coeffs[5], coeffs[2],
    );
    Ok(QuadraticFit {
        a_fit,
        d_fit: Vector3::new(coeffs[6], coeffs[7], coeffs[8]),
        c_star: coeffs[9],
        residual,
        samples: points.len(),
    })
}

/// Quasi-random interior points of the core ellipsoid.
pub fn core_samples(core: &Ellipsoid, count: usize) -> Vec<Vector3<f64>> {
    let lo = core.center - core.semi_axes;
    let hi = core.center + core.semi_axes;
    let mut points = Vec::with_capacity(count);
    let mut index = 0;
    while points.len() < count {
        let p = {
            let u = sampling::halton3(index);
            Vector3::new(
                lo.x + u.x * (hi.x - lo.x),
                lo.y + u.y * (hi.y - lo.y),
                lo.z + u.z * (hi.z - lo.z),
            )
        };
        index += 1;
        if core.implicit(&p) < -1e-9 {
            points.push(p);
        }
    }
    points
}

/// Convenience wrapper for a confocal pair: samples the core and uses the
/// pair's own Laplacian constant `k = 2 / sqrt(g(rho0))`.
pub fn quadratic_fit_pair(pair: &ConfocalPair, count: usize) -> Result<QuadraticFit> {
    let ctx = crate::elliptic::EllipticContext::new([
        pair.base.semi_axes.x,
        pair.base.semi_axes.y,
        pair.base.semi_axes.z,
    ])?;
    let k = 2.0 / ctx.g(pair.rho0).sqrt();
    let points = core_samples(&pair.base, count);
    quadratic_fit(&pair.outer(), &pair.base, k, &points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn concentric_spheres_recover_the_closed_form() {
        // k = 1/4: the scaled difference is (12 - 7 r^2)/24, so
        // A = -(7/12) I, d = 0, C* = 1/2.
        let pair = ConfocalPair::concentric_spheres(Vector3::zeros(), 1.0, 2.0).unwrap();
        let fit = quadratic_fit_pair(&pair, 300).unwrap();
        for i in 0..3 {
            assert_relative_eq!(fit.a_fit[(i, i)], -7.0 / 12.0, epsilon = 1e-10);
        }
        assert!(fit.d_fit.norm() <= 1e-10);
        assert_relative_eq!(fit.c_star, 0.5, epsilon = 1e-10);
        assert!(fit.residual <= 1e-10, "residual {}", fit.residual);
    }

    #[test]
    fn confocal_pair_recovers_the_shell_solution_matrix() {
        let base = Ellipsoid::new(Vector3::zeros(), Vector3::new(1.0, 1.5, 2.0)).unwrap();
        let pair = ConfocalPair::new(base, 1.0).unwrap();
        let fit = quadratic_fit_pair(&pair, 300).unwrap();
        let sol = crate::analytic::ConfocalSolution::new(pair).unwrap();
        let a = sol.a_diagonal();
        for i in 0..3 {
            assert_relative_eq!(fit.a_fit[(i, i)], a[i], epsilon = 1e-8);
        }
        // Off-diagonal entries vanish: symmetry is an assertion, not an input.
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(fit.a_fit[(i, j)].abs() <= 1e-9);
        }
        assert!(fit.residual <= 1e-9, "residual {}", fit.residual);
    }

    #[test]
    fn offset_core_keeps_interior_quadratic_but_loses_the_exterior_zero() {
        // Newtonian potentials of ellipsoids are quadratic inside the domain
        // wherever it sits, so an offset spherical core cannot be detected by
        // the interior fit alone; the discriminating signal of the averaged
        // difference is the exterior value, which vanishes only for the
        // matched pair.
        let pair = ConfocalPair::concentric_spheres(Vector3::zeros(), 1.0, 2.0).unwrap();
        let outer = pair.outer();
        let core = Ellipsoid::new(Vector3::new(0.3, 0.0, 0.0), Vector3::repeat(1.0)).unwrap();
        let points = core_samples(&core, 300);
        let off = quadratic_fit(&outer, &core, 0.25, &points).unwrap();
        assert!(off.residual <= 1e-12, "offset interior residual {}", off.residual);

        let x = Vector3::new(3.0, 0.0, 0.0);
        let concentric = crate::potential::newtonian_ellipsoid(&outer, &x).unwrap() / outer.volume()
            - crate::potential::newtonian_ellipsoid(&pair.base, &x).unwrap() / pair.base.volume();
        let offset = crate::potential::newtonian_ellipsoid(&outer, &x).unwrap() / outer.volume()
            - crate::potential::newtonian_ellipsoid(&core, &x).unwrap() / core.volume();
        assert!(concentric.abs() <= 1e-15);
        assert!(offset.abs() >= 1e-4, "offset exterior difference {offset}");
    }

    #[test]
    fn degenerate_samples_are_rejected() {
        let pair = ConfocalPair::concentric_spheres(Vector3::zeros(), 1.0, 2.0).unwrap();
        // Collinear points: rank-deficient design.
        let points: Vec<_> = (0..250)
            .map(|i| Vector3::new(-0.9 + 1.8 * i as f64 / 249.0, 0.0, 0.0))
            .collect();
        assert!(matches!(
            quadratic_fit(&pair.outer(), &pair.base, 0.25, &points),
            Err(Error::IllConditionedFit)
        ));
        // Too few points.
        let few = core_samples(&pair.base, 100);
        assert!(matches!(
            quadratic_fit(&pair.outer(), &pair.base, 0.25, &few),
            Err(Error::IllConditionedFit)
        ));
    }
}
