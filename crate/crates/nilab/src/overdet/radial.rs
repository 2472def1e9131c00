//! Least-squares fit of spherical averages to the radial profile
//! `(k/6) r^2 + k1 / r + k2`.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::error::{Error, Result};
use crate::field::ShellField;
use crate::sampling;

#[derive(Debug, Clone, Copy)]
pub struct RadialProfile {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    /// Maximum pointwise deviation `|w(x) - model(|x|)|` over all sampled
    /// points. Spherical averaging alone cannot detect a non-radial field
    /// (averages of any constant-Laplacian field satisfy the radial model
    /// exactly), so the residual is measured against the field itself.
    pub residual: f64,
}

impl RadialProfile {
    /// Radius where the radial derivative of the profile vanishes,
    /// `(3 k1 / k)^(1/3)`.
    pub fn stationary_radius(&self) -> f64 {
        (3.0 * self.k1 / self.k).cbrt()
    }
}

/// Averages the field over `directions` quasi-uniform directions at each
/// radius and fits the three-parameter radial profile.
pub fn radial_fit<F: ShellField + ?Sized>(
    field: &F,
    center: &Vector3<f64>,
    radii: &[f64],
    directions: usize,
) -> Result<RadialProfile> {
    if radii.len() < 3 {
        return Err(Error::InsufficientRadii(radii.len()));
    }
    let dirs = sampling::fibonacci_sphere(directions.max(16));
    let mut design = DMatrix::zeros(radii.len(), 3);
    let mut rhs = DVector::zeros(radii.len());
    let mut values = vec![vec![0.0; dirs.len()]; radii.len()];
    for (i, &r) in radii.iter().enumerate() {
        let mut sum = 0.0;
        for (j, dir) in dirs.iter().enumerate() {
            let v = field.value(&(center + r * dir))?;
            values[i][j] = v;
            sum += v;
        }
        design[(i, 0)] = r * r / 6.0;
        design[(i, 1)] = 1.0 / r;
        design[(i, 2)] = 1.0;
        rhs[i] = sum / dirs.len() as f64;
    }
    let svd = design.clone().svd(true, true);
    let coeffs = svd
        .solve(&rhs, 1e-13 * svd.singular_values.max())
        .map_err(|_| Error::IllConditionedFit)?;
    let mut residual = 0.0_f64;
    for (i, &r) in radii.iter().enumerate() {
        let model = coeffs[0] * r * r / 6.0 + coeffs[1] / r + coeffs[2];
        for &v in &values[i] {
            residual = residual.max((v - model).abs());
        }
    }
    Ok(RadialProfile { k: coeffs[0], k1: coeffs[1], k2: coeffs[2], residual })
}

/// Evenly spaced radii strictly inside `(r_lo, r_hi)`.
pub fn interior_radii(r_lo: f64, r_hi: f64, count: usize) -> Vec<f64> {
    let pad = 0.02 * (r_hi - r_lo);
    (0..count)
        .map(|i| r_lo + pad + (r_hi - r_lo - 2.0 * pad) * i as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ConfocalSolution;
    use crate::geometry::{ConfocalPair, Ellipsoid};
    use approx::assert_relative_eq;

    #[test]
    fn sphere_pair_profile_reference_values() {
        // w(r) = (k/6) r^2 + k1/r with k = 1/4, k1 = k R^3 / 3 = 2/3, and the
        // stationary radius recovers the outer boundary R = 2.
        let pair = ConfocalPair::concentric_spheres(Vector3::zeros(), 1.0, 2.0).unwrap();
        let sol = ConfocalSolution::new(pair).unwrap();
        let radii = interior_radii(1.0, 2.0, 30);
        let p = radial_fit(&sol, &Vector3::zeros(), &radii, 64).unwrap();
        assert_relative_eq!(p.k, 0.25, epsilon = 1e-10);
        assert_relative_eq!(p.k1, 2.0 / 3.0, epsilon = 1e-10);
        assert!(p.k2.abs() <= 1e-10);
        assert!(p.residual <= 1e-10, "residual {}", p.residual);
        assert_relative_eq!(p.stationary_radius(), 2.0, epsilon = 1e-8);
    }

    #[test]
    fn ellipsoid_solution_is_not_radial() {
        // rho0 = 4 leaves room for origin-centered spheres in the shell:
        // core max semi-axis 2 < outer min semi-axis sqrt(5).
        let pair = ConfocalPair::new(
            Ellipsoid::new(Vector3::zeros(), Vector3::new(1.0, 1.5, 2.0)).unwrap(),
            4.0,
        )
        .unwrap();
        let sol = ConfocalSolution::new(pair).unwrap();
        let radii: Vec<f64> = (0..30).map(|i| 2.02 + 0.2 * i as f64 / 29.0).collect();
        let scale = sol.k() * pair.outer_diameter();
        let p = radial_fit(&sol, &Vector3::zeros(), &radii, 64).unwrap();
        assert!(
            p.residual > 1e-3 * scale,
            "residual {} unexpectedly small for a non-radial field",
            p.residual
        );
    }

    #[test]
    fn too_few_radii_is_an_error() {
        let pair = ConfocalPair::concentric_spheres(Vector3::zeros(), 1.0, 2.0).unwrap();
        let sol = ConfocalSolution::new(pair).unwrap();
        assert!(matches!(
            radial_fit(&sol, &Vector3::zeros(), &[1.2, 1.5], 32),
            Err(Error::InsufficientRadii(2))
        ));
    }
}
