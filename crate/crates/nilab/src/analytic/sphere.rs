//! Concentric-sphere transmission problem under a uniform field, the
//! neutrality condition on the matrix conductivity, and the quadratic shell
//! field derived from the neutral solution.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};

use crate::analytic::{CoreConductivity, LayeredMedium};
use crate::error::{Error, Result};
use crate::field::{FieldDomain, ShellField};
use crate::quad;

/// Degree-one coefficients of the transmission solution along one axis:
/// `u = core_slope * x_j` in the core, `(shell_slope + shell_dipole / r^3) x_j`
/// in the shell, and `(1 + exterior_dipole / r^3) x_j` outside.
#[derive(Debug, Clone, Copy)]
pub struct SphereTransmission {
    pub r_inner: f64,
    pub r_outer: f64,
    pub medium: LayeredMedium,
    pub core_slope: f64,
    pub shell_slope: f64,
    pub shell_dipole: f64,
    pub exterior_dipole: f64,
    /// Constant core potential for a perfectly conducting core (zero by
    /// symmetry for concentric spheres).
    pub core_constant: Option<f64>,
}

impl SphereTransmission {
    /// Solves the interface system for the unit uniform field along one axis.
    ///
    /// Finite cores use the full 4x4 system; insulating and perfectly
    /// conducting cores drop to dedicated 3x3 systems with a zero-flux or
    /// equipotential inner condition.
    pub fn solve(r_inner: f64, r_outer: f64, medium: &LayeredMedium) -> Result<Self> {
        if !(r_inner > 0.0 && r_outer > r_inner) {
            return Err(Error::AssumptionViolated(format!(
                "need 0 < r_inner < r_outer, got ({r_inner}, {r_outer})"
            )));
        }
        let sigma_s = medium.sigma_s;
        let sigma_m = medium.isotropic_sigma_m()?;
        let (ri, re) = (r_inner, r_outer);
        let ri3 = ri * ri * ri;
        let re3 = re * re * re;

        match medium.sigma_c {
            CoreConductivity::Finite(sigma_c) => {
                // Unknowns (core_slope, shell_slope, shell_dipole, exterior_dipole).
                let m = Matrix4::new(
                    ri, -ri, -1.0 / (ri * ri), 0.0,
                    sigma_c, -sigma_s, 2.0 * sigma_s / ri3, 0.0,
                    0.0, re, 1.0 / (re * re), -1.0 / (re * re),
                    0.0, sigma_s, -2.0 * sigma_s / re3, 2.0 * sigma_m / re3,
                );
                let rhs = Vector4::new(0.0, 0.0, re, sigma_m);
                let sol = m
                    .lu()
                    .solve(&rhs)
                    .ok_or(Error::SingularInterfaceSystem)?;
                Ok(Self {
                    r_inner,
                    r_outer,
                    medium: *medium,
                    core_slope: sol[0],
                    shell_slope: sol[1],
                    shell_dipole: sol[2],
                    exterior_dipole: sol[3],
                    core_constant: None,
                })
            }
            CoreConductivity::Insulating => {
                // Zero core flux: shell_slope - 2 shell_dipole / ri^3 = 0.
                let m = Matrix3::new(
                    1.0, -2.0 / ri3, 0.0,
                    re, 1.0 / (re * re), -1.0 / (re * re),
                    sigma_s, -2.0 * sigma_s / re3, 2.0 * sigma_m / re3,
                );
                let rhs = Vector3::new(0.0, re, sigma_m);
                let sol = m
                    .lu()
                    .solve(&rhs)
                    .ok_or(Error::SingularInterfaceSystem)?;
                // The core potential is reported as the harmonic extension
                // matching the trace.
                Ok(Self {
                    r_inner,
                    r_outer,
                    medium: *medium,
                    core_slope: sol[0] + sol[1] / ri3,
                    shell_slope: sol[0],
                    shell_dipole: sol[1],
                    exterior_dipole: sol[2],
                    core_constant: None,
                })
            }
            CoreConductivity::Perfect => {
                // Equipotential core: the degree-one trace vanishes on the
                // inner sphere and the constant is fixed (to zero) by the
                // zero-total-flux condition.
                let m = Matrix3::new(
                    ri, 1.0 / (ri * ri), 0.0,
                    re, 1.0 / (re * re), -1.0 / (re * re),
                    sigma_s, -2.0 * sigma_s / re3, 2.0 * sigma_m / re3,
                );
                let rhs = Vector3::new(0.0, re, sigma_m);
                let sol = m
                    .lu()
                    .solve(&rhs)
                    .ok_or(Error::SingularInterfaceSystem)?;
                Ok(Self {
                    r_inner,
                    r_outer,
                    medium: *medium,
                    core_slope: 0.0,
                    shell_slope: sol[0],
                    shell_dipole: sol[1],
                    exterior_dipole: sol[2],
                    core_constant: Some(0.0),
                })
            }
        }
    }

    /// Potential along axis `j` at a point, using the layered radial form.
    pub fn potential(&self, x: &Vector3<f64>, j: usize) -> f64 {
        let r = x.norm();
        let xj = x[j];
        if r <= self.r_inner {
            match self.core_constant {
                Some(c) => c,
                None => self.core_slope * xj,
            }
        } else if r <= self.r_outer {
            (self.shell_slope + self.shell_dipole / (r * r * r)) * xj
        } else {
            (1.0 + self.exterior_dipole / (r * r * r)) * xj
        }
    }

    /// Maximum residual of the four interface equations (value and flux
    /// continuity at both radii).
    pub fn interface_residual(&self) -> f64 {
        let (ri, re) = (self.r_inner, self.r_outer);
        let ri3 = ri * ri * ri;
        let re3 = re * re * re;
        let sigma_s = self.medium.sigma_s;
        let sigma_m = self.medium.sigma_m.x;
        let mut res: f64 = 0.0;
        match self.medium.sigma_c {
            CoreConductivity::Finite(sigma_c) => {
                res = res.max((self.core_slope * ri - self.shell_slope * ri - self.shell_dipole / (ri * ri)).abs());
                res = res.max(
                    (sigma_c * self.core_slope
                        - sigma_s * (self.shell_slope - 2.0 * self.shell_dipole / ri3))
                        .abs(),
                );
            }
            CoreConductivity::Insulating => {
                res = res.max((self.shell_slope - 2.0 * self.shell_dipole / ri3).abs() * sigma_s);
            }
            CoreConductivity::Perfect => {
                res = res.max((self.shell_slope * ri + self.shell_dipole / (ri * ri)).abs());
            }
        }
        res = res.max(
            (self.shell_slope * re + self.shell_dipole / (re * re)
                - re
                - self.exterior_dipole / (re * re))
                .abs(),
        );
        res = res.max(
            (sigma_s * (self.shell_slope - 2.0 * self.shell_dipole / re3)
                - sigma_m * (1.0 - 2.0 * self.exterior_dipole / re3))
                .abs(),
        );
        res
    }
}

/// The isotropic matrix conductivity that makes the exterior dipole vanish.
///
/// The dipole is affine-rational in `sigma_m`, so a sign change brackets the
/// unique positive root; bisection in log-space runs to floating-point
/// resolution.
pub fn neutral_sigma_m(
    r_inner: f64,
    r_outer: f64,
    sigma_c: CoreConductivity,
    sigma_s: f64,
) -> Result<f64> {
    if let CoreConductivity::Finite(v) = sigma_c {
        if v == sigma_s {
            return Err(Error::AssumptionViolated(
                "sigma_c equals sigma_s: every sigma_m is neutral, the condition is vacuous".into(),
            ));
        }
    }
    let dipole = |sigma_m: f64| -> Result<f64> {
        let medium = LayeredMedium::isotropic(sigma_c, sigma_s, sigma_m)?;
        Ok(SphereTransmission::solve(r_inner, r_outer, &medium)?.exterior_dipole)
    };
    let mut lo = sigma_s * 1e-8;
    let mut hi = sigma_s * 1e8;
    let f_lo = dipole(lo)?;
    let f_hi = dipole(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoPositiveRoot);
    }
    let positive_at_lo = f_lo > 0.0;
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = dipole(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Quadratic-Laplacian shell field derived from the neutral sphere solution.
///
/// The potential of the scalar stream function is reconstructed by radial
/// integration of `u_r / beta` from the inner radius; subtracting the
/// reference quadratic `r^2 / (2 beta)` leaves a field with unit Laplacian,
/// `A = (c0 - 1/beta) I`, and `d = 0`.
#[derive(Debug, Clone, Copy)]
pub struct NeutralSphereField {
    r_inner: f64,
    r_outer: f64,
    beta: f64,
    shell_slope: f64,
    shell_dipole: f64,
}

impl NeutralSphereField {
    fn radial_component(&self, r: f64) -> f64 {
        (self.shell_slope + self.shell_dipole / (r * r * r)) * r / self.beta
    }
}

impl ShellField for NeutralSphereField {
    fn value(&self, x: &Vector3<f64>) -> Result<f64> {
        let r = x.norm();
        let psi = quad::integrate(|t| self.radial_component(t), self.r_inner, r, 1e-13)?;
        Ok(psi - r * r / (2.0 * self.beta))
    }

    fn gradient(&self, x: &Vector3<f64>) -> Result<Vector3<f64>> {
        let r = x.norm();
        let r3 = r * r * r;
        Ok(((self.shell_slope - 1.0) + self.shell_dipole / r3) / self.beta * x)
    }

    fn laplacian(&self, _x: &Vector3<f64>) -> Result<f64> {
        Ok(3.0 * (self.shell_slope - 1.0) / self.beta)
    }

    fn domain(&self) -> FieldDomain {
        FieldDomain::SphericalShell {
            center: Vector3::zeros(),
            r_inner: self.r_inner,
            r_outer: self.r_outer,
        }
    }
}

/// Output of [`neutral_shell_field`].
pub struct NeutralShellSolution {
    pub field: NeutralSphereField,
    pub transmission: SphereTransmission,
    pub sigma_m: f64,
    /// Laplacian of the field (identically one up to solver residual).
    pub k: f64,
    /// Isotropic boundary-gradient coefficient `c0 - 1/beta`.
    pub a_entry: f64,
    pub d: Vector3<f64>,
    /// Core gradient coefficient `c0 = core_slope / beta`.
    pub c0: f64,
}

/// Builds the quadratic shell field for the neutral concentric-sphere
/// structure with `sigma_c > sigma_s`, computing the neutral `sigma_m`
/// internally.
pub fn neutral_shell_field(
    r_inner: f64,
    r_outer: f64,
    sigma_c: CoreConductivity,
    sigma_s: f64,
) -> Result<NeutralShellSolution> {
    let core_ok = match sigma_c {
        CoreConductivity::Finite(v) => v > sigma_s,
        CoreConductivity::Perfect => true,
        CoreConductivity::Insulating => false,
    };
    if !core_ok {
        return Err(Error::AssumptionViolated(format!(
            "the quadratic shell construction assumes sigma_c > sigma_s, got sigma_c = {}, sigma_s = {sigma_s}",
            sigma_c.as_f64()
        )));
    }
    let sigma_m = neutral_sigma_m(r_inner, r_outer, sigma_c, sigma_s)?;
    let medium = LayeredMedium::isotropic(sigma_c, sigma_s, sigma_m)?;
    let transmission = SphereTransmission::solve(r_inner, r_outer, &medium)?;
    let beta = medium.beta(0);
    if beta == 0.0 {
        return Err(Error::ContrastSingular("neutral sigma_m equals sigma_s"));
    }
    let c0 = transmission.core_slope / beta;
    let field = NeutralSphereField {
        r_inner,
        r_outer,
        beta,
        shell_slope: transmission.shell_slope,
        shell_dipole: transmission.shell_dipole,
    };
    Ok(NeutralShellSolution {
        field,
        transmission,
        sigma_m,
        k: 3.0 * (transmission.shell_slope - 1.0) / beta,
        a_entry: c0 - 1.0 / beta,
        d: Vector3::zeros(),
        c0,
    })
}
