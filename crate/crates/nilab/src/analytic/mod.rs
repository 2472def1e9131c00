//! Closed-form solutions: the confocal-ellipsoid solution of the
//! over-determined shell problem and the concentric-sphere transmission
//! problem with its neutrality condition.

mod confocal;
mod sphere;

pub use confocal::ConfocalSolution;
pub use sphere::{neutral_shell_field, neutral_sigma_m, NeutralSphereField, SphereTransmission};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Core conductivity as an extended real: insulating, finite, or perfectly
/// conducting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoreConductivity {
    Insulating,
    Finite(f64),
    Perfect,
}

impl CoreConductivity {
    pub fn from_f64(v: f64) -> Result<Self> {
        if v.is_nan() || v < 0.0 {
            return Err(Error::NonFiniteInput("core conductivity"));
        }
        Ok(if v == 0.0 {
            CoreConductivity::Insulating
        } else if v.is_infinite() {
            CoreConductivity::Perfect
        } else {
            CoreConductivity::Finite(v)
        })
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            CoreConductivity::Insulating => 0.0,
            CoreConductivity::Finite(v) => *v,
            CoreConductivity::Perfect => f64::INFINITY,
        }
    }

    pub fn is_finite_positive(&self) -> bool {
        matches!(self, CoreConductivity::Finite(_))
    }
}

/// Conductivities of core, shell, and (diagonal) matrix, with the derived
/// contrast quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredMedium {
    pub sigma_c: CoreConductivity,
    pub sigma_s: f64,
    pub sigma_m: Vector3<f64>,
}

impl LayeredMedium {
    pub fn new(sigma_c: CoreConductivity, sigma_s: f64, sigma_m: Vector3<f64>) -> Result<Self> {
        if !(sigma_s > 0.0 && sigma_s.is_finite()) {
            return Err(Error::AssumptionViolated(format!(
                "shell conductivity must be positive and finite, got {sigma_s}"
            )));
        }
        if sigma_m.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::AssumptionViolated(format!(
                "matrix conductivities must be positive and finite, got {sigma_m:?}"
            )));
        }
        Ok(Self { sigma_c, sigma_s, sigma_m })
    }

    /// Isotropic-matrix convenience constructor.
    pub fn isotropic(sigma_c: CoreConductivity, sigma_s: f64, sigma_m: f64) -> Result<Self> {
        Self::new(sigma_c, sigma_s, Vector3::repeat(sigma_m))
    }

    /// Core/shell contrast `sigma_c / sigma_s - 1`; only for finite cores.
    pub fn alpha(&self) -> Option<f64> {
        match self.sigma_c {
            CoreConductivity::Finite(v) => Some(v / self.sigma_s - 1.0),
            _ => None,
        }
    }

    /// Matrix/shell contrast per axis.
    pub fn beta(&self, j: usize) -> f64 {
        self.sigma_m[j] / self.sigma_s - 1.0
    }

    /// Reciprocal contrasts `1/beta_j`; fails when any contrast vanishes.
    pub fn b_diagonal(&self) -> Result<Vector3<f64>> {
        let mut b = Vector3::zeros();
        for j in 0..3 {
            let beta = self.beta(j);
            if beta == 0.0 {
                return Err(Error::ContrastSingular("sigma_m equals sigma_s on an axis"));
            }
            b[j] = 1.0 / beta;
        }
        Ok(b)
    }

    /// True when core and shell coincide, making neutrality vacuous.
    pub fn is_contrast_vacuous(&self) -> bool {
        match self.sigma_c {
            CoreConductivity::Finite(v) => v == self.sigma_s,
            _ => false,
        }
    }

    pub fn isotropic_sigma_m(&self) -> Result<f64> {
        if self.sigma_m.x != self.sigma_m.y || self.sigma_m.y != self.sigma_m.z {
            return Err(Error::AssumptionViolated(
                "operation requires an isotropic matrix conductivity".into(),
            ));
        }
        Ok(self.sigma_m.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_contrasts() {
        let m = LayeredMedium::isotropic(CoreConductivity::Finite(5.0), 1.0, 16.0 / 13.0).unwrap();
        assert_eq!(m.alpha(), Some(4.0));
        assert!((m.beta(0) - 3.0 / 13.0).abs() < 1e-15);
        assert!((m.b_diagonal().unwrap().x - 13.0 / 3.0).abs() < 1e-12);
        assert!(!m.is_contrast_vacuous());
        assert!(LayeredMedium::isotropic(CoreConductivity::Finite(1.0), 1.0, 2.0)
            .unwrap()
            .is_contrast_vacuous());
    }

    #[test]
    fn vanishing_beta_blocks_b() {
        let m = LayeredMedium::isotropic(CoreConductivity::Finite(5.0), 1.0, 1.0).unwrap();
        assert!(matches!(m.b_diagonal(), Err(Error::ContrastSingular(_))));
    }

    #[test]
    fn extended_core_values() {
        assert_eq!(CoreConductivity::from_f64(0.0).unwrap(), CoreConductivity::Insulating);
        assert_eq!(CoreConductivity::from_f64(f64::INFINITY).unwrap(), CoreConductivity::Perfect);
        assert_eq!(CoreConductivity::from_f64(2.0).unwrap(), CoreConductivity::Finite(2.0));
        assert!(CoreConductivity::from_f64(-1.0).is_err());
    }
}
