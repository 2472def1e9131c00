//! The shell integrals built from `g(rho) = prod_j (c_j^2 + rho)`:
//!
//! * `phi_j(rho)` — integral of `1 / ((c_j^2 + s) sqrt(g(s)))` over `[rho, inf)`,
//! * `i0(rho)`    — integral of `1 / sqrt(g(s))` over the same ray.
//!
//! The fast path reduces both to Carlson symmetric forms evaluated by the
//! duplication theorem; an adaptive-quadrature oracle over the mapped
//! interval `s = rho + t/(1-t)` ships alongside it and every downstream
//! module cross-checks against the oracle in its tests.

mod carlson;

pub use carlson::{carlson_rd, carlson_rf};

use crate::error::{Error, Result};
use crate::quad;

/// Squared semi-axes with their canonical (ascending) ordering.
#[derive(Debug, Clone, Copy)]
pub struct EllipticContext {
    axes_sq: [f64; 3],
    sorted_sq: [f64; 3],
    permutation: [usize; 3],
}

/// Relative target of the Carlson fast path.
const FAST_REL: f64 = 1e-12;
/// Relative target of the quadrature oracle.
const ORACLE_REL: f64 = 1e-11;

impl EllipticContext {
    pub fn new(semi_axes: [f64; 3]) -> Result<Self> {
        if semi_axes.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput("semi-axes"));
        }
        if semi_axes.iter().any(|&c| c <= 0.0) {
            return Err(Error::DegenerateAxes(semi_axes));
        }
        let axes_sq = [
            semi_axes[0] * semi_axes[0],
            semi_axes[1] * semi_axes[1],
            semi_axes[2] * semi_axes[2],
        ];
        let mut permutation = [0usize, 1, 2];
        permutation.sort_by(|&a, &b| axes_sq[a].partial_cmp(&axes_sq[b]).unwrap());
        let sorted_sq = [axes_sq[permutation[0]], axes_sq[permutation[1]], axes_sq[permutation[2]]];
        Ok(Self { axes_sq, sorted_sq, permutation })
    }

    pub fn axes_squared(&self) -> [f64; 3] {
        self.axes_sq
    }

    /// Ascending squared axes and the permutation that maps sorted slots
    /// back to original axis indices.
    pub fn canonical(&self) -> ([f64; 3], [usize; 3]) {
        (self.sorted_sq, self.permutation)
    }

    fn check_rho(&self, rho: f64) -> Result<()> {
        if !rho.is_finite() {
            return Err(Error::NonFiniteInput("rho"));
        }
        if rho <= -self.sorted_sq[0] {
            return Err(Error::AssumptionViolated(format!(
                "rho = {rho} does not exceed -min(c_j^2) = {}",
                -self.sorted_sq[0]
            )));
        }
        Ok(())
    }

    /// `g(rho)`, an exact three-factor product.
    pub fn g(&self, rho: f64) -> f64 {
        self.axes_sq.iter().map(|d| d + rho).product()
    }

    /// Shell integral for axis `j` via the Carlson degenerate third form.
    pub fn phi(&self, rho: f64, j: usize) -> Result<f64> {
        self.check_rho(rho)?;
        let [d0, d1, d2] = self.axes_sq;
        let (x, y, z) = match j {
            0 => (d1, d2, d0),
            1 => (d0, d2, d1),
            2 => (d0, d1, d2),
            _ => return Err(Error::NonFiniteInput("axis index out of range")),
        };
        Ok(2.0 / 3.0 * carlson_rd(x + rho, y + rho, z + rho, FAST_REL)?)
    }

    /// First-kind integral `i0`.
    pub fn i0(&self, rho: f64) -> Result<f64> {
        self.check_rho(rho)?;
        let [d0, d1, d2] = self.sorted_sq;
        Ok(2.0 * carlson_rf(d0 + rho, d1 + rho, d2 + rho, FAST_REL)?)
    }

    /// All three `phi_j` at once.
    pub fn phi_all(&self, rho: f64) -> Result<[f64; 3]> {
        Ok([self.phi(rho, 0)?, self.phi(rho, 1)?, self.phi(rho, 2)?])
    }

    /// `d phi_j / d rho = -1 / ((c_j^2 + rho) sqrt(g(rho)))`.
    pub fn phi_derivative(&self, rho: f64, j: usize) -> f64 {
        -1.0 / ((self.axes_sq[j] + rho) * self.g(rho).sqrt())
    }

    /// Quadrature oracle for `phi_j`, independent of the Carlson path.
    pub fn phi_oracle(&self, rho: f64, j: usize) -> Result<f64> {
        self.check_rho(rho)?;
        let d = self.axes_sq;
        quad::integrate_to_infinity(
            move |s| 1.0 / ((d[j] + s) * ((d[0] + s) * (d[1] + s) * (d[2] + s)).sqrt()),
            rho,
            ORACLE_REL,
        )
    }

    /// Quadrature oracle for `i0`. The integrand only decays like
    /// `s^(-3/2)`, so this oracle uses the squared rational map.
    pub fn i0_oracle(&self, rho: f64) -> Result<f64> {
        self.check_rho(rho)?;
        let d = self.axes_sq;
        quad::integrate_to_infinity_sqrt(
            move |s| 1.0 / ((d[0] + s) * (d[1] + s) * (d[2] + s)).sqrt(),
            rho,
            ORACLE_REL,
        )
    }
}
