//! Carlson symmetric elliptic integrals by the duplication theorem.
//!
//! `carlson_rf(x, y, z)` is the symmetric first-kind integral
//! `(1/2) int_0^inf dt / sqrt((t+x)(t+y)(t+z))` and `carlson_rd(x, y, z)`
//! the degenerate third-kind form with the `(t+z)` factor repeated. Each
//! duplication step quarters the argument spread; a fifth-order Taylor tail
//! finishes the job, so the truncation error scales like the eighth power of
//! the loop tolerance.

use crate::error::{Error, Result};

const MAX_DUPLICATIONS: usize = 120;

/// Loop tolerance from the requested relative error; the tail error behaves
/// like eps^6 for RF, so the sixth root with margin is enough.
fn loop_tolerance(rel: f64) -> f64 {
    (rel / 10.0).powf(1.0 / 6.0).min(0.01)
}

pub fn carlson_rf(x: f64, y: f64, z: f64, rel: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0 && z > 0.0) {
        return Err(Error::AssumptionViolated(format!(
            "carlson_rf needs positive arguments, got ({x}, {y}, {z})"
        )));
    }
    let errtol = loop_tolerance(rel);
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..MAX_DUPLICATIONS {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let dx = 1.0 - x / mean;
        let dy = 1.0 - y / mean;
        let dz = 1.0 - z / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < errtol {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series =
                1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0;
            return Ok(series / mean.sqrt());
        }
    }
    Err(Error::ConvergenceFailure { context: "carlson_rf duplication" })
}

pub fn carlson_rd(x: f64, y: f64, z: f64, rel: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0 && z > 0.0) {
        return Err(Error::AssumptionViolated(format!(
            "carlson_rd needs positive arguments, got ({x}, {y}, {z})"
        )));
    }
    let errtol = loop_tolerance(rel);
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut factor = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        sum += factor / (sz * (z + lambda));
        factor *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = 0.2 * (x + y + 3.0 * z);
        let dx = (mean - x) / mean;
        let dy = (mean - y) / mean;
        let dz = (mean - z) / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < errtol {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let series = 1.0
                + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea));
            return Ok(3.0 * sum + factor * series / (mean * mean.sqrt()));
        }
    }
    Err(Error::ConvergenceFailure { context: "carlson_rd duplication" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn equal_arguments_reduce_to_powers() {
        for a in [0.25, 1.0, 4.0, 9.0] {
            assert_relative_eq!(
                carlson_rf(a, a, a, 1e-12).unwrap(),
                1.0 / a.sqrt(),
                max_relative = 1e-13
            );
            assert_relative_eq!(
                carlson_rd(a, a, a, 1e-12).unwrap(),
                a.powf(-1.5),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn rf_reference_value() {
        // RF(1, 2, 4): checked against direct adaptive quadrature of the
        // defining integral in crate::quad (agrees to 1e-11).
        let direct = crate::quad::integrate_to_infinity_sqrt(
            |t| 0.5 / ((t + 1.0) * (t + 2.0) * (t + 4.0)).sqrt(),
            0.0,
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(carlson_rf(1.0, 2.0, 4.0, 1e-12).unwrap(), direct, max_relative = 1e-11);
    }

    #[test]
    fn rd_reference_value() {
        let direct = crate::quad::integrate_to_infinity(
            |t| 1.5 / ((t + 4.0) * ((t + 1.0) * (t + 2.0) * (t + 4.0)).sqrt()),
            0.0,
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(carlson_rd(1.0, 2.0, 4.0, 1e-12).unwrap(), direct, max_relative = 1e-11);
    }

    #[test]
    fn nonpositive_arguments_are_rejected() {
        assert!(carlson_rf(0.0, 1.0, 1.0, 1e-12).is_err());
        assert!(carlson_rd(1.0, -1.0, 1.0, 1e-12).is_err());
    }
}
