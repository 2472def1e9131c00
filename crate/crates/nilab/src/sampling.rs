//! Deterministic low-discrepancy point sets used for collocation,
//! validation, and far-field probing.

use nalgebra::Vector3;

/// Van der Corput radical inverse in the given base.
fn radical_inverse(mut n: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut result = 0.0;
    while n > 0 {
        result += (n % base) as f64 * inv;
        n /= base;
        inv /= base as f64;
    }
    result
}

/// `index`-th point of the 3D Halton sequence in the unit cube.
pub fn halton3(index: usize) -> Vector3<f64> {
    Vector3::new(
        radical_inverse(index + 1, 2),
        radical_inverse(index + 1, 3),
        radical_inverse(index + 1, 5),
    )
}

/// Quasi-random points in an axis-aligned box.
pub fn halton_in_box(count: usize, lo: &Vector3<f64>, hi: &Vector3<f64>) -> Vec<Vector3<f64>> {
    (0..count)
        .map(|i| {
            let u = halton3(i);
            Vector3::new(
                lo.x + u.x * (hi.x - lo.x),
                lo.y + u.y * (hi.y - lo.y),
                lo.z + u.z * (hi.z - lo.z),
            )
        })
        .collect()
}

/// `count` quasi-uniform directions on the unit sphere (spherical Fibonacci
/// lattice).
pub fn fibonacci_sphere(count: usize) -> Vec<Vector3<f64>> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
            Vector3::new(r * theta.cos(), r * theta.sin(), z)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_stays_in_the_box() {
        let lo = Vector3::new(-1.0, 0.0, 2.0);
        let hi = Vector3::new(1.0, 3.0, 5.0);
        for p in halton_in_box(500, &lo, &hi) {
            assert!(p.x >= lo.x && p.x <= hi.x);
            assert!(p.y >= lo.y && p.y <= hi.y);
            assert!(p.z >= lo.z && p.z <= hi.z);
        }
    }

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let pts = fibonacci_sphere(242);
        assert_eq!(pts.len(), 242);
        let mut mean = Vector3::zeros();
        for p in &pts {
            assert!((p.norm() - 1.0).abs() < 1e-12);
            mean += *p;
        }
        assert!((mean / 242.0).norm() < 0.02);
    }
}
