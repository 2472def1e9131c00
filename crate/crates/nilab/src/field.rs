//! Scalar fields on shell regions: evaluation trait, finite-difference
//! Laplacian probe, and affine matching between fields.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::{ConfocalPair, Region};

/// Region a field is defined on; used by the stencil guard.
#[derive(Debug, Clone, Copy)]
pub enum FieldDomain {
    WholeSpace,
    /// Shell between a confocal pair (closure included).
    ConfocalShell(ConfocalPair),
    /// Spherical annulus around a center.
    SphericalShell { center: Vector3<f64>, r_inner: f64, r_outer: f64 },
}

impl FieldDomain {
    pub fn contains(&self, x: &Vector3<f64>) -> bool {
        match self {
            FieldDomain::WholeSpace => true,
            FieldDomain::ConfocalShell(pair) => matches!(
                pair.classify(x),
                Ok(Region::Shell | Region::OnBoundary(_))
            ),
            FieldDomain::SphericalShell { center, r_inner, r_outer } => {
                let r = (x - center).norm();
                (*r_inner..=*r_outer).contains(&r)
            }
        }
    }
}

/// An evaluatable scalar field on a shell exposing value, gradient, and
/// Laplacian.
pub trait ShellField: Sync {
    fn value(&self, x: &Vector3<f64>) -> Result<f64>;
    fn gradient(&self, x: &Vector3<f64>) -> Result<Vector3<f64>>;
    fn laplacian(&self, x: &Vector3<f64>) -> Result<f64>;
    fn domain(&self) -> FieldDomain {
        FieldDomain::WholeSpace
    }
}

impl<F: ShellField + ?Sized> ShellField for &F {
    fn value(&self, x: &Vector3<f64>) -> Result<f64> {
        (**self).value(x)
    }
    fn gradient(&self, x: &Vector3<f64>) -> Result<Vector3<f64>> {
        (**self).gradient(x)
    }
    fn laplacian(&self, x: &Vector3<f64>) -> Result<f64> {
        (**self).laplacian(x)
    }
    fn domain(&self) -> FieldDomain {
        (**self).domain()
    }
}

/// Central second-difference estimate of the Laplacian, independent of the
/// field's own `laplacian` claim.
pub fn laplacian_probe<F: ShellField + ?Sized>(field: &F, x: &Vector3<f64>, h: f64) -> Result<f64> {
    let domain = field.domain();
    let mut stencil_ok = domain.contains(x);
    let mut sum = 0.0;
    let center = 2.0 * field.value(x)?;
    for axis in 0..3 {
        let mut step = Vector3::zeros();
        step[axis] = h;
        let xp = x + step;
        let xm = x - step;
        stencil_ok &= domain.contains(&xp) && domain.contains(&xm);
        if !stencil_ok {
            return Err(Error::StencilLeavesShell(x.x, x.y, x.z, h));
        }
        sum += field.value(&xp)? - center + field.value(&xm)?;
    }
    Ok(sum / (h * h))
}

/// `scale * f + offset`; the affine freedom of the over-determined problem.
pub struct AffineOf<F> {
    pub inner: F,
    pub scale: f64,
    pub offset: f64,
}

impl<F: ShellField> ShellField for AffineOf<F> {
    fn value(&self, x: &Vector3<f64>) -> Result<f64> {
        Ok(self.scale * self.inner.value(x)? + self.offset)
    }
    fn gradient(&self, x: &Vector3<f64>) -> Result<Vector3<f64>> {
        Ok(self.scale * self.inner.gradient(x)?)
    }
    fn laplacian(&self, x: &Vector3<f64>) -> Result<f64> {
        Ok(self.scale * self.inner.laplacian(x)?)
    }
    fn domain(&self) -> FieldDomain {
        self.inner.domain()
    }
}

/// Result of matching `first ~ scale * second + offset` over sample points.
#[derive(Debug, Clone, Copy)]
pub struct AffineMatch {
    pub scale: f64,
    pub offset: f64,
    pub sup_residual: f64,
}

/// Matches two solutions of the same geometry up to the affine freedom.
/// The scale is pinned by the Laplacian ratio; the offset is the mean gap.
pub fn affine_match<F1, F2>(
    first: &F1,
    second: &F2,
    k_first: f64,
    k_second: f64,
    samples: &[Vector3<f64>],
) -> Result<AffineMatch>
where
    F1: ShellField + ?Sized,
    F2: ShellField + ?Sized,
{
    assert!(!samples.is_empty(), "affine_match needs sample points");
    let scale = k_first / k_second;
    let mut gap_sum = 0.0;
    for x in samples {
        gap_sum += first.value(x)? - scale * second.value(x)?;
    }
    let offset = gap_sum / samples.len() as f64;
    let mut sup = 0.0_f64;
    for x in samples {
        let r = (first.value(x)? - scale * second.value(x)? - offset).abs();
        sup = sup.max(r);
    }
    Ok(AffineMatch { scale, offset, sup_residual: sup })
}
