//! Explicit solution of the over-determined shell problem on confocal
//! ellipsoids:
//!
//! `w(x) = (1/2) i0(rho) - (1/2) sum_j phi_j(rho) x_j^2 + (1/2) sum_j phi_j(rho0) x_j^2`
//!
//! with gradient `(phi_j(rho0) - phi_j(rho)) x_j`, constant Laplacian
//! `k = sum_j phi_j(rho0) = 2 / sqrt(g(rho0))`, boundary gradient `A x` on the
//! inner surface for `A = diag(phi_j(rho0) - phi_j(0))`, and `d = 0`.

use nalgebra::{Matrix3, Vector3};

use crate::elliptic::EllipticContext;
use crate::error::Result;
use crate::field::{FieldDomain, ShellField};
use crate::geometry::{rho_coordinate, ConfocalPair};

#[derive(Debug, Clone)]
pub struct ConfocalSolution {
    pair: ConfocalPair,
    ctx: EllipticContext,
    phi_outer: [f64; 3],
    phi_inner: [f64; 3],
    k: f64,
}

impl ConfocalSolution {
    pub fn new(pair: ConfocalPair) -> Result<Self> {
        let c = pair.base.semi_axes;
        let ctx = EllipticContext::new([c.x, c.y, c.z])?;
        let phi_outer = ctx.phi_all(pair.rho0)?;
        let phi_inner = ctx.phi_all(0.0)?;
        let k = phi_outer.iter().sum();
        Ok(Self { pair, ctx, phi_outer, phi_inner, k })
    }

    pub fn pair(&self) -> &ConfocalPair {
        &self.pair
    }

    /// Constant Laplacian of the solution.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Diagonal boundary-gradient matrix on the inner surface.
    pub fn a_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&self.a_diagonal())
    }

    pub fn a_diagonal(&self) -> Vector3<f64> {
        Vector3::new(
            self.phi_outer[0] - self.phi_inner[0],
            self.phi_outer[1] - self.phi_inner[1],
            self.phi_outer[2] - self.phi_inner[2],
        )
    }

    /// Constant gradient offset on the inner surface (identically zero for
    /// the centered construction).
    pub fn d_vector(&self) -> Vector3<f64> {
        Vector3::zeros()
    }

    /// Signed defect of the volume/trace identity
    /// `k |shell| + tr A |core|`.
    pub fn trace_defect(&self) -> f64 {
        let core = self.pair.base.volume();
        let shell = self.pair.shell_volume();
        self.k * shell + self.a_diagonal().sum() * core
    }

    fn local_rho(&self, x: &Vector3<f64>) -> Result<f64> {
        let local = x - self.pair.base.center;
        rho_coordinate(&local, &self.pair.base.semi_axes)
    }
}

impl ShellField for ConfocalSolution {
    fn value(&self, x: &Vector3<f64>) -> Result<f64> {
        let rho = self.local_rho(x)?;
        let local = x - self.pair.base.center;
        let phi = self.ctx.phi_all(rho)?;
        let mut v = 0.5 * self.ctx.i0(rho)?;
        for j in 0..3 {
            v += 0.5 * (self.phi_outer[j] - phi[j]) * local[j] * local[j];
        }
        Ok(v)
    }

    fn gradient(&self, x: &Vector3<f64>) -> Result<Vector3<f64>> {
        let rho = self.local_rho(x)?;
        let local = x - self.pair.base.center;
        let phi = self.ctx.phi_all(rho)?;
        Ok(Vector3::new(
            (self.phi_outer[0] - phi[0]) * local.x,
            (self.phi_outer[1] - phi[1]) * local.y,
            (self.phi_outer[2] - phi[2]) * local.z,
        ))
    }

    fn laplacian(&self, _x: &Vector3<f64>) -> Result<f64> {
        Ok(self.k)
    }

    fn domain(&self) -> FieldDomain {
        FieldDomain::ConfocalShell(self.pair)
    }
}
