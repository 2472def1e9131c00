//! Axis-aligned ellipsoids, confocal pairs, and confocal ellipsoidal
//! coordinates.
//!
//! The confocal coordinate of a point is the largest root of the cubic
//! `p(s) = prod_j (c_j^2 + s) - sum_j x_j^2 prod_{i != j} (c_i^2 + s)`.
//! Roots are found by bracketed bisection with a Newton polish; components
//! with `x_j = 0` and repeated semi-axes deflate the cubic analytically
//! before any root-finding, which keeps points on symmetry planes exact.

mod mesh;

pub use mesh::{icosphere, mesh_ellipsoid, solid_angle, TriMesh};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use nalgebra::Vector3;

/// Axis-aligned ellipsoid with an optional center offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub center: Vector3<f64>,
    pub semi_axes: Vector3<f64>,
}

impl Ellipsoid {
    pub fn new(center: Vector3<f64>, semi_axes: Vector3<f64>) -> Result<Self> {
        if !center.iter().all(|v| v.is_finite()) || !semi_axes.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteInput("ellipsoid parameters"));
        }
        if semi_axes.iter().any(|&c| c <= 0.0) {
            return Err(Error::DegenerateAxes(semi_axes.into()));
        }
        Ok(Self { center, semi_axes })
    }

    /// Centered unit-free implicit value `sum x_j^2 / c_j^2 - 1`.
    pub fn implicit(&self, x: &Vector3<f64>) -> f64 {
        let d = x - self.center;
        d.zip_map(&self.semi_axes, |xi, ci| (xi / ci) * (xi / ci)).sum() - 1.0
    }

    pub fn contains(&self, x: &Vector3<f64>) -> bool {
        self.implicit(x) <= 0.0
    }

    pub fn volume(&self) -> f64 {
        4.0 * std::f64::consts::PI / 3.0 * self.semi_axes.iter().product::<f64>()
    }

    /// Radial projection of a unit direction onto the surface.
    pub fn surface_point(&self, dir: &Vector3<f64>) -> Vector3<f64> {
        let t = dir
            .zip_map(&self.semi_axes, |di, ci| (di / ci) * (di / ci))
            .sum()
            .sqrt();
        self.center + dir / t
    }

}

/// The three ordered roots of the confocal cubic at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfocalCoords {
    pub rho: f64,
    pub mu: f64,
    pub xi: f64,
}

/// Region of space relative to a [`ConfocalPair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Core,
    Shell,
    Exterior,
    OnBoundary(Boundary),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Inner,
    Outer,
}

/// Core ellipsoid plus the confocal shell surface at coordinate `rho0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfocalPair {
    pub base: Ellipsoid,
    pub rho0: f64,
}

impl ConfocalPair {
    pub fn new(base: Ellipsoid, rho0: f64) -> Result<Self> {
        if !rho0.is_finite() {
            return Err(Error::NonFiniteInput("rho0"));
        }
        if rho0 <= 0.0 {
            return Err(Error::AssumptionViolated(format!(
                "shell parameter rho0 must be positive, got {rho0}"
            )));
        }
        Ok(Self { base, rho0 })
    }

    /// Concentric pair of spheres as the degenerate confocal case.
    pub fn concentric_spheres(center: Vector3<f64>, r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner > 0.0 && r_outer > r_inner) {
            return Err(Error::AssumptionViolated(format!(
                "need 0 < r_inner < r_outer, got ({r_inner}, {r_outer})"
            )));
        }
        let base = Ellipsoid::new(center, Vector3::repeat(r_inner))?;
        ConfocalPair::new(base, r_outer * r_outer - r_inner * r_inner)
    }

    /// Outer surface: semi-axes `sqrt(c_j^2 + rho0)`, same center.
    pub fn outer(&self) -> Ellipsoid {
        Ellipsoid {
            center: self.base.center,
            semi_axes: self.base.semi_axes.map(|c| (c * c + self.rho0).sqrt()),
        }
    }

    pub fn shell_volume(&self) -> f64 {
        self.outer().volume() - self.base.volume()
    }

    pub fn outer_diameter(&self) -> f64 {
        let o = self.outer();
        2.0 * o.semi_axes.iter().cloned().fold(f64::MIN, f64::max)
    }

    /// Confocal coordinate of `x` relative to the base ellipsoid.
    pub fn rho(&self, x: &Vector3<f64>) -> Result<f64> {
        rho_coordinate(&(x - self.base.center), &self.base.semi_axes)
    }

    pub fn classify(&self, x: &Vector3<f64>) -> Result<Region> {
        self.classify_with(x, &Tolerances::default())
    }

    pub fn classify_with(&self, x: &Vector3<f64>, tol: &Tolerances) -> Result<Region> {
        let rho = self.rho(x)?;
        let band = tol.on_boundary;
        if rho.abs() <= band {
            Ok(Region::OnBoundary(Boundary::Inner))
        } else if (rho - self.rho0).abs() <= band {
            Ok(Region::OnBoundary(Boundary::Outer))
        } else if rho < 0.0 {
            Ok(Region::Core)
        } else if rho < self.rho0 {
            Ok(Region::Shell)
        } else {
            Ok(Region::Exterior)
        }
    }
}

/// Pole/weight group of the confocal equation after merging repeated
/// semi-axes and dropping zero components.
#[derive(Debug, Clone, Copy)]
struct Group {
    /// Squared semi-axis shared by the group.
    d: f64,
    /// Sum of squared point components over the group.
    weight: f64,
    multiplicity: u32,
}

fn build_groups(x: &Vector3<f64>, semi_axes: &Vector3<f64>) -> Result<Vec<Group>> {
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteInput("point coordinates"));
    }
    if semi_axes.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return Err(Error::DegenerateAxes((*semi_axes).into()));
    }
    let mut pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(semi_axes.iter())
        .map(|(&xi, &ci)| (ci * ci, xi * xi))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut groups: Vec<Group> = Vec::with_capacity(3);
    for (d, w) in pairs {
        match groups.last_mut() {
            Some(g) if g.d == d => {
                g.weight += w;
                g.multiplicity += 1;
            }
            _ => groups.push(Group { d, weight: w, multiplicity: 1 }),
        }
    }
    Ok(groups)
}

/// `sum_k w_k / (d_k + s) - 1` over the active groups, and its derivative.
fn confocal_fn(groups: &[Group], s: f64) -> (f64, f64) {
    let mut f = -1.0;
    let mut df = 0.0;
    for g in groups {
        if g.weight > 0.0 {
            let t = g.d + s;
            f += g.weight / t;
            df -= g.weight / (t * t);
        }
    }
    (f, df)
}

/// Bisection on `(lo, hi)` where the function is strictly decreasing from
/// `+inf` at the left pole, followed by a Newton polish.
fn bracketed_root(groups: &[Group], lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..110 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (f, _) = confocal_fn(groups, mid);
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..4 {
        let (f, df) = confocal_fn(groups, s);
        if df == 0.0 {
            break;
        }
        let next = s - f / df;
        if next > lo && next < hi {
            s = next;
        } else {
            break;
        }
    }
    s
}

/// All roots of the original cubic: deflated poles plus the bracketed roots
/// of the active rational equation, ascending.
fn confocal_roots(x: &Vector3<f64>, semi_axes: &Vector3<f64>) -> Result<[f64; 3]> {
    let groups = build_groups(x, semi_axes)?;
    let mut roots: Vec<f64> = Vec::with_capacity(3);

    // Deflated roots: multiplicity m contributes m-1 copies of -d when the
    // group is active and m copies when its weight vanishes.
    for g in &groups {
        let copies = if g.weight > 0.0 { g.multiplicity - 1 } else { g.multiplicity };
        for _ in 0..copies {
            roots.push(-g.d);
        }
    }

    let active: Vec<Group> = groups.iter().copied().filter(|g| g.weight > 0.0).collect();
    if !active.is_empty() {
        // One root per gap between consecutive active poles.
        for w in active.windows(2) {
            // Poles at -w[1].d < -w[0].d.
            roots.push(bracketed_root(&active, -w[1].d, -w[0].d));
        }
        // Rightmost root in (-d_min, -d_min + |x|^2].
        let d_min = active[0].d;
        let span: f64 = active.iter().map(|g| g.weight).sum();
        roots.push(bracketed_root(&active, -d_min, -d_min + span));
    }

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    debug_assert_eq!(roots.len(), 3);
    Ok([roots[0], roots[1], roots[2]])
}

/// Only the largest root; never reports degeneracy (the value stays well
/// defined even on the focal set).
pub fn rho_coordinate(x: &Vector3<f64>, semi_axes: &Vector3<f64>) -> Result<f64> {
    let roots = confocal_roots(x, semi_axes)?;
    Ok(roots[2])
}

/// Confocal ellipsoidal coordinates of `x` for the base semi-axes `c`.
///
/// Returns the three ordered roots `xi <= mu <= rho`. On the focal
/// degenerate set, where a bracketed root collides with a deflated pole and
/// the coordinate assignment stops being unique, this reports
/// [`Error::DegenerateCoordinates`] rather than picking a convention.
pub fn confocal_coords(x: &Vector3<f64>, semi_axes: &Vector3<f64>) -> Result<ConfocalCoords> {
    let groups = build_groups(x, semi_axes)?;
    let roots = confocal_roots(x, semi_axes)?;

    // Degeneracy: an active-equation root meeting the pole of an inactive or
    // deflated group collapses two coordinate surfaces.
    let scale = groups.last().map(|g| g.d).unwrap_or(1.0) + x.norm_squared();
    let poles: Vec<f64> = groups
        .iter()
        .filter(|g| g.weight == 0.0 || g.multiplicity > 1)
        .map(|g| -g.d)
        .collect();
    let active: Vec<Group> = groups.iter().copied().filter(|g| g.weight > 0.0).collect();
    if active.len() > 1 || (active.len() == 1 && active[0].multiplicity < 3) {
        for &r in &roots {
            // Deflated copies are exact pole values; only a root strictly
            // produced by bracketing can "collide" inexactly.
            if poles.iter().any(|&p| r != p && (r - p).abs() <= 1e-13 * scale) {
                return Err(Error::DegenerateCoordinates);
            }
        }
    }

    Ok(ConfocalCoords { xi: roots[0], mu: roots[1], rho: roots[2] })
}

/// Residual of the defining equation at coordinate `s`.
pub fn confocal_residual(x: &Vector3<f64>, semi_axes: &Vector3<f64>, s: f64) -> f64 {
    x.iter()
        .zip(semi_axes.iter())
        .map(|(&xi, &ci)| xi * xi / (ci * ci + s))
        .sum::<f64>()
        - 1.0
}
