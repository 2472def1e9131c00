//! Closed triangulated surfaces: icosphere generation, ellipsoid meshing,
//! OFF serialization, and winding-number containment.

use std::collections::HashMap;
use std::io::Write;

use nalgebra::Vector3;

use crate::config::MAX_SUBDIVISIONS;
use crate::error::{Error, Result};
use crate::geometry::Ellipsoid;

/// Closed orientable triangle mesh with per-triangle frame data.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[usize; 3]>,
    centroids: Vec<Vector3<f64>>,
    areas: Vec<f64>,
    normals: Vec<Vector3<f64>>,
}

impl TriMesh {
    /// Builds the mesh and verifies it is a closed oriented surface:
    /// positive areas, vanishing total vector area, positive enclosed volume.
    pub fn new(vertices: Vec<Vector3<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        let mut centroids = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        let mut normals = Vec::with_capacity(triangles.len());
        let mut vector_area = Vector3::zeros();
        let mut total_area = 0.0;
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= n) {
                return Err(Error::InvalidMesh(format!("triangle {t} has out-of-range index")));
            }
            let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
            let cross = (b - a).cross(&(c - a));
            let double_area = cross.norm();
            if double_area <= 0.0 {
                return Err(Error::InvalidMesh(format!("triangle {t} is degenerate")));
            }
            areas.push(0.5 * double_area);
            normals.push(cross / double_area);
            centroids.push((a + b + c) / 3.0);
            vector_area += 0.5 * cross;
            total_area += 0.5 * double_area;
        }
        let mesh = Self { vertices, triangles, centroids, areas, normals };
        if vector_area.norm() > 1e-12 * total_area {
            return Err(Error::InvalidMesh(format!(
                "total vector area {:.3e} exceeds closure tolerance",
                vector_area.norm()
            )));
        }
        if mesh.volume() <= 0.0 {
            return Err(Error::InvalidMesh("enclosed volume is not positive".into()));
        }
        Ok(mesh)
    }

    pub fn centroid(&self, t: usize) -> Vector3<f64> {
        self.centroids[t]
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn normal(&self, t: usize) -> Vector3<f64> {
        self.normals[t]
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex_positions(&self, t: usize) -> [Vector3<f64>; 3] {
        let tri = self.triangles[t];
        [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Signed volume by the divergence theorem; positive for outward
    /// orientation.
    pub fn volume(&self) -> f64 {
        let mut v = 0.0;
        for tri in &self.triangles {
            let [a, b, c] = [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]];
            v += a.dot(&b.cross(&c));
        }
        v / 6.0
    }

    /// Vertex average; reference point for inflation/deflation of source
    /// surfaces and for diameter estimates.
    pub fn region_centroid(&self) -> Vector3<f64> {
        let mut s = Vector3::zeros();
        for v in &self.vertices {
            s += *v;
        }
        s / self.vertices.len() as f64
    }

    /// Generalized winding number of `x`: 1 inside, 0 outside.
    pub fn winding_number(&self, x: &Vector3<f64>) -> f64 {
        let mut total = 0.0;
        for tri in &self.triangles {
            let a = self.vertices[tri[0]] - x;
            let b = self.vertices[tri[1]] - x;
            let c = self.vertices[tri[2]] - x;
            total += solid_angle(&a, &b, &c);
        }
        total / (4.0 * std::f64::consts::PI)
    }

    pub fn contains(&self, x: &Vector3<f64>) -> bool {
        self.winding_number(x) > 0.5
    }

    /// Largest vertex distance from the region centroid, doubled.
    pub fn diameter(&self) -> f64 {
        let c = self.region_centroid();
        2.0 * self
            .vertices
            .iter()
            .map(|v| (v - c).norm())
            .fold(0.0, f64::max)
    }

    /// OFF-format text with full-precision vertices, deterministic ordering.
    pub fn to_off(&self) -> String {
        let mut out = String::new();
        out.push_str("OFF\n");
        out.push_str(&format!("{} {} 0\n", self.vertices.len(), self.triangles.len()));
        for v in &self.vertices {
            out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", v.x, v.y, v.z));
        }
        for t in &self.triangles {
            out.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
        }
        out
    }

    pub fn write_off(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_off().as_bytes())?;
        Ok(())
    }

    pub fn read_off(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_off(&text)
    }

    pub fn parse_off(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(|l| l.split_whitespace());
        let bad = |m: &str| Error::InvalidMesh(format!("OFF parse: {m}"));
        if tokens.next() != Some("OFF") {
            return Err(bad("missing OFF header"));
        }
        let mut next_num = |what: &str| -> Result<f64> {
            tokens
                .next()
                .ok_or_else(|| bad(&format!("unexpected end before {what}")))?
                .parse::<f64>()
                .map_err(|_| bad(&format!("bad number for {what}")))
        };
        let nv = next_num("vertex count")? as usize;
        let nf = next_num("face count")? as usize;
        let _ne = next_num("edge count")?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let x = next_num("vertex x")?;
            let y = next_num("vertex y")?;
            let z = next_num("vertex z")?;
            vertices.push(Vector3::new(x, y, z));
        }
        let mut triangles = Vec::with_capacity(nf);
        for _ in 0..nf {
            let k = next_num("face arity")? as usize;
            if k != 3 {
                return Err(bad("only triangle faces are supported"));
            }
            let a = next_num("index")? as usize;
            let b = next_num("index")? as usize;
            let c = next_num("index")? as usize;
            triangles.push([a, b, c]);
        }
        Self::new(vertices, triangles)
    }
}

/// Signed solid angle of the triangle (a, b, c) seen from the origin
/// (van Oosterom–Strackee).
pub fn solid_angle(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let la = a.norm();
    let lb = b.norm();
    let lc = c.norm();
    let numer = a.dot(&b.cross(c));
    let denom = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    2.0 * numer.atan2(denom)
}

/// Unit icosphere with `10 * 4^s + 2` vertices and `20 * 4^s` triangles.
pub fn icosphere(subdivisions: u32) -> Result<TriMesh> {
    if subdivisions > MAX_SUBDIVISIONS {
        return Err(Error::SubdivisionTooLarge(subdivisions, MAX_SUBDIVISIONS));
    }
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vector3<f64>> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(|v| Vector3::new(v[0], v[1], v[2]).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoint_cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        for &[i0, i1, i2] in &faces {
            let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vector3<f64>>| -> usize {
                let key = if a < b { (a, b) } else { (b, a) };
                *midpoint_cache.entry(key).or_insert_with(|| {
                    let m = ((verts[a] + verts[b]) * 0.5).normalize();
                    verts.push(m);
                    verts.len() - 1
                })
            };
            let m01 = midpoint(i0, i1, &mut vertices);
            let m12 = midpoint(i1, i2, &mut vertices);
            let m20 = midpoint(i2, i0, &mut vertices);
            new_faces.push([i0, m01, m20]);
            new_faces.push([i1, m12, m01]);
            new_faces.push([i2, m20, m12]);
            new_faces.push([m01, m12, m20]);
        }
        faces = new_faces;
    }

    TriMesh::new(vertices, faces)
}

/// Icosphere carried onto the ellipsoid by per-axis scaling. The affine map
/// keeps the relative volume error identical to the unit sphere's at every
/// subdivision level.
pub fn mesh_ellipsoid(e: &Ellipsoid, subdivisions: u32) -> Result<TriMesh> {
    let unit = icosphere(subdivisions)?;
    let vertices = unit
        .vertices
        .iter()
        .map(|v| e.center + v.component_mul(&e.semi_axes))
        .collect();
    TriMesh::new(vertices, unit.triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn icosahedron_matches_closed_form_volume() {
        // Circumradius-1 icosahedron: edge 4/sqrt(10+2 sqrt 5), volume
        // (5/12)(3+sqrt 5) edge^3.
        let mesh = icosphere(0).unwrap();
        assert_eq!(mesh.vertices.len(), 12);
        assert_eq!(mesh.num_triangles(), 20);
        let edge = 4.0 / (10.0 + 2.0 * 5.0_f64.sqrt()).sqrt();
        let expected = 5.0 / 12.0 * (3.0 + 5.0_f64.sqrt()) * edge.powi(3);
        assert_relative_eq!(mesh.volume(), expected, epsilon = 1e-12);
        assert!((mesh.volume() - 2.54).abs() < 0.01);
    }

    #[test]
    fn refined_sphere_volume_converges() {
        let mesh = icosphere(4).unwrap();
        assert_eq!(mesh.vertices.len(), 10 * 4_usize.pow(4) + 2);
        let exact = 4.0 * PI / 3.0;
        assert!((mesh.volume() - exact).abs() / exact < 0.0025);
    }

    #[test]
    fn ellipsoid_volume_scales_with_axes() {
        let e = Ellipsoid::new(Vector3::zeros(), Vector3::new(1.0, 1.5, 2.0)).unwrap();
        let mesh = mesh_ellipsoid(&e, 4).unwrap();
        let exact = 4.0 * PI;
        assert!((mesh.volume() - exact).abs() / exact < 0.0025);
        for v in &mesh.vertices {
            assert_relative_eq!(e.implicit(v), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauss_identity_relates_centroid_flux_to_volume() {
        let e = Ellipsoid::new(Vector3::new(0.3, -0.1, 0.0), Vector3::new(1.0, 1.5, 2.0)).unwrap();
        let mesh = mesh_ellipsoid(&e, 4).unwrap();
        let flux: f64 = (0..mesh.num_triangles())
            .map(|t| mesh.centroid(t).dot(&mesh.normal(t)) * mesh.area(t))
            .sum();
        assert_relative_eq!(flux, 3.0 * mesh.volume(), max_relative = 1e-3);
    }

    #[test]
    fn subdivision_guard_trips_above_limit() {
        assert!(matches!(icosphere(8), Err(Error::SubdivisionTooLarge(8, _))));
    }

    #[test]
    fn winding_number_classifies_points() {
        let e = Ellipsoid::new(Vector3::zeros(), Vector3::new(1.0, 1.5, 2.0)).unwrap();
        let mesh = mesh_ellipsoid(&e, 2).unwrap();
        assert!(mesh.contains(&Vector3::new(0.0, 0.0, 0.0)));
        assert!(mesh.contains(&Vector3::new(0.6, 0.0, 0.0)));
        assert!(!mesh.contains(&Vector3::new(1.2, 0.0, 0.0)));
        assert!(!mesh.contains(&Vector3::new(0.0, 0.0, 2.5)));
    }

    #[test]
    fn off_round_trip_is_exact() {
        let e = Ellipsoid::new(Vector3::zeros(), Vector3::new(1.0, 1.5, 2.0)).unwrap();
        let mesh = mesh_ellipsoid(&e, 1).unwrap();
        let text = mesh.to_off();
        let back = TriMesh::parse_off(&text).unwrap();
        assert_eq!(mesh.vertices, back.vertices);
        assert_eq!(mesh.triangles, back.triangles);
    }
}
