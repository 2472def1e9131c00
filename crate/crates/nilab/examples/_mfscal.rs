use nalgebra::Vector3;
use nilab::geometry::{ConfocalPair, Ellipsoid};
use nilab::overdet::{mfs_fit, MfsConfig, MfsGeometry, AConstraint};

fn main() {
    let cfg = MfsConfig { constraint: AConstraint::SymmetricA, sources: 220, outer_inflation: 2.5, inner_deflation: 0.3, tsvd_cutoff: 1e-12 };
    let base = Ellipsoid::new(Vector3::zeros(), Vector3::new(1.0, 1.5, 2.0)).unwrap();
    let pair = ConfocalPair::new(base, 1.0).unwrap();
    let geometry = MfsGeometry::from_pair(&pair, 3).unwrap();
    let fit = mfs_fit(&geometry, &cfg).unwrap();
    println!("confocal sym: rho_fit={:.3e} diag=({:.8},{:.8},{:.8})", fit.rho_fit, fit.a_fit[(0,0)], fit.a_fit[(1,1)], fit.a_fit[(2,2)]);
    let sol = nilab::analytic::ConfocalSolution::new(pair).unwrap();
    let ex = sol.a_diagonal() / sol.k();
    println!("expected    : ({:.8},{:.8},{:.8})", ex.x, ex.y, ex.z);

    let iso = MfsConfig { constraint: AConstraint::IsotropicA, sources: 220, outer_inflation: 2.5, inner_deflation: 0.3, tsvd_cutoff: 1e-12 };
    let outer = Ellipsoid::new(Vector3::zeros(), Vector3::repeat(2.0)).unwrap();
    let core = Ellipsoid::new(Vector3::new(0.3, 0.0, 0.0), Vector3::repeat(1.0)).unwrap();
    let off = mfs_fit(&MfsGeometry::from_ellipsoids(&outer, &core, 3).unwrap(), &iso).unwrap();
    println!("offset iso: rho_fit={:.3e}", off.rho_fit);

    let stretch = 1.2;
    let dcore = Ellipsoid::new(Vector3::zeros(), Vector3::new(stretch, 1.0, 1.0/stretch)).unwrap();
    let dist = mfs_fit(&MfsGeometry::from_ellipsoids(&outer, &dcore, 3).unwrap(), &iso).unwrap();
    println!("distorted iso: rho_fit={:.3e}", dist.rho_fit);

    // distorted with symmetric constraint (non-confocal: should still fail)
    let dist_sym = mfs_fit(&MfsGeometry::from_ellipsoids(&outer, &dcore, 3).unwrap(), &cfg).unwrap();
    println!("distorted sym: rho_fit={:.3e}", dist_sym.rho_fit);
}
