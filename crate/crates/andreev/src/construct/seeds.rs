//! Closed-form geometric seeds: the prism, and the split prism obtained by
//! deforming a prism and gluing it to its mirror image.

use super::{ConstructError, PipelineConfig, PipelineReport};
use crate::angles::AngleAssignment;
use crate::combinatorics::{base_prism, base_split_prism};
use crate::lorentz::{reflection_matrix, LorentzVector};
use crate::solver::{
    build_system, gauge_normalize, homotopy_deform, pick_gauge, Gauge, Realization,
};
use std::f64::consts::PI;

/// Natal angles for a prism seed: small polygon angles and caps slightly
/// below a right angle.
pub fn natal_prism_angles(n: usize) -> (f64, f64) {
    let k = (n - 2) as f64;
    let theta_p = (PI / 8.0).min((PI / 2.0 - PI / k) / 2.0);
    (theta_p, 0.45 * PI)
}

/// Builds the `n`-face prism in closed form: a regular `(n-2)`-gon with
/// interior angle `2·theta_p` in the equatorial plane, side planes
/// perpendicular to it through the polygon sides, and two caps orthogonal
/// to the `x3`-axis meeting the sides at `theta_c`.
pub fn build_prism(
    n: usize,
    theta_p: f64,
    theta_c: f64,
    cfg: &PipelineConfig,
) -> Result<Realization, ConstructError> {
    let complex = base_prism(n)?;
    let k = n - 2;
    let limit = PI / 2.0 - PI / k as f64;
    if !(0.0 < theta_p && theta_p < limit) || !(0.0 < theta_c && theta_c < PI / 2.0) {
        return Err(ConstructError::BadAngles { theta_p, theta_c, limit });
    }
    // Apothem of the polygon and height of the caps.
    let cosh_rho = theta_p.cos() / (PI / k as f64).sin();
    let rho = cosh_rho.acosh();
    let h = (theta_c.cos() / rho.sinh()).asinh();
    let mut normals = Vec::with_capacity(n);
    for i in 0..k {
        let phi = 2.0 * PI * i as f64 / k as f64;
        normals.push(LorentzVector::new(
            rho.sinh(),
            rho.cosh() * phi.cos(),
            rho.cosh() * phi.sin(),
            0.0,
        ));
    }
    normals.push(LorentzVector::new(h.sinh(), 0.0, 0.0, h.cosh()));
    normals.push(LorentzVector::new(h.sinh(), 0.0, 0.0, -h.cosh()));
    let seed = Realization::from_normals(complex, normals)?;
    let seed = gauge_normalize(&seed)?;
    seed.verify(&prism_angles(n, theta_p, theta_c), &cfg.verify)
        .map_err(ConstructError::Verify)?;
    Ok(seed)
}

/// The angles realized by [`build_prism`]: `2·theta_p` between consecutive
/// sides, `theta_c` between caps and sides.
pub fn prism_angles(n: usize, theta_p: f64, theta_c: f64) -> AngleAssignment {
    let complex = base_prism(n).expect("valid prism size");
    let k = n - 2;
    AngleAssignment::from_fn(&complex, |i, j| {
        if i < k && j < k {
            2.0 * theta_p
        } else {
            theta_c
        }
    })
}

/// The split-prism angle pattern after gluing: `π/3` on cap edges, `π/2`
/// everywhere else (the doubled `π/4` pair included).
pub fn split_prism_angles(n: usize) -> AngleAssignment {
    let complex = base_split_prism(n).expect("valid split prism size");
    AngleAssignment::from_fn(&complex, |i, j| {
        if i >= n - 2 || j >= n - 2 {
            PI / 3.0
        } else {
            PI / 2.0
        }
    })
}

/// Builds the `n`-face split prism: an `(n-1)`-face prism is deformed so
/// that its gluing cap meets the laterals at right angles except for one
/// `π/4` edge, its far cap at `π/3`; reflecting through the gluing plane
/// and merging the flattened faces yields the split prism, with the two
/// `π/4` edges fusing into one right angle.
pub fn build_split_prism(
    n: usize,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    let complex = base_split_prism(n)?;
    let m = n - 1;
    let laterals = m - 2; // = n - 3
    let glue = m - 2; // top cap of the m-face prism
    let far = m - 1;
    let split_lateral = laterals - 1;

    let (theta_p, theta_c) = natal_prism_angles(m);
    let prism = build_prism(m, theta_p, theta_c, cfg)?;
    report.stage("split-prism seed", 0.0, 0);

    let half_pattern = AngleAssignment::from_fn(prism.complex(), |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        if hi == far {
            PI / 3.0
        } else if hi == glue {
            if lo == split_lateral {
                PI / 4.0
            } else {
                PI / 2.0
            }
        } else {
            PI / 2.0
        }
    });
    let gauge = pick_gauge(&prism);
    let sys = build_system(prism.complex(), Gauge::Anchored(gauge));
    let (half, log) = homotopy_deform(
        &sys,
        &prism,
        &half_pattern,
        cfg.subdivisions,
        cfg.residual_tol,
        cfg.max_iter,
    )?;
    report.stage("split-prism half deformation", log.final_residual(), log.total_iterations());

    // Mirror through the gluing plane and merge: laterals meeting the glue
    // cap at a right angle coincide with their mirror images.
    let r = reflection_matrix(&half.normals()[glue])?;
    let mut normals = Vec::with_capacity(n);
    for i in 0..laterals - 1 {
        normals.push(half.normals()[i]);
    }
    normals.push(half.normals()[split_lateral]); // s1
    normals.push(r.apply(&half.normals()[split_lateral])); // s2
    normals.push(half.normals()[far]); // c1
    normals.push(r.apply(&half.normals()[far])); // c2
    let merged = Realization::from_normals(complex, normals)?;
    let merged = gauge_normalize(&merged)?;
    merged.verify(&split_prism_angles(n), &cfg.verify).map_err(ConstructError::Verify)?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{are_isomorphic, base_split_prism, glue_complexes};
    use crate::lorentz::VertexClass;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn prism_5_is_compact_and_verified() {
        let cfg = PipelineConfig::default();
        let p = build_prism(5, PI / 8.0, 0.45 * PI, &cfg).unwrap();
        assert!(p.vertices().iter().all(VertexClass::is_finite));
        let a = p.extract_angles().unwrap();
        assert!((a.get(0, 1).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!((a.get(0, 3).unwrap() - 0.45 * PI).abs() < 1e-12);
    }

    #[test]
    fn prism_rejects_flat_polygon_angles() {
        let cfg = PipelineConfig::default();
        // For the cube (k = 4) the polygon angle limit is pi/4.
        assert!(matches!(
            build_prism(6, PI / 3.0, 0.45 * PI, &cfg),
            Err(ConstructError::BadAngles { .. })
        ));
    }

    #[test]
    fn split_prism_12_builds_and_verifies() {
        let cfg = PipelineConfig::default();
        let mut report = PipelineReport::default();
        let d = build_split_prism(12, &cfg, &mut report).unwrap();
        assert!(d.vertices().iter().all(VertexClass::is_finite));
        let a = d.extract_angles().unwrap();
        // Glued quarter-angle edges measure a right angle.
        assert!((a.get(8, 9).unwrap() - PI / 2.0).abs() < 1e-9);
        // Cap ring edges measure pi/3.
        assert!((a.get(0, 10).unwrap() - PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn split_prism_matches_abstract_gluing() {
        // The abstract gluing of two prism complexes along a cap, merging
        // all cap edges but one, is the split prism complex the geometric
        // construction targets.
        let n = 12;
        let p = base_prism(n - 1).unwrap();
        let cap = n - 3;
        let ring: Vec<usize> = p.link_cycle(cap).to_vec();
        let split = n - 4;
        let seam: BTreeMap<usize, usize> = ring.iter().map(|&u| (u, u)).collect();
        let merge: BTreeSet<usize> = ring.iter().copied().filter(|&u| u != split).collect();
        let (glued, _, _) = glue_complexes(&p, cap, &p, cap, &seam, &merge).unwrap();
        assert!(are_isomorphic(&glued, &base_split_prism(n).unwrap()));
    }
}
