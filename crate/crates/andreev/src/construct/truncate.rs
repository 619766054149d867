//! Construction of truncated polyhedra.
//!
//! The truncation triangles are collapsed to vertices; the reduced complex
//! is realized near the start of a truncation path and deformed along it,
//! letting exactly the collapsed vertices cross the sphere at infinity.
//! Each such vertex then becomes hyperideal, and the plane orthogonal to
//! its three faces — or, for non-right truncation angles, the plane found
//! by a small Newton solve seeded from it — is the truncation face.

use super::{construct, ConstructError, PipelineConfig, PipelineReport};
use crate::angles::{truncation_path, AngleAssignment};
use crate::combinatorics::AbstractPolyhedron;
use crate::lorentz::{
    metric_apply, minkowski_inner, LorentzVector, VertexClass,
};
use crate::solver::{build_system, gauge_normalize, walk_samples, Realization};
use nalgebra::{Matrix4, Vector4};
use std::f64::consts::{FRAC_PI_2, PI};

pub fn construct_truncated(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    // The input angles may sit anywhere in the polytope; the path
    // construction requires them near π/3, so pre-deform the target: build
    // the polyhedron at angles close to π/3 first and deform afterwards.
    let near = pull_towards_pi_third(c, a, cfg.delta);
    let path = truncation_path(c, &near, cfg.delta, cfg.subdivisions)?;
    let reduced = path.collapse.reduced.clone();

    // Realize the reduced complex at the start of the path.
    let inner = construct(&reduced, &path.samples[0], cfg)?;
    report.merge("reduced complex", inner.report);
    let start = inner.realization;

    // Walk the path; compactness is deliberately not enforced along this
    // leg, since the collapsed vertices must pass through infinity.
    let gauge = cfg.gauge_for(&start);
    let sys = build_system(&reduced, gauge);
    let (open, log) = walk_samples(&sys, &start, &path.samples, cfg.residual_tol, cfg.max_iter)?;
    report.stage("truncation walk", log.final_residual(), log.total_iterations());

    // Exactly the collapsed vertices must have left hyperbolic space.
    let collapsed_triangles: Vec<[usize; 3]> = path.collapsed.iter().map(|cv| cv.triangle).collect();
    for (t, v) in reduced.triangles().iter().zip(open.vertices()) {
        let is_collapsed = collapsed_triangles.contains(t);
        match v {
            VertexClass::Hyperideal(_) if is_collapsed => {}
            VertexClass::Finite(_) if !is_collapsed => {}
            other => {
                return Err(ConstructError::Internal(format!(
                    "vertex {t:?} is {other:?} after the truncation walk"
                )))
            }
        }
    }

    // Assemble the full polyhedron: surviving faces keep their planes, and
    // each collapsed vertex contributes its truncation plane.
    let back: Vec<usize> = {
        // reduced face -> original face
        let mut v = vec![usize::MAX; reduced.face_count()];
        for (orig, m) in path.collapse.face_map.iter().enumerate() {
            if let Some(r) = m {
                v[*r] = orig;
            }
        }
        v
    };
    let mut normals = vec![LorentzVector::default(); c.face_count()];
    for (r, &orig) in back.iter().enumerate() {
        normals[orig] = open.normals()[r];
    }
    for cv in &path.collapsed {
        let tri = cv.triangle;
        let hyper = match &open.vertices()[reduced
            .triangle_position(tri)
            .expect("collapsed triangle exists")]
        {
            VertexClass::Hyperideal(nrm) => *nrm,
            other => {
                return Err(ConstructError::Internal(format!(
                    "collapsed vertex {tri:?} is {other:?}"
                )))
            }
        };
        // Prescribed angles between the truncation face and its three
        // neighbors; right angles take the orthogonal plane as is.
        let face_normals = [
            open.normals()[tri[0]],
            open.normals()[tri[1]],
            open.normals()[tri[2]],
        ];
        let targets = [
            near.get(cv.original_face, back[tri[0]]).ok_or_else(|| missing(cv.original_face))?,
            near.get(cv.original_face, back[tri[1]]).ok_or_else(|| missing(cv.original_face))?,
            near.get(cv.original_face, back[tri[2]]).ok_or_else(|| missing(cv.original_face))?,
        ];
        let all_right = targets.iter().all(|t| (t - FRAC_PI_2).abs() < 1e-12);
        normals[cv.original_face] = if all_right {
            hyper
        } else {
            solve_truncation_plane(&face_normals, &targets, &hyper, cfg)?
        };
        report.truncated_faces.push(cv.original_face);
    }
    let assembled = Realization::from_normals(c.clone(), normals)?;
    report.stage("truncation assembly", 0.0, 0);

    // The assembled polyhedron realizes the near-π/3 angles; deform to the
    // requested target.
    let assembled = gauge_normalize(&assembled)?;
    let gauge = cfg.gauge_for(&assembled);
    let sys = build_system(c, gauge);
    let (p, log) = crate::solver::homotopy_deform(
        &sys,
        &assembled,
        a,
        cfg.subdivisions,
        cfg.residual_tol,
        cfg.max_iter,
    )?;
    report.stage("deformation to target angles", log.final_residual(), log.total_iterations());
    let p = gauge_normalize(&p)?;
    p.verify(a, &cfg.verify).map_err(ConstructError::Verify)?;
    Ok(p)
}

fn missing(face: usize) -> ConstructError {
    ConstructError::Internal(format!("no prescribed angle at truncation face {face}"))
}

/// Moves an angle vector along the straight line towards the all-`π/3`
/// point until every component is within `δ` of `π/3`. All five conditions
/// survive the pull: the segment to the all-`π/3` point stays inside the
/// polytope apart from its final endpoint.
fn pull_towards_pi_third(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    delta: f64,
) -> AngleAssignment {
    let third = PI / 3.0;
    let mut worst: f64 = 0.0;
    for (_, &v) in a.iter() {
        worst = worst.max((v - third).abs());
    }
    if worst <= delta {
        return a.clone();
    }
    // (1 - t)·a + t·(π/3) has distance (1 - t)·worst from π/3.
    let t = 1.0 - (0.9 * delta) / worst;
    AngleAssignment::from_fn(c, |i, j| {
        let v = a.get(i, j).unwrap();
        v * (1.0 - t) + third * t
    })
}

/// Newton solve for a truncation plane meeting three given planes at
/// prescribed angles. The common orthogonal plane (the hyperideal normal)
/// seeds a short continuation from right angles down to the targets.
fn solve_truncation_plane(
    faces: &[LorentzVector; 3],
    targets: &[f64; 3],
    seed: &LorentzVector,
    cfg: &PipelineConfig,
) -> Result<LorentzVector, ConstructError> {
    let mut w = *seed;
    let steps = 25;
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        let stage = [
            FRAC_PI_2 * (1.0 - t) + targets[0] * t,
            FRAC_PI_2 * (1.0 - t) + targets[1] * t,
            FRAC_PI_2 * (1.0 - t) + targets[2] * t,
        ];
        w = newton_plane(faces, &stage, w, cfg)?;
    }
    Ok(w)
}

fn newton_plane(
    faces: &[LorentzVector; 3],
    targets: &[f64; 3],
    mut w: LorentzVector,
    cfg: &PipelineConfig,
) -> Result<LorentzVector, ConstructError> {
    for _ in 0..cfg.max_iter {
        let r = Vector4::new(
            w.norm_squared() - 1.0,
            minkowski_inner(&w, &faces[0]) + targets[0].cos(),
            minkowski_inner(&w, &faces[1]) + targets[1].cos(),
            minkowski_inner(&w, &faces[2]) + targets[2].cos(),
        );
        if r.amax() <= cfg.residual_tol {
            return Ok(w);
        }
        let rows = [
            metric_apply(&w).scale(2.0),
            metric_apply(&faces[0]),
            metric_apply(&faces[1]),
            metric_apply(&faces[2]),
        ];
        let j = Matrix4::from_rows(&[
            rows[0].to_vector4().transpose(),
            rows[1].to_vector4().transpose(),
            rows[2].to_vector4().transpose(),
            rows[3].to_vector4().transpose(),
        ]);
        let delta = j
            .full_piv_lu()
            .solve(&r)
            .ok_or(ConstructError::Internal("singular truncation-plane solve".into()))?;
        w = LorentzVector::new(w.x0 - delta[0], w.x1 - delta[1], w.x2 - delta[2], w.x3 - delta[3]);
    }
    Err(ConstructError::Internal("truncation-plane solve did not converge".into()))
}
