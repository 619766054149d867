//! Construction of simple polyhedra: reduce to a base complex, build the
//! seed, replay the reduction backwards with geometric Whitehead moves at
//! uniform angles, then deform to the requested angles.

use super::seeds::{build_prism, build_split_prism, natal_prism_angles};
use super::{relabel, ConstructError, PipelineConfig, PipelineReport};
use crate::angles::AngleAssignment;
use crate::combinatorics::{
    base_prism, base_split_prism, reduce_to_base, AbstractPolyhedron, BaseKind,
};
use crate::solver::{build_system, gauge_normalize, homotopy_deform, Realization};
use std::f64::consts::PI;

pub fn construct_simple(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    let n = c.face_count();
    let trace = reduce_to_base(c)?;
    report.stage(
        &format!("reduction to base ({} moves)", trace.moves.len()),
        0.0,
        0,
    );

    // Seed on the base complex, relabeled onto the final complex of the
    // trace so the replay can run in the trace's own labels.
    let seed = match trace.base {
        BaseKind::Prism => {
            let (theta_p, theta_c) = natal_prism_angles(n);
            let p = build_prism(n, theta_p, theta_c, cfg)?;
            report.stage("prism seed", 0.0, 0);
            relabel(&p, &base_prism(n)?, trace.final_complex())?
        }
        BaseKind::SplitPrism => {
            let p = build_split_prism(n, cfg, report)?;
            relabel(&p, &base_split_prism(n)?, trace.final_complex())?
        }
    };
    let seed = gauge_normalize(&seed)?;
    let gauge = cfg.gauge_for(&seed);

    // To uniform 2π/5 angles, which exist for every simple complex.
    let uniform = AngleAssignment::uniform(trace.final_complex(), 2.0 * PI / 5.0);
    let sys = build_system(trace.final_complex(), gauge.clone());
    let (mut current, log) =
        homotopy_deform(&sys, &seed, &uniform, cfg.subdivisions, cfg.residual_tol, cfg.max_iter)?;
    report.stage("seed to uniform angles", log.final_residual(), log.total_iterations());

    // Replay the reduction backwards: each recorded move is undone by
    // flipping the edge it created.
    for (k, mv) in trace.moves.iter().enumerate().rev() {
        let next = super::whitehead_move_geometric(&current, mv.created, &gauge, cfg, report)?;
        if next.complex() != &trace.intermediates[k] {
            return Err(ConstructError::Internal(format!(
                "replayed move {k} did not restore the recorded complex"
            )));
        }
        current = next;
    }
    if current.complex() != c {
        return Err(ConstructError::Internal(
            "replay finished on a different complex than the input".into(),
        ));
    }

    // Final deformation to the requested angles.
    let sys = build_system(c, gauge);
    let (p, log) =
        homotopy_deform(&sys, &current, a, cfg.subdivisions, cfg.residual_tol, cfg.max_iter)?;
    report.stage("deformation to target angles", log.final_residual(), log.total_iterations());
    let p = gauge_normalize(&p)?;
    p.verify(a, &cfg.verify).map_err(ConstructError::Verify)?;
    Ok(p)
}
