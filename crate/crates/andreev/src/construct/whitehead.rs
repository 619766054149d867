//! Performing a Whitehead move geometrically.
//!
//! Starting from a realization with all dihedral angles `2π/5`, the edge to
//! be flipped is squeezed to a small opening angle `ε` with right angles on
//! its four neighboring edges; the combinatorics are swapped; Newton's
//! method lands the new edge at the same `ε`; and a final deformation
//! returns to the uniform angles. A miss of the Newton basin is retried
//! with a halved `ε` and a doubled number of subdivisions.

use super::{ConstructError, PipelineConfig, PipelineReport};
use crate::angles::{check_conditions, AngleAssignment};
use crate::combinatorics::{whitehead_move, AbstractPolyhedron, WhiteheadMove};
use crate::solver::{build_system, homotopy_deform, newton_solve, Gauge, Realization};
use std::f64::consts::PI;

const UNIFORM: f64 = 2.0 * PI / 5.0;

/// The four edges sharing an endpoint with the dual edge `(a, b)`; the
/// flanking faces are returned as well.
fn neighborhood(
    c: &AbstractPolyhedron,
    a: usize,
    b: usize,
) -> Result<((usize, usize), [(usize, usize); 4]), ConstructError> {
    let (x, y) = c
        .edge_flanks(a, b)
        .ok_or_else(|| ConstructError::Internal(format!("no dual edge ({a}, {b})")))?;
    use crate::combinatorics::edge_key;
    Ok(((x, y), [edge_key(a, x), edge_key(b, x), edge_key(a, y), edge_key(b, y)]))
}

/// Executes the move `Wh(a, b)` on a realization with uniform `2π/5`
/// angles. Returns the realization of the flipped complex, again at
/// uniform angles.
pub fn whitehead_move_geometric(
    p: &Realization,
    edge: (usize, usize),
    gauge: &Gauge,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    let mut epsilon = cfg.epsilon;
    let mut k = cfg.subdivisions;
    let mut last_err = None;
    for attempt in 0..=cfg.retries {
        match attempt_move(p, edge, epsilon, k, gauge, cfg, report) {
            Ok(out) => {
                if attempt > 0 {
                    report.stage(
                        &format!("move {edge:?} succeeded after {attempt} retries"),
                        0.0,
                        0,
                    );
                }
                return Ok(out);
            }
            Err(err @ (ConstructError::Solve(_) | ConstructError::Homotopy(_))) => {
                last_err = Some(err);
                epsilon /= 2.0;
                k *= 2;
            }
            Err(other) => return Err(other),
        }
    }
    log::warn!("whitehead move on {edge:?} missed its basin: {last_err:?}");
    Err(ConstructError::WhiteheadBasinMiss { edge, retries: cfg.retries })
}

fn attempt_move(
    p: &Realization,
    edge: (usize, usize),
    epsilon: f64,
    k: usize,
    gauge: &Gauge,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    let c = p.complex();
    let (_, ring) = neighborhood(c, edge.0, edge.1)?;

    // Stage 1: squeeze the edge.
    let squeeze = AngleAssignment::from_fn(c, |i, j| {
        let e = crate::combinatorics::edge_key(i, j);
        if e == edge {
            epsilon
        } else if ring.contains(&e) {
            PI / 2.0
        } else {
            UNIFORM
        }
    });
    let squeeze_report = check_conditions(c, &squeeze)?;
    if !squeeze_report.passed() {
        return Err(ConstructError::Internal(format!(
            "squeeze pattern for {edge:?} leaves the angle polytope: {squeeze_report}"
        )));
    }
    let sys = build_system(c, gauge.clone());
    let (p1, log) = homotopy_deform(&sys, p, &squeeze, k, cfg.residual_tol, cfg.max_iter)?;
    report.stage(
        &format!("move {edge:?}: squeeze to epsilon = {epsilon:.4}"),
        log.final_residual(),
        log.total_iterations(),
    );

    // Stage 2: swap combinatorics.
    let (flipped, created) = whitehead_move(c, WhiteheadMove { edge })
        .map_err(|e| ConstructError::Internal(e.to_string()))?;

    // Stage 3: land the new edge at the same opening angle.
    let target = AngleAssignment::from_fn(&flipped, |i, j| {
        let e = crate::combinatorics::edge_key(i, j);
        if e == created {
            epsilon
        } else if ring.contains(&e) {
            PI / 2.0
        } else {
            UNIFORM
        }
    });
    let landing_report = check_conditions(&flipped, &target)?;
    if !landing_report.passed() {
        return Err(ConstructError::Internal(format!(
            "landing pattern for {created:?} leaves the angle polytope: {landing_report}"
        )));
    }
    let sys2 = build_system(&flipped, gauge.clone());
    let out = newton_solve(&sys2, &target, &p1.flatten(), cfg.residual_tol, cfg.max_iter)?;
    report.stage(
        &format!("move {edge:?}: land new edge {created:?}"),
        *out.residuals.last().unwrap(),
        out.iterations,
    );
    let p2 = Realization::from_flat(flipped.clone(), &out.x)?;

    // Stage 4: reopen to uniform angles.
    let uniform = AngleAssignment::uniform(&flipped, UNIFORM);
    let (p3, log) = homotopy_deform(&sys2, &p2, &uniform, k, cfg.residual_tol, cfg.max_iter)?;
    report.stage(
        &format!("move {edge:?}: reopen to uniform"),
        log.final_residual(),
        log.total_iterations(),
    );
    report.moves_replayed.push(edge);
    Ok(p3)
}
