//! The homotopy driver: walk a straight-line angle path, solving each step
//! by Newton's method from the previous solution.

use super::newton::{newton_solve, NewtonOutcome, SolveError};
use super::realization::{RealizeError, Realization};
use super::system::QuadraticSystem;
use crate::angles::{linear_path_with, AngleAssignment, AngleError, Strictness};
use nalgebra::DVector;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum HomotopyError {
    #[error("homotopy stuck at step {step} (residual {residual:.3e}); the path may pass near the discriminant variety")]
    Stuck { step: usize, residual: f64 },
    #[error(transparent)]
    Angles(#[from] AngleError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error("step {step}: {source}")]
    Solve {
        step: usize,
        #[source]
        source: SolveError,
    },
}

/// Per-step record kept for reporting.
#[derive(Debug, Clone)]
pub struct StepStat {
    pub step: usize,
    pub iterations: usize,
    pub residual: f64,
    pub bisections: usize,
}

/// Statistics of a whole homotopy leg.
#[derive(Debug, Clone, Default)]
pub struct DeformLog {
    pub steps: Vec<StepStat>,
}

impl DeformLog {
    pub fn final_residual(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.residual)
    }

    pub fn total_iterations(&self) -> usize {
        self.steps.iter().map(|s| s.iterations).sum()
    }
}

const MAX_BISECTION_DEPTH: usize = 8;

#[allow(clippy::too_many_arguments)]
fn solve_segment(
    sys: &QuadraticSystem,
    x: &DVector<f64>,
    from: &AngleAssignment,
    to: &AngleAssignment,
    tol: f64,
    max_iter: usize,
    depth: usize,
    stat: &mut StepStat,
) -> Result<(DVector<f64>, NewtonOutcome), HomotopyError> {
    match newton_solve(sys, to, x, tol, max_iter) {
        Ok(out) => Ok((out.x.clone(), out)),
        Err(err) => {
            if depth >= MAX_BISECTION_DEPTH {
                return Err(HomotopyError::Stuck {
                    step: stat.step,
                    residual: match err {
                        SolveError::MaxIterExceeded { residual, .. }
                        | SolveError::DivergedResidual { residual } => residual,
                        SolveError::SingularJacobian { .. } => f64::NAN,
                    },
                });
            }
            stat.bisections += 1;
            let mid = from.lerp(to, 0.5);
            let (x1, _) = solve_segment(sys, x, from, &mid, tol, max_iter, depth + 1, stat)?;
            solve_segment(sys, &x1, &mid, to, tol, max_iter, depth + 1, stat)
        }
    }
}

/// Walks the path from the current angles of `p` to `target` in `k` equal
/// steps, solving each step by Newton's method with the previous solution
/// as the initial guess. Failed steps are bisected locally before the leg
/// is reported stuck.
///
/// The system (and hence the gauge) is supplied by the caller so that a
/// sequence of legs shares one normalization.
pub fn homotopy_deform(
    sys: &QuadraticSystem,
    p: &Realization,
    target: &AngleAssignment,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(Realization, DeformLog), HomotopyError> {
    let start = p
        .extract_angles()
        .map_err(|_| HomotopyError::Realize(RealizeError::NoInteriorPoint))?;
    // The start is a measured state and carries residual-sized noise; the
    // target must be strictly admissible.
    let path = linear_path_with(p.complex(), &start, target, k, Strictness::Tolerant(1e-7))?;
    let mut x = p.flatten();
    let mut log = DeformLog::default();
    for (step, window) in path.windows(2).enumerate() {
        let mut stat = StepStat { step, iterations: 0, residual: f64::NAN, bisections: 0 };
        let (x_next, out) =
            solve_segment(sys, &x, &window[0], &window[1], tol, max_iter, 0, &mut stat)?;
        stat.iterations = out.iterations;
        stat.residual = *out.residuals.last().unwrap();
        log.steps.push(stat);
        x = x_next;
    }
    let realized = Realization::from_flat(p.complex().clone(), &x)?;
    Ok((realized, log))
}

/// Walks an explicit list of angle samples (a truncation path), without
/// requiring the samples to stay inside the angle polytope.
pub fn walk_samples(
    sys: &QuadraticSystem,
    p: &Realization,
    samples: &[AngleAssignment],
    tol: f64,
    max_iter: usize,
) -> Result<(Realization, DeformLog), HomotopyError> {
    let mut x = p.flatten();
    let mut log = DeformLog::default();
    for (step, window) in samples.windows(2).enumerate() {
        let mut stat = StepStat { step, iterations: 0, residual: f64::NAN, bisections: 0 };
        let (x_next, out) =
            solve_segment(sys, &x, &window[0], &window[1], tol, max_iter, 0, &mut stat)?;
        stat.iterations = out.iterations;
        stat.residual = *out.residuals.last().unwrap();
        log.steps.push(stat);
        x = x_next;
    }
    let realized = Realization::from_flat(p.complex().clone(), &x)?;
    Ok((realized, log))
}
