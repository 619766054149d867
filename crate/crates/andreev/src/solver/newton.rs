//! Newton iteration for the quadratic system, with a Kantorovich
//! convergence certificate.

use super::system::{Gauge, QuadraticSystem};
use crate::angles::AngleAssignment;
use nalgebra::DVector;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SolveError {
    #[error("Jacobian is numerically singular (condition estimate {cond:.3e})")]
    SingularJacobian { cond: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("residual grew for three consecutive steps (last {residual:.3e})")]
    DivergedResidual { residual: f64 },
}

/// A converged Newton run: the solution and the residual history
/// (infinity norms, including the final value).
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: DVector<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

const CONDITION_CAP: f64 = 1e12;

/// Solves one Newton step `DF(x) δ = F(x)`, estimating the condition
/// number from the factorization.
fn newton_step(
    sys: &QuadraticSystem,
    x: &DVector<f64>,
    r: &DVector<f64>,
) -> Result<DVector<f64>, SolveError> {
    let j = sys.jacobian(x);
    match sys.gauge() {
        Gauge::Anchored(_) => {
            let lu = j.full_piv_lu();
            let u_diag: Vec<f64> = (0..x.len()).map(|i| lu.u()[(i, i)].abs()).collect();
            let dmax = u_diag.iter().cloned().fold(0.0, f64::max);
            let dmin = u_diag.iter().cloned().fold(f64::INFINITY, f64::min);
            if dmin == 0.0 || dmax / dmin > CONDITION_CAP {
                return Err(SolveError::SingularJacobian {
                    cond: if dmin == 0.0 { f64::INFINITY } else { dmax / dmin },
                });
            }
            lu.solve(r).ok_or(SolveError::SingularJacobian { cond: f64::INFINITY })
        }
        Gauge::LeastSquares => {
            // Minimum-norm step through the pseudo-inverse.
            let svd = j.svd(true, true);
            let smax = svd.singular_values.max();
            let smin = svd
                .singular_values
                .iter()
                .cloned()
                .filter(|s| *s > smax * 1e-13)
                .fold(f64::INFINITY, f64::min);
            if !smin.is_finite() || smax / smin > CONDITION_CAP {
                return Err(SolveError::SingularJacobian { cond: smax / smin });
            }
            svd.solve(r, smax * 1e-13)
                .map_err(|_| SolveError::SingularJacobian { cond: f64::INFINITY })
        }
    }
}

/// Scales every spacelike block of the unknown vector back to unit
/// Minkowski norm; blocks whose norm is far from one are left alone.
fn renormalize_blocks(x: &mut DVector<f64>) {
    let n = x.len() / 4;
    for i in 0..n {
        let b = 4 * i;
        let q = -x[b] * x[b] + x[b + 1] * x[b + 1] + x[b + 2] * x[b + 2] + x[b + 3] * x[b + 3];
        if q > 0.5 {
            let s = 1.0 / q.sqrt();
            for c in 0..4 {
                x[b + c] *= s;
            }
        }
    }
}

/// Newton's method `x ← x - [DF(x)]⁻¹ F(x)` from `x0`, with unit-norm
/// renormalization after each accepted step.
pub fn newton_solve(
    sys: &QuadraticSystem,
    target: &AngleAssignment,
    x0: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonOutcome, SolveError> {
    let mut x = x0.clone();
    let mut residuals = Vec::new();
    let mut grew = 0usize;
    for it in 0..=max_iter {
        let r = sys.evaluate(&x, target);
        let norm = r.amax();
        if let Some(&prev) = residuals.last() {
            if norm > prev {
                grew += 1;
                if grew >= 3 {
                    return Err(SolveError::DivergedResidual { residual: norm });
                }
            } else {
                grew = 0;
            }
        }
        residuals.push(norm);
        if norm <= tol {
            return Ok(NewtonOutcome { x, residuals, iterations: it });
        }
        if it == max_iter {
            break;
        }
        let delta = newton_step(sys, &x, &r)?;
        x -= delta;
        renormalize_blocks(&mut x);
    }
    Err(SolveError::MaxIterExceeded {
        iterations: max_iter,
        residual: *residuals.last().unwrap(),
    })
}

/// The Kantorovich data at an initial guess: with `η = |F(x0)|`,
/// `β = ‖DF(x0)⁻¹‖` and the global Lipschitz constant `M` of `DF`, Newton's
/// method is guaranteed to converge when `η · β² · M ≤ 1/2`.
#[derive(Debug, Clone, Copy)]
pub struct Certificate {
    pub residual_norm: f64,
    pub inverse_norm: f64,
    pub lipschitz: f64,
    pub product: f64,
    pub certified: bool,
}

pub fn kantorovich_certificate(
    sys: &QuadraticSystem,
    target: &AngleAssignment,
    x0: &DVector<f64>,
) -> Result<Certificate, SolveError> {
    let r = sys.evaluate(x0, target);
    let j = sys.jacobian(x0);
    let svd = j.svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 || smax / smin > CONDITION_CAP {
        return Err(SolveError::SingularJacobian { cond: smax / smin });
    }
    let residual_norm = r.norm();
    let inverse_norm = 1.0 / smin;
    let lipschitz = sys.lipschitz_constant();
    let product = residual_norm * inverse_norm * inverse_norm * lipschitz;
    Ok(Certificate {
        residual_norm,
        inverse_norm,
        lipschitz,
        product,
        certified: product <= 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::super::system::{build_system, Gauge, GaugeSpec};
    use super::*;
    use crate::combinatorics::cube;
    use nalgebra::DVector;
    use std::f64::consts::PI;

    #[test]
    fn zero_start_fails_loudly() {
        let c = cube();
        let t = c.triangles()[0];
        let sys = build_system(
            &c,
            Gauge::Anchored(GaugeSpec {
                anchor: t[0],
                second: t[1],
                third: t[2],
                third_coord: 0,
                third_value: 0.0,
            }),
        );
        let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let x0 = DVector::zeros(24);
        let err = newton_solve(&sys, &a, &x0, 1e-10, 50).unwrap_err();
        assert!(matches!(
            err,
            SolveError::SingularJacobian { .. } | SolveError::DivergedResidual { .. }
        ));
    }

    #[test]
    fn far_start_not_certified() {
        let c = cube();
        let sys = build_system(&c, Gauge::LeastSquares);
        let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let x0 = DVector::from_element(24, 3.0);
        if let Ok(cert) = kantorovich_certificate(&sys, &a, &x0) {
            assert!(!cert.certified);
        }
    }
}
