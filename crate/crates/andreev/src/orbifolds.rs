//! Reflection groups and volumes.
//!
//! When every dihedral angle of a compact polyhedron is a proper integer
//! sub-multiple of `π`, the reflections in its faces generate a discrete
//! group and the quotient is a compact orbifold. This module exports the
//! generators, evaluates the closed-form volumes of the Lambert cubes and
//! the Löbell orbifolds through the Lobachevsky function, and cross-checks
//! any compact realization by seeded Monte Carlo integration in the Klein
//! model.

use crate::lorentz::{
    reflection_matrix, to_projective, LorentzError, LorentzMatrix, VertexClass,
};
use crate::solver::Realization;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum VolumeError {
    #[error("Lambert cube angles must lie strictly between 0 and pi/2, got {0}")]
    BadAngleRange(f64),
    #[error("Löbell volumes are defined for n >= 5, got {0}")]
    BadN(usize),
    #[error("Monte Carlo integration needs a compact realization")]
    NonCompact,
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
}

/// How a volume value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMethod {
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy)]
pub struct VolumeResult {
    pub value: f64,
    pub method: VolumeMethod,
    /// Standard error of the estimator; only Monte Carlo results carry one.
    pub stderr: Option<f64>,
}

/// Values of `ζ(2m)` for the series expansion of the Lobachevsky function.
fn zeta_even(m: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; 40];
        t[1] = PI * PI / 6.0;
        t[2] = PI.powi(4) / 90.0;
        t[3] = PI.powi(6) / 945.0;
        for m in 4..40 {
            // Direct summation with an integral tail bound; the tail after
            // k = 10^4 is far below machine precision for 2m >= 8.
            let s = 2 * m as i32;
            let mut sum = 0.0;
            for k in 1..=10_000u64 {
                sum += (k as f64).powi(-s);
            }
            sum += 10_000f64.powi(1 - s) / (s as f64 - 1.0);
            t[m] = sum;
        }
        t
    });
    table[m]
}

/// The Lobachevsky function `Λ(x) = -∫₀ˣ log|2 sin t| dt`, extended to the
/// whole line by oddness and `π`-periodicity.
///
/// On `[0, π/2]` the value comes from the series
/// `Λ(x) = x - x·log(2x) + Σ_{m≥1} ζ(2m)·x^{2m+1} / (m(2m+1)π^{2m})`,
/// which converges geometrically with ratio `(x/π)² ≤ 1/4`.
pub fn lobachevsky(x: f64) -> f64 {
    // Reduce to [0, π/2] using Λ(x + π) = Λ(x) and Λ(π - x) = -Λ(x).
    let mut y = x % PI;
    if y < 0.0 {
        y += PI;
    }
    let (y, sign) = if y > FRAC_PI_2 { (PI - y, -1.0) } else { (y, 1.0) };
    if y == 0.0 {
        return 0.0;
    }
    let mut sum = y - y * (2.0 * y).ln();
    let r = (y / PI) * (y / PI);
    let mut power = y * r; // y^{2m+1} / π^{2m} at m = 1
    for m in 1..40 {
        let term = zeta_even(m) * power / (m as f64 * (2 * m + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1.0) {
            break;
        }
        power *= r;
    }
    sign * sum
}

/// `Δ(η, ξ) = Λ(η + ξ) - Λ(η - ξ)`.
fn delta(eta: f64, xi: f64) -> f64 {
    lobachevsky(eta + xi) - lobachevsky(eta - xi)
}

/// Volume of the Lambert cube with essential angles `(α, β, γ)`: the
/// combinatorial cube with three pairwise non-adjacent edges carrying those
/// angles and right angles elsewhere.
pub fn lambert_volume(alpha: f64, beta: f64, gamma: f64) -> Result<VolumeResult, VolumeError> {
    for a in [alpha, beta, gamma] {
        if !(0.0 < a && a < FRAC_PI_2) {
            return Err(VolumeError::BadAngleRange(a));
        }
    }
    let (l, m, n) = (alpha.tan(), beta.tan(), gamma.tan());
    let p = (l * l + m * m + n * n + 1.0) / 2.0;
    let theta = (p + (p * p + (l * m * n) * (l * m * n)).sqrt()).sqrt().atan();
    let value = 0.25
        * (delta(alpha, theta) + delta(beta, theta) + delta(gamma, theta)
            - 2.0 * delta(FRAC_PI_2, theta)
            - delta(0.0, theta));
    Ok(VolumeResult { value, method: VolumeMethod::ClosedForm, stderr: None })
}

/// Volume of the Löbell orbifold for `n ≥ 5`: the right-angled polyhedron
/// with two `n`-gonal and `2n` pentagonal faces, divided by its reflection
/// group.
pub fn lobell_volume(n: usize) -> Result<VolumeResult, VolumeError> {
    if n < 5 {
        return Err(VolumeError::BadN(n));
    }
    let nf = n as f64;
    let theta = FRAC_PI_2 - (1.0 / (2.0 * (PI / nf).cos())).acos();
    let value = nf / 2.0
        * (2.0 * lobachevsky(theta) + lobachevsky(theta + PI / nf)
            + lobachevsky(theta - PI / nf)
            - lobachevsky(2.0 * theta + FRAC_PI_2));
    Ok(VolumeResult { value, method: VolumeMethod::ClosedForm, stderr: None })
}

/// The reflections in the faces of a realization, in face order.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub matrices: Vec<LorentzMatrix>,
}

pub fn reflection_generators(p: &Realization) -> Result<GeneratorSet, VolumeError> {
    let matrices = p
        .normals()
        .iter()
        .map(reflection_matrix)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GeneratorSet { matrices })
}

/// Monte Carlo volume of a compact realization with a fixed seed.
///
/// Sampling runs in the Klein model, where the faces are Euclidean planes
/// and containment is a linear half-space test; the hyperbolic volume
/// element there is `(1 - r²)^{-2}`.
pub fn monte_carlo_volume(
    p: &Realization,
    samples: u64,
    seed: u64,
) -> Result<VolumeResult, VolumeError> {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    let mut any = false;
    for v in p.vertices() {
        match v {
            VertexClass::Finite(q) => {
                let y = to_projective(q);
                for i in 0..3 {
                    lo[i] = lo[i].min(y[i]);
                    hi[i] = hi[i].max(y[i]);
                }
                any = true;
            }
            _ => return Err(VolumeError::NonCompact),
        }
    }
    if !any {
        return Err(VolumeError::NonCompact);
    }
    // Half-space data: y · g <= c in Klein coordinates.
    let planes: Vec<([f64; 3], f64)> =
        p.normals().iter().map(|v| ([v.x1, v.x2, v.x3], v.x0)).collect();
    let box_volume: f64 = (0..3).map(|i| hi[i] - lo[i]).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let y = [
            rng.gen_range(lo[0]..hi[0]),
            rng.gen_range(lo[1]..hi[1]),
            rng.gen_range(lo[2]..hi[2]),
        ];
        let inside =
            planes.iter().all(|(g, c)| y[0] * g[0] + y[1] * g[1] + y[2] * g[2] <= *c);
        if inside {
            let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
            debug_assert!(r2 < 1.0);
            let w = 1.0 / ((1.0 - r2) * (1.0 - r2));
            sum += w;
            sum_sq += w * w;
        }
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let variance = (sum_sq / nf - mean * mean).max(0.0);
    Ok(VolumeResult {
        value: box_volume * mean,
        method: VolumeMethod::MonteCarlo,
        stderr: Some(box_volume * (variance / nf).sqrt()),
    })
}

/// The Lambert cube data: the combinatorial cube with a triple of pairwise
/// non-adjacent edges carrying the essential angles and right angles on the
/// other nine edges.
pub fn lambert_cube(
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> (crate::combinatorics::AbstractPolyhedron, crate::angles::AngleAssignment) {
    let c = crate::combinatorics::cube();
    // Laterals 0..3 in cyclic order, caps 4 and 5; the edges (0,4), (1,2),
    // (3,5) share no vertices.
    let mut a = crate::angles::AngleAssignment::uniform(&c, FRAC_PI_2);
    a.set(0, 4, alpha);
    a.set(1, 2, beta);
    a.set(3, 5, gamma);
    (c, a)
}

/// Checks that an angle is within `tol` of `π/k` for some integer `k ≥ 2`
/// and returns `k`.
pub fn submultiple_order(angle: f64, tol: f64) -> Option<u32> {
    if angle <= 0.0 {
        return None;
    }
    let k = (PI / angle).round();
    if k >= 2.0 && (angle - PI / k).abs() <= tol {
        Some(k as u32)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tanh-sinh quadrature for `-∫₀ˣ log|2 sin t| dt`; the double
    /// exponential substitution absorbs the endpoint singularity. Kept
    /// independent of the production series.
    fn lobachevsky_quadrature(x: f64) -> f64 {
        // t = x/2 · (1 + tanh(π/2 · sinh(u))) maps u ∈ R onto (0, x).
        let n = 160;
        let h = 8.0 / n as f64;
        let mut sum = 0.0;
        for k in -(n as i64)..=(n as i64) {
            let u = k as f64 * h;
            let s = (FRAC_PI_2 * u.sinh()).tanh();
            let t = 0.5 * x * (1.0 + s);
            let dt = 0.5 * x * FRAC_PI_2 * u.cosh() / (FRAC_PI_2 * u.sinh()).cosh().powi(2);
            if t > 0.0 && t < x {
                sum += (2.0 * t.sin()).abs().ln() * dt;
            }
        }
        -(sum * h)
    }

    #[test]
    fn lobachevsky_special_values() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI).abs() < 1e-14);
        // Maximum at π/6.
        assert!((lobachevsky(PI / 6.0) - 0.5074708).abs() < 1e-6);
    }

    #[test]
    fn lobachevsky_matches_quadrature() {
        for &x in &[0.1, 0.3, PI / 6.0, 0.7, 1.0, FRAC_PI_2 - 0.01, 2.0, 2.8] {
            let series = lobachevsky(x);
            let quad = lobachevsky_quadrature(x % PI);
            assert!(
                (series - quad).abs() < 1e-12,
                "x = {x}: series {series} vs quadrature {quad}"
            );
        }
    }

    #[test]
    fn lobachevsky_identities_on_grid() {
        for i in 0..1000 {
            let x = -2.0 * PI + 4.0 * PI * (i as f64) / 999.0;
            // Odd and π-periodic.
            assert!((lobachevsky(-x) + lobachevsky(x)).abs() < 1e-13);
            assert!((lobachevsky(x + PI) - lobachevsky(x)).abs() < 1e-13);
            // Duplication: Λ(2x) = 2Λ(x) + 2Λ(x + π/2).
            let lhs = lobachevsky(2.0 * x);
            let rhs = 2.0 * lobachevsky(x) + 2.0 * lobachevsky(x + FRAC_PI_2);
            assert!((lhs - rhs).abs() < 1e-11, "duplication fails at {x}");
        }
    }

    #[test]
    fn lambert_volume_table() {
        let cases = [
            (3.0, 3.0, 3.0, 0.3244234492),
            (3.0, 4.0, 5.0, 0.4790790206),
            (5.0, 8.0, 12.0, 0.7688005863),
        ];
        for (p, q, r, want) in cases {
            let got = lambert_volume(PI / p, PI / q, PI / r).unwrap().value;
            assert!((got - want).abs() < 1e-9, "Lambert({p},{q},{r}): {got} vs {want}");
        }
    }

    #[test]
    fn lambert_volume_symmetric() {
        let a = PI / 3.0;
        let b = PI / 5.0;
        let c = PI / 7.0;
        let v0 = lambert_volume(a, b, c).unwrap().value;
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            assert!((lambert_volume(x, y, z).unwrap().value - v0).abs() < 1e-12);
        }
    }

    #[test]
    fn lobell_volume_table() {
        let cases = [
            (5, 4.3062076007),
            (6, 6.0230460200),
            (7, 7.5632490914),
            (8, 9.0190527274),
        ];
        for (n, want) in cases {
            let got = lobell_volume(n).unwrap().value;
            assert!((got - want).abs() < 1e-9, "Löbell({n}): {got} vs {want}");
        }
    }

    #[test]
    fn bad_ranges_rejected() {
        assert!(lambert_volume(FRAC_PI_2, 0.3, 0.3).is_err());
        assert!(lobell_volume(4).is_err());
    }

    #[test]
    fn submultiples() {
        assert_eq!(submultiple_order(PI / 2.0, 1e-9), Some(2));
        assert_eq!(submultiple_order(PI / 7.0, 1e-9), Some(7));
        assert_eq!(submultiple_order(2.0 * PI / 5.0, 1e-9), None);
        assert_eq!(submultiple_order(PI, 1e-9), None);
    }
}
