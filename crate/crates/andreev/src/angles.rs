//! The Andreev conditions, membership in the angle polytope `A_C`, and the
//! angle-space paths walked by the homotopy method.
//!
//! For a complex `C` with non-obtuse dihedral angles assigned to its edges,
//! compactness of a realization is equivalent to five families of linear
//! inequalities: positivity, vertex sums above `π`, prismatic 3-circuit sums
//! below `π`, prismatic 4-circuit sums below `2π`, and the two quadrilateral
//! face inequalities. The set `A_C` they carve out is convex, which is what
//! makes straight-line paths usable.

use crate::combinatorics::{
    classify, collapse_truncation_triangles, edge_key, find_prismatic_circuits, AbstractPolyhedron,
    CollapseInfo, CombinatorialClass,
};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

/// Slack used for the strict inequalities; positivity is tested as
/// `a >= STRICTNESS_SLACK`.
pub const STRICTNESS_SLACK: f64 = 1e-12;

/// A dihedral-angle value for every edge of a complex, keyed by the
/// unordered face pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngleAssignment {
    angles: BTreeMap<(usize, usize), f64>,
}

impl AngleAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// The constant assignment on all edges of `c`.
    pub fn uniform(c: &AbstractPolyhedron, value: f64) -> Self {
        let mut a = Self::new();
        for &(i, j) in c.edges() {
            a.set(i, j, value);
        }
        a
    }

    pub fn from_fn(c: &AbstractPolyhedron, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = Self::new();
        for &(i, j) in c.edges() {
            a.set(i, j, f(i, j));
        }
        a
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.angles.insert(edge_key(i, j), value);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.angles.get(&edge_key(i, j)).copied()
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &f64)> {
        self.angles.iter()
    }

    /// Checks that every edge of `c` carries exactly one angle.
    pub fn complete_for(&self, c: &AbstractPolyhedron) -> Result<(), AngleError> {
        for &(i, j) in c.edges() {
            if self.get(i, j).is_none() {
                return Err(AngleError::MissingEdgeAngle { edge: (i, j) });
            }
        }
        Ok(())
    }

    pub fn infinity_distance(&self, other: &AngleAssignment) -> f64 {
        let mut d: f64 = 0.0;
        for (k, v) in &self.angles {
            let w = other.angles.get(k).copied().unwrap_or(f64::INFINITY);
            d = d.max((v - w).abs());
        }
        d
    }

    /// Componentwise linear interpolation (shared key set assumed).
    pub fn lerp(&self, other: &AngleAssignment, t: f64) -> AngleAssignment {
        let mut out = AngleAssignment::new();
        for (k, v) in &self.angles {
            let w = other.angles[k];
            out.angles.insert(*k, v * (1.0 - t) + w * t);
        }
        out
    }
}

#[derive(Error, Debug)]
pub enum AngleError {
    #[error("edge {edge:?} has no assigned angle")]
    MissingEdgeAngle { edge: (usize, usize) },
    #[error("a path endpoint lies outside the angle polytope: {report}")]
    EndpointOutsidePolytope { report: ConditionReport },
    #[error("complex is not of truncated class")]
    NotTruncatedClass,
    #[error("angle on edge {edge:?} is {angle}, more than delta = {delta} away from pi/3")]
    AngleTooFarFromPiOver3 { edge: (usize, usize), angle: f64, delta: f64 },
    #[error("collapsed vertex {triangle:?} keeps an angle sum above pi along the whole path")]
    VertexNeverCrossed { triangle: [usize; 3] },
    #[error("truncation path leaves the required conditions at sample {sample}: {report}")]
    PathInvalid { sample: usize, report: ConditionReport },
    #[error(transparent)]
    Surgery(#[from] crate::combinatorics::SurgeryError),
}

/// A single failed inequality, with its witness.
#[derive(Debug, Clone, PartialEq)]
pub enum ConditionViolation {
    /// Condition (1) or non-obtuseness.
    NotPositive { edge: (usize, usize), angle: f64 },
    Obtuse { edge: (usize, usize), angle: f64 },
    /// Condition (2): the three edges at a vertex sum to at most `π`.
    VertexSumTooSmall { triangle: [usize; 3], sum: f64 },
    /// Condition (3): a prismatic 3-circuit sums to at least `π`.
    Circuit3SumTooLarge { faces: Vec<usize>, sum: f64 },
    /// Condition (4): a prismatic 4-circuit sums to at least `2π`.
    Circuit4SumTooLarge { faces: Vec<usize>, sum: f64 },
    /// Condition (5): a quadrilateral face inequality fails.
    QuadrilateralSumTooLarge { face: usize, diagonal: u8, sum: f64 },
}

impl std::fmt::Display for ConditionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConditionViolation::NotPositive { edge, angle } => {
                write!(f, "condition (1): edge {edge:?} has angle {angle} <= 0")
            }
            ConditionViolation::Obtuse { edge, angle } => {
                write!(f, "non-obtuseness: edge {edge:?} has angle {angle} > pi/2")
            }
            ConditionViolation::VertexSumTooSmall { triangle, sum } => {
                write!(f, "condition (2): vertex {triangle:?} has angle sum {sum} <= pi")
            }
            ConditionViolation::Circuit3SumTooLarge { faces, sum } => {
                write!(f, "condition (3): prismatic 3-circuit {faces:?} has angle sum {sum} >= pi")
            }
            ConditionViolation::Circuit4SumTooLarge { faces, sum } => {
                write!(f, "condition (4): prismatic 4-circuit {faces:?} has angle sum {sum} >= 2 pi")
            }
            ConditionViolation::QuadrilateralSumTooLarge { face, diagonal, sum } => write!(
                f,
                "condition (5): quadrilateral face {face}, diagonal {diagonal}, has sum {sum} >= 3 pi"
            ),
        }
    }
}

/// Outcome of evaluating the five conditions plus non-obtuseness.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConditionReport {
    pub violations: Vec<ConditionViolation>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            write!(f, "all conditions hold")
        } else {
            let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", lines.join("; "))
        }
    }
}

/// How hard the strict inequalities are tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strictness {
    /// Boundary points fail: a strict inequality must hold by at least the
    /// documented slack.
    Strict,
    /// Violations up to the given tolerance are forgiven; used for the
    /// measured angles of solved realizations, which carry residual noise.
    Tolerant(f64),
}

/// Evaluates all five Andreev conditions together with non-obtuseness.
/// The assignment lies in `A_C` exactly when the report passes.
pub fn check_conditions(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
) -> Result<ConditionReport, AngleError> {
    check_conditions_with(c, a, Strictness::Strict)
}

pub fn check_conditions_with(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    strictness: Strictness,
) -> Result<ConditionReport, AngleError> {
    // A strict inequality with margin m passes when m > threshold.
    let threshold = match strictness {
        Strictness::Strict => STRICTNESS_SLACK,
        Strictness::Tolerant(tol) => -tol,
    };
    a.complete_for(c)?;
    let mut report = ConditionReport::default();
    for &(i, j) in c.edges() {
        let angle = a.get(i, j).unwrap();
        if angle - 0.0 <= threshold {
            report.violations.push(ConditionViolation::NotPositive { edge: (i, j), angle });
        }
        if PI / 2.0 - angle < -threshold.abs() {
            report.violations.push(ConditionViolation::Obtuse { edge: (i, j), angle });
        }
    }
    for t in c.triangles() {
        let sum = a.get(t[0], t[1]).unwrap() + a.get(t[1], t[2]).unwrap() + a.get(t[0], t[2]).unwrap();
        if sum - PI <= threshold {
            report.violations.push(ConditionViolation::VertexSumTooSmall { triangle: *t, sum });
        }
    }
    for circ in find_prismatic_circuits(c, 3) {
        let sum: f64 = circ.edges.iter().map(|&(i, j)| a.get(i, j).unwrap()).sum();
        if PI - sum <= threshold {
            report
                .violations
                .push(ConditionViolation::Circuit3SumTooLarge { faces: circ.faces.clone(), sum });
        }
    }
    for circ in find_prismatic_circuits(c, 4) {
        let sum: f64 = circ.edges.iter().map(|&(i, j)| a.get(i, j).unwrap()).sum();
        if 2.0 * PI - sum <= threshold {
            report
                .violations
                .push(ConditionViolation::Circuit4SumTooLarge { faces: circ.faces.clone(), sum });
        }
    }
    // Condition (5): for each quadrilateral face, the four entering edges
    // plus either diagonal pair of boundary edges stay below 3 pi.
    for face in 0..c.face_count() {
        if c.degree(face) != 4 {
            continue;
        }
        let ring = c.link_cycle(face);
        let boundary: Vec<f64> = (0..4).map(|i| a.get(face, ring[i]).unwrap()).collect();
        let entering: f64 = (0..4).map(|i| a.get(ring[i], ring[(i + 1) % 4]).unwrap()).sum();
        for diagonal in 0..2u8 {
            let sum = boundary[diagonal as usize] + boundary[diagonal as usize + 2] + entering;
            if 3.0 * PI - sum <= threshold {
                report
                    .violations
                    .push(ConditionViolation::QuadrilateralSumTooLarge { face, diagonal, sum });
            }
        }
    }
    Ok(report)
}

/// `K` equally spaced assignments from `a_from` to `a_to`, endpoints
/// included. Both endpoints must lie in `A_C`; convexity then covers the
/// samples in between.
pub fn linear_path(
    c: &AbstractPolyhedron,
    a_from: &AngleAssignment,
    a_to: &AngleAssignment,
    k: usize,
) -> Result<Vec<AngleAssignment>, AngleError> {
    linear_path_with(c, a_from, a_to, k, Strictness::Strict)
}

/// [`linear_path`] with a caller-chosen strictness for the starting point,
/// used when the start is the measured state of a solved realization.
pub fn linear_path_with(
    c: &AbstractPolyhedron,
    a_from: &AngleAssignment,
    a_to: &AngleAssignment,
    k: usize,
    from_strictness: Strictness,
) -> Result<Vec<AngleAssignment>, AngleError> {
    assert!(k >= 2, "a path needs at least its two endpoints");
    for (endpoint, strictness) in [(a_from, from_strictness), (a_to, Strictness::Strict)] {
        let report = check_conditions_with(c, endpoint, strictness)?;
        if !report.passed() {
            return Err(AngleError::EndpointOutsidePolytope { report });
        }
    }
    Ok((0..k).map(|i| a_from.lerp(a_to, i as f64 / (k - 1) as f64)).collect())
}

/// One vertex of the reduced complex that a truncation path pushes through
/// infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapsedVertex {
    /// The triangular face of the original complex that collapsed.
    pub original_face: usize,
    /// The dual triangle of the reduced complex standing in for it.
    pub triangle: [usize; 3],
    /// Parameter at which its incident angle sum crosses `π`.
    pub crossing_t: f64,
}

/// An angle path on the reduced complex that steers the collapsed vertices
/// across the sphere at infinity while every other condition keeps holding.
#[derive(Debug, Clone)]
pub struct TruncationPath {
    pub collapse: CollapseInfo,
    pub samples: Vec<AngleAssignment>,
    pub collapsed: Vec<CollapsedVertex>,
}

/// Builds the straight-line truncation path for a truncated complex: the
/// reduced complex replaces every truncation triangle by a vertex, the start
/// point raises all transportable angles by `2δ` (except those on prismatic
/// 3-circuits of the reduced complex, which stay put), and the end point is
/// the restriction of `a`.
///
/// Along the way conditions (1), (3), (4), (5) hold at every sample, while
/// condition (2) fails past a crossing parameter exactly at the collapsed
/// vertices.
pub fn truncation_path(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    delta: f64,
    k: usize,
) -> Result<TruncationPath, AngleError> {
    assert!(delta > 0.0 && delta < PI / 18.0, "delta must lie in (0, pi/18)");
    let sites = match classify(c) {
        CombinatorialClass::Truncated { sites } => sites,
        _ => return Err(AngleError::NotTruncatedClass),
    };
    a.complete_for(c)?;
    for &(i, j) in c.edges() {
        let angle = a.get(i, j).unwrap();
        if (angle - PI / 3.0).abs() > delta + STRICTNESS_SLACK {
            return Err(AngleError::AngleTooFarFromPiOver3 { edge: (i, j), angle, delta });
        }
    }
    let collapse = collapse_truncation_triangles(c, &sites)?;
    let reduced = collapse.reduced.clone();

    // Edges of the reduced complex inherit the angles of the surviving
    // original edges.
    let back: BTreeMap<usize, usize> = collapse
        .face_map
        .iter()
        .enumerate()
        .filter_map(|(orig, m)| m.map(|r| (r, orig)))
        .collect();
    let a_hat = AngleAssignment::from_fn(&reduced, |i, j| {
        a.get(back[&i], back[&j]).expect("surviving edge keeps its angle")
    });

    // Start point: +2δ away from the boundary, except on edges of prismatic
    // 3-circuits of the reduced complex (present only when the reduced
    // complex is the triangular prism), whose sums must stay below π.
    let mut held = std::collections::BTreeSet::new();
    for circ in find_prismatic_circuits(&reduced, 3) {
        for e in &circ.edges {
            held.insert(*e);
        }
    }
    let beta = AngleAssignment::from_fn(&reduced, |i, j| {
        let base = a_hat.get(i, j).unwrap();
        if held.contains(&edge_key(i, j)) {
            base
        } else {
            base + 2.0 * delta
        }
    });

    // Crossing parameters per collapsed vertex.
    let mut collapsed = Vec::new();
    for (orig, tri) in &collapse.collapsed {
        let sum_at = |assignment: &AngleAssignment| {
            assignment.get(tri[0], tri[1]).unwrap()
                + assignment.get(tri[1], tri[2]).unwrap()
                + assignment.get(tri[0], tri[2]).unwrap()
        };
        let s0 = sum_at(&beta);
        let s1 = sum_at(&a_hat);
        if s1 >= PI - STRICTNESS_SLACK {
            return Err(AngleError::VertexNeverCrossed { triangle: *tri });
        }
        let crossing_t = (s0 - PI) / (s0 - s1);
        collapsed.push(CollapsedVertex {
            original_face: *orig,
            triangle: *tri,
            crossing_t,
        });
    }

    let samples: Vec<AngleAssignment> =
        (0..k).map(|i| beta.lerp(&a_hat, i as f64 / (k - 1) as f64)).collect();
    validate_truncation_samples(&reduced, &samples, &collapsed)?;
    Ok(TruncationPath { collapse, samples, collapsed })
}

/// Validates a caller-supplied piecewise-linear truncation path sample by
/// sample: conditions (1), (3), (4), (5) must hold throughout, and
/// condition (2) may fail only at the collapsed vertices.
pub fn validate_truncation_samples(
    reduced: &AbstractPolyhedron,
    samples: &[AngleAssignment],
    collapsed: &[CollapsedVertex],
) -> Result<(), AngleError> {
    let collapsed_tris: Vec<[usize; 3]> = collapsed.iter().map(|cv| cv.triangle).collect();
    for (idx, sample) in samples.iter().enumerate() {
        let report = check_conditions(reduced, sample)?;
        let hard: Vec<ConditionViolation> = report
            .violations
            .into_iter()
            .filter(|v| match v {
                ConditionViolation::VertexSumTooSmall { triangle, .. } => {
                    !collapsed_tris.contains(triangle)
                }
                _ => true,
            })
            .collect();
        if !hard.is_empty() {
            return Err(AngleError::PathInvalid {
                sample: idx,
                report: ConditionReport { violations: hard },
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{cube, dodecahedron, lobell};

    #[test]
    fn simple_complex_all_two_pi_fifths() {
        for c in [cube(), dodecahedron(), lobell(6).unwrap()] {
            let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
            assert!(check_conditions(&c, &a).unwrap().passed());
        }
    }

    #[test]
    fn vertex_sum_boundary_fails() {
        let c = cube();
        let mut a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        // Give the three edges at vertex {0, 1, 4} angles pi/3 each.
        let t = c.triangles()[0];
        a.set(t[0], t[1], PI / 3.0);
        a.set(t[1], t[2], PI / 3.0);
        a.set(t[0], t[2], PI / 3.0);
        let report = check_conditions(&c, &a).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ConditionViolation::VertexSumTooSmall { .. })));
    }

    #[test]
    fn right_angled_cube_fails_condition_4() {
        let c = cube();
        let a = AngleAssignment::uniform(&c, PI / 2.0);
        let report = check_conditions(&c, &a).unwrap();
        let quad_violations = report
            .violations
            .iter()
            .filter(|v| matches!(v, ConditionViolation::Circuit4SumTooLarge { .. }))
            .count();
        assert_eq!(quad_violations, 3);
    }

    #[test]
    fn missing_angle_reported() {
        let c = cube();
        let mut a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        a = {
            let mut trimmed = AngleAssignment::new();
            for (i, (&(u, v), &val)) in a.iter().enumerate() {
                if i > 0 {
                    trimmed.set(u, v, val);
                }
            }
            trimmed
        };
        assert!(matches!(
            check_conditions(&c, &a),
            Err(AngleError::MissingEdgeAngle { .. })
        ));
    }

    #[test]
    fn linear_path_stays_valid() {
        let c = cube();
        let from = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let to = AngleAssignment::uniform(&c, 0.45 * PI);
        let path = linear_path(&c, &from, &to, 100).unwrap();
        assert_eq!(path.len(), 100);
        assert_eq!(path[0], from);
        assert!(path[99].infinity_distance(&to) < 1e-15);
        for sample in &path {
            assert!(check_conditions(&c, sample).unwrap().passed());
        }
    }

    #[test]
    fn degenerate_path_is_constant() {
        let c = cube();
        let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let path = linear_path(&c, &a, &a, 7).unwrap();
        assert!(path.iter().all(|s| s.infinity_distance(&a) < 1e-15));
    }

    #[test]
    fn midpoint_of_valid_assignments_valid() {
        let c = dodecahedron();
        let from = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let to = AngleAssignment::uniform(&c, PI / 2.0);
        if check_conditions(&c, &to).unwrap().passed() {
            let mid = from.lerp(&to, 0.5);
            assert!(check_conditions(&c, &mid).unwrap().passed());
        }
    }
}
