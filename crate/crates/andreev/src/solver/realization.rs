//! Realizations: a complex together with unit spacelike face normals and
//! the cached classification of every dual-triangle vertex.

use crate::angles::AngleAssignment;
use crate::combinatorics::AbstractPolyhedron;
use crate::lorentz::{
    dihedral_angle, minkowski_inner, triple_intersection, LorentzError, LorentzMatrix,
    LorentzVector, VertexClass,
};
use nalgebra::DVector;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum RealizeError {
    #[error("normal count {got} does not match face count {want}")]
    WrongNormalCount { got: usize, want: usize },
    #[error("vertex {triangle:?} could not be computed: {source}")]
    BadVertex {
        triangle: [usize; 3],
        #[source]
        source: LorentzError,
    },
    #[error("no finite vertex available for an interior reference point")]
    NoInteriorPoint,
}

/// Default numeric thresholds for verification.
#[derive(Debug, Clone, Copy)]
pub struct VerifyTolerances {
    pub unit: f64,
    pub angle: f64,
    pub containment: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { unit: 1e-8, angle: 1e-9, containment: 1e-8 }
    }
}

/// One verification failure; the report lists all of them.
#[derive(Debug, Clone, PartialEq)]
pub enum VerifyFailure {
    NormalNotUnit { face: usize, norm: f64 },
    ObtuseOrDisjointEdge { edge: (usize, usize), inner: f64 },
    AngleMismatch { edge: (usize, usize), got: f64, want: f64 },
    VertexNotFinite { triangle: [usize; 3], class: &'static str },
    ContainmentViolated { triangle: [usize; 3], face: usize, inner: f64 },
    MissingAngle { edge: (usize, usize) },
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyFailure::NormalNotUnit { face, norm } => {
                write!(f, "normal {face} has Minkowski norm {norm}")
            }
            VerifyFailure::ObtuseOrDisjointEdge { edge, inner } => {
                write!(f, "edge {edge:?} has inner product {inner} outside (-1, 0]")
            }
            VerifyFailure::AngleMismatch { edge, got, want } => {
                write!(f, "edge {edge:?} has angle {got}, target {want}")
            }
            VerifyFailure::VertexNotFinite { triangle, class } => {
                write!(f, "vertex {triangle:?} is {class}")
            }
            VerifyFailure::ContainmentViolated { triangle, face, inner } => {
                write!(f, "vertex {triangle:?} lies outside face {face}: <p,v> = {inner}")
            }
            VerifyFailure::MissingAngle { edge } => write!(f, "no target angle for edge {edge:?}"),
        }
    }
}

#[derive(Error, Debug)]
#[error("realization fails verification: {}", .failures.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct VerifyReport {
    pub failures: Vec<VerifyFailure>,
}

/// A complex realized by outward unit spacelike normals, one per face.
#[derive(Debug, Clone)]
pub struct Realization {
    complex: AbstractPolyhedron,
    normals: Vec<LorentzVector>,
    vertices: Vec<VertexClass>,
}

impl Realization {
    /// Builds a realization and computes the vertex cache. Vertices may be
    /// of any class; compactness is a matter for [`Realization::verify`].
    pub fn from_normals(
        complex: AbstractPolyhedron,
        normals: Vec<LorentzVector>,
    ) -> Result<Self, RealizeError> {
        if normals.len() != complex.face_count() {
            return Err(RealizeError::WrongNormalCount {
                got: normals.len(),
                want: complex.face_count(),
            });
        }
        let vertices = compute_vertices(&complex, &normals)?;
        Ok(Self { complex, normals, vertices })
    }

    pub fn complex(&self) -> &AbstractPolyhedron {
        &self.complex
    }

    pub fn normals(&self) -> &[LorentzVector] {
        &self.normals
    }

    pub fn vertices(&self) -> &[VertexClass] {
        &self.vertices
    }

    /// Normals flattened into the unknown vector of the quadratic system.
    pub fn flatten(&self) -> DVector<f64> {
        let mut x = DVector::zeros(4 * self.normals.len());
        for (i, v) in self.normals.iter().enumerate() {
            let a = v.as_array();
            for c in 0..4 {
                x[4 * i + c] = a[c];
            }
        }
        x
    }

    pub fn from_flat(complex: AbstractPolyhedron, x: &DVector<f64>) -> Result<Self, RealizeError> {
        let normals = (0..complex.face_count())
            .map(|i| LorentzVector::new(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]))
            .collect();
        Self::from_normals(complex, normals)
    }

    /// Dihedral angles on every edge, from the normals.
    pub fn extract_angles(&self) -> Result<AngleAssignment, LorentzError> {
        let mut a = AngleAssignment::new();
        for &(i, j) in self.complex.edges() {
            a.set(i, j, dihedral_angle(&self.normals[i], &self.normals[j])?);
        }
        Ok(a)
    }

    /// A point in the interior: the normalized sum of the finite vertices.
    pub fn interior_point(&self) -> Option<LorentzVector> {
        let mut sum = LorentzVector::default();
        let mut count = 0;
        for v in &self.vertices {
            if let VertexClass::Finite(p) = v {
                sum = sum + *p;
                count += 1;
            }
        }
        if count == 0 {
            return None;
        }
        let q = sum.norm_squared();
        (q < 0.0).then(|| sum.scale(1.0 / (-q).sqrt()))
    }

    pub fn apply_isometry(&self, g: &LorentzMatrix) -> Result<Self, RealizeError> {
        let normals = self.normals.iter().map(|v| g.apply(v)).collect();
        Self::from_normals(self.complex.clone(), normals)
    }

    /// Full verification against target angles: unit normals, non-obtuse
    /// intersections, angle match, all vertices finite, and half-space
    /// containment of every vertex against every face.
    pub fn verify(
        &self,
        target: &AngleAssignment,
        tol: &VerifyTolerances,
    ) -> Result<(), VerifyReport> {
        let mut failures = Vec::new();
        for (i, v) in self.normals.iter().enumerate() {
            let n = v.norm_squared();
            if (n - 1.0).abs() > tol.unit {
                failures.push(VerifyFailure::NormalNotUnit { face: i, norm: n });
            }
        }
        for &(i, j) in self.complex.edges() {
            let inner = minkowski_inner(&self.normals[i], &self.normals[j]);
            if inner <= -1.0 || inner > tol.angle {
                failures.push(VerifyFailure::ObtuseOrDisjointEdge { edge: (i, j), inner });
                continue;
            }
            match target.get(i, j) {
                None => failures.push(VerifyFailure::MissingAngle { edge: (i, j) }),
                Some(want) => {
                    let got = (-inner).min(1.0).max(-1.0).acos();
                    if (got - want).abs() > tol.angle {
                        failures.push(VerifyFailure::AngleMismatch { edge: (i, j), got, want });
                    }
                }
            }
        }
        for (t, vc) in self.complex.triangles().iter().zip(&self.vertices) {
            match vc {
                VertexClass::Finite(p) => {
                    for (m, v) in self.normals.iter().enumerate() {
                        let inner = minkowski_inner(p, v);
                        if inner > tol.containment {
                            failures.push(VerifyFailure::ContainmentViolated {
                                triangle: *t,
                                face: m,
                                inner,
                            });
                        }
                    }
                }
                VertexClass::Ideal(_) => {
                    failures.push(VerifyFailure::VertexNotFinite { triangle: *t, class: "ideal" });
                }
                VertexClass::Hyperideal(_) => {
                    failures.push(VerifyFailure::VertexNotFinite {
                        triangle: *t,
                        class: "hyperideal",
                    });
                }
            }
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(VerifyReport { failures })
        }
    }
}

fn compute_vertices(
    complex: &AbstractPolyhedron,
    normals: &[LorentzVector],
) -> Result<Vec<VertexClass>, RealizeError> {
    // First pass without an interior reference; finite and ideal vertices
    // do not need one.
    let mut raw = Vec::with_capacity(complex.vertex_count());
    let mut finite_sum = LorentzVector::default();
    let mut finite_count = 0usize;
    for t in complex.triangles() {
        let vc = triple_intersection(&normals[t[0]], &normals[t[1]], &normals[t[2]], None)
            .map_err(|source| RealizeError::BadVertex { triangle: *t, source })?;
        if let VertexClass::Finite(p) = vc {
            finite_sum = finite_sum + p;
            finite_count += 1;
        }
        raw.push(vc);
    }
    if raw.iter().all(|v| v.is_finite()) {
        return Ok(raw);
    }
    // Second pass for hyperideal vertices, now with a reference point.
    if finite_count == 0 {
        return Err(RealizeError::NoInteriorPoint);
    }
    let q = finite_sum.norm_squared();
    if q >= 0.0 {
        return Err(RealizeError::NoInteriorPoint);
    }
    let interior = finite_sum.scale(1.0 / (-q).sqrt());
    let mut out = Vec::with_capacity(raw.len());
    for (t, vc) in complex.triangles().iter().zip(raw) {
        match vc {
            VertexClass::Hyperideal(_) => {
                let vc2 = triple_intersection(
                    &normals[t[0]],
                    &normals[t[1]],
                    &normals[t[2]],
                    Some(&interior),
                )
                .map_err(|source| RealizeError::BadVertex { triangle: *t, source })?;
                out.push(vc2);
            }
            other => out.push(other),
        }
    }
    Ok(out)
}
