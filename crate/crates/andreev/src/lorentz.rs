//! Minkowski-space linear algebra for the hyperboloid model of `H^3`.
//!
//! `E^{3,1}` is `R^4` with the indefinite form `⟨x,x⟩ = -x0² + x1² + x2² + x3²`.
//! Hyperbolic space is the sheet `⟨x,x⟩ = -1`, `x0 > 0`; a plane is the
//! orthogonal complement of a unit spacelike vector `v`, and the polyhedra
//! built by this crate are intersections of half-spaces
//! `H_v = { x : ⟨x,v⟩ ≤ 0 }` with all normals pointing outward.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Self-inner-product threshold below which a normalized intersection
/// direction is treated as lightlike.
pub const LIGHTLIKE_TOL: f64 = 1e-8;

/// A vector in `E^{3,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct LorentzVector {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LorentzVector {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    /// Basepoint of the hyperboloid sheet.
    pub const fn basepoint() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub(crate) fn to_vector4(self) -> Vector4<f64> {
        Vector4::new(self.x0, self.x1, self.x2, self.x3)
    }

    pub(crate) fn from_vector4(v: Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn norm_squared(&self) -> f64 {
        minkowski_inner(self, self)
    }

    /// Euclidean norm of the coordinate 4-tuple, used only for scaling.
    pub fn euclidean_norm(&self) -> f64 {
        (self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Add for LorentzVector {
    type Output = LorentzVector;
    fn add(self, o: LorentzVector) -> LorentzVector {
        LorentzVector::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for LorentzVector {
    type Output = LorentzVector;
    fn sub(self, o: LorentzVector) -> LorentzVector {
        LorentzVector::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> LorentzVector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for LorentzVector {
    type Output = LorentzVector;
    fn mul(self, s: f64) -> LorentzVector {
        self.scale(s)
    }
}

/// The indefinite inner product `-u0·v0 + u1·v1 + u2·v2 + u3·v3`.
pub fn minkowski_inner(u: &LorentzVector, v: &LorentzVector) -> f64 {
    -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3
}

/// The metric matrix `J = diag(-1, 1, 1, 1)`.
pub(crate) fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Applies `J` to a vector: flips the sign of the time component.
pub(crate) fn metric_apply(v: &LorentzVector) -> LorentzVector {
    LorentzVector::new(-v.x0, v.x1, v.x2, v.x3)
}

/// Classification of a triple-plane intersection point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VertexClass {
    /// A point of `H^3`, normalized to `⟨p,p⟩ = -1`, `p.x0 > 0`.
    Finite(LorentzVector),
    /// A direction on the light cone, scaled to Euclidean norm 1, `x0 > 0`.
    Ideal(LorentzVector),
    /// A unit spacelike vector; the planes meet beyond infinity and the
    /// vector is the normal of the common perpendicular plane, oriented
    /// away from the polyhedron interior.
    Hyperideal(LorentzVector),
}

impl VertexClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, VertexClass::Finite(_))
    }

    pub fn vector(&self) -> &LorentzVector {
        match self {
            VertexClass::Finite(v) | VertexClass::Ideal(v) | VertexClass::Hyperideal(v) => v,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LorentzError {
    #[error("planes are tangent or disjoint: <v,w> = {inner}")]
    NonIntersecting { inner: f64 },
    #[error("the three normals are linearly dependent")]
    DegenerateTriple,
    #[error("vector is not unit spacelike: <v,v> = {norm}")]
    NotSpacelike { norm: f64 },
}

const UNIT_TOL: f64 = 1e-6;

fn check_unit_spacelike(v: &LorentzVector) -> Result<(), LorentzError> {
    let n = v.norm_squared();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(LorentzError::NotSpacelike { norm: n });
    }
    Ok(())
}

/// Dihedral angle `arccos(-⟨v,w⟩)` between the planes with unit spacelike
/// normals `v`, `w`. Fails when the planes do not intersect in a line.
pub fn dihedral_angle(v: &LorentzVector, w: &LorentzVector) -> Result<f64, LorentzError> {
    check_unit_spacelike(v)?;
    check_unit_spacelike(w)?;
    let inner = minkowski_inner(v, w);
    if inner * inner >= 1.0 {
        return Err(LorentzError::NonIntersecting { inner });
    }
    Ok((-inner).acos())
}

/// Intersection point of the three planes orthogonal to `v1`, `v2`, `v3`,
/// classified by the sign of its self-inner-product.
///
/// The point is the Minkowski-orthogonal complement of the span of the
/// normals, found as the nullspace of the 3x4 system `A·J·z = 0`. For a
/// hyperideal result the sign is fixed so the associated plane faces away
/// from the polyhedron interior, for which the caller supplies a reference
/// point; without one the `x3`-component sign is used as a fallback.
pub fn triple_intersection(
    v1: &LorentzVector,
    v2: &LorentzVector,
    v3: &LorentzVector,
    interior: Option<&LorentzVector>,
) -> Result<VertexClass, LorentzError> {
    // Rows are v_i^T J, so the nullspace vector z satisfies <v_i, z> = 0;
    // a zero fourth row squares the system without changing the nullspace.
    let rows = [metric_apply(v1), metric_apply(v2), metric_apply(v3)];
    let m = Matrix4::from_rows(&[
        nalgebra::RowVector4::from(rows[0].to_vector4().transpose()),
        nalgebra::RowVector4::from(rows[1].to_vector4().transpose()),
        nalgebra::RowVector4::from(rows[2].to_vector4().transpose()),
        nalgebra::RowVector4::zeros(),
    ]);
    let svd = m.svd(false, true);
    let sing = &svd.singular_values;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| sing[a].partial_cmp(&sing[b]).unwrap());
    // Rank check: three singular values must be well away from zero
    // relative to the largest.
    let smax = sing[order[3]];
    if smax <= 0.0 || sing[order[1]] / smax < 1e-10 {
        return Err(LorentzError::DegenerateTriple);
    }
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let z = vt.row(order[0]).transpose();
    let mut z = LorentzVector::new(z[0], z[1], z[2], z[3]);
    // Scale to Euclidean norm 1 before classifying.
    let en = z.euclidean_norm();
    if en == 0.0 || !en.is_finite() {
        return Err(LorentzError::DegenerateTriple);
    }
    z = z.scale(1.0 / en);
    let q = z.norm_squared();
    if q < -LIGHTLIKE_TOL {
        let mut p = z.scale(1.0 / (-q).sqrt());
        if p.x0 < 0.0 {
            p = -p;
        }
        Ok(VertexClass::Finite(p))
    } else if q > LIGHTLIKE_TOL {
        let mut n = z.scale(1.0 / q.sqrt());
        let outward_sign = match interior {
            Some(p) => -minkowski_inner(p, &n),
            None => n.x3,
        };
        if outward_sign < 0.0 {
            n = -n;
        }
        Ok(VertexClass::Hyperideal(n))
    } else {
        let mut d = z;
        if d.x0 < 0.0 {
            d = -d;
        }
        Ok(VertexClass::Ideal(d))
    }
}

/// A 4x4 real matrix acting on `E^{3,1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix(pub Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        LorentzMatrix(Matrix4::identity())
    }

    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        LorentzVector::from_vector4(self.0 * v.to_vector4())
    }

    pub fn compose(&self, other: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * other.0)
    }

    /// Maximum absolute entry of `MᵀJM - J`.
    pub fn form_defect(&self) -> f64 {
        let j = metric();
        let d = self.0.transpose() * j * self.0 - j;
        d.abs().max()
    }

    pub fn preserves_form(&self, tol: f64) -> bool {
        self.form_defect() <= tol
    }

    /// Maximum absolute entry of `M² - I`.
    pub fn involution_defect(&self) -> f64 {
        let d = self.0 * self.0 - Matrix4::identity();
        d.abs().max()
    }

    pub fn is_involution(&self, tol: f64) -> bool {
        self.involution_defect() <= tol
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.0[(r, c)]
    }

    pub fn max_abs_diff(&self, other: &LorentzMatrix) -> f64 {
        (self.0 - other.0).abs().max()
    }
}

/// Reflection in the plane orthogonal to the unit spacelike vector `v`:
/// `x ↦ x - 2⟨x,v⟩v`, as a matrix `I - 2 v vᵀ J`.
pub fn reflection_matrix(v: &LorentzVector) -> Result<LorentzMatrix, LorentzError> {
    check_unit_spacelike(v)?;
    let col = v.to_vector4();
    let jv = metric_apply(v).to_vector4();
    let m = Matrix4::identity() - 2.0 * col * jv.transpose();
    Ok(LorentzMatrix(m))
}

/// Projective (Klein) model coordinates of a finite vertex:
/// `(p1/p0, p2/p0, p3/p0)`, a point of the open unit ball.
pub fn to_projective(p: &LorentzVector) -> [f64; 3] {
    [p.x1 / p.x0, p.x2 / p.x0, p.x3 / p.x0]
}

/// Lifts a Klein-model point to the normalized timelike vector over it.
pub fn from_projective(y: [f64; 3]) -> LorentzVector {
    let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let s = 1.0 / (1.0 - r2).sqrt();
    LorentzVector::new(s, s * y[0], s * y[1], s * y[2])
}

/// Builds the orthochronous isometry carrying one unit spacelike vector to
/// another, as a product of at most two Minkowski reflections.
pub fn isometry_mapping_spacelike(
    from: &LorentzVector,
    to: &LorentzVector,
) -> Result<LorentzMatrix, LorentzError> {
    check_unit_spacelike(from)?;
    check_unit_spacelike(to)?;
    let d = *from - *to;
    let dd = d.norm_squared();
    let s = *from + *to;
    let ss = s.norm_squared();
    // Reflect in whichever bisector is better conditioned; the sum variant
    // maps from -> -to and needs a correcting reflection in `to`.
    if dd.abs() >= ss.abs() {
        if dd.abs() < 1e-24 {
            return Ok(LorentzMatrix::identity());
        }
        let u = d.scale(1.0 / dd.abs().sqrt());
        if dd > 0.0 {
            reflection_matrix(&u)
        } else {
            // Timelike bisector: x ↦ x + 2<x,u>u reverses time orientation;
            // compose with reflection in `to` after negating.
            let jv = metric_apply(&u).to_vector4();
            let m = Matrix4::identity() + 2.0 * u.to_vector4() * jv.transpose();
            let fix = reflection_matrix(to)?;
            // m maps `from` to ... guard by falling back to the sum branch.
            let cand = fix.compose(&LorentzMatrix(m));
            if cand.apply(from).euclidean_norm().is_finite() {
                return Ok(cand);
            }
            Err(LorentzError::DegenerateTriple)
        }
    } else {
        let u = s.scale(1.0 / ss.abs().sqrt());
        let r = if ss > 0.0 {
            reflection_matrix(&u)?
        } else {
            let jv = metric_apply(&u).to_vector4();
            LorentzMatrix(Matrix4::identity() + 2.0 * u.to_vector4() * jv.transpose())
        };
        // r maps from -> -to; reflecting in `to` fixes the sign.
        let fix = reflection_matrix(to)?;
        Ok(fix.compose(&r))
    }
}

/// Boost in the `(x0, x2)` coordinate plane by rapidity `tau`.
pub fn boost_x0x2(tau: f64) -> LorentzMatrix {
    let mut m = Matrix4::identity();
    let (sh, ch) = (tau.sinh(), tau.cosh());
    m[(0, 0)] = ch;
    m[(0, 2)] = sh;
    m[(2, 0)] = sh;
    m[(2, 2)] = ch;
    LorentzMatrix(m)
}

/// Rotation in a spatial coordinate plane (axes in `{1,2,3}`).
pub fn spatial_rotation(a: usize, b: usize, angle: f64) -> LorentzMatrix {
    let mut m = Matrix4::identity();
    let (s, c) = angle.sin_cos();
    m[(a, a)] = c;
    m[(a, b)] = -s;
    m[(b, a)] = s;
    m[(b, b)] = c;
    LorentzMatrix(m)
}

/// Solves for the Minkowski matrix carrying one 4-frame to another:
/// `G · W = U` with frame vectors as columns.
pub fn frame_map(w: &[LorentzVector; 4], u: &[LorentzVector; 4]) -> Option<LorentzMatrix> {
    let wm = Matrix4::from_columns(&[
        w[0].to_vector4(),
        w[1].to_vector4(),
        w[2].to_vector4(),
        w[3].to_vector4(),
    ]);
    let um = Matrix4::from_columns(&[
        u[0].to_vector4(),
        u[1].to_vector4(),
        u[2].to_vector4(),
        u[3].to_vector4(),
    ]);
    let inv = wm.try_inverse()?;
    Some(LorentzMatrix(um * inv))
}

/// Euclidean 3x3 helper for plane fitting in the Klein model.
pub(crate) fn plane_through_klein_points(points: &[[f64; 3]]) -> Option<LorentzVector> {
    // Fit y·n = c through the points (least squares via the centroid and
    // smallest principal direction), then lift: the hyperbolic plane
    // { x : <x,v> = 0 } meets the Klein ball in { y : y·v_spatial = v0 }.
    let k = points.len();
    if k < 3 {
        return None;
    }
    let mut c = [0.0; 3];
    for p in points {
        for i in 0..3 {
            c[i] += p[i] / k as f64;
        }
    }
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = Vector3::new(p[0] - c[0], p[1] - c[1], p[2] - c[2]);
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let mut imin = 0;
    for i in 1..3 {
        if eig.eigenvalues[i] < eig.eigenvalues[imin] {
            imin = i;
        }
    }
    let n = eig.eigenvectors.column(imin);
    let c0 = n[0] * c[0] + n[1] * c[1] + n[2] * c[2];
    // v = (c0, n) up to scale; normalize to unit spacelike.
    let v = LorentzVector::new(c0, n[0], n[1], n[2]);
    let q = v.norm_squared();
    if q <= 0.0 {
        return None;
    }
    Some(v.scale(1.0 / q.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    #[test]
    fn inner_product_basis_cases() {
        let e0 = LorentzVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(minkowski_inner(&e0, &e0), -1.0);
        let e1 = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
        let e2 = LorentzVector::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(minkowski_inner(&e1, &e2), 0.0);
    }

    #[test]
    fn inner_product_reference_normals() {
        // Rows 3 and 11 of the reference 16-face normal table.
        let a = LorentzVector::new(-0.0000, 0.8660, -0.5000, -0.0000);
        let b = LorentzVector::new(-0.0000, 0.0000, 1.0000, 0.0000);
        assert!((minkowski_inner(&a, &b) - (-0.5)).abs() < 1e-4);
        let a = a.scale(1.0 / a.norm_squared().sqrt());
        let angle = dihedral_angle(&a, &b).unwrap();
        assert!((angle - PI / 3.0).abs() < 1e-4);
    }

    #[test]
    fn dihedral_orthogonal_planes() {
        let v = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
        let w = LorentzVector::new(0.0, 0.0, 1.0, 0.0);
        assert!((dihedral_angle(&v, &w).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn dihedral_disjoint_planes_error() {
        let v = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
        let w = LorentzVector::new(1.0, SQRT_2, 0.0, 0.0);
        assert!(matches!(
            dihedral_angle(&v, &w),
            Err(LorentzError::NonIntersecting { .. })
        ));
    }

    #[test]
    fn triple_intersection_basepoint() {
        let v1 = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
        let v2 = LorentzVector::new(0.0, 0.0, 1.0, 0.0);
        let v3 = LorentzVector::new(0.0, 0.0, 0.0, 1.0);
        match triple_intersection(&v1, &v2, &v3, None).unwrap() {
            VertexClass::Finite(p) => {
                assert!((p.x0 - 1.0).abs() < 1e-12);
                assert!(p.x1.abs() + p.x2.abs() + p.x3.abs() < 1e-12);
            }
            other => panic!("expected finite vertex, got {other:?}"),
        }
    }

    #[test]
    fn triple_intersection_ideal() {
        let v1 = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
        let v2 = LorentzVector::new(1.0, 0.0, SQRT_2, 0.0);
        let v3 = LorentzVector::new(1.0, 0.0, 0.0, SQRT_2);
        match triple_intersection(&v1, &v2, &v3, None).unwrap() {
            VertexClass::Ideal(d) => {
                // Direction proportional to (sqrt(2), 0, 1, 1).
                let t = d.x0 / SQRT_2;
                assert!(d.x1.abs() < 1e-10);
                assert!((d.x2 - t).abs() < 1e-10);
                assert!((d.x3 - t).abs() < 1e-10);
                assert!(d.norm_squared().abs() < 1e-10);
            }
            other => panic!("expected ideal vertex, got {other:?}"),
        }
    }

    #[test]
    fn triple_intersection_degenerate() {
        let v1 = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
        let v2 = LorentzVector::new(0.0, -1.0, 0.0, 0.0);
        let v3 = LorentzVector::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(
            triple_intersection(&v1, &v2, &v3, None),
            Err(LorentzError::DegenerateTriple)
        );
    }

    #[test]
    fn reflection_coordinate_plane() {
        let v = LorentzVector::new(0.0, 0.0, 0.0, 1.0);
        let m = reflection_matrix(&v).unwrap();
        for (i, expect) in [1.0, 1.0, 1.0, -1.0].iter().enumerate() {
            assert!((m.entry(i, i) - expect).abs() < 1e-15);
        }
        assert!(m.is_involution(1e-12));
        assert!(m.preserves_form(1e-12));
    }

    #[test]
    fn projective_basics() {
        assert_eq!(to_projective(&LorentzVector::basepoint()), [0.0, 0.0, 0.0]);
        let t = 0.7_f64;
        let p = LorentzVector::new(t.cosh(), t.sinh(), 0.0, 0.0);
        let y = to_projective(&p);
        assert!((y[0] - t.tanh()).abs() < 1e-15);
        assert!(y[1].abs() < 1e-15 && y[2].abs() < 1e-15);
    }

    fn arb_vec() -> impl Strategy<Value = LorentzVector> {
        (
            -2.0..2.0f64,
            -2.0..2.0f64,
            -2.0..2.0f64,
            -2.0..2.0f64,
        )
            .prop_map(|(a, b, c, d)| LorentzVector::new(a, b, c, d))
    }

    fn arb_unit_spacelike() -> impl Strategy<Value = LorentzVector> {
        // Keep away from the light cone so the normalized vector has
        // moderate entries; conditioning, not correctness, degrades there.
        arb_vec().prop_filter_map("spacelike", |v| {
            let q = v.norm_squared();
            if q > 0.1 {
                let u = v.scale(1.0 / q.sqrt());
                (u.euclidean_norm() < 4.0).then_some(u)
            } else {
                None
            }
        })
    }

    proptest! {
        #[test]
        fn reflection_preserves_inner_products(
            v in arb_unit_spacelike(),
            x in arb_vec(),
            y in arb_vec(),
        ) {
            let r = reflection_matrix(&v).unwrap();
            let lhs = minkowski_inner(&r.apply(&x), &r.apply(&y));
            let rhs = minkowski_inner(&x, &y);
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert!(r.is_involution(1e-12));
        }

        #[test]
        fn dihedral_is_symmetric(v in arb_unit_spacelike(), w in arb_unit_spacelike()) {
            let a = dihedral_angle(&v, &w);
            let b = dihedral_angle(&w, &v);
            match (a, b) {
                (Ok(x), Ok(y)) => {
                    prop_assert!((x - y).abs() < 1e-12);
                    prop_assert!(x > 0.0 && x <= PI);
                }
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "asymmetric error behaviour"),
            }
        }

        #[test]
        fn projective_image_inside_ball(x1 in -3.0..3.0f64, x2 in -3.0..3.0f64, x3 in -3.0..3.0f64) {
            let s = (1.0 + x1 * x1 + x2 * x2 + x3 * x3).sqrt();
            let p = LorentzVector::new(s, x1, x2, x3);
            let y = to_projective(&p);
            let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            prop_assert!(r < 1.0);
        }

        #[test]
        fn triple_intersection_orthogonality(
            v1 in arb_unit_spacelike(),
            v2 in arb_unit_spacelike(),
            v3 in arb_unit_spacelike(),
        ) {
            if let Ok(z) = triple_intersection(&v1, &v2, &v3, None) {
                let z = z.vector();
                for v in [&v1, &v2, &v3] {
                    prop_assert!(minkowski_inner(z, v).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn spacelike_transport_maps_exactly() {
        let a = LorentzVector::new(0.3, 1.2, -0.4, 0.1);
        let a = a.scale(1.0 / a.norm_squared().sqrt());
        let b = LorentzVector::new(0.0, 0.0, 0.0, 1.0);
        let g = isometry_mapping_spacelike(&a, &b).unwrap();
        assert!(g.preserves_form(1e-12));
        let img = g.apply(&a);
        assert!((img - b).euclidean_norm() < 1e-12);
    }
}
