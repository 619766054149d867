//! The numerical layer: the `4N`-unknown quadratic system, Newton
//! iteration, the Kantorovich certificate, homotopy driving, and gauge
//! normalization of finished realizations.

mod homotopy;
mod newton;
mod realization;
mod system;

pub use homotopy::{homotopy_deform, walk_samples, DeformLog, HomotopyError, StepStat};
pub use newton::{kantorovich_certificate, newton_solve, Certificate, NewtonOutcome, SolveError};
pub use realization::{
    RealizeError, Realization, VerifyFailure, VerifyReport, VerifyTolerances,
};
pub use system::{build_system, Gauge, GaugeSpec, QuadraticSystem};

use crate::lorentz::{
    boost_x0x2, frame_map, metric_apply, minkowski_inner, LorentzMatrix, LorentzVector,
    VertexClass,
};
use nalgebra::Matrix4;

/// Picks the gauge for a realization in normalized position: the first two
/// faces of the lowest dual triangle are pinned fully and partially, and a
/// third face contributes one pinned coordinate, chosen where the leftover
/// boost acts most strongly.
pub fn pick_gauge(p: &Realization) -> GaugeSpec {
    let t = p.complex().triangles()[0];
    let (anchor, second) = (t[0], t[1]);
    // Sensitivity of coordinate 0 under the (x0, x2) boost is |x2| and
    // vice versa; prefer the face completing the triangle, fall back to the
    // globally most sensitive one.
    let sensitivity = |f: usize| {
        let v = p.normals()[f];
        if v.x2.abs() >= v.x0.abs() {
            (v.x2.abs(), 0)
        } else {
            (v.x0.abs(), 2)
        }
    };
    let mut third = t[2];
    let (mut best, mut coord) = sensitivity(third);
    if best < 0.05 {
        for f in 0..p.complex().face_count() {
            if f == anchor || f == second {
                continue;
            }
            let (s, c) = sensitivity(f);
            if s > best {
                best = s;
                coord = c;
                third = f;
            }
        }
    }
    let v = p.normals()[third].as_array();
    GaugeSpec { anchor, second, third, third_coord: coord, third_value: v[coord] }
}

/// Carries a realization to the normalized position: the anchor face normal
/// becomes `(0,0,0,1)`, its neighbor gets `x0 = x2 = 0` with positive `x1`,
/// the first finite vertex lands on the `x2 = 0` slice, and a reflection
/// fixes the sign of the first face with nonzero `x2`. Output files and
/// homotopy gauges both start from this position.
pub fn gauge_normalize(p: &Realization) -> Result<Realization, RealizeError> {
    let t = p.complex().triangles()[0];
    let v1 = p.normals()[t[0]];
    let v2 = p.normals()[t[1]];

    // Orthonormal frame (timelike, v1, unit part of v2, completion).
    let u1 = v1;
    let c = minkowski_inner(&v2, &u1);
    let w = v2 - u1.scale(c);
    let wq = w.norm_squared();
    let u2 = w.scale(1.0 / wq.sqrt());
    // The orthogonal complement of span{u1, u2} carries signature (1, 1);
    // diagonalize the induced form on a nullspace basis.
    let rows = [metric_apply(&u1), metric_apply(&u2)];
    let m = Matrix4::from_rows(&[
        nalgebra::RowVector4::from(rows[0].to_vector4().transpose()),
        nalgebra::RowVector4::from(rows[1].to_vector4().transpose()),
        nalgebra::RowVector4::zeros(),
        nalgebra::RowVector4::zeros(),
    ]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap()
    });
    let n1 = LorentzVector::from_vector4(vt.row(order[0]).transpose());
    let n2 = LorentzVector::from_vector4(vt.row(order[1]).transpose());
    // Diagonalize the 2x2 Gram form on span{n1, n2}.
    let g11 = n1.norm_squared();
    let g12 = minkowski_inner(&n1, &n2);
    let g22 = n2.norm_squared();
    let gram = nalgebra::Matrix2::new(g11, g12, g12, g22);
    let eig = gram.symmetric_eigen();
    let (mut u0, mut u3) = (LorentzVector::default(), LorentzVector::default());
    for k in 0..2 {
        let dir = n1.scale(eig.eigenvectors[(0, k)]) + n2.scale(eig.eigenvectors[(1, k)]);
        if eig.eigenvalues[k] < 0.0 {
            u0 = dir.scale(1.0 / (-dir.norm_squared()).sqrt());
        } else {
            u3 = dir.scale(1.0 / dir.norm_squared().sqrt());
        }
    }
    if u0.x0 < 0.0 {
        u0 = -u0;
    }
    let e0 = LorentzVector::new(1.0, 0.0, 0.0, 0.0);
    let e1 = LorentzVector::new(0.0, 1.0, 0.0, 0.0);
    let e2 = LorentzVector::new(0.0, 0.0, 1.0, 0.0);
    let e3 = LorentzVector::new(0.0, 0.0, 0.0, 1.0);
    let g = frame_map(&[u0, u1, u2, u3], &[e0, e3, e1, e2])
        .ok_or(RealizeError::NoInteriorPoint)?;
    let moved = p.apply_isometry(&g)?;

    // Residual boost in the (x0, x2) plane: put the first finite vertex on
    // the x2 = 0 slice.
    let moved = match moved.vertices().iter().find_map(|v| match v {
        VertexClass::Finite(p) => Some(*p),
        _ => None,
    }) {
        Some(p0) => {
            let tau = (-p0.x2 / p0.x0).atanh();
            moved.apply_isometry(&boost_x0x2(tau))?
        }
        None => moved,
    };

    // Reflection freedom in x2: fix the sign by the first face normal with
    // a clearly nonzero x2 component.
    let flip = moved
        .normals()
        .iter()
        .find(|v| v.x2.abs() > 1e-9)
        .map(|v| v.x2 < 0.0)
        .unwrap_or(false);
    if flip {
        let r = LorentzMatrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            1.0, 1.0, -1.0, 1.0,
        )));
        moved.apply_isometry(&r)
    } else {
        Ok(moved)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::AngleAssignment;
    use crate::combinatorics::cube;
    use crate::lorentz::spatial_rotation;
    use std::f64::consts::PI;

    /// A hand-built right-angled configuration: not a hyperbolic compact
    /// cube (that needs acute angles), but a valid normal layout for
    /// exercising the plumbing. Normals of the coordinate planes at
    /// distance d from the origin.
    fn shifted_coordinate_normals(d: f64) -> Vec<LorentzVector> {
        // Lateral faces in cyclic order, then the two caps, matching the
        // face layout of the cube complex. Compact for sinh(d) < 1/sqrt(2).
        let (sh, ch) = (d.sinh(), d.cosh());
        vec![
            LorentzVector::new(sh, ch, 0.0, 0.0),
            LorentzVector::new(sh, 0.0, ch, 0.0),
            LorentzVector::new(sh, -ch, 0.0, 0.0),
            LorentzVector::new(sh, 0.0, -ch, 0.0),
            LorentzVector::new(sh, 0.0, 0.0, ch),
            LorentzVector::new(sh, 0.0, 0.0, -ch),
        ]
    }

    #[test]
    fn gauge_normalize_puts_anchor_on_e3() {
        // Build a realization on the cube complex. Face order of the cube
        // complex: laterals 0..4, caps 4, 5; map laterals to the four
        // shifted planes and caps to the last two.
        let c = cube();
        let d = 0.45;
        let normals = shifted_coordinate_normals(d);
        let p = Realization::from_normals(c, normals).unwrap();
        // Shove it somewhere else with an isometry.
        let g = boost_x0x2(0.37).compose(&spatial_rotation(1, 3, 0.81));
        let q = p.apply_isometry(&g).unwrap();
        let normalized = gauge_normalize(&q).unwrap();
        let t = normalized.complex().triangles()[0];
        let v1 = normalized.normals()[t[0]];
        assert!(v1.x0.abs() < 1e-10 && v1.x1.abs() < 1e-10 && v1.x2.abs() < 1e-10);
        assert!((v1.x3 - 1.0).abs() < 1e-10);
        let v2 = normalized.normals()[t[1]];
        assert!(v2.x0.abs() < 1e-10 && v2.x2.abs() < 1e-10);
        assert!(v2.x1 > 0.0);
        // Angles are isometry invariants.
        let a0 = p.extract_angles().unwrap();
        let a1 = normalized.extract_angles().unwrap();
        assert!(a0.infinity_distance(&a1) < 1e-12);
    }

    #[test]
    fn gauge_invariance_of_angles() {
        let c = cube();
        let p = Realization::from_normals(c, shifted_coordinate_normals(0.45)).unwrap();
        let a0 = p.extract_angles().unwrap();
        for (i, g) in [
            boost_x0x2(0.5),
            spatial_rotation(1, 2, 1.1),
            spatial_rotation(2, 3, 0.2).compose(&boost_x0x2(-0.8)),
        ]
        .iter()
        .enumerate()
        {
            let q = p.apply_isometry(g).unwrap();
            let a1 = q.extract_angles().unwrap();
            assert!(a0.infinity_distance(&a1) < 1e-12, "isometry {i}");
        }
    }

    #[test]
    fn angles_of_shifted_configuration() {
        // Adjacent shifted coordinate planes meet at arccos(sinh^2 d).
        let d = 0.4;
        let p = Realization::from_normals(cube(), shifted_coordinate_normals(d)).unwrap();
        let a = p.extract_angles().unwrap();
        let want = (d.sinh() * d.sinh()).acos();
        let got = a.get(0, 4).unwrap();
        assert!((got - want).abs() < 1e-12);
        let _ = AngleAssignment::uniform(p.complex(), PI / 2.0);
    }
}
