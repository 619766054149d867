//! Construction of compound polyhedra: cut along a prismatic 3-circuit not
//! bounding a triangle, realize both pieces with perpendicular cut faces,
//! and glue them back with the Minkowski isometry matching the cut
//! triangles.

use super::{construct, ConstructError, PipelineConfig, PipelineReport};
use crate::angles::AngleAssignment;
use crate::combinatorics::{classify, cut_along_circuit, AbstractPolyhedron, CombinatorialClass, CutPiece};
use crate::lorentz::{
    frame_map, minkowski_inner, LorentzVector, VertexClass,
};
use crate::solver::{gauge_normalize, Realization};
use std::f64::consts::FRAC_PI_2;

pub fn construct_compound(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    let cutting = match classify(c) {
        CombinatorialClass::Compound { cutting, .. } => cutting,
        _ => {
            return Err(ConstructError::Internal(
                "compound pipeline invoked on a non-compound complex".into(),
            ))
        }
    };
    let circuit = &cutting[0];
    report.glue_log.push(format!(
        "cut along circuit {:?} ({} remaining)",
        circuit.faces,
        cutting.len() - 1
    ));
    let (piece1, piece2) = cut_along_circuit(c, circuit)
        .map_err(|e| ConstructError::Internal(e.to_string()))?;

    // Each piece inherits its angles from the original edges; the new
    // triangular faces meet their neighbors perpendicularly.
    let assignment_for = |piece: &CutPiece| {
        AngleAssignment::from_fn(&piece.complex, |u, v| {
            match (piece.to_original[u], piece.to_original[v]) {
                (Some(ou), Some(ov)) => a.get(ou, ov).expect("inherited edge angle"),
                _ => FRAC_PI_2,
            }
        })
    };
    let a1 = assignment_for(&piece1);
    let a2 = assignment_for(&piece2);
    let r1 = construct(&piece1.complex, &a1, cfg)?;
    report.merge("piece 1", r1.report);
    let r2 = construct(&piece2.complex, &a2, cfg)?;
    report.merge("piece 2", r2.report);

    let glued = glue_pieces(c, a, &piece1, &r1.realization, &piece2, &r2.realization)?;
    report.glue_log.push(format!(
        "glued pieces of {} and {} faces",
        piece1.complex.face_count(),
        piece2.complex.face_count()
    ));
    let glued = gauge_normalize(&glued)?;
    glued.verify(a, &cfg.verify).map_err(ConstructError::Verify)?;
    Ok(glued)
}

/// Vertices of the cut triangle in a piece realization, keyed by the
/// consecutive pair of circuit faces they join.
fn cut_triangle_vertices(
    piece: &CutPiece,
    p: &Realization,
) -> Result<[LorentzVector; 3], ConstructError> {
    let f = piece.new_face;
    let [c0, c1, c2] = piece.circuit_faces;
    let mut out = [LorentzVector::default(); 3];
    for (slot, pair) in [(c0, c1), (c1, c2), (c2, c0)].iter().enumerate() {
        let mut tri = [f, pair.0, pair.1];
        tri.sort_unstable();
        let pos = p
            .complex()
            .triangle_position(tri)
            .ok_or_else(|| ConstructError::Internal(format!("missing cut vertex {tri:?}")))?;
        match &p.vertices()[pos] {
            VertexClass::Finite(q) => out[slot] = *q,
            other => {
                return Err(ConstructError::GlueMismatch {
                    detail: format!("cut vertex {tri:?} is {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

/// Minkowski-orthonormal frame anchored at a cut triangle: normalized
/// vertex centroid, the cut-face normal, and two tangent directions from
/// the first two vertices.
fn cut_frame(
    vertices: &[LorentzVector; 3],
    face_normal: &LorentzVector,
) -> Result<[LorentzVector; 4], ConstructError> {
    let sum = vertices[0] + vertices[1] + vertices[2];
    let q = sum.norm_squared();
    if q >= 0.0 {
        return Err(ConstructError::GlueMismatch {
            detail: "cut triangle centroid is not timelike".into(),
        });
    }
    let u0 = sum.scale(1.0 / (-q).sqrt());
    let u1 = *face_normal;
    // Gram-Schmidt in the Minkowski form; the vertices already lie on the
    // cut plane, so they are orthogonal to u1.
    let mut u2 = vertices[0] + u0.scale(minkowski_inner(&vertices[0], &u0));
    let n2 = u2.norm_squared();
    if n2 <= 0.0 {
        return Err(ConstructError::GlueMismatch { detail: "degenerate cut frame".into() });
    }
    u2 = u2.scale(1.0 / n2.sqrt());
    let mut u3 = vertices[1] + u0.scale(minkowski_inner(&vertices[1], &u0))
        - u2.scale(minkowski_inner(&vertices[1], &u2));
    let n3 = u3.norm_squared();
    if n3 <= 0.0 {
        return Err(ConstructError::GlueMismatch { detail: "degenerate cut frame".into() });
    }
    u3 = u3.scale(1.0 / n3.sqrt());
    Ok([u0, u1, u2, u3])
}

fn glue_pieces(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    piece1: &CutPiece,
    r1: &Realization,
    piece2: &CutPiece,
    r2: &Realization,
) -> Result<Realization, ConstructError> {
    // The pieces realize mirror-image cut triangles; matching vertices are
    // indexed identically because both cuts list the circuit faces in the
    // circuit's own order.
    let v1 = cut_triangle_vertices(piece1, r1)?;
    let v2 = cut_triangle_vertices(piece2, r2)?;
    let f1 = cut_frame(&v1, &r1.normals()[piece1.new_face])?;
    let f2 = cut_frame(&v2, &r2.normals()[piece2.new_face])?;
    // Face angles of the cut triangles must agree pairwise before gluing.
    for k in 0..3 {
        let e1 = angle_at(&v1, k);
        let e2 = angle_at(&v2, k);
        if (e1 - e2).abs() > 1e-7 {
            return Err(ConstructError::GlueMismatch {
                detail: format!("cut-triangle corner {k} angles differ: {e1} vs {e2}"),
            });
        }
    }
    // Carry frame 2 onto frame 1 with the face normal reversed, so the
    // pieces sit on opposite sides of the cut plane.
    let target = [f1[0], -f1[1], f1[2], f1[3]];
    let g = frame_map(&f2, &target).ok_or_else(|| ConstructError::GlueMismatch {
        detail: "cut frame is numerically singular".into(),
    })?;
    if !g.preserves_form(1e-7) {
        return Err(ConstructError::GlueMismatch {
            detail: format!("gluing map defects the Minkowski form by {:.3e}", g.form_defect()),
        });
    }
    // Third-vertex consistency check.
    let moved = g.apply(&v2[2]);
    if (moved - v1[2]).euclidean_norm() > 1e-6 {
        return Err(ConstructError::GlueMismatch {
            detail: format!(
                "third cut vertex lands {:.3e} away from its partner",
                (moved - v1[2]).euclidean_norm()
            ),
        });
    }

    let mut normals = vec![None::<LorentzVector>; c.face_count()];
    for (pf, orig) in piece1.to_original.iter().enumerate() {
        if let Some(orig) = orig {
            normals[*orig] = Some(r1.normals()[pf]);
        }
    }
    for (pf, orig) in piece2.to_original.iter().enumerate() {
        if let Some(orig) = orig {
            let img = g.apply(&r2.normals()[pf]);
            match normals[*orig] {
                None => normals[*orig] = Some(img),
                Some(existing) => {
                    // A circuit face lives in both pieces; after the gluing
                    // map the two copies must be the same outward plane.
                    let agreement = minkowski_inner(&existing, &img);
                    if (agreement - 1.0).abs() > 1e-6 {
                        return Err(ConstructError::GlueMismatch {
                            detail: format!(
                                "circuit face {orig} planes disagree: <v, Gw> = {agreement}"
                            ),
                        });
                    }
                }
            }
        }
    }
    let normals: Vec<LorentzVector> = normals
        .into_iter()
        .map(|n| n.ok_or_else(|| ConstructError::Internal("face left unset after gluing".into())))
        .collect::<Result<_, _>>()?;
    let glued = Realization::from_normals(c.clone(), normals)?;
    // Guard: the seam edges must measure the prescribed angles.
    let extracted = glued.extract_angles()?;
    let mut worst: f64 = 0.0;
    for &(i, j) in c.edges() {
        worst = worst.max((extracted.get(i, j).unwrap() - a.get(i, j).unwrap()).abs());
    }
    if worst > 1e-7 {
        return Err(ConstructError::GlueMismatch {
            detail: format!("angle mismatch of {worst:.3e} after gluing"),
        });
    }
    Ok(glued)
}

/// Hyperbolic angle of the cut triangle at vertex `k`, from the three
/// vertices. Tangent directions toward the two other vertices are compared
/// in the tangent space at the corner.
fn angle_at(v: &[LorentzVector; 3], k: usize) -> f64 {
    let p = v[k];
    let q = v[(k + 1) % 3];
    let r = v[(k + 2) % 3];
    let tq = q + p.scale(minkowski_inner(&q, &p));
    let tr = r + p.scale(minkowski_inner(&r, &p));
    let num = minkowski_inner(&tq, &tr);
    let den = (tq.norm_squared() * tr.norm_squared()).sqrt();
    (num / den).clamp(-1.0, 1.0).acos()
}
