//! OFF output and a reference reader.
//!
//! The first line gives the vertex, face, and edge counts; a block of
//! vertex coordinates in the projective (Klein) model follows, six decimal
//! places each; the face block lists each face as its vertex count, the
//! cyclically ordered vertex indices, and an integer colorspec.

use crate::combinatorics::AbstractPolyhedron;
use crate::lorentz::{to_projective, VertexClass};
use crate::solver::Realization;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum OffError {
    #[error("realization is not compact: vertex {triangle:?} is {class}")]
    NonCompact { triangle: [usize; 3], class: &'static str },
    #[error("malformed OFF data: {0}")]
    Malformed(String),
}

/// Parsed OFF data.
#[derive(Debug, Clone, PartialEq)]
pub struct OffData {
    pub vertices: Vec<[f64; 3]>,
    /// Vertex indices per face, cyclic order, plus the colorspec.
    pub faces: Vec<(Vec<usize>, i64)>,
    pub edge_count: usize,
}

/// Cyclic vertex order around each face, derived from the link cycles,
/// oriented so the Euclidean face normal points out of the polyhedron.
fn face_vertex_cycles(p: &Realization, klein: &[[f64; 3]]) -> Result<Vec<Vec<usize>>, OffError> {
    let c = p.complex();
    let mut out = Vec::with_capacity(c.face_count());
    for face in 0..c.face_count() {
        let ring = c.link_cycle(face);
        let k = ring.len();
        let mut cycle = Vec::with_capacity(k);
        for i in 0..k {
            let mut tri = [face, ring[i], ring[(i + 1) % k]];
            tri.sort_unstable();
            let pos = c
                .triangle_position(tri)
                .ok_or_else(|| OffError::Malformed(format!("missing vertex {tri:?}")))?;
            cycle.push(pos);
        }
        // Orient outward: Newell normal against the Klein plane normal.
        let mut normal = [0.0f64; 3];
        for i in 0..k {
            let a = klein[cycle[i]];
            let b = klein[cycle[(i + 1) % k]];
            normal[0] += (a[1] - b[1]) * (a[2] + b[2]);
            normal[1] += (a[2] - b[2]) * (a[0] + b[0]);
            normal[2] += (a[0] - b[0]) * (a[1] + b[1]);
        }
        let v = p.normals()[face];
        let outward = normal[0] * v.x1 + normal[1] * v.x2 + normal[2] * v.x3;
        if outward < 0.0 {
            cycle.reverse();
        }
        out.push(cycle);
    }
    Ok(out)
}

/// Serializes a compact realization in the OFF layout described above.
/// Faces are colored by index modulo a 16-entry palette.
pub fn write_off(p: &Realization) -> Result<String, OffError> {
    let c = p.complex();
    let mut klein = Vec::with_capacity(c.vertex_count());
    for (t, v) in c.triangles().iter().zip(p.vertices()) {
        match v {
            VertexClass::Finite(q) => klein.push(to_projective(q)),
            VertexClass::Ideal(_) => {
                return Err(OffError::NonCompact { triangle: *t, class: "ideal" })
            }
            VertexClass::Hyperideal(_) => {
                return Err(OffError::NonCompact { triangle: *t, class: "hyperideal" })
            }
        }
    }
    let cycles = face_vertex_cycles(p, &klein)?;
    let mut out = String::new();
    out.push_str(&format!(
        "{} {} {}\n\n",
        c.vertex_count(),
        c.face_count(),
        c.edge_count()
    ));
    for y in &klein {
        out.push_str(&format!("{:.6} {:.6} {:.6}\n", y[0], y[1], y[2]));
    }
    out.push('\n');
    for (face, cycle) in cycles.iter().enumerate() {
        out.push_str(&cycle.len().to_string());
        for idx in cycle {
            out.push_str(&format!(" {idx}"));
        }
        out.push_str(&format!(" {}\n", face % 16 + 1));
    }
    Ok(out)
}

/// Reference OFF reader for the layout produced by [`write_off`].
pub fn read_off(text: &str) -> Result<OffData, OffError> {
    let mut tokens = text.split_whitespace();
    let mut next_usize = |what: &str| -> Result<usize, OffError> {
        tokens
            .next()
            .ok_or_else(|| OffError::Malformed(format!("missing {what}")))?
            .parse()
            .map_err(|e| OffError::Malformed(format!("bad {what}: {e}")))
    };
    let nv = next_usize("vertex count")?;
    let nf = next_usize("face count")?;
    let ne = next_usize("edge count")?;
    let mut tokens = text.split_whitespace().skip(3);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut v = [0.0; 3];
        for coord in &mut v {
            *coord = tokens
                .next()
                .ok_or_else(|| OffError::Malformed("missing vertex coordinate".into()))?
                .parse()
                .map_err(|e| OffError::Malformed(format!("bad coordinate: {e}")))?;
        }
        vertices.push(v);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let count: usize = tokens
            .next()
            .ok_or_else(|| OffError::Malformed("missing face vertex count".into()))?
            .parse()
            .map_err(|e| OffError::Malformed(format!("bad face count: {e}")))?;
        let mut cycle = Vec::with_capacity(count);
        for _ in 0..count {
            let idx: usize = tokens
                .next()
                .ok_or_else(|| OffError::Malformed("missing face vertex index".into()))?
                .parse()
                .map_err(|e| OffError::Malformed(format!("bad vertex index: {e}")))?;
            if idx >= nv {
                return Err(OffError::Malformed(format!("vertex index {idx} out of range")));
            }
            cycle.push(idx);
        }
        let colorspec: i64 = tokens
            .next()
            .ok_or_else(|| OffError::Malformed("missing colorspec".into()))?
            .parse()
            .map_err(|e| OffError::Malformed(format!("bad colorspec: {e}")))?;
        faces.push((cycle, colorspec));
    }
    Ok(OffData { vertices, faces, edge_count: ne })
}

/// Reconstructs the complex from OFF face-vertex incidence: each vertex
/// lies on exactly three faces, which form its dual triangle.
pub fn off_complex(data: &OffData) -> Result<AbstractPolyhedron, OffError> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); data.vertices.len()];
    for (face, (cycle, _)) in data.faces.iter().enumerate() {
        for &v in cycle {
            incident[v].push(face);
        }
    }
    let mut triples = Vec::with_capacity(data.vertices.len());
    for (v, faces) in incident.iter().enumerate() {
        if faces.len() != 3 {
            return Err(OffError::Malformed(format!(
                "vertex {v} lies on {} faces, expected 3",
                faces.len()
            )));
        }
        triples.push([faces[0], faces[1], faces[2]]);
    }
    AbstractPolyhedron::from_triples(data.faces.len(), triples)
        .map_err(|e| OffError::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::AngleAssignment;
    use crate::combinatorics::{are_isomorphic, cube};
    use crate::construct::{construct, PipelineConfig};
    use std::f64::consts::PI;

    #[test]
    fn cube_off_header_and_roundtrip() {
        let c = cube();
        let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let out = construct(&c, &a, &PipelineConfig::default()).unwrap();
        let text = write_off(&out.realization).unwrap();
        assert!(text.starts_with("8 6 12\n"));
        let data = read_off(&text).unwrap();
        assert_eq!(data.vertices.len(), 8);
        assert_eq!(data.faces.len(), 6);
        for (cycle, _) in &data.faces {
            assert_eq!(cycle.len(), 4);
        }
        // Vertex coordinates reproduce at the printed precision.
        let text2 = write_off(&out.realization).unwrap();
        assert_eq!(text, text2);
        // The incidence structure reconstructs the complex.
        let rec = off_complex(&data).unwrap();
        assert!(are_isomorphic(&rec, &c));
    }
}
