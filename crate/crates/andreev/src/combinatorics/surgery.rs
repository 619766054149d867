//! Complex surgery: cutting along prismatic 3-circuits, collapsing
//! truncation triangles, and the abstract gluing used to cross-check the
//! geometric assembly.

use super::{AbstractPolyhedron, Circuit, TruncationSite, ValidationError};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SurgeryError {
    #[error("circuit {0:?} does not separate the complex into two sides")]
    NotSeparating(Vec<usize>),
    #[error("surgery produced an invalid complex: {0}")]
    Invalid(#[from] ValidationError),
    #[error("gluing leaves four faces at a seam vertex between {0} and {1}")]
    SeamNotTrivalent(usize, usize),
    #[error("cannot collapse face {0}: it is not a triangle")]
    NotATriangle(usize),
    #[error("collapse would leave fewer than five faces")]
    TooFewFacesLeft,
}

/// One side of a cut: a complex with a fresh triangular face closing the
/// cut, plus maps back to the original face indices.
#[derive(Debug, Clone)]
pub struct CutPiece {
    pub complex: AbstractPolyhedron,
    /// Piece face index -> original face index; `None` for the new face.
    pub to_original: Vec<Option<usize>>,
    /// Index of the new triangular face inside the piece.
    pub new_face: usize,
    /// The circuit's three faces, as piece indices.
    pub circuit_faces: [usize; 3],
}

impl CutPiece {
    pub fn original_of(&self, piece_face: usize) -> Option<usize> {
        self.to_original[piece_face]
    }

    pub fn piece_of(&self, original_face: usize) -> Option<usize> {
        self.to_original.iter().position(|&o| o == Some(original_face))
    }
}

/// Cuts the complex along a prismatic 3-circuit. Each side keeps the three
/// circuit faces and gains one new triangular face adjacent to exactly
/// those three.
pub fn cut_along_circuit(
    c: &AbstractPolyhedron,
    circuit: &Circuit,
) -> Result<(CutPiece, CutPiece), SurgeryError> {
    assert_eq!(circuit.faces.len(), 3, "cutting is defined along 3-circuits");
    let cut: BTreeSet<usize> = circuit.faces.iter().copied().collect();
    // Side assignment: connected components of the dual graph minus the
    // circuit faces.
    let n = c.face_count();
    let mut side = vec![usize::MAX; n];
    let mut sides = 0;
    for start in 0..n {
        if cut.contains(&start) || side[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        side[start] = sides;
        while let Some(u) = stack.pop() {
            for &w in c.neighbors(u) {
                if !cut.contains(&w) && side[w] == usize::MAX {
                    side[w] = sides;
                    stack.push(w);
                }
            }
        }
        sides += 1;
    }
    if sides != 2 {
        return Err(SurgeryError::NotSeparating(circuit.faces.clone()));
    }
    let build = |s: usize| -> Result<CutPiece, SurgeryError> {
        let mut faces: Vec<usize> = (0..n)
            .filter(|f| cut.contains(f) || side[*f] == s)
            .collect();
        faces.sort_unstable();
        let index_of: BTreeMap<usize, usize> =
            faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let new_face = faces.len();
        let mut triples = Vec::new();
        for t in c.triangles() {
            let outside = t.iter().any(|f| !cut.contains(f) && side[*f] != s);
            if outside {
                continue;
            }
            triples.push([index_of[&t[0]], index_of[&t[1]], index_of[&t[2]]]);
        }
        let [a, b, d] = [
            index_of[&circuit.faces[0]],
            index_of[&circuit.faces[1]],
            index_of[&circuit.faces[2]],
        ];
        triples.push([new_face, a, b]);
        triples.push([new_face, b, d]);
        triples.push([new_face, a, d]);
        let complex = AbstractPolyhedron::from_triples(faces.len() + 1, triples)?;
        let mut to_original: Vec<Option<usize>> = faces.iter().map(|&f| Some(f)).collect();
        to_original.push(None);
        Ok(CutPiece { complex, to_original, new_face, circuit_faces: [a, b, d] })
    };
    Ok((build(0)?, build(1)?))
}

/// Result of collapsing truncation triangles down to the reduced complex.
#[derive(Debug, Clone)]
pub struct CollapseInfo {
    pub reduced: AbstractPolyhedron,
    /// Original face -> reduced face; `None` for collapsed triangles.
    pub face_map: Vec<Option<usize>>,
    /// For each collapsed triangle: its original face index and the dual
    /// triangle of the reduced complex it became.
    pub collapsed: Vec<(usize, [usize; 3])>,
}

/// Replaces truncation triangles by vertices, one at a time, never going
/// below five faces. For the truncated triangular prism this collapses a
/// single triangle and leaves the prism.
pub fn collapse_truncation_triangles(
    c: &AbstractPolyhedron,
    sites: &[TruncationSite],
) -> Result<CollapseInfo, SurgeryError> {
    let mut current = c.clone();
    let mut face_map: Vec<Option<usize>> = (0..c.face_count()).map(Some).collect();
    let mut pending: Vec<usize> = sites.iter().map(|s| s.triangle_face).collect();
    pending.sort_unstable();
    let mut collapsed_orig: Vec<usize> = Vec::new();

    for &orig_face in &pending {
        if current.face_count() <= 5 {
            break;
        }
        let cur_face = match face_map[orig_face] {
            Some(f) => f,
            None => continue,
        };
        if current.degree(cur_face) != 3 {
            return Err(SurgeryError::NotATriangle(orig_face));
        }
        let nb: Vec<usize> = current.neighbors(cur_face).to_vec();
        let mut triples: Vec<[usize; 3]> = current
            .triangles()
            .iter()
            .filter(|t| !t.contains(&cur_face))
            .copied()
            .collect();
        triples.push([nb[0], nb[1], nb[2]]);
        // Compact indices past the removed face.
        let shift = |f: usize| if f > cur_face { f - 1 } else { f };
        let triples: Vec<[usize; 3]> = triples
            .iter()
            .map(|t| [shift(t[0]), shift(t[1]), shift(t[2])])
            .collect();
        current = AbstractPolyhedron::from_triples(current.face_count() - 1, triples)?;
        for m in face_map.iter_mut() {
            *m = match *m {
                Some(f) if f == cur_face => None,
                Some(f) => Some(shift(f)),
                None => None,
            };
        }
        collapsed_orig.push(orig_face);
    }

    let collapsed = collapsed_orig
        .into_iter()
        .map(|orig| {
            let nb: Vec<usize> = c
                .neighbors(orig)
                .iter()
                .map(|&f| face_map[f].expect("circuit faces are never collapsed"))
                .collect();
            let mut t = [nb[0], nb[1], nb[2]];
            t.sort_unstable();
            (orig, t)
        })
        .collect();
    Ok(CollapseInfo { reduced: current, face_map, collapsed })
}

/// Abstractly glues two complexes along a face of each, merging the given
/// neighbor pairs into single faces. `seam` maps each neighbor of `f1` to
/// its partner among the neighbors of `f2`; `merge` lists the neighbors of
/// `f1` whose partner becomes the same face of the glued complex.
///
/// Each seam vertex must have a merged edge on at least one side, so the
/// result is again trivalent.
pub fn glue_complexes(
    c1: &AbstractPolyhedron,
    f1: usize,
    c2: &AbstractPolyhedron,
    f2: usize,
    seam: &BTreeMap<usize, usize>,
    merge: &BTreeSet<usize>,
) -> Result<(AbstractPolyhedron, Vec<Option<usize>>, Vec<Option<usize>>), SurgeryError> {
    let n1 = c1.face_count();
    let n2 = c2.face_count();
    let mut map1: Vec<Option<usize>> = vec![None; n1];
    let mut next = 0;
    for f in 0..n1 {
        if f != f1 {
            map1[f] = Some(next);
            next += 1;
        }
    }
    let mut map2: Vec<Option<usize>> = vec![None; n2];
    for u in merge {
        map2[seam[u]] = map1[*u];
    }
    for f in 0..n2 {
        if f != f2 && map2[f].is_none() {
            map2[f] = Some(next);
            next += 1;
        }
    }
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for t in c1.triangles() {
        if !t.contains(&f1) {
            triples.push([map1[t[0]].unwrap(), map1[t[1]].unwrap(), map1[t[2]].unwrap()]);
        }
    }
    for t in c2.triangles() {
        if !t.contains(&f2) {
            triples.push([map2[t[0]].unwrap(), map2[t[1]].unwrap(), map2[t[2]].unwrap()]);
        }
    }
    // Seam vertices: consecutive neighbor pairs around the removed face.
    let ring = c1.link_cycle(f1);
    let k = ring.len();
    for i in 0..k {
        let u = ring[i];
        let v = ring[(i + 1) % k];
        match (merge.contains(&u), merge.contains(&v)) {
            (true, true) => {}
            (true, false) => {
                triples.push([map1[u].unwrap(), map1[v].unwrap(), map2[seam[&v]].unwrap()]);
            }
            (false, true) => {
                triples.push([map1[u].unwrap(), map2[seam[&u]].unwrap(), map1[v].unwrap()]);
            }
            (false, false) => return Err(SurgeryError::SeamNotTrivalent(u, v)),
        }
    }
    let glued = AbstractPolyhedron::from_triples(next, triples)?;
    Ok((glued, map1, map2))
}

#[cfg(test)]
mod tests {
    use super::super::catalog::{base_prism, base_split_prism};
    use super::super::{are_isomorphic, classify, find_prismatic_circuits, CombinatorialClass};
    use super::*;

    #[test]
    fn cut_prism_waist() {
        // The triangular prism cut along its waist yields two pieces that
        // are combinatorially tetrahedra-with-a-new-face, i.e. 4+... the
        // pieces have 3 circuit faces + 1 cap + 1 new face = 5 faces each.
        let p = base_prism(5).unwrap();
        let circ = find_prismatic_circuits(&p, 3).remove(0);
        let (a, b) = cut_along_circuit(&p, &circ).unwrap();
        assert_eq!(a.complex.face_count(), 5);
        assert_eq!(b.complex.face_count(), 5);
        assert!(are_isomorphic(&a.complex, &base_prism(5).unwrap()));
        assert!(are_isomorphic(&b.complex, &base_prism(5).unwrap()));
    }

    #[test]
    fn collapse_prism_cap() {
        // Collapsing one cap of the triangular prism is rejected only by the
        // five-face floor; build the 6-face truncated prism first.
        let p = base_prism(5).unwrap();
        // Truncate one vertex abstractly: vertex {0, 1, 3} becomes a
        // triangle face 5 adjacent to 0, 1, 3.
        let mut triples: Vec<[usize; 3]> = p
            .triangles()
            .iter()
            .filter(|t| **t != [0, 1, 3])
            .copied()
            .collect();
        triples.extend_from_slice(&[[5, 0, 1], [5, 1, 3], [5, 0, 3]]);
        let tt = AbstractPolyhedron::from_triples(6, triples).unwrap();
        let sites = match classify(&tt) {
            CombinatorialClass::Truncated { sites } => sites,
            other => panic!("expected truncated, got {other:?}"),
        };
        assert_eq!(sites.len(), 2, "waist and new-triangle circuits");
        let info = collapse_truncation_triangles(&tt, &sites).unwrap();
        assert_eq!(info.reduced.face_count(), 5);
        assert!(are_isomorphic(&info.reduced, &base_prism(5).unwrap()));
        assert_eq!(info.collapsed.len(), 1);
    }

    #[test]
    fn glue_prisms_into_split_prism() {
        // Two (N-1)-face prisms glued along a cap, all cap edges merged
        // except one, give the N-face split prism.
        let n = 12;
        let p = base_prism(n - 1).unwrap();
        let cap = n - 3; // top cap
        let ring: Vec<usize> = p.link_cycle(cap).to_vec();
        let seam: BTreeMap<usize, usize> = ring.iter().map(|&u| (u, u)).collect();
        let merge: BTreeSet<usize> = ring.iter().copied().filter(|&u| u != ring[0]).collect();
        let (glued, _, _) = glue_complexes(&p, cap, &p, cap, &seam, &merge).unwrap();
        assert_eq!(glued.face_count(), n);
        assert!(are_isomorphic(&glued, &base_split_prism(n).unwrap()));
    }
}
