//! Abstract polyhedra on the sphere and the combinatorial half of the
//! construction: prismatic circuits, classification, Whitehead moves, and
//! the reduction of a simple complex to a prism or split prism.
//!
//! A trivalent cell complex on `S²` is stored through its dual
//! triangulation: one triple of face indices per trivalent vertex. All the
//! incidence axioms are checked at construction time, so an
//! [`AbstractPolyhedron`] value is always a valid complex.

mod canonical;
mod catalog;
mod reduction;
mod surgery;

pub use canonical::{are_isomorphic, canonical_code, find_isomorphism};
pub use catalog::{
    base_prism, base_split_prism, build_base_complex, cube, dodecahedron, lobell, BadN, BaseKind,
};
pub use reduction::{
    random_simple_complex, reduce_to_base, ReduceError, ReductionTrace, TraceMove,
};
pub use surgery::{
    collapse_truncation_triangles, cut_along_circuit, glue_complexes, CollapseInfo, CutPiece,
    SurgeryError,
};

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Normalizes an unordered face pair.
pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// One structural violation found while checking the incidence axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    FaceIndexOutOfRange { triangle: [usize; 3] },
    RepeatedFaceInTriangle { triangle: [usize; 3] },
    DuplicateTriangle { triangle: [usize; 3] },
    /// An edge of the complex lies on `count` faces instead of two.
    EdgeOnWrongFaceCount { edge: (usize, usize), count: usize },
    FaceWithFewerThanThreeEdges { face: usize, degree: usize },
    /// The faces around `face` do not form a single cycle.
    PinchedFace { face: usize },
    EulerCountOff { vertices: usize, edges: usize, faces: usize },
    Disconnected,
    NoTriangles,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceIndexOutOfRange { triangle } => {
                write!(f, "triangle {triangle:?} references a face out of range")
            }
            Violation::RepeatedFaceInTriangle { triangle } => {
                write!(f, "triangle {triangle:?} repeats a face")
            }
            Violation::DuplicateTriangle { triangle } => {
                write!(f, "triangle {triangle:?} listed twice")
            }
            Violation::EdgeOnWrongFaceCount { edge, count } => {
                write!(f, "edge {edge:?} lies on {count} faces (expected two)")
            }
            Violation::FaceWithFewerThanThreeEdges { face, degree } => {
                write!(f, "face {face} has only {degree} edges")
            }
            Violation::PinchedFace { face } => {
                write!(f, "faces around face {face} do not form a single cycle")
            }
            Violation::EulerCountOff { vertices, edges, faces } => write!(
                f,
                "Euler count V-E+F = {} for V={vertices}, E={edges}, F={faces}",
                *vertices as isize - *edges as isize + *faces as isize
            ),
            Violation::Disconnected => write!(f, "dual graph is disconnected"),
            Violation::NoTriangles => write!(f, "no dual triangles given"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("invalid abstract polyhedron: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

/// A trivalent cell complex on the sphere, stored via its dual triangulation.
#[derive(Clone, PartialEq, Eq)]
pub struct AbstractPolyhedron {
    face_count: usize,
    /// Sorted triples, sorted lexicographically.
    triangles: Vec<[usize; 3]>,
    /// Sorted unordered face pairs.
    edges: Vec<(usize, usize)>,
    edge_index: BTreeMap<(usize, usize), usize>,
    /// Cyclic neighbor order around each face.
    links: Vec<Vec<usize>>,
}

impl fmt::Debug for AbstractPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbstractPolyhedron(N={}, V={}, E={})",
            self.face_count,
            self.triangles.len(),
            self.edges.len()
        )
    }
}

/// Checks the incidence axioms on raw input and returns every violation
/// found; an empty list means the data describes a valid complex.
pub fn validate(face_count: usize, triples: &[[usize; 3]]) -> Vec<Violation> {
    let mut violations = Vec::new();
    if triples.is_empty() {
        violations.push(Violation::NoTriangles);
        return violations;
    }
    let mut normalized = Vec::with_capacity(triples.len());
    for t in triples {
        if t[0] >= face_count || t[1] >= face_count || t[2] >= face_count {
            violations.push(Violation::FaceIndexOutOfRange { triangle: *t });
            continue;
        }
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            violations.push(Violation::RepeatedFaceInTriangle { triangle: *t });
            continue;
        }
        let mut s = *t;
        s.sort_unstable();
        normalized.push(s);
    }
    if !violations.is_empty() {
        return violations;
    }
    normalized.sort_unstable();
    for w in normalized.windows(2) {
        if w[0] == w[1] {
            violations.push(Violation::DuplicateTriangle { triangle: w[0] });
        }
    }
    // Every edge of the complex must lie on exactly two faces; in the dual
    // every face pair occurring in a triangle occurs in exactly two.
    let mut pair_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in &normalized {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            *pair_count.entry(edge_key(a, b)).or_insert(0) += 1;
        }
    }
    for (&edge, &count) in &pair_count {
        if count != 2 {
            violations.push(Violation::EdgeOnWrongFaceCount { edge, count });
        }
    }
    if !violations.is_empty() {
        return violations;
    }
    // Per-face: the incident triangles must chain into one cycle (the face
    // is a disc) of length at least three.
    for face in 0..face_count {
        match link_cycle_of(face, &normalized) {
            Some(cycle) => {
                if cycle.len() < 3 {
                    violations.push(Violation::FaceWithFewerThanThreeEdges {
                        face,
                        degree: cycle.len(),
                    });
                }
            }
            None => violations.push(Violation::PinchedFace { face }),
        }
    }
    let v = normalized.len();
    let e = pair_count.len();
    if v as isize - e as isize + face_count as isize != 2 {
        violations.push(Violation::EulerCountOff { vertices: v, edges: e, faces: face_count });
    }
    // Connectivity of the dual graph.
    let mut seen = vec![false; face_count];
    let mut stack = vec![normalized[0][0]];
    seen[normalized[0][0]] = true;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); face_count];
    for (a, b) in pair_count.keys() {
        adj[*a].push(*b);
        adj[*b].push(*a);
    }
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        violations.push(Violation::Disconnected);
    }
    violations
}

/// Walks the triangles around `face` into a cyclic neighbor order.
fn link_cycle_of(face: usize, triangles: &[[usize; 3]]) -> Option<Vec<usize>> {
    // Neighbor -> the one or two "third" faces seen with it.
    let mut next: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for t in triangles {
        if let Some(pos) = t.iter().position(|&f| f == face) {
            let a = t[(pos + 1) % 3];
            let b = t[(pos + 2) % 3];
            let (a, b) = (a.min(b), a.max(b));
            next.entry(a).or_default().push(b);
            next.entry(b).or_default().push(a);
        }
    }
    if next.is_empty() {
        return None;
    }
    for v in next.values() {
        if v.len() != 2 {
            return None;
        }
    }
    let start = *next.keys().next()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = next[&start][0];
    while cur != start {
        cycle.push(cur);
        let nbrs = &next[&cur];
        let nxt = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = nxt;
        if cycle.len() > next.len() {
            return None;
        }
    }
    if cycle.len() == next.len() {
        Some(cycle)
    } else {
        None
    }
}

impl AbstractPolyhedron {
    /// Builds a complex from its dual triangles, verifying the axioms.
    pub fn from_triples(
        face_count: usize,
        triples: Vec<[usize; 3]>,
    ) -> Result<Self, ValidationError> {
        let violations = validate(face_count, &triples);
        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }
        let mut triangles: Vec<[usize; 3]> = triples
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        triangles.sort_unstable();
        let mut edge_set: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                edge_set.entry(edge_key(a, b)).or_insert(0);
            }
        }
        let edges: Vec<(usize, usize)> = edge_set.keys().copied().collect();
        for (i, e) in edges.iter().enumerate() {
            edge_set.insert(*e, i);
        }
        let links = (0..face_count)
            .map(|f| link_cycle_of(f, &triangles).expect("validated"))
            .collect();
        Ok(Self { face_count, triangles, edges, edge_index: edge_set, links })
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.edge_index.contains_key(&edge_key(a, b))
    }

    pub fn edge_position(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&edge_key(a, b)).copied()
    }

    pub fn has_triangle(&self, mut t: [usize; 3]) -> bool {
        t.sort_unstable();
        self.triangles.binary_search(&t).is_ok()
    }

    /// Cyclic order of the neighboring faces around `face`.
    pub fn link_cycle(&self, face: usize) -> &[usize] {
        &self.links[face]
    }

    pub fn degree(&self, face: usize) -> usize {
        self.links[face].len()
    }

    pub fn neighbors(&self, face: usize) -> &[usize] {
        &self.links[face]
    }

    /// The two triangles containing the dual edge `{a, b}`, as their third
    /// vertices.
    pub fn edge_flanks(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let mut flanks = Vec::with_capacity(2);
        for t in &self.triangles {
            if t.contains(&a) && t.contains(&b) {
                let third = t.iter().copied().find(|&f| f != a && f != b).unwrap();
                flanks.push(third);
            }
        }
        match flanks.as_slice() {
            [x, y] => Some((*x, *y)),
            _ => None,
        }
    }

    /// Index of a triangle in the canonical triangle ordering.
    pub fn triangle_position(&self, mut t: [usize; 3]) -> Option<usize> {
        t.sort_unstable();
        self.triangles.binary_search(&t).ok()
    }
}

/// A `k`-circuit of the dual complex crossing `k` edges of the polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    /// Faces visited, in cyclic order, stored in canonical rotation.
    pub faces: Vec<usize>,
    /// The crossed edges, one per consecutive face pair.
    pub edges: Vec<(usize, usize)>,
}

impl Circuit {
    fn canonical(mut faces: Vec<usize>) -> Self {
        // Lexicographically minimal rotation of the smaller orientation.
        let k = faces.len();
        let mut best: Option<Vec<usize>> = None;
        for _ in 0..2 {
            for r in 0..k {
                let cand: Vec<usize> = (0..k).map(|i| faces[(r + i) % k]).collect();
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
            faces.reverse();
        }
        let faces = best.unwrap();
        let edges = (0..k).map(|i| edge_key(faces[i], faces[(i + 1) % k])).collect();
        Circuit { faces, edges }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// All prismatic `k`-circuits of the dual complex (`k` is 3 or 4),
/// deduplicated up to rotation and reflection.
///
/// A circuit is prismatic when the endpoints of the crossed edges are all
/// distinct, which for these lengths is exactly the absence of a dual
/// triangle on any pair of consecutive circuit faces beyond the circuit
/// itself: a 3-cycle must not bound a triangle, and a 4-cycle must have no
/// triangle on any of its four corners.
pub fn find_prismatic_circuits(c: &AbstractPolyhedron, k: usize) -> Vec<Circuit> {
    assert!(k == 3 || k == 4, "only prismatic 3- and 4-circuits are defined");
    let n = c.face_count();
    let mut out = Vec::new();
    if k == 3 {
        for a in 0..n {
            for (ia, &b) in c.neighbors(a).iter().enumerate() {
                if b < a {
                    continue;
                }
                for &d in c.neighbors(a).iter().skip(ia + 1) {
                    if d < a || d == b {
                        continue;
                    }
                    if c.is_edge(b, d) && !c.has_triangle([a, b, d]) {
                        out.push(Circuit::canonical(vec![a, b, d]));
                    }
                }
            }
        }
    } else {
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..n {
            for &b in c.neighbors(a) {
                if b <= a {
                    continue;
                }
                for &d in c.neighbors(b) {
                    if d == a || d < a {
                        continue;
                    }
                    for &e in c.neighbors(d) {
                        if e <= a || e == b || e == d {
                            continue;
                        }
                        if !c.is_edge(e, a) {
                            continue;
                        }
                        // Cycle a-b-d-e; prismatic iff no corner triangle.
                        if c.has_triangle([a, b, d])
                            || c.has_triangle([b, d, e])
                            || c.has_triangle([d, e, a])
                            || c.has_triangle([e, a, b])
                        {
                            continue;
                        }
                        let circ = Circuit::canonical(vec![a, b, d, e]);
                        if seen.insert(circ.faces.clone()) {
                            out.push(circ);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.faces.cmp(&y.faces));
    out.dedup();
    out
}

/// A prismatic 3-circuit together with the single triangular face it
/// surrounds, when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationSite {
    pub triangle_face: usize,
    pub circuit: Circuit,
}

/// Combinatorial trichotomy driving the construction pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombinatorialClass {
    /// No prismatic 3-circuits.
    Simple,
    /// Every prismatic 3-circuit surrounds a single triangular face.
    Truncated { sites: Vec<TruncationSite> },
    /// Some prismatic 3-circuit must be cut along.
    Compound { cutting: Vec<Circuit>, sites: Vec<TruncationSite> },
}

/// Classifies a complex as simple, truncated, or compound.
pub fn classify(c: &AbstractPolyhedron) -> CombinatorialClass {
    let circuits = find_prismatic_circuits(c, 3);
    if circuits.is_empty() {
        return CombinatorialClass::Simple;
    }
    let mut sites = Vec::new();
    let mut cutting = Vec::new();
    for circ in circuits {
        let (a, b, d) = (circ.faces[0], circ.faces[1], circ.faces[2]);
        // A face whose whole neighborhood is {a, b, d} sits alone on one
        // side of the circuit.
        let mut circuit_faces = [a, b, d];
        circuit_faces.sort_unstable();
        let mut found = None;
        for t in 0..c.face_count() {
            if c.degree(t) == 3 {
                let mut nb = [c.neighbors(t)[0], c.neighbors(t)[1], c.neighbors(t)[2]];
                nb.sort_unstable();
                if nb == circuit_faces {
                    found = Some(t);
                    break;
                }
            }
        }
        match found {
            Some(t) => sites.push(TruncationSite { triangle_face: t, circuit: circ }),
            None => cutting.push(circ),
        }
    }
    if cutting.is_empty() {
        CombinatorialClass::Truncated { sites }
    } else {
        CombinatorialClass::Compound { cutting, sites }
    }
}

/// A Whitehead move specified by the dual edge it flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhiteheadMove {
    pub edge: (usize, usize),
}

impl WhiteheadMove {
    pub fn new(a: usize, b: usize) -> Self {
        Self { edge: edge_key(a, b) }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("dual edge {0:?} does not exist")]
    NoSuchEdge((usize, usize)),
    #[error("move on {edge:?} would create a doubled edge {created:?}")]
    DoubledEdge { edge: (usize, usize), created: (usize, usize) },
    #[error("move on {edge:?} produces an invalid complex: {source}")]
    InvalidResult {
        edge: (usize, usize),
        #[source]
        source: ValidationError,
    },
}

/// Applies the Whitehead move on dual edge `{a, b}`: the edge is replaced by
/// the opposite diagonal `{x, y}` of the quadrilateral formed by its two
/// triangles. Returns the new complex and the created edge.
pub fn whitehead_move(
    c: &AbstractPolyhedron,
    m: WhiteheadMove,
) -> Result<(AbstractPolyhedron, (usize, usize)), MoveError> {
    let (a, b) = m.edge;
    if !c.is_edge(a, b) {
        return Err(MoveError::NoSuchEdge((a, b)));
    }
    let (x, y) = c.edge_flanks(a, b).ok_or(MoveError::NoSuchEdge((a, b)))?;
    let created = edge_key(x, y);
    if c.is_edge(x, y) {
        return Err(MoveError::DoubledEdge { edge: (a, b), created });
    }
    let mut triples: Vec<[usize; 3]> = Vec::with_capacity(c.triangles().len());
    for t in c.triangles() {
        if t.contains(&a) && t.contains(&b) {
            continue;
        }
        triples.push(*t);
    }
    triples.push([a, x, y]);
    triples.push([b, x, y]);
    let complex = AbstractPolyhedron::from_triples(c.face_count(), triples)
        .map_err(|source| MoveError::InvalidResult { edge: (a, b), source })?;
    Ok((complex, created))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangular_prism() -> AbstractPolyhedron {
        catalog::base_prism(5).unwrap()
    }

    #[test]
    fn validate_dodecahedron() {
        let d = dodecahedron();
        assert_eq!(d.face_count(), 12);
        assert_eq!(d.vertex_count(), 20);
        assert_eq!(d.edge_count(), 30);
    }

    #[test]
    fn validate_cube() {
        let c = cube();
        assert_eq!(c.face_count(), 6);
        assert_eq!(c.edge_count(), 12);
        assert_eq!(c.vertex_count(), 8);
    }

    #[test]
    fn edge_on_three_faces_is_reported() {
        // Three triangles sharing the pair {0, 1}.
        let violations = validate(5, &[[0, 1, 2], [0, 1, 3], [0, 1, 4]]);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::EdgeOnWrongFaceCount { edge: (0, 1), count: 3 })));
    }

    #[test]
    fn prism_has_one_prismatic_3_circuit() {
        let p = triangular_prism();
        let circuits = find_prismatic_circuits(&p, 3);
        assert_eq!(circuits.len(), 1);
        assert_eq!(circuits[0].faces, vec![0, 1, 2]);
    }

    #[test]
    fn cube_circuits() {
        let c = cube();
        assert_eq!(find_prismatic_circuits(&c, 3).len(), 0);
        assert_eq!(find_prismatic_circuits(&c, 4).len(), 3);
    }

    #[test]
    fn classify_dodecahedron_simple() {
        assert_eq!(classify(&dodecahedron()), CombinatorialClass::Simple);
    }

    #[test]
    fn whitehead_move_involution() {
        let d = dodecahedron();
        let e = d.edges()[4];
        let (d2, created) = whitehead_move(&d, WhiteheadMove { edge: e }).unwrap();
        assert_eq!(d2.edge_count(), d.edge_count());
        let (d3, back) = whitehead_move(&d2, WhiteheadMove { edge: created }).unwrap();
        assert_eq!(back, e);
        assert!(are_isomorphic(&d, &d3));
        assert_eq!(d.triangles(), d3.triangles());
    }

    #[test]
    fn whitehead_rejects_doubled_edge() {
        // On the triangular prism, flipping a cap-lateral edge would create
        // a doubled lateral-lateral edge.
        let p = triangular_prism();
        // Edge {0, 3}: flanks are laterals 1 and 2, already adjacent.
        let err = whitehead_move(&p, WhiteheadMove::new(0, 3)).unwrap_err();
        assert!(matches!(err, MoveError::DoubledEdge { .. }));
    }
}
