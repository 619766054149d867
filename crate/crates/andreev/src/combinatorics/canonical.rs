//! Canonical labeling of complexes.
//!
//! Two complexes are combinatorially isomorphic when some relabeling of the
//! faces carries one dual triangulation onto the other, allowing reflection.
//! The canonical code is the lexicographically minimal breadth-first code
//! over all starting flags (directed dual edge plus a side of the sphere),
//! traversing each face's neighbors in rotation order.

use super::AbstractPolyhedron;

/// Coherently oriented triangles: adjacent triangles induce opposite
/// directions on their shared edge.
fn orient_triangles(c: &AbstractPolyhedron) -> Vec<[usize; 3]> {
    let tris = c.triangles();
    let mut oriented: Vec<Option<[usize; 3]>> = vec![None; tris.len()];
    // Edge (as sorted pair) -> triangle positions containing it.
    let mut edge_tris: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for (i, t) in tris.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            edge_tris.entry(super::edge_key(a, b)).or_default().push(i);
        }
    }
    oriented[0] = Some(tris[0]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let t = oriented[i].unwrap();
        for k in 0..3 {
            let p = t[k];
            let q = t[(k + 1) % 3];
            for &j in &edge_tris[&super::edge_key(p, q)] {
                if j == i || oriented[j].is_some() {
                    continue;
                }
                // Neighbor must carry q -> p.
                let s = tris[j];
                let third = s.iter().copied().find(|&f| f != p && f != q).unwrap();
                oriented[j] = Some([q, p, third]);
                queue.push_back(j);
            }
        }
    }
    oriented.into_iter().map(|t| t.expect("sphere is connected")).collect()
}

/// Successor maps around each face induced by a coherent orientation:
/// `succ[f][x] = y` whenever some oriented triangle reads `(f, x, y)`.
fn oriented_successors(c: &AbstractPolyhedron) -> Vec<std::collections::BTreeMap<usize, usize>> {
    let oriented = orient_triangles(c);
    let mut succ: Vec<std::collections::BTreeMap<usize, usize>> =
        vec![Default::default(); c.face_count()];
    for t in &oriented {
        for k in 0..3 {
            let f = t[k];
            let x = t[(k + 1) % 3];
            let y = t[(k + 2) % 3];
            succ[f].insert(x, y);
        }
    }
    succ
}

fn ring_from(
    succ: &std::collections::BTreeMap<usize, usize>,
    anchor: usize,
    reverse: bool,
) -> Vec<usize> {
    let mut ring = vec![anchor];
    let mut cur = succ[&anchor];
    while cur != anchor {
        ring.push(cur);
        cur = succ[&cur];
    }
    if reverse {
        ring[1..].reverse();
    }
    ring
}

/// Breadth-first code from the flag `(root, first_neighbor, side)`.
/// Returns the code and the face order realizing it.
fn bfs_code(
    c: &AbstractPolyhedron,
    succ: &[std::collections::BTreeMap<usize, usize>],
    root: usize,
    first: usize,
    reverse: bool,
) -> (Vec<u32>, Vec<usize>) {
    let n = c.face_count();
    let mut label: Vec<Option<u32>> = vec![None; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut anchor: Vec<usize> = vec![usize::MAX; n];
    label[root] = Some(0);
    order.push(root);
    anchor[root] = first;
    let mut code: Vec<u32> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let f = order[i];
        let ring = ring_from(&succ[f], anchor[f], reverse);
        code.push(ring.len() as u32);
        for w in ring {
            let l = match label[w] {
                Some(l) => l,
                None => {
                    let l = order.len() as u32;
                    label[w] = Some(l);
                    anchor[w] = f;
                    order.push(w);
                    l
                }
            };
            code.push(l);
        }
        i += 1;
    }
    (code, order)
}

/// The canonical code of a complex; equal codes mean isomorphic complexes
/// (reflections included).
pub fn canonical_code(c: &AbstractPolyhedron) -> Vec<u32> {
    best_code(c).0
}

fn best_code(c: &AbstractPolyhedron) -> (Vec<u32>, Vec<usize>) {
    let succ = oriented_successors(c);
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    for root in 0..c.face_count() {
        for &first in c.neighbors(root) {
            for reverse in [false, true] {
                let cand = bfs_code(c, &succ, root, first, reverse);
                if best.as_ref().map_or(true, |b| cand.0 < b.0) {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("non-empty complex")
}

pub fn are_isomorphic(a: &AbstractPolyhedron, b: &AbstractPolyhedron) -> bool {
    a.face_count() == b.face_count()
        && a.vertex_count() == b.vertex_count()
        && canonical_code(a) == canonical_code(b)
}

/// A face relabeling `m` with `m[face of a] = face of b` carrying the dual
/// triangulation of `a` onto that of `b`, when the complexes are isomorphic.
pub fn find_isomorphism(a: &AbstractPolyhedron, b: &AbstractPolyhedron) -> Option<Vec<usize>> {
    if a.face_count() != b.face_count() || a.vertex_count() != b.vertex_count() {
        return None;
    }
    let (code_a, order_a) = best_code(a);
    let (code_b, order_b) = best_code(b);
    if code_a != code_b {
        return None;
    }
    let mut map = vec![usize::MAX; a.face_count()];
    for (i, &fa) in order_a.iter().enumerate() {
        map[fa] = order_b[i];
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::super::catalog::{base_prism, base_split_prism, cube, dodecahedron};
    use super::*;

    #[test]
    fn cube_is_the_6_prism() {
        assert!(are_isomorphic(&cube(), &base_prism(6).unwrap()));
    }

    #[test]
    fn prism_not_split_prism() {
        assert!(!are_isomorphic(&base_prism(12).unwrap(), &base_split_prism(12).unwrap()));
    }

    #[test]
    fn relabeled_dodecahedron_isomorphic() {
        let d = dodecahedron();
        // Relabel faces by an arbitrary permutation.
        let n = d.face_count();
        let perm: Vec<usize> = (0..n).map(|i| (5 * i + 3) % n).collect();
        let triples: Vec<[usize; 3]> =
            d.triangles().iter().map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]]).collect();
        let d2 = AbstractPolyhedron::from_triples(n, triples).unwrap();
        assert!(are_isomorphic(&d, &d2));
        let iso = find_isomorphism(&d, &d2).unwrap();
        for t in d.triangles() {
            assert!(d2.has_triangle([iso[t[0]], iso[t[1]], iso[t[2]]]));
        }
    }

    #[test]
    fn different_complexes_distinguished() {
        assert!(!are_isomorphic(&cube(), &dodecahedron()));
    }
}
