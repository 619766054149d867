//! Stock complexes: prisms, split prisms, and the standard examples used
//! throughout the tests and the guide.

use super::AbstractPolyhedron;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BadN {
    #[error("a prism complex needs at least 5 faces, got {0}")]
    PrismTooSmall(usize),
    #[error("a split prism complex needs at least 8 faces, got {0}; for N <= 7 it coincides with the prism")]
    SplitPrismTooSmall(usize),
    #[error("a Löbell complex needs n >= 5, got {0}")]
    LobellTooSmall(usize),
}

/// Which hand-constructible complex a reduction terminates at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Prism,
    SplitPrism,
}

/// The `N`-faced prism: laterals `0..N-2` in cyclic order, then the two
/// caps `N-2` (top) and `N-1` (bottom).
pub fn base_prism(n: usize) -> Result<AbstractPolyhedron, BadN> {
    if n < 5 {
        return Err(BadN::PrismTooSmall(n));
    }
    let k = n - 2;
    let top = n - 2;
    let bottom = n - 1;
    let mut triples = Vec::with_capacity(2 * k);
    for i in 0..k {
        let j = (i + 1) % k;
        triples.push([i, j, top]);
        triples.push([i, j, bottom]);
    }
    Ok(AbstractPolyhedron::from_triples(n, triples).expect("prism complex is valid"))
}

/// The `N`-faced split prism: merged laterals `0..N-4` in a path, the split
/// pair `N-4`, `N-3`, and the two caps `N-2`, `N-1`.
///
/// Geometrically this is two `(N-1)`-face prisms glued along a cap, with all
/// cap edges flattened except one; that one survives as the edge between the
/// split pair.
pub fn base_split_prism(n: usize) -> Result<AbstractPolyhedron, BadN> {
    if n < 8 {
        return Err(BadN::SplitPrismTooSmall(n));
    }
    let q = n - 4;
    let s1 = n - 4;
    let s2 = n - 3;
    let c1 = n - 2;
    let c2 = n - 1;
    let mut triples = Vec::new();
    for i in 0..q - 1 {
        triples.push([i, i + 1, c1]);
        triples.push([i, i + 1, c2]);
    }
    triples.push([c1, s1, 0]);
    triples.push([c1, q - 1, s1]);
    triples.push([c2, s2, 0]);
    triples.push([c2, q - 1, s2]);
    triples.push([s1, s2, 0]);
    triples.push([s1, s2, q - 1]);
    Ok(AbstractPolyhedron::from_triples(n, triples).expect("split prism complex is valid"))
}

pub fn build_base_complex(kind: BaseKind, n: usize) -> Result<AbstractPolyhedron, BadN> {
    match kind {
        BaseKind::Prism => base_prism(n),
        BaseKind::SplitPrism => base_split_prism(n),
    }
}

/// The combinatorial cube (the 6-face prism).
pub fn cube() -> AbstractPolyhedron {
    base_prism(6).expect("cube is valid")
}

/// The dodecahedron: twelve pentagons; the dual is the icosahedron.
pub fn dodecahedron() -> AbstractPolyhedron {
    let triples = vec![
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 7],
        [2, 3, 8],
        [3, 4, 9],
        [4, 5, 10],
        [5, 1, 6],
        [1, 6, 7],
        [2, 7, 8],
        [3, 8, 9],
        [4, 9, 10],
        [5, 10, 6],
        [6, 7, 11],
        [7, 8, 11],
        [8, 9, 11],
        [9, 10, 11],
        [10, 6, 11],
    ];
    AbstractPolyhedron::from_triples(12, triples).expect("dodecahedron is valid")
}

/// The Löbell complex `R_n`: two `n`-gonal caps and `2n` pentagons, the
/// natural generalization of the dodecahedron (`n = 5` recovers it).
///
/// Faces: top cap `0`, upper ring `1..=n`, lower ring `n+1..=2n`,
/// bottom cap `2n+1`.
pub fn lobell(n: usize) -> Result<AbstractPolyhedron, BadN> {
    if n < 5 {
        return Err(BadN::LobellTooSmall(n));
    }
    let top = 0;
    let upper = |i: usize| 1 + (i % n);
    let lower = |i: usize| 1 + n + (i % n);
    let bottom = 2 * n + 1;
    let mut triples = Vec::with_capacity(4 * n);
    for i in 0..n {
        triples.push([top, upper(i), upper(i + 1)]);
        // Upper pentagon i meets lower pentagons i and i+1.
        triples.push([upper(i), lower(i), lower(i + 1)]);
        triples.push([upper(i), upper(i + 1), lower(i + 1)]);
        triples.push([bottom, lower(i), lower(i + 1)]);
    }
    Ok(AbstractPolyhedron::from_triples(2 * n + 2, triples).expect("Löbell complex is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{are_isomorphic, classify, find_prismatic_circuits, CombinatorialClass};

    #[test]
    fn prism_counts() {
        let p = base_prism(5).unwrap();
        assert_eq!(p.edge_count(), 9);
        let p = base_prism(10).unwrap();
        assert_eq!(p.edge_count(), 24);
        assert_eq!(p.vertex_count(), 16);
    }

    #[test]
    fn split_prism_counts_and_shape() {
        let d = base_split_prism(12).unwrap();
        assert_eq!(d.edge_count(), 30);
        assert_eq!(d.vertex_count(), 20);
        // Two faces of degree N-3 (the caps).
        let caps: Vec<usize> = (0..12).filter(|&f| d.degree(f) == 9).collect();
        assert_eq!(caps, vec![10, 11]);
        assert_eq!(classify(&d), CombinatorialClass::Simple);
    }

    #[test]
    fn split_prism_rejected_below_8() {
        assert!(base_split_prism(7).is_err());
    }

    #[test]
    fn lobell_5_is_dodecahedron() {
        let r5 = lobell(5).unwrap();
        assert!(are_isomorphic(&r5, &dodecahedron()));
    }

    #[test]
    fn lobell_has_no_short_prismatic_circuits() {
        for n in 5..=8 {
            let r = lobell(n).unwrap();
            assert_eq!(r.face_count(), 2 * n + 2);
            assert!(find_prismatic_circuits(&r, 3).is_empty(), "n = {n}");
            assert!(find_prismatic_circuits(&r, 4).is_empty(), "n = {n}");
        }
    }
}
