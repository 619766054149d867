//! Reduction of a simple complex to a prism or split prism by Whitehead
//! moves, keeping every intermediate complex simple.
//!
//! The algorithm fixes a dual vertex `v_inf` of maximal degree and grows its
//! link (the outer polygon) one vertex at a time. Three situations cover
//! every configuration:
//!
//! 1. an interior vertex that is not an endpoint touches the polygon in a
//!    component of two or more vertices;
//! 2. an endpoint touches the polygon in more than three vertices;
//! 3. every endpoint touches exactly three polygon vertices and every other
//!    interior vertex only isolated ones.
//!
//! Case 3 needs the chain construction: connections of the whole chain
//! hanging off an endpoint are transferred to its branch vertex, whose
//! surviving pair of polygon contacts then admits the growing move. A
//! vertex may only shed a polygon component while it keeps two polygon
//! contacts elsewhere; dropping that requirement is exactly what introduces
//! prismatic 3-circuits.

use super::catalog::{base_prism, base_split_prism, BaseKind};
use super::{
    find_prismatic_circuits, whitehead_move, AbstractPolyhedron, CombinatorialClass, MoveError,
    WhiteheadMove,
};
use rand::Rng;
use thiserror::Error;

/// One recorded move: the dual edge removed and the dual edge created.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceMove {
    pub removed: (usize, usize),
    pub created: (usize, usize),
}

/// A reduction from a complex down to a base complex.
///
/// `intermediates[0]` is the input complex, `intermediates[i+1]` the result
/// of `moves[i]`, and the last entry realizes `base`.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub moves: Vec<TraceMove>,
    pub intermediates: Vec<AbstractPolyhedron>,
    pub base: BaseKind,
}

impl ReductionTrace {
    pub fn final_complex(&self) -> &AbstractPolyhedron {
        self.intermediates.last().expect("non-empty trace")
    }
}

#[derive(Error, Debug)]
pub enum ReduceError {
    #[error("complex is not simple")]
    NotSimple,
    #[error("reduction needs more than 4 faces, got {0}")]
    TooSmall(usize),
    #[error("internal invariant violated during reduction: {0}")]
    InternalInvariantViolation(String),
}

struct Reducer {
    current: AbstractPolyhedron,
    v_inf: usize,
    moves: Vec<TraceMove>,
    intermediates: Vec<AbstractPolyhedron>,
    budget: usize,
}

impl Reducer {
    fn apply(&mut self, a: usize, b: usize) -> Result<(), ReduceError> {
        if self.moves.len() >= self.budget {
            return Err(ReduceError::InternalInvariantViolation(format!(
                "move budget of {} exceeded",
                self.budget
            )));
        }
        let (next, created) = whitehead_move(&self.current, WhiteheadMove::new(a, b))
            .map_err(|e: MoveError| ReduceError::InternalInvariantViolation(e.to_string()))?;
        if !find_prismatic_circuits(&next, 3).is_empty() {
            return Err(ReduceError::InternalInvariantViolation(format!(
                "move on ({a}, {b}) introduced a prismatic 3-circuit"
            )));
        }
        self.moves.push(TraceMove { removed: super::edge_key(a, b), created });
        self.intermediates.push(next.clone());
        self.current = next;
        Ok(())
    }

    fn polygon(&self) -> Vec<usize> {
        self.current.link_cycle(self.v_inf).to_vec()
    }

    fn interior_vertices(&self, polygon: &[usize]) -> Vec<usize> {
        let mut on_p = vec![false; self.current.face_count()];
        for &p in polygon {
            on_p[p] = true;
        }
        (0..self.current.face_count())
            .filter(|&f| f != self.v_inf && !on_p[f])
            .collect()
    }

    /// Maximal runs of consecutive polygon vertices adjacent to `a`,
    /// each listed in polygon order.
    fn components_of(&self, a: usize, polygon: &[usize]) -> Vec<Vec<usize>> {
        let k = polygon.len();
        let mut hit = vec![false; k];
        for (i, &p) in polygon.iter().enumerate() {
            if self.current.is_edge(a, p) {
                hit[i] = true;
            }
        }
        let count = hit.iter().filter(|&&h| h).count();
        if count == 0 {
            return Vec::new();
        }
        if count == k {
            return vec![polygon.to_vec()];
        }
        // Start scanning right after a gap.
        let start = (0..k).find(|&i| !hit[i]).unwrap();
        let mut runs = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        for off in 1..=k {
            let i = (start + off) % k;
            if hit[i] {
                cur.push(polygon[i]);
            } else if !cur.is_empty() {
                runs.push(std::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            runs.push(cur);
        }
        runs
    }

    fn interior_neighbors(&self, a: usize, polygon: &[usize]) -> Vec<usize> {
        let mut on_p = vec![false; self.current.face_count()];
        for &p in polygon {
            on_p[p] = true;
        }
        self.current
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&w| w != self.v_inf && !on_p[w])
            .collect()
    }

    /// Strips `a`'s connections to `run[keep..]`, from the tail inward.
    fn strip_run(&mut self, a: usize, run: &[usize], keep: usize) -> Result<(), ReduceError> {
        for j in (keep..run.len()).rev() {
            self.apply(a, run[j])?;
        }
        Ok(())
    }

    /// Grows the polygon by one through the interior vertex `a`, whose
    /// component `{q, r}` of two consecutive polygon vertices admits the
    /// flip of the polygon edge.
    fn grow(&mut self, q: usize, r: usize) -> Result<(), ReduceError> {
        self.apply(q, r)
    }

    fn case1(&mut self, a: usize, polygon: &[usize]) -> Result<(), ReduceError> {
        let runs = self.components_of(a, polygon);
        let big = runs
            .iter()
            .position(|r| r.len() >= 2)
            .ok_or_else(|| ReduceError::InternalInvariantViolation("case 1 without a long run".into()))?;
        let kept: Vec<usize> = runs[big][..2].to_vec();
        self.strip_run(a, &runs[big].clone(), 2)?;
        for (i, run) in runs.iter().enumerate() {
            if i != big {
                self.strip_run(a, run, 0)?;
            }
        }
        self.grow(kept[0], kept[1])
    }

    fn step(&mut self, n: usize) -> Result<(), ReduceError> {
        let polygon = self.polygon();
        let interiors = self.interior_vertices(&polygon);

        // Direct growing move: a vertex touching the polygon in exactly one
        // component of exactly two vertices.
        for &a in &interiors {
            let runs = self.components_of(a, &polygon);
            if runs.len() == 1 && runs[0].len() == 2 {
                return self.grow(runs[0][0], runs[0][1]);
            }
        }

        // Case 1.
        for &a in &interiors {
            if self.interior_neighbors(a, &polygon).len() >= 2 {
                let runs = self.components_of(a, &polygon);
                if runs.iter().any(|r| r.len() >= 2) {
                    return self.case1(a, &polygon);
                }
            }
        }

        // Case 2: an endpoint with more than three polygon contacts; one
        // transfer move hands a contact to its interior neighbor, which the
        // next Case 1 application consumes.
        for &a in &interiors {
            let int_nb = self.interior_neighbors(a, &polygon);
            if int_nb.len() != 1 {
                continue;
            }
            let runs = self.components_of(a, &polygon);
            if runs.len() == 1 && runs[0].len() > 3 {
                let run = runs[0].clone();
                self.apply(a, *run.last().unwrap())?;
                let e = int_nb[0];
                let polygon = self.polygon();
                return self.case1(e, &polygon);
            }
        }

        // Case 3: endpoints all have exactly three contacts, other interior
        // vertices only isolated ones.
        let i1 = interiors
            .iter()
            .copied()
            .find(|&a| {
                self.interior_neighbors(a, &polygon).len() == 1
                    && matches!(self.components_of(a, &polygon).as_slice(), [r] if r.len() == 3)
            })
            .ok_or_else(|| {
                ReduceError::InternalInvariantViolation(format!(
                    "no applicable case with polygon length {} of target {}",
                    polygon.len(),
                    n - 3
                ))
            })?;
        let run = self.components_of(i1, &polygon).remove(0);
        let (p1, p3) = (run[0], run[2]);

        // Walk the chain from the endpoint to the first branch vertex.
        let mut chain = vec![i1];
        let mut prev = i1;
        let mut cur = self.interior_neighbors(i1, &polygon)[0];
        loop {
            chain.push(cur);
            let nb = self.interior_neighbors(cur, &polygon);
            if nb.len() >= 3 {
                break;
            }
            if nb.len() != 2 {
                return Err(ReduceError::InternalInvariantViolation(
                    "interior chain hit a second endpoint; complex should have been a prism".into(),
                ));
            }
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        let i_m = *chain.last().unwrap();

        // Shed every polygon component of the branch vertex except the two
        // anchor contacts.
        let runs = self.components_of(i_m, &polygon);
        for run in &runs {
            if !run.contains(&p1) && !run.contains(&p3) {
                self.strip_run(i_m, run, 0)?;
            }
        }
        self.apply(i_m, p3)?;
        for &ik in chain[..chain.len() - 1].iter().rev() {
            self.apply(ik, p1)?;
        }
        let p2 = run[1];
        self.grow(p1, p2)
    }

    /// Final rebalancing at polygon length `n - 3`: transfer polygon
    /// contacts between the two remaining interior vertices until one of
    /// them holds exactly three.
    fn finish(&mut self) -> Result<(), ReduceError> {
        loop {
            let polygon = self.polygon();
            let interiors = self.interior_vertices(&polygon);
            if interiors.len() != 2 {
                return Err(ReduceError::InternalInvariantViolation(format!(
                     "expected two interior vertices at the end, found {}",
                    interiors.len()
                )));
            }
            let (u, v) = (interiors[0], interiors[1]);
            if !self.current.is_edge(u, v) {
                return Err(ReduceError::InternalInvariantViolation(
                    "final interior vertices are not adjacent".into(),
                ));
            }
            let ru = self.components_of(u, &polygon);
            let rv = self.components_of(v, &polygon);
            let (au, av) = match (ru.as_slice(), rv.as_slice()) {
                ([a], [b]) => (a.clone(), b.clone()),
                _ => {
                    return Err(ReduceError::InternalInvariantViolation(
                        "final interior vertices touch the polygon in several components".into(),
                    ))
                }
            };
            if au.len() == 3 || av.len() == 3 {
                return Ok(());
            }
            // Strip from the larger arc while one is short of three,
            // otherwise shrink the smaller toward three.
            let (donor, arc) = if au.len().min(av.len()) < 3 {
                if au.len() < av.len() {
                    (v, av)
                } else {
                    (u, au)
                }
            } else if au.len() <= av.len() {
                (u, au)
            } else {
                (v, av)
            };
            self.apply(donor, *arc.last().unwrap())?;
        }
    }
}

/// Reduces a simple complex to a prism or split prism through simple
/// intermediates, recording every move.
pub fn reduce_to_base(c: &AbstractPolyhedron) -> Result<ReductionTrace, ReduceError> {
    let n = c.face_count();
    if n <= 4 {
        return Err(ReduceError::TooSmall(n));
    }
    if super::classify(c) != CombinatorialClass::Simple {
        return Err(ReduceError::NotSimple);
    }
    let prism = base_prism(n).expect("n > 4");
    if super::are_isomorphic(c, &prism) {
        return Ok(ReductionTrace {
            moves: Vec::new(),
            intermediates: vec![c.clone()],
            base: BaseKind::Prism,
        });
    }
    if n <= 7 {
        return Err(ReduceError::InternalInvariantViolation(format!(
            "simple non-prism complex with {n} faces"
        )));
    }
    let v_inf = (0..n).max_by_key(|&f| (c.degree(f), std::cmp::Reverse(f))).unwrap();
    let mut red = Reducer {
        current: c.clone(),
        v_inf,
        moves: Vec::new(),
        intermediates: vec![c.clone()],
        budget: 20 * n,
    };
    while red.current.degree(red.v_inf) < n - 3 {
        // A complex can become a prism part-way; prisms are terminal.
        if super::are_isomorphic(&red.current, &prism) {
            return Ok(ReductionTrace {
                moves: red.moves,
                intermediates: red.intermediates,
                base: BaseKind::Prism,
            });
        }
        let before = red.current.degree(red.v_inf);
        red.step(n)?;
        if red.current.degree(red.v_inf) != before + 1 {
            return Err(ReduceError::InternalInvariantViolation(
                "case application did not grow the outer polygon by one".into(),
            ));
        }
    }
    red.finish()?;
    let split = base_split_prism(n).expect("n >= 8");
    if !super::are_isomorphic(&red.current, &split) {
        return Err(ReduceError::InternalInvariantViolation(
            "reduction terminated at a complex that is not the split prism".into(),
        ));
    }
    Ok(ReductionTrace {
        moves: red.moves,
        intermediates: red.intermediates,
        base: BaseKind::SplitPrism,
    })
}

/// Generates a random simple complex with `n` faces by applying random
/// Whitehead moves to a base complex, rejecting any move that leaves the
/// simple class.
pub fn random_simple_complex<R: Rng>(rng: &mut R, n: usize) -> AbstractPolyhedron {
    let mut c = if n >= 8 && rng.gen_bool(0.5) {
        base_split_prism(n).unwrap()
    } else {
        base_prism(n).unwrap()
    };
    let flips = rng.gen_range(3..=15);
    let mut done = 0;
    let mut attempts = 0;
    while done < flips && attempts < 400 {
        attempts += 1;
        let e = c.edges()[rng.gen_range(0..c.edge_count())];
        if let Ok((next, _)) = whitehead_move(&c, WhiteheadMove { edge: e }) {
            if find_prismatic_circuits(&next, 3).is_empty() {
                c = next;
                done += 1;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::super::catalog::{base_prism, base_split_prism, BaseKind};
    use super::super::{are_isomorphic, classify, dodecahedron, CombinatorialClass};
    use super::*;
    use rand::SeedableRng;

    fn replay(trace: &ReductionTrace) {
        let mut cur = trace.intermediates[0].clone();
        for (i, m) in trace.moves.iter().enumerate() {
            let (next, created) =
                whitehead_move(&cur, WhiteheadMove { edge: m.removed }).unwrap();
            assert_eq!(created, m.created, "created edge mismatch at move {i}");
            assert_eq!(&next, &trace.intermediates[i + 1]);
            assert!(find_prismatic_circuits(&next, 3).is_empty(), "intermediate {i} not simple");
            cur = next;
        }
        let base = match trace.base {
            BaseKind::Prism => base_prism(cur.face_count()).unwrap(),
            BaseKind::SplitPrism => base_split_prism(cur.face_count()).unwrap(),
        };
        assert!(are_isomorphic(&cur, &base));
    }

    #[test]
    fn prisms_are_terminal() {
        let trace = reduce_to_base(&base_prism(8).unwrap()).unwrap();
        assert!(trace.moves.is_empty());
        assert_eq!(trace.base, BaseKind::Prism);
    }

    #[test]
    fn dodecahedron_reduces_to_split_prism() {
        let trace = reduce_to_base(&dodecahedron()).unwrap();
        assert_eq!(trace.base, BaseKind::SplitPrism);
        assert!(!trace.moves.is_empty());
        assert!(trace.moves.len() <= 20 * 12);
        replay(&trace);
    }

    #[test]
    fn split_prisms_reduce_trivially() {
        let trace = reduce_to_base(&base_split_prism(11).unwrap()).unwrap();
        assert_eq!(trace.base, BaseKind::SplitPrism);
        replay(&trace);
    }

    #[test]
    fn random_complexes_reduce() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..12 {
            let n = rng.gen_range(8..=14);
            let c = random_simple_complex(&mut rng, n);
            assert_eq!(classify(&c), CombinatorialClass::Simple);
            let trace = reduce_to_base(&c).unwrap();
            assert!(trace.moves.len() <= 20 * n);
            replay(&trace);
        }
    }
}
