//! The quadratic system whose solutions are the face normals of a
//! realization: one unit-norm equation per face, one inner-product equation
//! per edge, and six affine gauge equations that kill the isometry freedom.

use crate::angles::AngleAssignment;
use crate::combinatorics::AbstractPolyhedron;
use nalgebra::{DMatrix, DVector};

/// The six-equation normalization: three coordinates of one face normal are
/// pinned to zero, two of an adjacent one, and one coordinate of a third
/// face is pinned to a captured value.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSpec {
    pub anchor: usize,
    pub second: usize,
    pub third: usize,
    /// Which coordinate of the third face is pinned (0 or 2); chosen at
    /// capture time for sensitivity against the leftover boost.
    pub third_coord: usize,
    pub third_value: f64,
}

/// How the 6-dimensional isometry freedom is handled.
#[derive(Debug, Clone, PartialEq)]
pub enum Gauge {
    /// Square `4N x 4N` system with six affine rows.
    Anchored(GaugeSpec),
    /// Ungauged `(4N-6) x 4N` system solved by least-squares Newton steps.
    LeastSquares,
}

/// `F_C`: the map whose root at target angles `a` is the normal vector
/// configuration realizing `(C, a)`.
#[derive(Debug, Clone)]
pub struct QuadraticSystem {
    complex: AbstractPolyhedron,
    gauge: Gauge,
}

pub fn build_system(complex: &AbstractPolyhedron, gauge: Gauge) -> QuadraticSystem {
    QuadraticSystem { complex: complex.clone(), gauge }
}

impl QuadraticSystem {
    pub fn complex(&self) -> &AbstractPolyhedron {
        &self.complex
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn unknown_count(&self) -> usize {
        4 * self.complex.face_count()
    }

    pub fn equation_count(&self) -> usize {
        let base = self.complex.face_count() + self.complex.edge_count();
        match self.gauge {
            Gauge::Anchored(_) => base + 6,
            Gauge::LeastSquares => base,
        }
    }

    fn gauge_rows(&self) -> Vec<(usize, f64)> {
        match &self.gauge {
            Gauge::Anchored(g) => vec![
                (4 * g.anchor, 0.0),
                (4 * g.anchor + 1, 0.0),
                (4 * g.anchor + 2, 0.0),
                (4 * g.second, 0.0),
                (4 * g.second + 2, 0.0),
                (4 * g.third + g.third_coord, g.third_value),
            ],
            Gauge::LeastSquares => Vec::new(),
        }
    }

    /// Minkowski inner product of the unknown blocks `i` and `j` of `x`.
    fn block_inner(x: &DVector<f64>, i: usize, j: usize) -> f64 {
        let (a, b) = (4 * i, 4 * j);
        -x[a] * x[b] + x[a + 1] * x[b + 1] + x[a + 2] * x[b + 2] + x[a + 3] * x[b + 3]
    }

    /// Residual vector at `x` for the given target angles: unit rows
    /// `<v_i,v_i> - 1`, edge rows `<v_i,v_j> + cos(a_ij)`, gauge rows
    /// `x_k - c`.
    pub fn evaluate(&self, x: &DVector<f64>, target: &AngleAssignment) -> DVector<f64> {
        let n = self.complex.face_count();
        let mut r = DVector::zeros(self.equation_count());
        for i in 0..n {
            r[i] = Self::block_inner(x, i, i) - 1.0;
        }
        for (k, &(i, j)) in self.complex.edges().iter().enumerate() {
            let a = target.get(i, j).expect("target covers every edge");
            r[n + k] = Self::block_inner(x, i, j) + a.cos();
        }
        let e = self.complex.edge_count();
        for (k, (col, c)) in self.gauge_rows().into_iter().enumerate() {
            r[n + e + k] = x[col] - c;
        }
        r
    }

    /// Analytic Jacobian. Row structure mirrors [`Self::evaluate`]; since the
    /// equations are quadratic, entries are linear in `x` and the gauge rows
    /// are constant.
    pub fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.complex.face_count();
        let e = self.complex.edge_count();
        let mut m = DMatrix::zeros(self.equation_count(), self.unknown_count());
        let metric = [-1.0, 1.0, 1.0, 1.0];
        for i in 0..n {
            for c in 0..4 {
                m[(i, 4 * i + c)] = 2.0 * metric[c] * x[4 * i + c];
            }
        }
        for (k, &(i, j)) in self.complex.edges().iter().enumerate() {
            for c in 0..4 {
                m[(n + k, 4 * i + c)] = metric[c] * x[4 * j + c];
                m[(n + k, 4 * j + c)] = metric[c] * x[4 * i + c];
            }
        }
        for (k, (col, _)) in self.gauge_rows().into_iter().enumerate() {
            m[(n + e + k, col)] = 1.0;
        }
        m
    }

    /// Global Lipschitz bound for the Jacobian in the spectral norm,
    /// derived from the constant second derivatives: the difference
    /// `DF(u) - DF(w)` is `DF(u - w)` on the quadratic rows, and its
    /// Frobenius norm is bounded row-block-wise.
    pub fn lipschitz_constant(&self) -> f64 {
        let max_deg = (0..self.complex.face_count())
            .map(|f| self.complex.degree(f))
            .max()
            .unwrap_or(0) as f64;
        (4.0 + max_deg).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{cube, dodecahedron};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn anchored(c: &AbstractPolyhedron) -> Gauge {
        let t = c.triangles()[0];
        Gauge::Anchored(GaugeSpec {
            anchor: t[0],
            second: t[1],
            third: t[2],
            third_coord: 0,
            third_value: 0.3,
        })
    }

    #[test]
    fn equation_counts() {
        let c = cube();
        let sys = build_system(&c, anchored(&c));
        assert_eq!(sys.equation_count(), 24);
        assert_eq!(sys.unknown_count(), 24);
        let d = dodecahedron();
        let sys = build_system(&d, anchored(&d));
        assert_eq!(sys.equation_count(), 48);
        let sys = build_system(&d, Gauge::LeastSquares);
        assert_eq!(sys.equation_count(), 42);
    }

    #[test]
    fn zero_vector_unit_residuals() {
        let c = cube();
        let sys = build_system(&c, anchored(&c));
        let x = DVector::zeros(24);
        let a = AngleAssignment::uniform(&c, PI / 2.0);
        let r = sys.evaluate(&x, &a);
        for i in 0..6 {
            assert_eq!(r[i], -1.0);
        }
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let c = cube();
        let sys = build_system(&c, anchored(&c));
        let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let h = 1e-7;
        for _ in 0..100 {
            let x = DVector::from_fn(24, |_, _| rng.gen_range(-1.5..1.5));
            let j = sys.jacobian(&x);
            let mut worst: f64 = 0.0;
            for col in 0..24 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[col] += h;
                xm[col] -= h;
                let d = (sys.evaluate(&xp, &a) - sys.evaluate(&xm, &a)) / (2.0 * h);
                for row in 0..24 {
                    let denom = j[(row, col)].abs().max(1.0);
                    worst = worst.max((d[row] - j[(row, col)]).abs() / denom);
                }
            }
            assert!(worst <= 1e-6, "finite-difference mismatch {worst}");
        }
    }

    #[test]
    fn gauge_rows_constant_in_x() {
        let c = cube();
        let sys = build_system(&c, anchored(&c));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let x1 = DVector::from_fn(24, |_, _| rng.gen_range(-1.0..1.0));
        let x2 = DVector::from_fn(24, |_, _| rng.gen_range(-1.0..1.0));
        let j1 = sys.jacobian(&x1);
        let j2 = sys.jacobian(&x2);
        for row in 18..24 {
            for col in 0..24 {
                assert_eq!(j1[(row, col)], j2[(row, col)]);
            }
        }
    }

    #[test]
    fn lipschitz_bound_dominates_samples_within_factor_four() {
        let c = dodecahedron();
        let sys = build_system(&c, anchored(&c));
        let m = sys.lipschitz_constant();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let dim = sys.unknown_count();
        let mut sup: f64 = 0.0;
        for _ in 0..60 {
            let u = DVector::from_fn(dim, |_, _| rng.gen_range(-2.0..2.0));
            let w = DVector::from_fn(dim, |_, _| rng.gen_range(-2.0..2.0));
            let diff = sys.jacobian(&u) - sys.jacobian(&w);
            let dn = (&u - &w).norm();
            if dn > 1e-9 {
                let op = diff.svd(false, false).singular_values[0];
                sup = sup.max(op / dn);
            }
        }
        assert!(sup <= m + 1e-9, "sampled sup {sup} exceeds bound {m}");
        assert!(m <= 4.0 * sup, "bound {m} is more than 4x the sampled sup {sup}");
    }
}
