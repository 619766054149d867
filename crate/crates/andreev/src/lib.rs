//! Construction of compact hyperbolic 3-dimensional polyhedra with prescribed
//! combinatorics and non-obtuse dihedral angles.
//!
//! Andreev's theorem characterizes, by five classes of linear inequalities,
//! the dihedral-angle vectors realizable by a compact polyhedron in hyperbolic
//! 3-space with a given trivalent face structure. This crate makes the
//! characterization effective: given an abstract polyhedron and an admissible
//! angle vector, it produces unit face normals in Minkowski space `E^{3,1}` by
//! following Newton's method along homotopy paths, starting from prisms and
//! split prisms that can be written down in closed form.
//!
//! The main entry point is [`construct::construct`]. Supporting layers:
//!
//! * [`lorentz`] — Minkowski linear algebra: inner products, plane/vertex
//!   geometry, reflections, projective-model coordinates.
//! * [`combinatorics`] — abstract polyhedra on the sphere, prismatic
//!   circuits, Whitehead moves, and the reduction to base complexes.
//! * [`angles`] — the Andreev conditions, angle-space paths, and the
//!   truncation paths used for non-simple combinatorics.
//! * [`solver`] — the quadratic system in `4N` unknowns, its Jacobian,
//!   Newton iteration with a Kantorovich certificate, and homotopy driving.
//! * [`construct`] — geometric seeds and the end-to-end pipeline.
//! * [`orbifolds`] — reflection-group generators, the Lobachevsky function,
//!   Lambert-cube and Löbell volumes, and a Monte Carlo cross-check.
//! * [`io`] — the input document format, OFF output, generator files, and
//!   the command-line interface.
//!
//! A narrative guide with runnable examples lives in `book/`; its code
//! blocks are compiled as doc-tests of this crate.

pub mod angles;
pub mod combinatorics;
pub mod construct;
pub mod io;
pub mod lorentz;
pub mod orbifolds;
pub mod solver;

#[cfg(doctest)]
mod book;
