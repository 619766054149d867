//! The end-to-end construction pipeline: geometric seeds, geometric
//! Whitehead moves, and the simple / truncated / compound routes.

mod compound;
mod seeds;
mod simple;
mod truncate;
mod whitehead;

pub use compound::construct_compound;
pub use seeds::{build_prism, build_split_prism, natal_prism_angles, prism_angles, split_prism_angles};
pub use simple::construct_simple;
pub use truncate::construct_truncated;
pub use whitehead::whitehead_move_geometric;

use crate::angles::{check_conditions, AngleAssignment, AngleError, ConditionReport};
use crate::combinatorics::{
    are_isomorphic, base_prism, classify, find_isomorphism, AbstractPolyhedron, BadN,
    CombinatorialClass, ReduceError,
};
use crate::lorentz::{LorentzError, LorentzVector};
use crate::solver::{
    build_system, gauge_normalize, homotopy_deform, pick_gauge, Gauge, HomotopyError,
    Realization, RealizeError, SolveError, VerifyReport, VerifyTolerances,
};
use std::f64::consts::PI;
use thiserror::Error;

/// Tunables of the pipeline; the defaults match the documented contract.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Subdivisions per homotopy leg.
    pub subdivisions: usize,
    /// Opening angle used while performing a Whitehead move geometrically.
    pub epsilon: f64,
    /// Half-width of the band around `π/3` used by truncation paths.
    pub delta: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Epsilon halvings after a Whitehead basin miss.
    pub retries: usize,
    pub verify: VerifyTolerances,
    /// Solve the ungauged system by least-squares Newton steps instead of
    /// anchoring six coordinates.
    pub least_squares: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            subdivisions: 150,
            epsilon: PI / 45.0,
            delta: PI / 20.0,
            residual_tol: 1e-10,
            max_iter: 50,
            retries: 4,
            verify: VerifyTolerances::default(),
            least_squares: false,
        }
    }
}

impl PipelineConfig {
    pub fn gauge_for(&self, p: &Realization) -> Gauge {
        if self.least_squares {
            Gauge::LeastSquares
        } else {
            Gauge::Anchored(pick_gauge(p))
        }
    }
}

/// One executed stage of a pipeline.
#[derive(Debug, Clone)]
pub struct StageReport {
    pub name: String,
    pub residual: f64,
    pub newton_iterations: usize,
}

/// Everything a construction did, for reporting and diagnostics.
#[derive(Debug, Clone, Default)]
pub struct PipelineReport {
    pub stages: Vec<StageReport>,
    /// Whitehead moves replayed, as the dual edges flipped.
    pub moves_replayed: Vec<(usize, usize)>,
    /// Faces of the input complex realized as truncation planes.
    pub truncated_faces: Vec<usize>,
    /// Human-readable gluing tree for compound runs.
    pub glue_log: Vec<String>,
}

impl PipelineReport {
    pub fn stage(&mut self, name: &str, residual: f64, newton_iterations: usize) {
        self.stages.push(StageReport { name: name.to_string(), residual, newton_iterations });
    }

    pub fn merge(&mut self, prefix: &str, other: PipelineReport) {
        for s in other.stages {
            self.stages.push(StageReport { name: format!("{prefix}: {}", s.name), ..s });
        }
        self.moves_replayed.extend(other.moves_replayed);
        self.truncated_faces.extend(other.truncated_faces);
        self.glue_log.extend(other.glue_log.into_iter().map(|l| format!("{prefix}: {l}")));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            out.push_str(&format!(
                "stage {:<40} residual {:>12.3e}  newton iterations {}\n",
                s.name, s.residual, s.newton_iterations
            ));
        }
        if !self.moves_replayed.is_empty() {
            out.push_str(&format!("moves replayed: {:?}\n", self.moves_replayed));
        }
        if !self.truncated_faces.is_empty() {
            out.push_str(&format!("truncated faces: {:?}\n", self.truncated_faces));
        }
        for l in &self.glue_log {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// A finished construction: the verified realization and its report.
#[derive(Debug)]
pub struct Construction {
    pub realization: Realization,
    pub report: PipelineReport,
}

#[derive(Error, Debug)]
pub enum ConstructError {
    #[error("angle vector rejected by the Andreev conditions: {report}")]
    Rejected { report: ConditionReport },
    #[error("prism angles out of range: theta_p = {theta_p}, theta_c = {theta_c} (polygon limit {limit})")]
    BadAngles { theta_p: f64, theta_c: f64, limit: f64 },
    #[error("Whitehead move basin missed after {retries} retries on edge {edge:?}")]
    WhiteheadBasinMiss { edge: (usize, usize), retries: usize },
    #[error("collapsed vertex for face {face} never crosses the sphere at infinity")]
    VertexNeverCrossed { face: usize },
    #[error("glued pieces disagree along the seam: {detail}")]
    GlueMismatch { detail: String },
    #[error(transparent)]
    BadN(#[from] BadN),
    #[error(transparent)]
    Angles(#[from] AngleError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error("verification failed: {0}")]
    Verify(VerifyReport),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Constructs a compact hyperbolic polyhedron realizing `(c, a)`.
///
/// The angle vector is checked against the Andreev conditions before any
/// numerics run; prisms are built in closed form and deformed, and the
/// three combinatorial classes are dispatched to their pipelines.
pub fn construct(
    c: &AbstractPolyhedron,
    a: &AngleAssignment,
    cfg: &PipelineConfig,
) -> Result<Construction, ConstructError> {
    let report = check_conditions(c, a)?;
    if !report.passed() {
        return Err(ConstructError::Rejected { report });
    }
    let mut pipeline = PipelineReport::default();
    let prism = base_prism(c.face_count()).ok();
    if let Some(prism) = prism {
        if are_isomorphic(c, &prism) {
            let realization = construct_prism_route(c, &prism, a, cfg, &mut pipeline)?;
            return Ok(Construction { realization, report: pipeline });
        }
    }
    let realization = match classify(c) {
        CombinatorialClass::Simple => construct_simple(c, a, cfg, &mut pipeline)?,
        CombinatorialClass::Truncated { .. } => construct_truncated(c, a, cfg, &mut pipeline)?,
        CombinatorialClass::Compound { .. } => construct_compound(c, a, cfg, &mut pipeline)?,
    };
    Ok(Construction { realization, report: pipeline })
}

/// Prisms (the cube included) go straight from the closed-form seed to the
/// target angles.
fn construct_prism_route(
    c: &AbstractPolyhedron,
    prism: &AbstractPolyhedron,
    a: &AngleAssignment,
    cfg: &PipelineConfig,
    report: &mut PipelineReport,
) -> Result<Realization, ConstructError> {
    let n = c.face_count();
    let (theta_p, theta_c) = natal_prism_angles(n);
    let seed = build_prism(n, theta_p, theta_c, cfg)?;
    report.stage("prism seed", 0.0, 0);
    let seed = relabel(&seed, prism, c)?;
    let seed = gauge_normalize(&seed)?;
    let sys = build_system(c, cfg.gauge_for(&seed));
    let (p, log) =
        homotopy_deform(&sys, &seed, a, cfg.subdivisions, cfg.residual_tol, cfg.max_iter)?;
    report.stage("prism deformation to target", log.final_residual(), log.total_iterations());
    let p = gauge_normalize(&p)?;
    p.verify(a, &cfg.verify).map_err(ConstructError::Verify)?;
    Ok(p)
}

/// Transfers a realization across a combinatorial isomorphism: the face
/// `iso[f]` of the target complex receives the normal of face `f`.
pub(crate) fn relabel(
    p: &Realization,
    from: &AbstractPolyhedron,
    to: &AbstractPolyhedron,
) -> Result<Realization, ConstructError> {
    let iso = find_isomorphism(from, to).ok_or_else(|| {
        ConstructError::Internal("complexes are not isomorphic during relabeling".into())
    })?;
    let mut normals = vec![LorentzVector::default(); to.face_count()];
    for (f, v) in p.normals().iter().enumerate() {
        normals[iso[f]] = *v;
    }
    Ok(Realization::from_normals(to.clone(), normals)?)
}
