//! Input parsing, OFF and generators output, and the command-line
//! interface.

mod cli;
mod generators;
mod input;
mod off;

pub use cli::run_cli;
pub use generators::{read_generators, render as render_generators, write_generators, GeneratorsError};
pub use input::{parse_input, AngleValue, InputDocument, InputError, PipelineOverrides};
pub use off::{off_complex, read_off, write_off, OffData, OffError};

use crate::lorentz::LorentzVector;
use crate::solver::{Realization, RealizeError};

/// Rebuilds an approximate realization from OFF data: the complex comes
/// from the face-vertex incidence, and each face plane is fitted through
/// its vertex ring in the Klein model, oriented outward.
pub fn off_to_realization(data: &OffData) -> Result<Realization, OffError> {
    let complex = off_complex(data)?;
    let mut centroid = [0.0f64; 3];
    for v in &data.vertices {
        for i in 0..3 {
            centroid[i] += v[i] / data.vertices.len() as f64;
        }
    }
    let mut normals: Vec<LorentzVector> = Vec::with_capacity(data.faces.len());
    for (cycle, _) in &data.faces {
        let pts: Vec<[f64; 3]> = cycle.iter().map(|&i| data.vertices[i]).collect();
        let mut v = crate::lorentz::plane_through_klein_points(&pts)
            .ok_or_else(|| OffError::Malformed("degenerate face plane".into()))?;
        // Outward orientation: the interior centroid satisfies y·g < c.
        let side = centroid[0] * v.x1 + centroid[1] * v.x2 + centroid[2] * v.x3 - v.x0;
        if side > 0.0 {
            v = -v;
        }
        normals.push(v);
    }
    Realization::from_normals(complex, normals).map_err(|e: RealizeError| {
        OffError::Malformed(format!("fitted planes do not realize the complex: {e}"))
    })
}

/// Writes `content` to `path` atomically: the data lands in a temporary
/// sibling first and is moved into place, so failures never leave partial
/// output files.
pub fn write_atomic(path: &std::path::Path, content: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}
