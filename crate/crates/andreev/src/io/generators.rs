//! The generators file: reflection matrices as elements of `SO(3,1)`, in a
//! self-describing text layout with a round-trip parser.
//!
//! First line: the generator count. Then one block per generator of four
//! rows with four whitespace-separated reals, row-major, sixteen
//! significant digits.

use crate::lorentz::LorentzMatrix;
use crate::orbifolds::{submultiple_order, GeneratorSet};
use crate::solver::Realization;
use nalgebra::Matrix4;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum GeneratorsError {
    #[error("edge {edge:?} has angle {angle}, not an integer sub-multiple of pi")]
    NotSubmultiple { edge: (usize, usize), angle: f64 },
    #[error("malformed generators file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Volume(#[from] crate::orbifolds::VolumeError),
    #[error(transparent)]
    Lorentz(#[from] crate::lorentz::LorentzError),
}

/// Serializes the face reflections of a realization whose dihedral angles
/// are all proper integer sub-multiples of `π` (checked to `1e-9`), so that
/// the generated group is discrete.
pub fn write_generators(p: &Realization) -> Result<String, GeneratorsError> {
    let angles = p.extract_angles()?;
    for (&edge, &angle) in angles.iter() {
        if submultiple_order(angle, 1e-9).is_none() {
            return Err(GeneratorsError::NotSubmultiple { edge, angle });
        }
    }
    let gens = crate::orbifolds::reflection_generators(p)?;
    Ok(render(&gens))
}

/// Serializes a generator set without the discreteness check.
pub fn render(gens: &GeneratorSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", gens.matrices.len()));
    for m in &gens.matrices {
        for r in 0..4 {
            let row: Vec<String> = (0..4).map(|c| format!("{:.15e}", m.entry(r, c))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn read_generators(text: &str) -> Result<GeneratorSet, GeneratorsError> {
    let mut tokens = text.split_whitespace();
    let count: usize = tokens
        .next()
        .ok_or_else(|| GeneratorsError::Malformed("missing generator count".into()))?
        .parse()
        .map_err(|e| GeneratorsError::Malformed(format!("bad generator count: {e}")))?;
    let mut matrices = Vec::with_capacity(count);
    for g in 0..count {
        let mut m = Matrix4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                let entry = tokens.next().ok_or_else(|| {
                    GeneratorsError::Malformed(format!("generator {g} is truncated"))
                })?;
                m[(r, c)] = entry
                    .parse()
                    .map_err(|e| GeneratorsError::Malformed(format!("bad entry: {e}")))?;
            }
        }
        matrices.push(LorentzMatrix(m));
    }
    if tokens.next().is_some() {
        return Err(GeneratorsError::Malformed("trailing data".into()));
    }
    Ok(GeneratorSet { matrices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::AngleAssignment;
    use crate::combinatorics::cube;
    use crate::construct::{construct, PipelineConfig};
    use std::f64::consts::PI;

    #[test]
    fn two_pi_fifth_angles_rejected() {
        let c = cube();
        let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
        let out = construct(&c, &a, &PipelineConfig::default()).unwrap();
        assert!(matches!(
            write_generators(&out.realization),
            Err(GeneratorsError::NotSubmultiple { .. })
        ));
    }

    #[test]
    fn roundtrip_to_printed_precision() {
        let (c, a) = crate::orbifolds::lambert_cube(PI / 3.0, PI / 3.0, PI / 3.0);
        let out = construct(&c, &a, &PipelineConfig::default()).unwrap();
        let text = write_generators(&out.realization).unwrap();
        let gens = read_generators(&text).unwrap();
        assert_eq!(gens.matrices.len(), 6);
        for (m, orig) in gens
            .matrices
            .iter()
            .zip(crate::orbifolds::reflection_generators(&out.realization).unwrap().matrices)
        {
            assert!(m.max_abs_diff(&orig) < 1e-12);
            assert!(m.is_involution(1e-10));
            assert!(m.preserves_form(1e-10));
        }
        let text2 = render(&gens);
        assert_eq!(text, text2);
    }
}
