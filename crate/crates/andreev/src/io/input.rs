//! The input document: a JSON description of the pair `(C, a)` plus
//! optional pipeline overrides.
//!
//! Angles are written either as rationals of `π` in the form `"a/b pi"`
//! (kept exact for sub-multiple checks) or as decimal radians.

use crate::angles::AngleAssignment;
use crate::combinatorics::{validate, AbstractPolyhedron};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("semantic error: {0}")]
    Semantic(String),
}

/// An angle with its written form preserved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    /// Decimal radians.
    Radians(f64),
    /// `"a/b pi"`, parsed exactly.
    RationalPi(#[serde(with = "rational_pi")] (i64, i64)),
}

impl AngleValue {
    pub fn value(&self) -> f64 {
        match self {
            AngleValue::Radians(r) => *r,
            AngleValue::RationalPi((num, den)) => PI * (*num as f64) / (*den as f64),
        }
    }

    /// Denominator when the value is exactly `π/k`.
    pub fn exact_submultiple(&self) -> Option<u32> {
        match self {
            AngleValue::RationalPi((1, den)) if *den >= 2 => Some(*den as u32),
            _ => None,
        }
    }
}

mod rational_pi {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &(i64, i64), s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{} pi", v.0, v.1))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(i64, i64), D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).ok_or_else(|| D::Error::custom(format!("not an 'a/b pi' angle: {text}")))
    }

    pub fn parse(text: &str) -> Option<(i64, i64)> {
        let rest = text.trim().strip_suffix("pi")?.trim();
        let (num, den) = match rest.split_once('/') {
            Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
            None if rest.is_empty() => (1, 1),
            None => (rest.trim().parse().ok()?, 1),
        };
        (den != 0).then_some((num, den))
    }
}

/// Optional pipeline overrides carried by an input document.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PipelineOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<AngleValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<AngleValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub least_squares: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub face_count: usize,
    pub dual_triangles: Vec<[usize; 3]>,
    /// `[face, face, angle]` entries, one per edge.
    pub edge_angles: Vec<(usize, usize, AngleValue)>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub overrides: PipelineOverrides,
}

fn is_default(o: &PipelineOverrides) -> bool {
    *o == PipelineOverrides::default()
}

/// Parses and semantically checks an input document.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.check()?;
    Ok(doc)
}

impl InputDocument {
    fn check(&self) -> Result<(), InputError> {
        let violations = validate(self.face_count, &self.dual_triangles);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(InputError::Semantic(lines.join("; ")));
        }
        let complex = self.complex()?;
        let mut seen: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
        for (i, j, v) in &self.edge_angles {
            if *i >= self.face_count || *j >= self.face_count {
                return Err(InputError::Semantic(format!(
                    "edge ({i}, {j}) references a face out of range"
                )));
            }
            if !complex.is_edge(*i, *j) {
                return Err(InputError::Semantic(format!(
                    "({i}, {j}) is not an edge of the complex"
                )));
            }
            let key = crate::combinatorics::edge_key(*i, *j);
            let value = v.value();
            if let Some(prev) = seen.insert(key, value) {
                if (prev - value).abs() > 1e-15 {
                    return Err(InputError::Semantic(format!(
                        "edge {key:?} is assigned both {prev} and {value}"
                    )));
                }
            }
        }
        for &(i, j) in complex.edges() {
            if !seen.contains_key(&crate::combinatorics::edge_key(i, j)) {
                return Err(InputError::Semantic(format!("edge ({i}, {j}) has no angle")));
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> Result<AbstractPolyhedron, InputError> {
        AbstractPolyhedron::from_triples(self.face_count, self.dual_triangles.clone())
            .map_err(|e| InputError::Semantic(e.to_string()))
    }

    pub fn angles(&self) -> AngleAssignment {
        let mut a = AngleAssignment::new();
        for (i, j, v) in &self.edge_angles {
            a.set(*i, *j, v.value());
        }
        a
    }

    /// Smallest sub-multiple tolerance honoring exact rational input.
    pub fn angle_values(&self) -> Vec<(usize, usize, AngleValue)> {
        self.edge_angles.clone()
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::cube;

    fn cube_doc() -> String {
        let c = cube();
        let edges: Vec<String> = c
            .edges()
            .iter()
            .map(|(i, j)| format!(r#"[{i}, {j}, "2/5 pi"]"#))
            .collect();
        let triangles: Vec<String> = c
            .triangles()
            .iter()
            .map(|t| format!("[{}, {}, {}]", t[0], t[1], t[2]))
            .collect();
        format!(
            r#"{{"face_count": 6, "dual_triangles": [{}], "edge_angles": [{}]}}"#,
            triangles.join(", "),
            edges.join(", ")
        )
    }

    #[test]
    fn parse_cube_document() {
        let doc = parse_input(&cube_doc()).unwrap();
        assert_eq!(doc.face_count, 6);
        assert_eq!(doc.dual_triangles.len(), 8);
        let complex = doc.complex().unwrap();
        assert_eq!(complex.edge_count(), 12);
        let a = doc.angles();
        assert_eq!(a.len(), 12);
        assert!((a.get(0, 1).unwrap() - 2.0 * PI / 5.0).abs() < 1e-15);
    }

    #[test]
    fn conflicting_duplicate_rejected() {
        let text = cube_doc().replace(
            r#""edge_angles": [[0, 1, "2/5 pi"]"#,
            r#""edge_angles": [[0, 1, "1/2 pi"], [0, 1, "2/5 pi"]"#,
        );
        match parse_input(&text) {
            Err(InputError::Semantic(msg)) => assert!(msg.contains("assigned both")),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_input("{ not json") {
            Err(InputError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn roundtrip_identity() {
        let doc = parse_input(&cube_doc()).unwrap();
        let doc2 = parse_input(&doc.serialize()).unwrap();
        assert_eq!(doc, doc2);
    }

    #[test]
    fn angle_forms() {
        assert_eq!(AngleValue::RationalPi((2, 5)).exact_submultiple(), None);
        assert_eq!(AngleValue::RationalPi((1, 4)).exact_submultiple(), Some(4));
        assert!((AngleValue::Radians(1.0).value() - 1.0).abs() < 1e-15);
        assert_eq!(rational_pi::parse("3/7 pi"), Some((3, 7)));
        assert_eq!(rational_pi::parse("pi"), Some((1, 1)));
        assert_eq!(rational_pi::parse("2 pi"), Some((2, 1)));
        assert_eq!(rational_pi::parse("0.5"), None);
    }
}
