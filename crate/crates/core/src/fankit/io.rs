//! Fan file format: one JSON document
//! `{"dim": n, "rays": [[...], ...], "maximal_cones": [[...], ...]}`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::{Fan, FanError};
use crate::lattice::{LatticeVector, MAX_DIM, MAX_ENTRY};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Content { path: String, message: String },
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    dim: i64,
    rays: Vec<Vec<i64>>,
    maximal_cones: Vec<Vec<i64>>,
}

fn content(path: impl Into<String>, message: impl Into<String>) -> FanParseError {
    FanParseError::Content {
        path: path.into(),
        message: message.into(),
    }
}

/// Parses a fan file strictly: non-primitive or duplicate rays, and
/// repeated or out-of-range cone indices are rejected with their position.
pub fn fan_from_json(text: &str) -> Result<Fan, FanParseError> {
    let raw: RawFan = serde_json::from_str(text).map_err(|e| FanParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.dim < 1 || raw.dim > MAX_DIM as i64 {
        return Err(content("dim", format!("{} is outside 1..={MAX_DIM}", raw.dim)));
    }
    let dim = raw.dim as usize;

    let mut rays = Vec::with_capacity(raw.rays.len());
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    for (i, ray) in raw.rays.iter().enumerate() {
        let path = format!("rays[{i}]");
        if ray.len() != dim {
            return Err(content(path, format!("has {} coordinates, expected {dim}", ray.len())));
        }
        if let Some((k, &c)) = ray.iter().enumerate().find(|(_, c)| c.abs() > MAX_ENTRY) {
            return Err(content(format!("{path}[{k}]"), format!("{c} exceeds the bound {MAX_ENTRY}")));
        }
        let v = LatticeVector::new(ray.clone()).map_err(|e| content(&path, e.to_string()))?;
        if v.is_zero() {
            return Err(content(path, "zero vector"));
        }
        if !v.is_primitive() {
            return Err(content(path, format!("not primitive (gcd {})", v.content())));
        }
        if let Some(&first) = seen.get(ray) {
            return Err(content(path, format!("duplicate of rays[{first}]")));
        }
        seen.insert(ray.clone(), i);
        rays.push(v);
    }

    let mut cones = Vec::with_capacity(raw.maximal_cones.len());
    let mut seen_cones: HashMap<Vec<usize>, usize> = HashMap::new();
    for (c, cone) in raw.maximal_cones.iter().enumerate() {
        let mut indices = Vec::with_capacity(cone.len());
        for (p, &idx) in cone.iter().enumerate() {
            let path = format!("maximal_cones[{c}][{p}]");
            if idx < 0 || idx as usize >= rays.len() {
                return Err(content(path, format!("index {idx} out of range (fan has {} rays)", rays.len())));
            }
            let idx = idx as usize;
            if indices.contains(&idx) {
                return Err(content(path, format!("repeated index {idx}")));
            }
            indices.push(idx);
        }
        let mut key = indices.clone();
        key.sort_unstable();
        if let Some(&first) = seen_cones.get(&key) {
            return Err(content(format!("maximal_cones[{c}]"), format!("duplicate of maximal_cones[{first}]")));
        }
        seen_cones.insert(key, c);
        cones.push(indices);
    }
    Ok(Fan::new(dim, rays, cones)?)
}

/// Writes a fan file with one ray or cone per line.
pub fn fan_to_json(f: &Fan) -> String {
    let mut out = String::new();
    let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"dim\": {},", f.dim());
    let _ = writeln!(out, "  \"rays\": [");
    for (i, r) in f.rays().iter().enumerate() {
        let sep = if i + 1 < f.rays().len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", join(&mut r.coords().iter().map(i64::to_string)));
    }
    let _ = writeln!(out, "  ],");
    let _ = writeln!(out, "  \"maximal_cones\": [");
    for (i, c) in f.maximal_cones().iter().enumerate() {
        let sep = if i + 1 < f.maximal_cones().len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", join(&mut c.indices().iter().map(usize::to_string)));
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fankit::{f0_blowup, hirzebruch, projective_fan};

    #[test]
    fn round_trip() {
        for f in [hirzebruch(3).unwrap(), projective_fan(3).unwrap(), f0_blowup().unwrap()] {
            assert_eq!(fan_from_json(&fan_to_json(&f)).unwrap(), f);
        }
    }

    #[test]
    fn parses_minimal_document() {
        let f = fan_from_json(r#"{"dim": 1, "rays": [[1], [-1]], "maximal_cones": [[0], [1]]}"#).unwrap();
        assert_eq!(f, projective_fan(1).unwrap());
    }

    fn err(text: &str) -> String {
        fan_from_json(text).unwrap_err().to_string()
    }

    #[test]
    fn positioned_errors() {
        assert_eq!(
            err(r#"{"dim": 2, "rays": [[1,0],[0,1],[1,0]], "maximal_cones": [[0,1]]}"#),
            "rays[2]: duplicate of rays[0]"
        );
        assert_eq!(
            err(r#"{"dim": 2, "rays": [[1,0],[0,2]], "maximal_cones": [[0,1]]}"#),
            "rays[1]: not primitive (gcd 2)"
        );
        assert_eq!(
            err(r#"{"dim": 1, "rays": [[1],[-1]], "maximal_cones": [[0],[3]]}"#),
            "maximal_cones[1][0]: index 3 out of range (fan has 2 rays)"
        );
        assert_eq!(
            err(r#"{"dim": 1, "rays": [[1],[-1]], "maximal_cones": [[0],[0]]}"#),
            "maximal_cones[1]: duplicate of maximal_cones[0]"
        );
        assert_eq!(
            err(r#"{"dim": 2, "rays": [[1,0],[0,1]], "maximal_cones": [[0,0]]}"#),
            "maximal_cones[0][1]: repeated index 0"
        );
        assert_eq!(
            err(r#"{"dim": 2, "rays": [[1]], "maximal_cones": [[0]]}"#),
            "rays[0]: has 1 coordinates, expected 2"
        );
        assert!(err("{\n  \"dim\": 2,\n  \"rays\": [[1, 0]\n}").starts_with("line 4"));
    }
}
