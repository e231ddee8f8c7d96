//! JSON schemas for curves, links and flux loops, and a deterministic JSON
//! writer with fixed 17-significant-digit floats.

use crate::curves::{Ambient, FramedLoop, SampledLoop};
use crate::error::{LinkError, Result};
use crate::flux_torus::FluxLoop;
use crate::vec3::V3;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt::Write;

/// `{"ambient": "R3"|"S3", "points": [[...]], "normal"?: [[x,y,z]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub ambient: Ambient,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<Vec<V3>>,
}

impl CurveJson {
    pub fn from_loop(l: &SampledLoop) -> Self {
        CurveJson {
            ambient: l.ambient(),
            points: l.rows(),
            normal: None,
        }
    }

    pub fn from_framed(f: &FramedLoop) -> Self {
        CurveJson {
            normal: Some(f.normals().to_vec()),
            ..CurveJson::from_loop(f.base())
        }
    }

    pub fn to_loop(&self) -> Result<SampledLoop> {
        SampledLoop::from_rows(self.ambient, &self.points)
    }

    pub fn to_framed(&self) -> Result<FramedLoop> {
        let normals = self
            .normal
            .clone()
            .ok_or_else(|| LinkError::InvalidParams("curve has no \"normal\" field".into()))?;
        FramedLoop::new(self.to_loop()?, normals)
    }
}

/// `{"components": [<curve>...], "fluxes": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkJson {
    pub components: Vec<CurveJson>,
    pub fluxes: Vec<f64>,
}

impl LinkJson {
    pub fn to_loops(&self) -> Result<Vec<SampledLoop>> {
        if self.components.len() != self.fluxes.len() {
            return Err(LinkError::InvalidParams(format!(
                "{} components but {} fluxes",
                self.components.len(),
                self.fluxes.len()
            )));
        }
        self.components.iter().map(CurveJson::to_loop).collect()
    }
}

/// `{"vertices": [[a1,...,aK],...], "unknot_flags": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopJson {
    pub vertices: Vec<Vec<f64>>,
    pub unknot_flags: Vec<bool>,
}

impl LoopJson {
    pub fn to_loop(&self) -> Result<FluxLoop> {
        let l = FluxLoop::new(self.vertices.clone())?;
        if l.dim() != self.unknot_flags.len() {
            return Err(LinkError::InvalidParams(format!(
                "{} unknot flags for a loop in {} fluxes",
                self.unknot_flags.len(),
                l.dim()
            )));
        }
        Ok(l)
    }
}

/// Parse `text` as `T`, naming `what` in the error.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| LinkError::InvalidParams(format!("{what}: {e}")))
}

fn write_float(out: &mut String, x: f64) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    } else {
        out.push_str("null");
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                write_float(out, n.as_f64().unwrap_or(f64::NAN));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // numeric rows stay on one line
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Deterministic JSON: sorted keys, floats as `{:.16e}`, integers plain,
/// non-finite floats as `null`.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| LinkError::InvalidParams(format!("serialization: {e}")))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        _ => {
            let mut s = String::new();
            match v {
                Value::Number(n) if n.is_f64() => {
                    let _ = write!(s, "{:.10}", n.as_f64().unwrap_or(f64::NAN));
                }
                Value::Array(items) => {
                    let parts: Vec<String> = items
                        .iter()
                        .map(|x| match x.as_f64() {
                            Some(f) if x.is_f64() => format!("{f:.6}"),
                            _ => x.to_string(),
                        })
                        .collect();
                    let _ = write!(s, "[{}]", parts.join(", "));
                }
                _ => s = v.to_string(),
            }
            rows.push((prefix.to_string(), s));
        }
    }
}

/// Two-column human-readable table of every leaf of `value`.
pub fn pretty_table<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| LinkError::InvalidParams(format!("serialization: {e}")))?;
    let mut rows = Vec::new();
    flatten("", &v, &mut rows);
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (k, x) in rows {
        let _ = writeln!(out, "{k:<width$}  {x}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{gen_circle, radial_framing};
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_string(&json!({"b": 0.1, "a": 3, "c": [1.5, -2], "d": null})).unwrap();
        assert!(s.contains("\"b\": 1.0000000000000001e-1"));
        assert!(s.contains("\"a\": 3"));
        assert!(s.contains("[1.5000000000000000e0, -2]"));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn output_is_deterministic() {
        let v = json!({"x": [[0.1, 0.2], [0.3, 0.4]], "y": {"z": std::f64::consts::PI}});
        assert_eq!(to_json_string(&v).unwrap(), to_json_string(&v).unwrap());
    }

    #[test]
    fn curve_round_trip() {
        let c = gen_circle(1.0, [0.0; 3], [0.0, 0.0, 1.0], 32).unwrap();
        let f = radial_framing(&c).unwrap();
        let j = CurveJson::from_framed(&f);
        let text = to_json_string(&j).unwrap();
        let back: CurveJson = parse_json(&text, "curve").unwrap();
        assert_eq!(back.to_loop().unwrap(), c);
        assert_eq!(back.to_framed().unwrap().normals(), f.normals());
    }

    #[test]
    fn loop_schema_checks_flags() {
        let l: LoopJson = parse_json(
            r#"{"vertices": [[0.1, 0.2], [0.4, 0.2], [0.7, 0.2]], "unknot_flags": [true]}"#,
            "loop",
        )
        .unwrap();
        assert!(l.to_loop().is_err());
        assert!(parse_json::<LoopJson>(r#"{"vertices": []}"#, "loop").is_err());
    }

    #[test]
    fn pretty_table_lists_leaves() {
        let t = pretty_table(&json!({"m": 1, "branches": [{"k": 0, "value": 0.5}]})).unwrap();
        assert!(t.contains("branches[0].value"));
        assert!(t.contains("0.5000000000"));
    }
}
