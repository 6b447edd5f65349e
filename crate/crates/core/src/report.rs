//! Input/output plumbing shared by the CLI: the JSON curve-spec format, the
//! deterministic report envelope, CSV rendering with shortest-round-trip
//! number formatting, and CSV import of circle samples.

use crate::curve::{ExpPolyCurve, Polynomial};
use crate::error::{Error, Result};
use crate::recovery::CircleSamples;
use serde::{Deserialize, Serialize};

/// On-disk curve description:
/// `{"label": str?, "polynomials": [[[re, im], ...], ...]}`, ascending powers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub polynomials: Vec<Vec<[f64; 2]>>,
}

impl CurveSpec {
    pub fn from_curve(curve: &ExpPolyCurve, label: Option<String>) -> Self {
        CurveSpec {
            label,
            polynomials: curve
                .exponents()
                .iter()
                .map(|g| {
                    if g.is_zero() {
                        vec![[0.0, 0.0]]
                    } else {
                        g.coeffs().iter().map(|c| [c.re, c.im]).collect()
                    }
                })
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<ExpPolyCurve> {
        if self.polynomials.is_empty() {
            return Err(Error::invalid("spec has an empty polynomial list"));
        }
        let mut exponents = Vec::with_capacity(self.polynomials.len());
        for (i, coeffs) in self.polynomials.iter().enumerate() {
            if coeffs.is_empty() {
                return Err(Error::invalid(format!(
                    "polynomial {i} has no coefficients"
                )));
            }
            let pairs: Vec<(f64, f64)> = coeffs.iter().map(|&[re, im]| (re, im)).collect();
            exponents.push(Polynomial::from_pairs(&pairs).map_err(|_| {
                Error::invalid(format!("polynomial {i} has a non-finite coefficient"))
            })?);
        }
        ExpPolyCurve::new(exponents)
    }
}

/// Parse a spec from JSON text, reporting line/column on malformed input.
pub fn parse_spec(text: &str) -> Result<CurveSpec> {
    serde_json::from_str(text).map_err(|e| {
        Error::invalid(format!(
            "spec parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

pub fn load_spec(path: &str) -> Result<CurveSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read spec file {path}: {e}")))?;
    parse_spec(&text)
}

/// Top-level JSON report. Field order is fixed by the struct, and every float
/// serializes via shortest-round-trip formatting, so identical inputs always
/// produce byte-identical output.
#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub tool_version: String,
    pub deterministic: bool,
}

impl ReportEnvelope {
    pub fn new(command: &str, inputs: serde_json::Value, results: serde_json::Value) -> Self {
        ReportEnvelope {
            command: command.to_string(),
            inputs,
            results,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            deterministic: true,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Shortest decimal representation that round-trips the exact f64 ('.'
/// separator regardless of locale).
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Render a CSV table: header row plus data rows, '\n' line endings.
/// Cells are written verbatim; numeric cells should come from [`fmt_f64`].
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Import circle samples from CSV with columns `theta_index,value`; indices
/// must be the complete range 0..N in order. The radius is not part of the
/// file and comes from the caller.
pub fn parse_samples_csv(text: &str, r: f64) -> Result<CircleSamples> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.eq_ignore_ascii_case("theta_index,value") {
            continue;
        }
        let (idx_s, val_s) = line.split_once(',').ok_or_else(|| {
            Error::invalid(format!("samples line {}: expected two columns", lineno + 1))
        })?;
        let idx: usize = idx_s.trim().parse().map_err(|_| {
            Error::invalid(format!("samples line {}: bad theta_index", lineno + 1))
        })?;
        if idx != values.len() {
            return Err(Error::invalid(format!(
                "samples line {}: theta_index {} out of order (expected {})",
                lineno + 1,
                idx,
                values.len()
            )));
        }
        let val: f64 = val_s.trim().parse().map_err(|_| {
            Error::invalid(format!("samples line {}: bad value", lineno + 1))
        })?;
        values.push(val);
    }
    CircleSamples::new(r, values)
}

pub fn load_samples_csv(path: &str, r: f64) -> Result<CircleSamples> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read samples file {path}: {e}")))?;
    parse_samples_csv(&text, r)
}

/// Render circle samples as `theta_index,value` CSV.
pub fn samples_to_csv(samples: &CircleSamples) -> String {
    let rows: Vec<Vec<String>> = samples
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| vec![j.to_string(), fmt_f64(v)])
        .collect();
    csv_table(&["theta_index", "value"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let text = r#"{"label": "demo", "polynomials": [[[0,0],[1,0]], [[2.5,-1]]]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.label.as_deref(), Some("demo"));
        let curve = spec.to_curve().unwrap();
        assert_eq!(curve.n(), 2);
        assert_eq!(curve.growth_degree(), 0);

        let back = CurveSpec::from_curve(&curve, spec.label.clone());
        assert_eq!(back.polynomials, spec.polynomials);
    }

    #[test]
    fn spec_rejects_bad_input() {
        // malformed JSON carries line/column
        let err = parse_spec("{\n  \"polynomials\": [[[0,0],]]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");

        // empty polynomial list
        let spec = parse_spec(r#"{"polynomials": []}"#).unwrap();
        assert!(spec.to_curve().is_err());

        // empty coefficient list
        let spec = parse_spec(r#"{"polynomials": [[]]}"#).unwrap();
        assert!(spec.to_curve().is_err());

        // non-finite coefficient (JSON has no inf literal; null is rejected by serde)
        assert!(parse_spec(r#"{"polynomials": [[[null,0]]]}"#).is_err());
    }

    #[test]
    fn zero_polynomial_survives_round_trip() {
        let curve = ExpPolyCurve::new(vec![Polynomial::zero()]).unwrap();
        let spec = CurveSpec::from_curve(&curve, None);
        assert_eq!(spec.polynomials, vec![vec![[0.0, 0.0]]]);
        assert!(spec.to_curve().is_ok());
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 8.0 / 7.0, -0.0, 12345.678901234567] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn samples_csv_round_trip() {
        let values: Vec<f64> = (0..64).map(|j| (j as f64 * 0.1).sin()).collect();
        let samples = CircleSamples::new(2.0, values.clone()).unwrap();
        let csv = samples_to_csv(&samples);
        let back = parse_samples_csv(&csv, 2.0).unwrap();
        assert_eq!(back.values(), samples.values());

        assert!(parse_samples_csv("theta_index,value\n1,0.5\n", 2.0).is_err());
        assert!(parse_samples_csv("theta_index,value\n0,abc\n", 2.0).is_err());
        assert!(parse_samples_csv("garbage line\n", 2.0).is_err());
    }

    #[test]
    fn envelope_is_deterministic() {
        let make = || {
            ReportEnvelope::new(
                "analyze",
                serde_json::json!({"rmax": 100.0}),
                serde_json::json!({"m": 1, "slope": 0.123456789012345}),
            )
            .to_json()
        };
        assert_eq!(make(), make());
        assert!(make().contains("\"deterministic\": true"));
    }
}
