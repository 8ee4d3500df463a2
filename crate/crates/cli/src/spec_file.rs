//! Operator spec files: JSON with a `kind` tag, the payload fields of that
//! kind and an optional `numeric_policy` block.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use weyl_lab_core::inner::{HerglotzSpec, InnerFunctionSpec, Zero};
use weyl_lab_core::moment::{JacobiSpec, Truncation};
use weyl_lab_core::Complex64 as C;

#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    Io(String),
    /// Malformed JSON or a field of the wrong shape.
    Parse { line: Option<usize>, field: String, message: String },
    /// Well-formed, but rejected by the target constructor.
    Validation { field: String, message: String },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Io(m) => write!(f, "cannot read spec: {m}"),
            SpecError::Parse { line: Some(l), field, message } if field.is_empty() => write!(f, "parse error at line {l}: {message}"),
            SpecError::Parse { line: Some(l), field, message } => write!(f, "parse error at line {l}, field `{field}`: {message}"),
            SpecError::Parse { line: None, field, message } => write!(f, "parse error in field `{field}`: {message}"),
            SpecError::Validation { field, message } => write!(f, "validation error in field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for SpecError {}

fn invalid(field: &str, message: impl Into<String>) -> SpecError {
    SpecError::Validation { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "Caps::default_n_max")]
    pub n_max: usize,
    #[serde(default = "Caps::default_sampling_radius")]
    pub sampling_radius: f64,
}

impl Caps {
    fn default_n_max() -> usize {
        400
    }
    fn default_sampling_radius() -> f64 {
        100.0
    }
}

impl Default for Caps {
    fn default() -> Self {
        Self { n_max: Self::default_n_max(), sampling_radius: Self::default_sampling_radius() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericPolicy {
    #[serde(default = "NumericPolicy::default_axis_epsilon")]
    pub axis_epsilon: f64,
    #[serde(default = "NumericPolicy::default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "NumericPolicy::default_series_tol")]
    pub series_tol: f64,
    #[serde(default)]
    pub caps: Caps,
}

impl NumericPolicy {
    fn default_axis_epsilon() -> f64 {
        1e-3
    }
    fn default_quad_tol() -> f64 {
        1e-10
    }
    fn default_series_tol() -> f64 {
        1e-12
    }

    fn validate(&self) -> Result<(), SpecError> {
        for (name, v) in [
            ("numeric_policy.axis_epsilon", self.axis_epsilon),
            ("numeric_policy.quad_tol", self.quad_tol),
            ("numeric_policy.series_tol", self.series_tol),
            ("numeric_policy.caps.sampling_radius", self.caps.sampling_radius),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        if self.caps.n_max < 2 {
            return Err(invalid("numeric_policy.caps.n_max", "must be at least 2"));
        }
        Ok(())
    }

    /// Compact `key=value` form used in CSV reports.
    pub fn compact(&self) -> String {
        format!(
            "axis_epsilon={:e};quad_tol={:e};series_tol={:e};n_max={};sampling_radius={:e}",
            self.axis_epsilon, self.quad_tol, self.series_tol, self.caps.n_max, self.caps.sampling_radius
        )
    }
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            axis_epsilon: Self::default_axis_epsilon(),
            quad_tol: Self::default_quad_tol(),
            series_tol: Self::default_series_tol(),
            caps: Caps::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InnerPayload {
    #[serde(default = "one")]
    gamma: [f64; 2],
    #[serde(default)]
    b: f64,
    #[serde(default)]
    zeros: Vec<([f64; 2], u32)>,
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HerglotzPayload {
    #[serde(default)]
    c: f64,
    #[serde(default)]
    d: f64,
    #[serde(default)]
    poles: Vec<f64>,
    #[serde(default)]
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerRule {
    power: f64,
    #[serde(default = "unit")]
    shift: f64,
    #[serde(default = "unit")]
    scale: f64,
    #[serde(default)]
    b: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum TruncationPayload {
    Full,
    Section(usize),
    Adaptive,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JacobiPayload {
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    power_rule: Option<PowerRule>,
    provenance: Option<String>,
    truncation: Option<TruncationPayload>,
}

#[derive(Debug, Clone)]
pub enum Operator {
    Inner(InnerFunctionSpec),
    Herglotz(HerglotzSpec),
    Jacobi { spec: JacobiSpec, trunc: Truncation },
}

impl Operator {
    pub fn kind(&self) -> &'static str {
        match self {
            Operator::Inner(_) => "inner",
            Operator::Herglotz(_) => "herglotz",
            Operator::Jacobi { .. } => "jacobi",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OperatorSpecFile {
    pub operator: Operator,
    pub numeric_policy: NumericPolicy,
    /// SHA-256 of the file bytes, hex.
    pub digest: String,
}

/// Best-effort line of the first occurrence of `"key"` in the source.
fn line_of_key(text: &str, path: &str) -> Option<usize> {
    let key = path.rsplit('.').find(|s| !s.is_empty() && !s.starts_with('[') && s.parse::<usize>().is_err())?;
    let key = key.split('[').next()?;
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn typed<T: DeserializeOwned>(text: &str, prefix: &str, v: Value) -> Result<T, SpecError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.path().to_string();
        let field = match (prefix.is_empty(), inner.as_str()) {
            (true, _) => inner.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        let field = if field == "." { String::new() } else { field };
        SpecError::Parse { line: line_of_key(text, &field), field, message: e.into_inner().to_string() }
    })
}

fn core_err(field: &str, e: weyl_lab_core::Error) -> SpecError {
    invalid(field, e.to_string())
}

pub fn parse_spec(path: &Path) -> Result<OperatorSpecFile, SpecError> {
    let bytes = std::fs::read(path).map_err(|e| SpecError::Io(format!("{}: {e}", path.display())))?;
    parse_spec_bytes(&bytes)
}

pub fn parse_spec_bytes(bytes: &[u8]) -> Result<OperatorSpecFile, SpecError> {
    use sha2::{Digest, Sha256};
    let digest: String = Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect();
    let text = std::str::from_utf8(bytes)
        .map_err(|e| SpecError::Parse { line: None, field: String::new(), message: format!("not UTF-8: {e}") })?;
    let value: Value = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: Some(e.line()),
        field: String::new(),
        message: e.to_string(),
    })?;
    let mut map: Map<String, Value> = match value {
        Value::Object(m) => m,
        _ => return Err(SpecError::Parse { line: Some(1), field: String::new(), message: "top level must be an object".into() }),
    };
    let kind = match map.remove("kind") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(SpecError::Parse { line: line_of_key(text, "kind"), field: "kind".into(), message: "must be a string".into() }),
        None => return Err(SpecError::Parse { line: None, field: "kind".into(), message: "missing; expected inner, herglotz or jacobi".into() }),
    };
    let numeric_policy: NumericPolicy = match map.remove("numeric_policy") {
        Some(v) => typed(text, "numeric_policy", v)?,
        None => NumericPolicy::default(),
    };
    numeric_policy.validate()?;
    let payload = Value::Object(map);
    let operator = match kind.as_str() {
        "inner" => {
            let p: InnerPayload = typed(text, "", payload)?;
            if !(p.b >= 0.0) {
                return Err(invalid("b", format!("mean_type_b must be >= 0, got {}", p.b)));
            }
            for (k, (z, m)) in p.zeros.iter().enumerate() {
                if *m == 0 {
                    return Err(invalid(&format!("zeros[{k}][1]"), "multiplicity must be positive"));
                }
                if !(z[1] > 0.0) {
                    return Err(invalid(&format!("zeros[{k}][0]"), format!("zero {}+{}i must lie in the upper half-plane", z[0], z[1])));
                }
            }
            let gamma = C::new(p.gamma[0], p.gamma[1]);
            if (gamma.norm() - 1.0).abs() > 1e-12 {
                return Err(invalid("gamma", format!("must be unimodular, |gamma| = {}", gamma.norm())));
            }
            let zeros = p.zeros.iter().map(|(z, m)| Zero::new(C::new(z[0], z[1]), *m)).collect();
            Operator::Inner(InnerFunctionSpec::new(gamma, p.b, zeros).map_err(|e| core_err("zeros", e))?)
        }
        "herglotz" => {
            let p: HerglotzPayload = typed(text, "", payload)?;
            if !(p.d >= 0.0) {
                return Err(invalid("d", format!("must be >= 0, got {}", p.d)));
            }
            if p.poles.len() != p.weights.len() {
                return Err(invalid("weights", format!("{} weights for {} poles", p.weights.len(), p.poles.len())));
            }
            if let Some(k) = p.weights.iter().position(|w| !(*w > 0.0)) {
                return Err(invalid(&format!("weights[{k}]"), "must be positive"));
            }
            if let Some(k) = p.poles.windows(2).position(|w| !(w[1] > w[0])) {
                return Err(invalid(&format!("poles[{}]", k + 1), "poles must be strictly increasing"));
            }
            Operator::Herglotz(HerglotzSpec::new(p.c, p.d, p.poles, p.weights).map_err(|e| core_err("poles", e))?)
        }
        "jacobi" => {
            let p: JacobiPayload = typed(text, "", payload)?;
            let n_max = numeric_policy.caps.n_max;
            let mut spec = match (p.a, p.b, p.power_rule) {
                (Some(a), Some(b), None) => {
                    if a.len() != b.len() {
                        return Err(invalid("b", format!("a has {} entries, b has {}", a.len(), b.len())));
                    }
                    if let Some(k) = a.iter().position(|x| !(*x > 0.0)) {
                        return Err(invalid(&format!("a[{k}]"), format!("must be positive, got {}", a[k])));
                    }
                    let keep = a.len().min(n_max);
                    JacobiSpec::new(a[..keep].to_vec(), b[..keep].to_vec(), "spec file").map_err(|e| core_err("a", e))?
                }
                (None, None, Some(r)) => {
                    JacobiSpec::power_rule(n_max, r.power, r.shift, r.scale, r.b).map_err(|e| core_err("power_rule", e))?
                }
                _ => return Err(invalid("a", "give either both `a` and `b`, or `power_rule`")),
            };
            if let Some(pv) = p.provenance {
                spec.provenance = pv;
            }
            let trunc = match p.truncation.unwrap_or(TruncationPayload::Full) {
                TruncationPayload::Full => Truncation::Full,
                TruncationPayload::Section(k) if k < spec.n_max() => Truncation::Section(k),
                TruncationPayload::Section(k) => {
                    return Err(invalid("truncation.section", format!("{k} is beyond the last index {}", spec.n_max() - 1)))
                }
                TruncationPayload::Adaptive => Truncation::Adaptive { tol: numeric_policy.series_tol },
            };
            Operator::Jacobi { spec, trunc }
        }
        other => {
            return Err(SpecError::Parse {
                line: line_of_key(text, "kind"),
                field: "kind".into(),
                message: format!("unknown kind `{other}`; expected inner, herglotz or jacobi"),
            })
        }
    };
    Ok(OperatorSpecFile { operator, numeric_policy, digest })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<OperatorSpecFile, SpecError> {
        parse_spec_bytes(s.as_bytes())
    }

    #[test]
    fn inner_example() {
        let f = parse(r#"{"kind":"inner","gamma":[1,0],"b":1.0,"zeros":[[[0,1],1]]}"#).unwrap();
        match f.operator {
            Operator::Inner(s) => {
                assert_eq!(s.mean_type_b, 1.0);
                assert_eq!(s.zeros, vec![Zero::new(C::new(0.0, 1.0), 1)]);
            }
            _ => panic!("wrong kind"),
        }
        assert_eq!(f.numeric_policy, NumericPolicy::default());
        assert_eq!(f.digest.len(), 64);
    }

    #[test]
    fn negative_mean_type() {
        let e = parse(r#"{"kind":"inner","b":-1}"#).unwrap_err();
        assert!(matches!(&e, SpecError::Validation { field, .. } if field == "b"), "{e}");
        assert!(e.to_string().contains("mean_type_b"));
    }

    #[test]
    fn jacobi_example() {
        let f = parse(r#"{"kind":"jacobi","a":[1,4,9],"b":[0,0,0]}"#).unwrap();
        match f.operator {
            Operator::Jacobi { spec, trunc } => {
                assert_eq!(spec.a, vec![1.0, 4.0, 9.0]);
                assert_eq!(trunc, Truncation::Full);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn power_rule_uses_cap() {
        let f = parse(r#"{"kind":"jacobi","power_rule":{"power":2},"numeric_policy":{"caps":{"n_max":50}}}"#).unwrap();
        match f.operator {
            Operator::Jacobi { spec, .. } => {
                assert_eq!(spec.n_max(), 50);
                assert_eq!(spec.a[3], 16.0);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn errors_locate_fields() {
        let e = parse("{\"kind\":\"inner\",\n\"zeros\":[[[0,1],\"x\"]]}").unwrap_err();
        match e {
            SpecError::Parse { field, line, .. } => {
                assert_eq!(field, "zeros[0][1]");
                assert_eq!(line, Some(2));
            }
            other => panic!("{other}"),
        }
        let e = parse("{\"kind\":\"inner\",\n\"b\": }").unwrap_err();
        assert!(matches!(e, SpecError::Parse { line: Some(2), .. }), "{e}");
        let e = parse(r#"{"kind":"inner","zeros":[[[0,-1],1]]}"#).unwrap_err();
        assert!(matches!(&e, SpecError::Validation { field, .. } if field == "zeros[0][0]"), "{e}");
        let e = parse(r#"{"kind":"inner","numeric_policy":{"quad_tol":0}}"#).unwrap_err();
        assert!(matches!(&e, SpecError::Validation { field, .. } if field == "numeric_policy.quad_tol"), "{e}");
        let e = parse(r#"{"kind":"inner","bb":1}"#).unwrap_err();
        assert!(matches!(e, SpecError::Parse { .. }));
        let e = parse(r#"{"kind":"toeplitz"}"#).unwrap_err();
        assert!(matches!(&e, SpecError::Parse { field, .. } if field == "kind"));
        let e = parse(r#"{"kind":"jacobi","a":[1,0],"b":[0,0]}"#).unwrap_err();
        assert!(matches!(&e, SpecError::Validation { field, .. } if field == "a[1]"), "{e}");
    }
}
