use std::fmt;

use nalgebra::DVector;
use opinion_game::error::{Error, GraphError};
use serde_json::{Map, Value};

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Unsupported(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Graph(GraphError::TooLarge { .. } | GraphError::Disconnected) => {
                CliError::Unsupported(msg)
            }
            Error::Graph(_) | Error::InvalidArgument(_) => CliError::Input(msg),
            Error::Linalg(_) | Error::NotConverged { .. } | Error::Numerical(_) => {
                CliError::Numerical(msg)
            }
            Error::Unanchored { .. } | Error::Unsupported(_) => CliError::Unsupported(msg),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        Error::from(e).into()
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn fin(x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Numerical(format!(
            "non-finite value {x} in report"
        )))
    }
}

pub fn fins(v: &DVector<f64>) -> CliResult<Vec<f64>> {
    v.iter().map(|&x| fin(x)).collect()
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn round_all(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = Value::from(round12(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_all),
        Value::Object(map) => map.values_mut().for_each(round_all),
        _ => {}
    }
}

/// One `path<TAB>value` row per leaf of `v`.
pub fn tsv_rows(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(items) if !items.is_empty() => items
                .iter()
                .enumerate()
                .for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
            other => out.push_str(&format!("{prefix}\t{other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

pub struct RunReport {
    pub command: String,
    pub input: Option<Value>,
    pub result: Value,
    pub tolerances: Value,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), Value::from(self.command.clone()));
        map.insert("input".into(), self.input.clone().unwrap_or(Value::Null));
        map.insert("result".into(), self.result.clone());
        map.insert("tolerances".into(), self.tolerances.clone());
        map.insert("elapsed_ms".into(), Value::from(self.elapsed_ms));
        let mut v = Value::Object(map);
        round_all(&mut v);
        v
    }

    pub fn to_tsv(&self) -> String {
        let mut result = self.result.clone();
        round_all(&mut result);
        tsv_rows(&result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn twelve_digits() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(1.125), 1.125);
        assert_eq!(round12(-2.0 / 3.0 * 1e-7), -6.66666666667e-8);
        let mut v = json!({"a": [0.1 + 0.2, 3], "b": {"c": 2.0 / 3.0}});
        round_all(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[0.3,3],"b":{"c":0.666666666667}}"#);
    }

    #[test]
    fn tsv_paths() {
        let v = json!({"opinions": [0.25, 0.5], "cost": 0.375, "tag": "x"});
        assert_eq!(
            tsv_rows(&v),
            "cost\t0.375\nopinions.0\t0.25\nopinions.1\t0.5\ntag\tx\n"
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::from(Error::Unsupported("x".into())).exit_code(),
            4
        );
        assert_eq!(CliError::from(GraphError::SelfLoop(0)).exit_code(), 2);
        assert_eq!(
            CliError::from(Error::NotConverged {
                iterations: 1,
                change: 1.0
            })
            .exit_code(),
            3
        );
        assert!(fin(f64::NAN).is_err());
    }
}
