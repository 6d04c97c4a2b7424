use std::io::Write;

use serde_json::Value;
use tdi_core::io::fmt_g9;
use tdi_core::Error;

use crate::config::RunConfig;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DimensionMismatch { .. }
            | Error::SizeLimit { .. }
            | Error::InvalidGraph(_)
            | Error::InvalidInput(_)
            | Error::Parse(_) => 2,
            Error::EigenConvergence { .. } | Error::NotOptimal(_) | Error::Internal(_) => 3,
            // these come out of certificates built from exact optima, so they
            // can only mean a broken invariant
            Error::InfeasibleCover(_) | Error::SignPattern(_) | Error::TheoremViolation(_) => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// A finished command: the three renderings of its report and, if a checked
/// invariant failed, the reason (exit code 4 after the report is written).
pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// Table form for corpus runs; preferred over `text` when present.
    pub csv: Option<String>,
    pub violation: Option<String>,
}

pub fn emit(cfg: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let body = if cfg.json {
        let mut doc = serde_json::json!({
            "config": cfg,
            "report": outcome.json,
        });
        round_floats(&mut doc);
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    } else {
        outcome.csv.clone().unwrap_or_else(|| outcome.text.clone())
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| CliError::input(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Rounds every non-integer number to 9 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = n.as_f64().expect("float");
            let r: f64 = fmt_g9(x).parse().expect("formatted float parses");
            if let Some(num) = serde_json::Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn g9(x: f64) -> String {
    fmt_g9(x)
}

pub fn g9_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| fmt_g9(x)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn int_list(xs: &[i64]) -> String {
    let parts: Vec<String> = xs.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_rounded_integers_kept() {
        let mut v = serde_json::json!({"a": 5f64.sqrt(), "b": [3, 0.1 + 0.2], "c": u64::MAX});
        round_floats(&mut v);
        assert_eq!(v.to_string(), r#"{"a":2.23606798,"b":[3,0.3],"c":18446744073709551615}"#);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Parse("x".into())).code, 2);
        assert_eq!(CliError::from(Error::Internal("x".into())).code, 3);
        assert_eq!(CliError::from(Error::TheoremViolation("x".into())).code, 4);
    }
}
