use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{SecondsFormat, Utc};
use serde_json::{Map, Number, Value};

/// Formats `x` with 12 significant digits, `%g` style: plain decimal for
/// moderate exponents, scientific otherwise, trailing zeros dropped.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// JSON number carrying exactly the `sig12` text.
pub fn num(x: f64) -> Value {
    match Number::from_str(&sig12(x)) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub struct RunManifest {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        RunManifest {
            command,
            parameters: Map::new(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.into());
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        m.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        m.insert(
            "timestamp".into(),
            Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true).into(),
        );
        Value::Object(m)
    }
}

/// Writes the main output to `out` (or stdout).
pub fn emit(out: Option<&Path>, body: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, body),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()
        }
    }
}

/// JSON report with the manifest embedded under `"manifest"`.
pub fn emit_json(
    out: Option<&Path>,
    manifest: &RunManifest,
    mut report: Map<String, Value>,
) -> io::Result<()> {
    report.insert("manifest".into(), manifest.to_json());
    let mut text =
        serde_json::to_string_pretty(&Value::Object(report)).map_err(io::Error::other)?;
    text.push('\n');
    emit(out, &text)
}

/// Non-JSON output: the body goes to `out`/stdout untouched and the manifest
/// goes beside it, to `<out>.manifest.json` or to stderr.
pub fn emit_with_side_manifest(
    out: Option<&Path>,
    manifest: &RunManifest,
    body: &str,
) -> io::Result<()> {
    emit(out, body)?;
    let text = serde_json::to_string_pretty(&manifest.to_json()).map_err(io::Error::other)? + "\n";
    match out {
        Some(path) => fs::write(side_path(path), text),
        None => io::stderr().write_all(text.as_bytes()),
    }
}

fn side_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io::Error::other)?;
    for row in rows {
        w.write_record(row).map_err(io::Error::other)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}
