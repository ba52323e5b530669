//! JSON reports, CSV tables and the config hash.
//!
//! Every float is written with 17 significant digits; non-finite values
//! become the strings `"inf"`, `"-inf"` and `"nan"`.

use std::io::{self, Write};
use std::path::Path;

use hyposym_core::conditions::{SupValue, Witness};
use hyposym_core::linalg::{CMat, CVec, C64};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{emit_config, RunConfig};

pub const SCHEMA_VERSION: &str = "1.0";

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn cvec(v: &CVec) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

pub fn cmat(a: &CMat) -> Value {
    Value::Array(
        (0..a.nrows())
            .map(|r| Value::Array((0..a.ncols()).map(|c| complex(a[(r, c)])).collect()))
            .collect(),
    )
}

pub fn witness(w: &Option<Witness>) -> Value {
    match w {
        Some(w) => json!({ "t": num(w.t), "xi": nums(&w.xi) }),
        None => Value::Null,
    }
}

pub fn sup(s: &SupValue) -> Value {
    json!({ "value": num(s.value), "witness": witness(&s.witness) })
}

/// Float text used in JSON and CSV: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    v.serialize(&mut ser)
        .expect("serialising a JSON value into memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(emit_config(cfg).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// A property the input violated, with where it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub property: String,
    pub detail: String,
    pub witness: Value,
}

impl Violation {
    pub fn new(property: &str, detail: impl Into<String>, witness: Value) -> Self {
        Self {
            property: property.into(),
            detail: detail.into(),
            witness,
        }
    }

    fn to_json(&self) -> Value {
        json!({ "property": self.property, "detail": self.detail, "witness": self.witness })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem; written as `<command>_<name>.csv`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produces before it is written out.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub results: Map<String, Value>,
    pub tables: Vec<Table>,
    pub violations: Vec<Violation>,
}

impl Outcome {
    pub fn merge(&mut self, key: &str, other: Outcome) {
        self.results
            .insert(key.into(), Value::Object(other.results));
        self.tables.extend(other.tables);
        self.violations.extend(other.violations);
    }
}

pub fn assemble_report(command: &str, cfg: &RunConfig, outcome: &Outcome) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": "hyposym", "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "config": { "canonical": emit_config(cfg), "sha256": config_hash(cfg) },
        "seed": cfg.output.seed,
        "status": if outcome.violations.is_empty() { "ok" } else { "property-violation" },
        "violations": outcome.violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
        "results": Value::Object(outcome.results.clone()),
    })
}

/// Writes `<command>_report.json` and the CSV tables; returns the paths written.
pub fn write_outputs(
    dir: &Path,
    command: &str,
    report: &Value,
    tables: &[Table],
) -> io::Result<Vec<String>> {
    let with_path =
        |e: io::Error, p: &Path| io::Error::new(e.kind(), format!("{}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| with_path(e, dir))?;
    let mut written = Vec::new();
    let path = dir.join(format!("{command}_report.json"));
    std::fs::write(&path, to_json_string(report)).map_err(|e| with_path(e, &path))?;
    written.push(path.display().to_string());
    for t in tables {
        let path = dir.join(format!("{command}_{}.csv", t.name));
        let mut w = csv::Writer::from_path(&path).map_err(|e| with_path(e.into(), &path))?;
        w.write_record(&t.header)
            .map_err(|e| with_path(e.into(), &path))?;
        for row in &t.rows {
            w.write_record(row)
                .map_err(|e| with_path(e.into(), &path))?;
        }
        w.flush().map_err(|e| with_path(e, &path))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}
