//! Self-describing output files: CSV with `#` metadata lines and JSON with a
//! `meta` object.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::FormatArg;

/// Ordered `key = value` pairs describing how an artifact was produced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Meta(Vec<(String, String)>);

impl Meta {
    pub fn new(command: &str) -> Meta {
        let mut m = Meta::default();
        m.push("tool", concat!("cohsim ", env!("CARGO_PKG_VERSION")));
        m.push("command", command);
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Meta {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    fn to_json(&self) -> Value {
        Value::Object(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect::<Map<_, _>>(),
        )
    }
}

/// A rendered artifact ready to be written.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub format: FormatArg,
    pub text: String,
}

/// CSV body preceded by one `# key: value` line per metadata entry.
pub fn csv_text(meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> Result<Artifact> {
    let mut out = String::new();
    for (k, v) in meta.entries() {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    out.push_str(std::str::from_utf8(&w.into_inner()?)?);
    Ok(Artifact {
        format: FormatArg::Csv,
        text: out,
    })
}

/// Pretty JSON of `body` with a leading `meta` field. `body` must serialize
/// to an object.
pub fn json_text(meta: &Meta, body: &impl Serialize) -> Result<Artifact> {
    let mut obj = Map::new();
    obj.insert("meta".into(), meta.to_json());
    match serde_json::to_value(body)? {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("data".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
    text.push('\n');
    Ok(Artifact {
        format: FormatArg::Json,
        text,
    })
}

/// Plain JSON without metadata, for files that other commands read back.
pub fn plain_json(body: &impl Serialize) -> Result<Artifact> {
    let mut text = serde_json::to_string_pretty(body)?;
    text.push('\n');
    Ok(Artifact {
        format: FormatArg::Json,
        text,
    })
}

/// Where an artifact goes: a file, or standard output for `-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl Destination {
    pub fn from_path(path: &Path) -> Destination {
        if path.as_os_str() == "-" {
            Destination::Stdout
        } else {
            Destination::File(path.to_path_buf())
        }
    }

    pub fn write(&self, artifact: &Artifact) -> Result<()> {
        match self {
            Destination::Stdout => {
                let mut out = std::io::stdout().lock();
                out.write_all(artifact.text.as_bytes())?;
                out.flush()?;
            }
            Destination::File(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).with_context(|| format!("out: cannot create {}", dir.display()))?;
                }
                std::fs::write(p, &artifact.text).with_context(|| format!("out: cannot write {}", p.display()))?;
            }
        }
        Ok(())
    }
}

/// Output format from the flag, else from the file extension, else `default`.
pub fn resolve_format(flag: Option<FormatArg>, out: Option<&Path>, default: FormatArg) -> FormatArg {
    flag.or_else(|| {
        match out?.extension()?.to_str()? {
            "json" => Some(FormatArg::Json),
            "csv" => Some(FormatArg::Csv),
            "quil" => Some(FormatArg::Quil),
            _ => None,
        }
    })
    .unwrap_or(default)
}

/// Compact decimal for summaries: at most six decimals, trailing zeros cut.
pub fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}
