use crate::args::Format;
use gruss_core::gruss::{reports_to_csv, InequalityReport};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Written at the head of every output. Timestamps live in the `.run.json`
/// sidecar so that the output itself is reproducible byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: Value,
    pub seed: u64,
    pub version: String,
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(argv: &[String], config: Value, seed: u64) -> Self {
        let mut command = vec!["gruss-lab".to_string()];
        command.extend(argv.iter().skip(1).cloned());
        RunManifest {
            command,
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: BTreeMap::new(),
        }
    }
}

pub fn unix_millis() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

pub fn to_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON value serializes");
    text.push('\n');
    text
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// What a command produced, before it is written.
pub struct Payload {
    pub result: Value,
    pub reports: Vec<InequalityReport>,
    pub summary: String,
    pub witnesses: Option<Value>,
}

/// Write the payload to `out` (or stdout), with the witness file and the
/// timestamp sidecar next to `out`.
pub fn emit(
    mut manifest: RunManifest,
    payload: Payload,
    out: Option<&Path>,
    format: Format,
    started: u128,
) -> Result<(), String> {
    let witness_path = match (out, &payload.witnesses) {
        (Some(path), Some(_)) => Some(sibling(path, ".witnesses.json")),
        _ => None,
    };
    if let Some(path) = out {
        manifest.outputs.insert("result".into(), path.display().to_string());
        manifest
            .outputs
            .insert("run".into(), sibling(path, ".run.json").display().to_string());
    }
    if let Some(path) = &witness_path {
        manifest.outputs.insert("witnesses".into(), path.display().to_string());
    }
    let manifest_json = serde_json::to_value(&manifest).expect("manifest serializes");

    let text = match format {
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("manifest".into(), manifest_json.clone());
            doc.insert("result".into(), payload.result);
            to_text(&Value::Object(doc))
        }
        Format::Csv => {
            let preamble = vec![
                format!(
                    "manifest: {}",
                    serde_json::to_string(&manifest_json).expect("manifest serializes")
                ),
                payload.summary.clone(),
            ];
            reports_to_csv(&payload.reports, &preamble).map_err(|e| e.to_string())?
        }
    };

    match out {
        None => print!("{text}"),
        Some(path) => {
            write(path, &text)?;
            if let (Some(wpath), Some(witnesses)) = (&witness_path, &payload.witnesses) {
                write(wpath, &to_text(witnesses))?;
            }
            let run = serde_json::json!({
                "manifest": manifest_json,
                "started_unix_ms": started as u64,
                "finished_unix_ms": unix_millis() as u64,
            });
            write(&sibling(path, ".run.json"), &to_text(&run))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_paths_keep_directory() {
        assert_eq!(
            sibling(Path::new("/tmp/x/out.json"), ".run.json"),
            PathBuf::from("/tmp/x/out.json.run.json")
        );
    }

    #[test]
    fn manifest_replaces_program_path() {
        let argv = vec!["/usr/local/bin/gruss-lab".to_string(), "counterexample".to_string()];
        let m = RunManifest::new(&argv, Value::Null, 0);
        assert_eq!(m.command, vec!["gruss-lab", "counterexample"]);
    }
}
