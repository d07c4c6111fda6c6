use crate::CliError;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Record of one run, written next to its output as `<out>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub version: &'static str,
    pub parameters: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub exit_code: u8,
    pub duration_seconds: f64,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

/// Writes `text` to `out` and the manifest beside it.
pub fn finish(
    subcommand: &'static str,
    started: Instant,
    parameters: serde_json::Value,
    inputs: &[&Path],
    out: &Path,
    text: &str,
    exit_code: u8,
) -> Result<u8, CliError> {
    write_output(out, text)?;
    let manifest = RunManifest {
        subcommand,
        version: env!("CARGO_PKG_VERSION"),
        parameters,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: vec![out.display().to_string()],
        exit_code,
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_output(&manifest_path(out), &json)?;
    Ok(exit_code)
}
