use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const OUTPUT_DIR_ENV: &str = "LVRES_OUTPUT_DIR";

/// Where a command writes: an explicit `--out` (relative paths resolved
/// against the output directory when one is set), else `default_name` in the
/// output directory, else standard output.
pub fn destination(out: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    }
}

pub fn emit(bytes: &[u8], dest: Option<&Path>) -> Result<(), CliError> {
    match dest {
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.display().to_string(), source };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io_err)?;
            }
            std::fs::write(path, bytes).map_err(io_err)
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn json_bytes(value: &serde_json::Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text.into_bytes()
}
