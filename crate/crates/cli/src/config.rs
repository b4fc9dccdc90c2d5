//! `--config FILE` support. Each `key = value` line of the file becomes the
//! flag `--key value`, inserted right after the subcommand so that flags
//! given on the command line come later and win.

use std::ffi::OsString;

use crate::error::CliError;

fn parse_file(text: &str) -> Result<(Option<String>, Vec<OsString>), CliError> {
    let mut command = None;
    let mut flags = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::Usage(format!("config line {}: bad key `{key}`", n + 1)));
        }
        match (key.as_str(), value) {
            ("command", v) => command = Some(v.to_string()),
            (_, "true") => flags.push(format!("--{key}").into()),
            (_, "false") => {}
            (_, v) => {
                flags.push(format!("--{key}").into());
                flags.push(v.into());
            }
        }
    }
    Ok((command, flags))
}

/// Remove `--config` from `argv` and splice in the flags from the file.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    rest.extend(it.next());
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            path = Some(it.next().ok_or_else(|| CliError::Usage("--config needs a file path".into()))?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path)
        .map_err(|source| CliError::Io { path: path.to_string_lossy().into_owned(), source })?;
    let (command, flags) = parse_file(&text)?;

    let has_subcommand = rest.get(1).is_some_and(|a| !a.to_string_lossy().starts_with('-'));
    if !has_subcommand {
        let command = command.ok_or_else(|| CliError::Usage("no command given on the command line or in the config file".into()))?;
        rest.insert(1, command.into());
    }
    let tail = rest.split_off(2);
    rest.extend(flags);
    rest.extend(tail);
    Ok(rest)
}
