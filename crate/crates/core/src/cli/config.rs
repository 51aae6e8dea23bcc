//! `key = value` config files merged into the argument list.
//!
//! Keys are long flag names (`k-min` or `k_min`). Entries are inserted right
//! after the subcommand, and only for flags the command line does not already
//! carry, so explicit flags always win. Keys that belong to other subcommands
//! are ignored; keys no subcommand knows are rejected.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Syntax(String),
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax(format!("config line {}: expected key = value", n + 1)));
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError::Syntax(format!("config line {}: empty key", n + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Locates `--config PATH` / `--config=PATH` in raw arguments.
pub fn find_config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return iter.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn flag_present(args: &[OsString], long: &str) -> bool {
    let bare = format!("--{long}");
    let eq = format!("--{long}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == bare || s.starts_with(&eq)
    })
}

/// Returns `args` with the config entries spliced in after the subcommand.
pub fn merge(cmd: &Command, args: Vec<OsString>, path: &Path) -> Result<Vec<OsString>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
    let entries = parse(&text)?;
    // The subcommand is the first argument naming one.
    let Some((pos, sub)) = args.iter().enumerate().skip(1).find_map(|(i, a)| {
        cmd.find_subcommand(a.to_string_lossy().as_ref()).map(|s| (i, s))
    }) else {
        return Ok(args);
    };
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let known_here = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str()));
        let Some(arg) = known_here else {
            let known_elsewhere = cmd
                .get_subcommands()
                .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key.as_str())));
            if known_elsewhere {
                continue;
            }
            return Err(ConfigError::Syntax(format!("unknown config key '{key}'")));
        };
        if flag_present(&args, &key) {
            continue;
        }
        let takes_value = arg.get_action().takes_values();
        if takes_value {
            extra.push(format!("--{key}={value}").into());
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => extra.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                other => {
                    return Err(ConfigError::Syntax(format!(
                        "config key '{key}' is a switch, got '{other}'"
                    )))
                }
            }
        }
    }
    let mut merged = args;
    merged.splice(pos + 1..pos + 1, extra);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let e = parse("# c\ndim = 3\nk_min=0.5 # trailing\n\n").unwrap();
        assert_eq!(e, vec![("dim".into(), "3".into()), ("k-min".into(), "0.5".into())]);
        assert!(parse("nonsense").is_err());
    }

    #[test]
    fn finds_path() {
        let a: Vec<OsString> = ["x", "eta-table", "--config=c.toml"].iter().map(Into::into).collect();
        assert_eq!(find_config_path(&a), Some("c.toml".into()));
        let a: Vec<OsString> = ["x", "--config", "c"].iter().map(Into::into).collect();
        assert_eq!(find_config_path(&a), Some("c".into()));
    }
}
