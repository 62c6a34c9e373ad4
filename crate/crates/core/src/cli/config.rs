//! `key = value` run files and their merge into the argument list.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::Command;

use super::CliError;

/// Parsed run file with `_` in keys normalized to `-`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub entries: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
                line: index + 1,
                message: format!("expected key = value, found {line:?}"),
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if key.is_empty() {
                return Err(CliError::Config {
                    line: index + 1,
                    message: "empty key".into(),
                });
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }
}

const GLOBAL_WITH_VALUE: [&str; 3] = ["--config", "--format", "--out"];

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = text.strip_prefix("--config=") {
            return Some(path.into());
        }
    }
    None
}

/// Index of the first token naming a subcommand.
fn subcommand_index(args: &[OsString], root: &Command) -> Option<usize> {
    args.iter()
        .skip(1)
        .position(|a| root.find_subcommand(a.to_string_lossy().as_ref()).is_some())
        .map(|i| i + 1)
}

/// Index just past the leading global options.
fn global_prefix_end(args: &[OsString]) -> usize {
    let mut i = 1;
    while i < args.len() {
        let text = args[i].to_string_lossy();
        if GLOBAL_WITH_VALUE.contains(&text.as_ref()) {
            i += 2;
        } else if GLOBAL_WITH_VALUE
            .iter()
            .any(|g| text.starts_with(&format!("{g}=")))
        {
            i += 1;
        } else {
            break;
        }
    }
    i.min(args.len())
}

fn flag_tokens(sub: &Command, key: &str, value: &str) -> Option<Vec<OsString>> {
    let arg = sub.get_arguments().find(|a| {
        a.get_long() == Some(key) || a.get_all_aliases().is_some_and(|al| al.contains(&key))
    })?;
    let long = arg.get_long()?;
    if arg.get_action().takes_values() {
        Some(vec![format!("--{long}={value}").into()])
    } else if matches!(value, "true" | "yes" | "1") {
        Some(vec![format!("--{long}").into()])
    } else {
        Some(Vec::new())
    }
}

/// Inserts run-file settings ahead of the user's own flags so that the
/// latter win.
pub fn merge_config(args: Vec<OsString>, root: &Command) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let config = RunConfig::load(Path::new(&path))?;
    let mut args = args;
    let position = match subcommand_index(&args, root) {
        Some(i) => i,
        None => {
            let command = config
                .entries
                .get("command")
                .ok_or_else(|| CliError::Config {
                    line: 0,
                    message: "no command on the command line or in the run file".into(),
                })?;
            let at = global_prefix_end(&args);
            for (offset, word) in command.split_whitespace().enumerate() {
                args.insert(at + offset, word.into());
            }
            at
        }
    };
    let name = args[position].to_string_lossy().into_owned();
    let Some(sub) = root.find_subcommand(&name) else {
        return Ok(args);
    };
    let known_anywhere = |key: &str| {
        key == "command"
            || root
                .get_subcommands()
                .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key)))
            || root.get_arguments().any(|a| a.get_long() == Some(key))
    };
    let mut injected = Vec::new();
    for (key, value) in &config.entries {
        if key == "command" || key == "config" {
            continue;
        }
        if let Some(tokens) = flag_tokens(sub, key, value) {
            injected.extend(tokens);
        } else if let Some(tokens) = flag_tokens(root, key, value) {
            injected.extend(tokens);
        } else if !known_anywhere(key) {
            return Err(CliError::Config {
                line: 0,
                message: format!("unknown key {key:?}"),
            });
        }
    }
    let tail = args.split_off(position + 1);
    args.extend(injected);
    args.extend(tail);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn parses_key_values() {
        let c = RunConfig::parse("# scan\nq = 2/1\nmax_state=3  # inline\n\n").unwrap();
        assert_eq!(c.entries["q"], "2/1");
        assert_eq!(c.entries["max-state"], "3");
        assert!(RunConfig::parse("oops").is_err());
    }

    #[test]
    fn finds_subcommand() {
        let root = crate::cli::Cli::command();
        let args: Vec<OsString> = ["prog", "--format", "csv", "chain", "--q", "2"]
            .iter()
            .map(Into::into)
            .collect();
        assert_eq!(subcommand_index(&args, &root), Some(3));
        assert_eq!(global_prefix_end(&args), 3);
        let bare: Vec<OsString> = ["prog", "--config=x", "--max-state", "1"]
            .iter()
            .map(Into::into)
            .collect();
        assert_eq!(subcommand_index(&bare, &root), None);
        assert_eq!(global_prefix_end(&bare), 2);
    }
}
