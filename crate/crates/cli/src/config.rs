//! Key-value config files: `key = value` per line, `#` starts a comment.
//! Keys are long flag names of the chosen subcommand; values from the
//! command line win.

use std::ffi::OsString;

use clap::{ArgAction, Command};

use crate::error::CliError;

pub const OUT_DIR_KEY: &str = "out-dir";

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Input(format!("config line {}: expected key = value", n + 1)));
            };
            let key = key.trim().to_string();
            if entries.iter().any(|(k, _)| *k == key) {
                return Err(CliError::Input(format!("config line {}: duplicate key {key:?}", n + 1)));
            }
            entries.push((key, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Global flags that take a value, so their values are skipped when locating
/// the subcommand in `argv`.
const GLOBAL_VALUE_FLAGS: [&str; 3] = ["--config", "--out-dir", "--threads"];

/// Inserts config entries as flags right after the subcommand tokens
/// `path`. Unknown keys are usage errors.
pub fn inject(argv: &[OsString], root: &Command, path: &[&str], config: &ConfigFile) -> Result<Vec<OsString>, CliError> {
    let mut leaf = root;
    for name in path {
        leaf = leaf
            .find_subcommand(name)
            .ok_or_else(|| CliError::Usage(format!("unknown subcommand {name}")))?;
    }
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in &config.entries {
        if key == OUT_DIR_KEY {
            continue;
        }
        let arg = leaf
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| CliError::Usage(format!("unknown config key {key:?}")))?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => extra.push(format!("--{key}").into()),
                "false" => {}
                other => return Err(CliError::Usage(format!("config key {key:?}: expected true or false, got {other:?}"))),
            }
        } else {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        }
    }

    let mut at = 1;
    let mut matched = 0;
    while at < argv.len() && matched < path.len() {
        let token = argv[at].to_string_lossy();
        if GLOBAL_VALUE_FLAGS.contains(&token.as_ref()) {
            at += 2;
            continue;
        }
        if token == path[matched] {
            matched += 1;
        }
        at += 1;
    }
    let mut out = argv[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::CommandFactory;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let c = ConfigFile::parse("# grid\ndirections = 16\n\nmode=fast # inline\n").unwrap();
        assert_eq!(c.get("directions"), Some("16"));
        assert_eq!(c.get("mode"), Some("fast"));
        assert!(ConfigFile::parse("directions 16").is_err());
        assert!(ConfigFile::parse("a = 1\na = 2").is_err());
    }

    #[test]
    fn injects_after_nested_subcommand() {
        let c = ConfigFile::parse("directions = 16\nexport-points = true\nout-dir = x").unwrap();
        let argv = os(&["pht", "--threads", "2", "sample", "run", "--eps", "0.3"]);
        let out = inject(&argv, &Cli::command(), &["sample", "run"], &c).unwrap();
        assert_eq!(
            out,
            os(&["pht", "--threads", "2", "sample", "run", "--directions", "16", "--export-points", "--eps", "0.3"])
        );
    }

    #[test]
    fn rejects_unknown_keys() {
        let c = ConfigFile::parse("colour = red").unwrap();
        let argv = os(&["pht", "verify"]);
        assert!(matches!(
            inject(&argv, &Cli::command(), &["verify"], &c),
            Err(CliError::Usage(_))
        ));
    }
}
