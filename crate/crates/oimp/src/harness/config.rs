//! Flat key-value configuration files.
//!
//! Every CLI flag has a config-file equivalent under the same name (without
//! the leading dashes): `policy = gt-ucb`. Values given on the command line
//! win over the file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::HarnessError;

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HarnessError::Config(format!("line {}: expected `key = value`, got `{line}`", idx + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, HarnessError> {
    parse_key_values(&fs::read_to_string(path)?)
}

/// CLI-wins merge: take the command-line value if present, otherwise parse
/// the config entry under `key`.
pub fn pick<T: FromStr>(
    cli: Option<T>,
    config: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, HarnessError> {
    if cli.is_some() {
        return Ok(cli);
    }
    match config.get(key) {
        None => Ok(None),
        Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
            HarnessError::Config(format!("config key `{key}`: cannot parse `{raw}`"))
        }),
    }
}

/// Boolean flags: `true/false/1/0/yes/no` in the config file.
pub fn pick_flag(
    cli: bool,
    config: &BTreeMap<String, String>,
    key: &str,
) -> Result<bool, HarnessError> {
    if cli {
        return Ok(true);
    }
    match config.get(key).map(String::as_str) {
        None => Ok(false),
        Some("true") | Some("1") | Some("yes") => Ok(true),
        Some("false") | Some("0") | Some("no") => Ok(false),
        Some(other) => Err(HarnessError::Config(format!(
            "config key `{key}`: cannot parse `{other}` as a flag"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_pairs() {
        let map = parse_key_values("# campaign\npolicy = gt-ucb\nN = 200\n\nseed=7\n").unwrap();
        assert_eq!(map["policy"], "gt-ucb");
        assert_eq!(map["N"], "200");
        assert_eq!(map["seed"], "7");
    }

    #[test]
    fn rejects_lines_without_equals() {
        assert!(parse_key_values("policy gt-ucb\n").is_err());
    }

    #[test]
    fn cli_wins_over_config() {
        let map = parse_key_values("N = 200\n").unwrap();
        assert_eq!(pick(Some(10u64), &map, "N").unwrap(), Some(10));
        assert_eq!(pick::<u64>(None, &map, "N").unwrap(), Some(200));
        assert_eq!(pick::<u64>(None, &map, "runs").unwrap(), None);
        assert!(pick::<u64>(None, &map, "N").is_ok());
        let bad = parse_key_values("N = twelve\n").unwrap();
        assert!(pick::<u64>(None, &bad, "N").is_err());
    }
}
