//! `key=value` config files mirroring the long flag names; explicit flags
//! always win. Blank lines and `#` comments are ignored.

use crate::CliError;
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct ConfigMap {
    values: HashMap<String, String>,
}

impl ConfigMap {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }
}

/// Flag value, then config value, then error.
pub fn require(
    flag: Option<String>,
    cfg: &ConfigMap,
    key: &str,
) -> Result<String, CliError> {
    flag.or_else(|| cfg.get(key).map(|s| s.to_string()))
        .ok_or_else(|| CliError::usage(format!("missing --{key} (flag or config)")))
}

/// Flag value, then config value, then the built-in default.
pub fn or_default(flag: Option<String>, cfg: &ConfigMap, key: &str, default: &str) -> String {
    flag.or_else(|| cfg.get(key).map(|s| s.to_string()))
        .unwrap_or_else(|| default.to_string())
}

pub fn parse<T: std::str::FromStr>(raw: &str, key: &str) -> Result<T, CliError> {
    raw.parse::<T>()
        .map_err(|_| CliError::usage(format!("--{key}: cannot parse '{raw}'")))
}
