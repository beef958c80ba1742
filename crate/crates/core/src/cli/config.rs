//! Flat parameter maps: defaults, then a config file, then `GL2LAB_*`
//! environment variables, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

pub const ENV_PREFIX: &str = "GL2LAB_";

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Parameter map with the keys that were offered but not recognised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, String>,
    pub ignored: Vec<String>,
    pub warnings: Vec<String>,
}

/// Parse `key = value` lines (`#` starts a comment) or a flat JSON object.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!("config line {}: expected key=value, got {raw:?}", i + 1)));
        };
        let k = k.trim();
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(ConfigError(format!("config line {}: bad key {k:?}", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_json(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ConfigError(format!("config line {}: {e}", e.line())))?;
    let serde_json::Value::Object(map) = v else {
        return Err(ConfigError("config line 1: expected a JSON object".into()));
    };
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Array(items) => items
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            serde_json::Value::Object(_) => {
                return Err(ConfigError(format!("config key {k:?}: nested objects are not supported")))
            }
            other => other.to_string(),
        };
        out.insert(k, s);
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_uppercase().replace('-', "_"))
}

impl Params {
    /// Overlay `file`, then the environment via `env`, then `flags`.
    pub fn resolve<E>(
        defaults: &[(&str, &str)],
        file: &BTreeMap<String, String>,
        env: E,
        flags: &[(&str, Option<String>)],
    ) -> Self
    where
        E: Fn(&str) -> Option<String>,
    {
        let mut p = Params::default();
        for (k, v) in defaults {
            p.values.insert(k.to_string(), v.to_string());
        }
        for (k, v) in file {
            if p.values.contains_key(k) {
                p.values.insert(k.clone(), v.clone());
            } else {
                p.ignored.push(k.clone());
                p.warnings.push(format!("unknown config key {k:?} ignored"));
            }
        }
        for (k, _) in defaults {
            if let Some(v) = env(&env_name(k)) {
                p.values.insert(k.to_string(), v);
            }
        }
        for (k, v) in flags {
            if let Some(v) = v {
                if p.values.contains_key(*k) {
                    p.values.insert(k.to_string(), v.clone());
                } else {
                    p.ignored.push(k.to_string());
                    p.warnings.push(format!("--{k} has no effect on this command"));
                }
            }
        }
        p
    }

    pub fn snapshot(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn str(&self, key: &str) -> Result<&str, ConfigError> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| ConfigError(format!("missing parameter {key}")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, s: &str) -> Result<T, ConfigError> {
        s.trim()
            .parse()
            .map_err(|_| ConfigError(format!("invalid value {s:?} for {key}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let s = self.str(key)?;
        self.parse(key, s)
    }

    pub fn i64(&self, key: &str) -> Result<i64, ConfigError> {
        let s = self.str(key)?;
        self.parse(key, s)
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        let s = self.str(key)?;
        self.parse(key, s)
    }

    pub fn u64(&self, key: &str) -> Result<u64, ConfigError> {
        let s = self.str(key)?;
        self.parse(key, s)
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.list(key)
    }

    pub fn i64_list(&self, key: &str) -> Result<Vec<i64>, ConfigError> {
        self.list(key)
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>, ConfigError> {
        let s = self.str(key)?;
        let items: Vec<T> = s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| self.parse(key, x))
            .collect::<Result<_, _>>()?;
        if items.is_empty() {
            return Err(ConfigError(format!("{key} needs at least one value")));
        }
        Ok(items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULTS: &[(&str, &str)] = &[("epsilon", "0.02"), ("qmax", "15")];

    #[test]
    fn empty_file_gives_defaults() {
        let file = parse_config("").unwrap();
        let p = Params::resolve(DEFAULTS, &file, |_| None, &[]);
        assert_eq!(p.f64("epsilon").unwrap(), 0.02);
        assert_eq!(p.usize("qmax").unwrap(), 15);
        assert!(p.ignored.is_empty());
    }

    #[test]
    fn flags_win() {
        let file = parse_config("epsilon = 0.03\n").unwrap();
        let env = |k: &str| (k == "GL2LAB_EPSILON").then(|| "0.04".to_string());
        let p = Params::resolve(DEFAULTS, &file, env, &[]);
        assert_eq!(p.f64("epsilon").unwrap(), 0.04);
        let p = Params::resolve(DEFAULTS, &file, env, &[("epsilon", Some("0.05".into()))]);
        assert_eq!(p.f64("epsilon").unwrap(), 0.05);
    }

    #[test]
    fn unknown_keys_are_recorded() {
        let file = parse_config("{\"epsilon\": 0.02, \"colour\": \"red\", \"qs\": [1, 2]}").unwrap();
        assert_eq!(file["qs"], "1,2");
        let p = Params::resolve(DEFAULTS, &file, |_| None, &[]);
        assert_eq!(p.ignored, vec!["colour".to_string(), "qs".to_string()]);
        assert_eq!(p.warnings.len(), 2);
    }

    #[test]
    fn malformed_lines_are_named() {
        let e = parse_config("# header\nepsilon = 0.02\nqmax 15\n").unwrap_err();
        assert!(e.0.contains("line 3"), "{e}");
        let e = parse_config("{\n\"a\": 1,\n}").unwrap_err();
        assert!(e.0.contains("line 3"), "{e}");
    }

    #[test]
    fn lists() {
        let file = parse_config("qmax = 1, 2,3").unwrap();
        let p = Params::resolve(DEFAULTS, &file, |_| None, &[]);
        assert_eq!(p.i64_list("qmax").unwrap(), vec![1, 2, 3]);
        assert!(p.usize("qmax").is_err());
    }
}
