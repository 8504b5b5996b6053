//! `key = value` files: limits defaults and corpus case descriptions.

use std::collections::BTreeMap;
use std::time::Duration;

use lpsynth::SearchLimits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Blank lines and lines starting with `#` are skipped.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn name_list(v: &str) -> std::collections::BTreeSet<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

/// Limits and guards that can come from a config file and be overridden on
/// the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Defaults {
    pub limits: SearchLimits,
    pub max_atoms: usize,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            limits: SearchLimits::default(),
            max_atoms: lpsynth::ground::DEFAULT_MAX_ATOMS,
        }
    }
}

impl Defaults {
    pub fn apply(&mut self, kv: &BTreeMap<String, String>) -> Result<(), ConfigError> {
        let bad = |k: &str, v: &str| ConfigError {
            line: 0,
            message: format!("bad value for `{k}`: `{v}`"),
        };
        for (k, v) in kv {
            match k.as_str() {
                "depth" => self.limits.max_depth = v.parse().map_err(|_| bad(k, v))?,
                "inferences" => self.limits.max_inferences = v.parse().map_err(|_| bad(k, v))?,
                "timeout" => {
                    let secs: f64 = v.parse().map_err(|_| bad(k, v))?;
                    self.limits.wall_time =
                        Duration::try_from_secs_f64(secs).map_err(|_| bad(k, v))?;
                }
                "max_atoms" => self.max_atoms = v.parse().map_err(|_| bad(k, v))?,
                _ => {
                    return Err(ConfigError {
                        line: 0,
                        message: format!("unknown key `{k}`"),
                    })
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_applies() {
        let kv = parse_kv("# limits\ndepth = 5\n\ntimeout=0.5\nmax_atoms = 10\n").unwrap();
        let mut d = Defaults::default();
        d.apply(&kv).unwrap();
        assert_eq!(d.limits.max_depth, 5);
        assert_eq!(d.limits.wall_time, Duration::from_millis(500));
        assert_eq!(d.max_atoms, 10);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_kv("a = 1\nnonsense").unwrap_err().line, 2);
        let mut d = Defaults::default();
        assert!(d.apply(&parse_kv("colour = red").unwrap()).is_err());
        assert!(d.apply(&parse_kv("depth = -1").unwrap()).is_err());
    }

    #[test]
    fn name_lists() {
        assert_eq!(
            name_list(" p, r ,,").into_iter().collect::<Vec<_>>(),
            vec!["p", "r"]
        );
        assert!(name_list("").is_empty());
    }
}
