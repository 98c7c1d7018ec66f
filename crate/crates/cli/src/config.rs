//! `key = value` configuration, with `#` comments.

use std::collections::BTreeMap;
use std::path::Path;

use crate::args::Format;

pub const PRECISION_ENV: &str = "FERMIDIM_PRECISION_BITS";

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Config {
    pub precision_bits: Option<usize>,
    pub format: Option<Format>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
}

pub fn parse(text: &str) -> Result<Config, String> {
    let mut raw = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", k + 1))?;
        raw.insert(key.trim().to_string(), value.trim().to_string());
    }
    let mut cfg = Config::default();
    for (key, value) in raw {
        let bad = |what: &str| format!("config key `{key}`: {what} `{value}`");
        match key.as_str() {
            "precision_bits" => cfg.precision_bits = Some(value.parse().map_err(|_| bad("not an integer"))?),
            "points" => cfg.points = Some(value.parse().map_err(|_| bad("not an integer"))?),
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("not an integer"))?),
            "format" => {
                cfg.format = Some(match value.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    "text" => Format::Text,
                    _ => return Err(bad("unknown format")),
                })
            }
            _ => return Err(format!("unknown config key `{key}`")),
        }
    }
    Ok(cfg)
}

pub fn load(path: &Path) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text)
}

/// Flag, then environment, then config file.
pub fn precision_bits(flag: Option<usize>, cfg: &Config) -> Result<Option<usize>, String> {
    let env = match std::env::var(PRECISION_ENV) {
        Ok(v) => Some(v.trim().parse().map_err(|_| format!("{PRECISION_ENV}: not an integer `{v}`"))?),
        Err(_) => None,
    };
    let bits = flag.or(env).or(cfg.precision_bits);
    match bits {
        Some(b) if b < 53 => Err(format!("precision must be at least 53 bits, got {b}")),
        _ => Ok(bits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = parse("# defaults\nprecision_bits = 256\nformat = csv # inline\n\nseed=7").unwrap();
        assert_eq!(c.precision_bits, Some(256));
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.seed, Some(7));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(parse("colour = red").is_err());
        assert!(parse("precision_bits").is_err());
        assert!(parse("precision_bits = many").is_err());
    }
}
