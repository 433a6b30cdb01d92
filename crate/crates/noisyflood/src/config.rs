//! Scenario files.
//!
//! One `key = value` pair per line, `#` starts a comment, lists are
//! comma-separated. Exactly one of `n`, `R`, `u`, `p_r` may hold a list; that
//! key is the swept parameter. With no list the sweep has a single point over
//! `p_r`.
//!
//! ```text
//! n        = 100
//! area_w   = 600
//! area_h   = 600
//! R        = 100
//! u        = 5
//! p_r      = 0.7, 0.8, 0.9, 1.0
//! p_c_list = 0.5, 0.6, 0.7, 0.8, 0.9, 1.0
//! t_sim    = 1800
//! seed     = 42
//! sources  = all
//! ```
//!
//! `n_intv` optionally overrides the derived snapshot count (required when
//! `u = 0`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use noisyflood_core::{Area, ScenarioConfig, Sources};
use thiserror::Error;

use crate::runner::{SweepSpec, Varied};

const KEYS: [&str; 12] = [
    "n", "area_w", "area_h", "R", "u", "p_r", "p_c_list", "t_sim", "seed", "sources", "n_intv", "vary",
];
const REQUIRED: [&str; 7] = ["n", "area_w", "area_h", "R", "u", "p_r", "t_sim"];

#[derive(Debug, Error, PartialEq)]
pub struct ConfigError {
    pub origin: String,
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.origin)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        match &self.key {
            Some(key) => write!(f, ": {key}: {}", self.message),
            None => write!(f, ": {}", self.message),
        }
    }
}

struct Entry {
    line: usize,
    raw: String,
}

struct Parser<'a> {
    origin: &'a str,
    entries: BTreeMap<String, Entry>,
}

impl Parser<'_> {
    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            origin: self.origin.to_string(),
            line: self.entries.get(key).map(|e| e.line),
            key: Some(key.to_string()),
            message: message.into(),
        }
    }

    fn items(&self, key: &str) -> Option<Vec<&str>> {
        self.entries.get(key).map(|e| e.raw.split(',').map(str::trim).collect())
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(items) = self.items(key) else {
            return Ok(None);
        };
        items
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(key, format!("'{s}' is not a finite number")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn scalar(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.floats(key)? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(_) => Err(self.err(key, "expected a single value")),
        }
    }

    fn required(&self, key: &str) -> Result<f64, ConfigError> {
        self.scalar(key)?.ok_or_else(|| self.err(key, "missing value"))
    }

    fn integer(&self, key: &str, value: f64) -> Result<usize, ConfigError> {
        if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
            Ok(value as usize)
        } else {
            Err(self.err(key, format!("{value} is not a non-negative integer")))
        }
    }

    fn positive(&self, key: &str, value: f64) -> Result<f64, ConfigError> {
        if value > 0.0 {
            Ok(value)
        } else {
            Err(self.err(key, format!("{value} must be positive")))
        }
    }

    fn probability(&self, key: &str, value: f64) -> Result<f64, ConfigError> {
        if (0.0..=1.0).contains(&value) {
            Ok(value)
        } else {
            Err(self.err(key, format!("{value} is outside [0, 1]")))
        }
    }
}

/// Parses scenario text. `origin` names the source in error messages.
pub fn parse_sweep(text: &str, origin: &str) -> Result<SweepSpec, ConfigError> {
    let mut entries = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let anchored = |key: Option<&str>, message: String| ConfigError {
            origin: origin.to_string(),
            line: Some(line),
            key: key.map(str::to_string),
            message,
        };
        let Some((key, value)) = content.split_once('=') else {
            return Err(anchored(None, format!("expected 'key = value', got '{content}'")));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(anchored(Some(key), "unknown key".to_string()));
        }
        if value.is_empty() {
            return Err(anchored(Some(key), "missing value".to_string()));
        }
        let entry = Entry {
            line,
            raw: value.to_string(),
        };
        if let Some(prev) = entries.insert(key.to_string(), entry) {
            return Err(anchored(
                Some(key),
                format!("duplicate key (first set on line {})", prev.line),
            ));
        }
    }

    let p = Parser { origin, entries };
    for key in REQUIRED {
        if !p.entries.contains_key(key) {
            return Err(ConfigError {
                origin: origin.to_string(),
                line: None,
                key: Some(key.to_string()),
                message: "missing required key".to_string(),
            });
        }
    }

    // Swept parameter: explicit `vary`, else the single list-valued key.
    let sweepable = [
        Varied::NodeCount,
        Varied::RadioRange,
        Varied::Speed,
        Varied::RetransmitProbability,
    ];
    let listed: Vec<Varied> = sweepable
        .into_iter()
        .filter(|v| p.items(v.key()).is_some_and(|items| items.len() > 1))
        .collect();
    let varied = match p.entries.get("vary") {
        Some(entry) => {
            let v = Varied::from_key(&entry.raw)
                .ok_or_else(|| p.err("vary", format!("'{}' is not one of n, R, u, p_r", entry.raw)))?;
            if let Some(other) = listed.iter().find(|&&o| o != v) {
                return Err(p.err(
                    other.key(),
                    format!("only the swept parameter '{}' may hold a list", v.key()),
                ));
            }
            v
        }
        None => match listed.as_slice() {
            [] => Varied::RetransmitProbability,
            [one] => *one,
            [_, second, ..] => {
                return Err(p.err(second.key(), "only one parameter may be swept per scenario"));
            }
        },
    };

    let check_value = |v: Varied, x: f64| -> Result<f64, ConfigError> {
        match v {
            Varied::NodeCount => {
                let n = p.integer("n", x)?;
                if n < 2 {
                    return Err(p.err("n", format!("{n} nodes; at least 2 are required")));
                }
                Ok(x)
            }
            Varied::RadioRange => p.positive("R", x),
            Varied::Speed => {
                if x >= 0.0 {
                    Ok(x)
                } else {
                    Err(p.err("u", format!("{x} must be non-negative")))
                }
            }
            Varied::RetransmitProbability => p.probability("p_r", x),
        }
    };

    let mut base_values = BTreeMap::new();
    for v in sweepable {
        let key = v.key();
        let values = p.floats(key)?.expect("required key present");
        for &x in &values {
            check_value(v, x)?;
        }
        if v != varied && values.len() != 1 {
            return Err(p.err(key, "expected a single value"));
        }
        base_values.insert(key, values);
    }
    let values = base_values[varied.key()].clone();
    if values.is_empty() {
        return Err(p.err(varied.key(), "no values"));
    }

    let p_c_grid = match p.floats("p_c_list")? {
        Some(list) => list,
        None => vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
    };
    for &x in &p_c_grid {
        p.probability("p_c_list", x)?;
    }
    if p_c_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(p.err("p_c_list", "values must be strictly ascending"));
    }
    if p_c_grid.last() != Some(&1.0) {
        return Err(p.err("p_c_list", "must end with the noiseless baseline 1.0"));
    }

    let area_w = p.positive("area_w", p.required("area_w")?)?;
    let area_h = p.positive("area_h", p.required("area_h")?)?;
    let sim_time_s = p.positive("t_sim", p.required("t_sim")?)?;
    let seed = match p.entries.get("seed") {
        Some(e) => e
            .raw
            .parse::<u64>()
            .map_err(|_| p.err("seed", format!("'{}' is not a 64-bit unsigned integer", e.raw)))?,
        None => 0,
    };
    let sources = match p.entries.get("sources").map(|e| e.raw.as_str()) {
        None | Some("all") => Sources::All,
        Some(raw) => match raw.parse::<usize>() {
            Ok(k) if k > 0 => Sources::Sample(k),
            _ => return Err(p.err("sources", format!("'{raw}' is neither 'all' nor a positive integer"))),
        },
    };
    let n_intv = match p.scalar("n_intv")? {
        Some(x) => {
            let k = p.integer("n_intv", x)?;
            if k == 0 {
                return Err(p.err("n_intv", "must be at least 1"));
            }
            Some(k)
        }
        None => None,
    };

    let first = |key: &str| base_values[key][0];
    let base = ScenarioConfig {
        n: first("n") as usize,
        area: Area {
            width: area_w,
            height: area_h,
        },
        radio_range_m: first("R"),
        speed_mps: first("u"),
        p_r: first("p_r"),
        p_c_values: p_c_grid.clone(),
        sim_time_s,
        seed,
        sources,
        n_intv,
    };

    let spec = SweepSpec {
        varied,
        values,
        p_c_grid,
        base,
    };
    // Cross-field checks (zero speed without n_intv, oversized samples).
    for &value in &spec.values {
        let cfg = spec.config_for(value);
        if let Err(e) = cfg.validate() {
            let key = match e {
                noisyflood_core::Error::ZeroSpeed => "u",
                noisyflood_core::Error::SampleTooLarge { .. } => "sources",
                _ => varied.key(),
            };
            return Err(p.err(key, e.to_string()));
        }
    }
    Ok(spec)
}

pub fn load_sweep(path: &Path) -> Result<SweepSpec, ConfigError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        origin: origin.clone(),
        line: None,
        key: None,
        message: format!("cannot read config: {e}"),
    })?;
    parse_sweep(&text, &origin)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENARIO1: &str = "\
# sweep over p_r
n = 100
area_w = 600
area_h = 600
R = 100
u = 5
p_r = 0.7, 0.8, 0.9, 1.0
p_c_list = 0.5, 0.6, 0.7, 0.8, 0.9, 1.0
t_sim = 1800
seed = 42
sources = all
";

    #[test]
    fn parses_scenario_one() {
        let spec = parse_sweep(SCENARIO1, "s1.cfg").unwrap();
        assert_eq!(spec.varied, Varied::RetransmitProbability);
        assert_eq!(spec.values, vec![0.7, 0.8, 0.9, 1.0]);
        assert_eq!(spec.p_c_grid.len(), 6);
        assert_eq!(spec.base.n, 100);
        assert_eq!(spec.base.seed, 42);
        assert_eq!(spec.base.sources, Sources::All);
        assert_eq!(spec.config_for(0.9).snapshot_count(), Ok(120));
    }

    #[test]
    fn bad_probability_names_key_and_line() {
        let text = SCENARIO1.replace("p_r = 0.7, 0.8, 0.9, 1.0", "p_r = 1.5");
        let err = parse_sweep(&text, "bad.cfg").unwrap_err();
        assert_eq!(err.key.as_deref(), Some("p_r"));
        assert_eq!(err.line, Some(7));
        assert_eq!(err.to_string(), "bad.cfg:7: p_r: 1.5 is outside [0, 1]");
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = parse_sweep(&format!("{SCENARIO1}speed = 3\n"), "x").unwrap_err();
        assert_eq!(err.line, Some(12));
        assert!(err.to_string().contains("unknown key"));
        let err = parse_sweep(&format!("{SCENARIO1}R = 75\n"), "x").unwrap_err();
        assert!(err.to_string().contains("duplicate key"));
    }

    #[test]
    fn rejects_two_swept_parameters() {
        let text = SCENARIO1.replace("R = 100", "R = 75, 100");
        assert!(parse_sweep(&text, "x").is_err());
    }

    #[test]
    fn missing_key_is_reported() {
        let text = SCENARIO1.replace("t_sim = 1800\n", "");
        let err = parse_sweep(&text, "x").unwrap_err();
        assert_eq!(err.key.as_deref(), Some("t_sim"));
    }

    #[test]
    fn baseline_required_in_grid() {
        let text = SCENARIO1.replace("0.9, 1.0\nt_sim", "0.9\nt_sim");
        let err = parse_sweep(&text, "x").unwrap_err();
        assert_eq!(err.key.as_deref(), Some("p_c_list"));
    }

    #[test]
    fn static_network_needs_snapshot_count() {
        let text = SCENARIO1.replace("u = 5", "u = 0");
        assert_eq!(parse_sweep(&text, "x").unwrap_err().key.as_deref(), Some("u"));
        let spec = parse_sweep(&format!("{text}n_intv = 1\n"), "x").unwrap();
        assert_eq!(spec.base.snapshot_count(), Ok(1));
    }

    #[test]
    fn explicit_vary_and_sampled_sources() {
        let text = SCENARIO1
            .replace("p_r = 0.7, 0.8, 0.9, 1.0", "p_r = 0.8\nvary = n")
            .replace("n = 100", "n = 75, 100, 125")
            .replace("sources = all", "sources = 10");
        let spec = parse_sweep(&text, "x").unwrap();
        assert_eq!(spec.varied, Varied::NodeCount);
        assert_eq!(spec.config_for(125.0).n, 125);
        assert_eq!(spec.base.sources, Sources::Sample(10));
    }
}
