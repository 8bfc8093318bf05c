//! Flat key-value run configuration with a typed schema per subcommand.
//! Unknown keys are rejected before any computation starts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Text,
    FloatList,
}

#[derive(Debug, Clone)]
pub struct SchemaEntry {
    pub key: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

pub struct Schema {
    pub entries: Vec<SchemaEntry>,
}

impl Schema {
    pub fn new(entries: Vec<SchemaEntry>) -> Self {
        Self { entries }
    }

    fn entry(&self, key: &str) -> Option<&SchemaEntry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

pub fn entry(key: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> SchemaEntry {
    SchemaEntry {
        key,
        kind,
        default,
        help,
    }
}

/// Parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = std::result::Result<T, ConfigError>;

impl RunConfig {
    /// Assemble from an optional config file plus `--set key=value`
    /// overrides, validating every key and value against the schema.
    pub fn load(schema: &Schema, path: Option<&Path>, sets: &[String]) -> CResult<Self> {
        let mut values: BTreeMap<String, String> = BTreeMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError(format!("cannot read config {}: {e}", p.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    ConfigError(format!("config line {} is not key = value", lineno + 1))
                })?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        for s in sets {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("--set needs key=value, got {s}")))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        // validate keys and value shapes
        for (k, v) in &values {
            let e = schema
                .entry(k)
                .ok_or_else(|| ConfigError(format!("unknown config key: {k}")))?;
            match e.kind {
                Kind::Float => {
                    v.parse::<f64>()
                        .map_err(|_| ConfigError(format!("key {k}: bad float {v}")))?;
                }
                Kind::Int => {
                    v.parse::<i64>()
                        .map_err(|_| ConfigError(format!("key {k}: bad integer {v}")))?;
                }
                Kind::FloatList => {
                    for part in v.split(',') {
                        part.trim()
                            .parse::<f64>()
                            .map_err(|_| ConfigError(format!("key {k}: bad float {part}")))?;
                    }
                }
                Kind::Text => {}
            }
        }
        // fill defaults
        for e in &schema.entries {
            if let Some(d) = e.default {
                values.entry(e.key.to_string()).or_insert_with(|| d.to_string());
            }
        }
        Ok(Self { values })
    }

    pub fn float(&self, key: &str) -> CResult<f64> {
        self.values
            .get(key)
            .ok_or_else(|| ConfigError(format!("missing required key: {key}")))?
            .parse::<f64>()
            .map_err(|_| ConfigError(format!("key {key}: not a float")))
    }

    pub fn int(&self, key: &str) -> CResult<i64> {
        self.values
            .get(key)
            .ok_or_else(|| ConfigError(format!("missing required key: {key}")))?
            .parse::<i64>()
            .map_err(|_| ConfigError(format!("key {key}: not an integer")))
    }

    pub fn text(&self, key: &str) -> CResult<&str> {
        self.values
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| ConfigError(format!("missing required key: {key}")))
    }

    pub fn float_list(&self, key: &str) -> CResult<Vec<f64>> {
        Ok(self
            .text(key)?
            .split(',')
            .map(|p| p.trim().parse::<f64>().unwrap())
            .collect())
    }

    pub fn maybe(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// Render the fully resolved configuration (for --dry-run), annotated
    /// with the schema help lines.
    pub fn render(&self, schema: &Schema) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            if let Some(e) = schema.entry(k) {
                let _ = writeln!(out, "# {}", e.help);
            }
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
