//! Flat `key = value` configuration files, precedence handling (flags
//! override file values, file values override defaults), and the run
//! manifest that pins a fully resolved configuration next to its outputs.
//!
//! A manifest is itself a valid configuration file: feeding it back through
//! `--config` reproduces the run. Provenance (value sources, artifact list,
//! computed reports) travels in `#` comment lines that the parser skips.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::evaluation::{CenterLabel, ExperimentConfig, GraphSpec};
use crate::generators::{DEFAULT_DEGREE_RANGE, DEFAULT_LAMBDA};
use crate::rng::derive_seed;

/// Where a resolved value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Default,
    File,
    Flag,
}

impl Source {
    fn as_str(&self) -> &'static str {
        match self {
            Source::Default => "default",
            Source::File => "file",
            Source::Flag => "flag",
        }
    }
}

/// Canonical key order used for validation and manifest output.
pub const KNOWN_KEYS: [&str; 17] = [
    "model",
    "n",
    "m_links",
    "d_min",
    "d_max",
    "lambda",
    "ring_degree",
    "rewire_prob",
    "graph_seed",
    "radius",
    "k_hidden",
    "num_clusters",
    "max_iter",
    "restarts",
    "centers",
    "repetitions",
    "seed",
];

/// A layered key-value store with per-key provenance.
#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
    sources: BTreeMap<String, Source>,
}

impl Default for Settings {
    fn default() -> Self {
        let mut s = Settings {
            values: BTreeMap::new(),
            sources: BTreeMap::new(),
        };
        let (d_min, d_max) = DEFAULT_DEGREE_RANGE;
        for (k, v) in [
            ("model", "homogeneous".to_string()),
            ("n", "995".to_string()),
            ("m_links", "2".to_string()),
            ("d_min", d_min.to_string()),
            ("d_max", d_max.to_string()),
            ("lambda", DEFAULT_LAMBDA.to_string()),
            ("ring_degree", "4".to_string()),
            ("rewire_prob", "0.1".to_string()),
            ("radius", "auto".to_string()),
            ("k_hidden", "10".to_string()),
            ("num_clusters", "10".to_string()),
            ("max_iter", "100".to_string()),
            ("restarts", "5".to_string()),
            ("centers", "a,b,c".to_string()),
            ("repetitions", "20".to_string()),
            ("seed", "0".to_string()),
        ] {
            s.values.insert(k.to_string(), v);
            s.sources.insert(k.to_string(), Source::Default);
        }
        s
    }
}

impl Settings {
    /// Parses a configuration file body and overlays it. `path` is only used
    /// in diagnostics.
    pub fn apply_file_str(&mut self, text: &str, path: &str) -> Result<()> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(path, lineno, format!("expected 'key = value', got '{line}'")));
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::parse(path, lineno, format!("unknown key '{key}'")));
            }
            if let Some(first) = seen.insert(key.to_string(), lineno) {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("duplicate key '{key}' (first set on line {first})"),
                ));
            }
            check_value(key, value).map_err(|msg| Error::parse(path, lineno, msg))?;
            self.values.insert(key.to_string(), value.to_string());
            self.sources.insert(key.to_string(), Source::File);
        }
        Ok(())
    }

    /// Overlays a value provided on the command line.
    pub fn set_flag(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KNOWN_KEYS.contains(&key), "unknown settings key {key}");
        self.values.insert(key.to_string(), value.to_string());
        self.sources.insert(key.to_string(), Source::Flag);
    }

    /// Replaces a value with its resolved form, keeping the original source.
    pub fn pin(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KNOWN_KEYS.contains(&key), "unknown settings key {key}");
        self.values.insert(key.to_string(), value.to_string());
        self.sources.entry(key.to_string()).or_insert(Source::Default);
    }

    pub fn source(&self, key: &str) -> Source {
        self.sources.get(key).copied().unwrap_or(Source::Default)
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::parameter(format!("missing configuration key '{key}'")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| Error::parameter(format!("{key} must be a non-negative integer, got '{raw}'")))
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| Error::parameter(format!("{key} must be a non-negative integer, got '{raw}'")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| Error::parameter(format!("{key} must be a number, got '{raw}'")))
    }

    /// `radius` is either `auto` or a positive hop count.
    pub fn radius(&self) -> Result<Option<u32>> {
        let raw = self.raw("radius")?;
        if raw == "auto" {
            return Ok(None);
        }
        raw.parse::<u32>()
            .map(Some)
            .map_err(|_| Error::parameter(format!("radius must be 'auto' or a hop count, got '{raw}'")))
    }

    pub fn centers(&self) -> Result<Vec<CenterLabel>> {
        parse_centers(self.raw("centers")?)
    }

    /// Builds the generator description from `model` and its parameters.
    pub fn graph_spec(&self) -> Result<GraphSpec> {
        let n = self.usize("n")?;
        match self.raw("model")? {
            "ba" => Ok(GraphSpec::Ba {
                n,
                m_links: self.usize("m_links")?,
            }),
            "homogeneous" => Ok(GraphSpec::Homogeneous {
                n,
                d_min: self.usize("d_min")?,
                d_max: self.usize("d_max")?,
                lambda: self.f64("lambda")?,
            }),
            "ws" => Ok(GraphSpec::Ws {
                n,
                ring_degree: self.usize("ring_degree")?,
                rewire_prob: self.f64("rewire_prob")?,
            }),
            other => Err(Error::parameter(format!(
                "unknown model '{other}' (expected ba, homogeneous or ws)"
            ))),
        }
    }

    /// The graph seed: explicit when configured, otherwise derived from the
    /// master seed.
    pub fn graph_seed(&self) -> Result<u64> {
        if self.values.contains_key("graph_seed") {
            self.u64("graph_seed")
        } else {
            Ok(derive_seed(self.u64("seed")?, 1))
        }
    }

    /// Resolves the full experiment configuration.
    pub fn experiment_config(&self) -> Result<ExperimentConfig> {
        Ok(ExperimentConfig {
            graph: self.graph_spec()?,
            graph_seed: self.graph_seed()?,
            radius: self.radius()?,
            k_hidden: self.usize("k_hidden")?,
            num_clusters: self.usize("num_clusters")?,
            max_iter: self.usize("max_iter")?,
            restarts: self.usize("restarts")?,
            centers: self.centers()?,
            repetitions: self.usize("repetitions")?,
            master_seed: self.u64("seed")?,
        })
    }

    /// Keys relevant to the configured model, in canonical order.
    fn manifest_keys(&self) -> Result<Vec<&'static str>> {
        let model_keys: &[&str] = match self.raw("model")? {
            "ba" => &["m_links"],
            "homogeneous" => &["d_min", "d_max", "lambda"],
            "ws" => &["ring_degree", "rewire_prob"],
            _ => &[],
        };
        let mut keys = vec!["model", "n"];
        keys.extend_from_slice(model_keys);
        keys.extend_from_slice(&[
            "graph_seed",
            "radius",
            "k_hidden",
            "num_clusters",
            "max_iter",
            "restarts",
            "centers",
            "repetitions",
            "seed",
        ]);
        Ok(keys)
    }
}

fn parse_centers(raw: &str) -> Result<Vec<CenterLabel>> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let label: CenterLabel = part.trim().parse()?;
        if out.contains(&label) {
            return Err(Error::parameter(format!("duplicate center label '{label}'")));
        }
        out.push(label);
    }
    if out.is_empty() {
        return Err(Error::parameter("centers must name at least one of a, b, c"));
    }
    Ok(out)
}

/// Validates the value shape of a known key.
fn check_value(key: &str, value: &str) -> std::result::Result<(), String> {
    let uint = |v: &str| {
        v.parse::<u64>()
            .map(|_| ())
            .map_err(|_| format!("{key} must be a non-negative integer, got '{v}'"))
    };
    let float = |v: &str| {
        v.parse::<f64>()
            .map(|_| ())
            .map_err(|_| format!("{key} must be a number, got '{v}'"))
    };
    match key {
        "n" | "m_links" | "d_min" | "d_max" | "ring_degree" | "graph_seed" | "seed"
        | "k_hidden" | "num_clusters" | "max_iter" | "restarts" | "repetitions" => uint(value),
        "lambda" | "rewire_prob" => float(value),
        "radius" => {
            if value == "auto" {
                Ok(())
            } else {
                uint(value)
            }
        }
        "model" => match value {
            "ba" | "homogeneous" | "ws" => Ok(()),
            _ => Err(format!("unknown model '{value}' (expected ba, homogeneous or ws)")),
        },
        "centers" => parse_centers(value).map(|_| ()).map_err(|e| e.to_string()),
        _ => Ok(()),
    }
}

/// One `# report:` line in the manifest.
pub type ReportEntry = (String, String);

/// Renders the run manifest. The key-value section is a loadable
/// configuration; sources, artifacts and computed reports ride in comments.
pub fn render_manifest(
    settings: &Settings,
    artifacts: &[String],
    reports: &[ReportEntry],
    version: &str,
) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# emptyspot {version} run manifest");
    let _ = writeln!(
        out,
        "# rerun with: emptyspot experiment --config <this file> --out <dir>"
    );
    let keys = settings.manifest_keys()?;
    for key in &keys {
        let _ = writeln!(out, "{key} = {}", settings.raw(key)?);
    }
    for key in &keys {
        let _ = writeln!(out, "# source: {key} = {}", settings.source(key).as_str());
    }
    for artifact in artifacts {
        let _ = writeln!(out, "# artifact: {artifact}");
    }
    for (name, value) in reports {
        let _ = writeln!(out, "# report: {name} = {value}");
    }
    Ok(out)
}
