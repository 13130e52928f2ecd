//! Experiment configuration: defaults, a flat key-value config file, and
//! CLI overrides, merged in that order.

use std::collections::HashMap;
use std::path::PathBuf;

use crate::commands::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    File(PathBuf),
    Erdrey { n: usize, m: usize },
    Pref { n: usize, d: usize },
}

impl GraphSource {
    /// Parses a generator spec: `erdrey:<n>,<m>` or `pref:<n>,<d>`.
    pub fn parse_gen(spec: &str) -> Result<GraphSource, HarnessError> {
        let bad = || HarnessError::Config(format!("bad generator spec `{spec}`"));
        let (name, params) = spec.split_once(':').ok_or_else(bad)?;
        let (a, b) = params.split_once(',').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "erdrey" => Ok(GraphSource::Erdrey { n: a, m: b }),
            "pref" => Ok(GraphSource::Pref { n: a, d: b }),
            _ => Err(bad()),
        }
    }

    pub fn is_generator(&self) -> bool {
        !matches!(self, GraphSource::File(_))
    }

    pub fn describe(&self) -> String {
        match self {
            GraphSource::File(p) => p.display().to_string(),
            GraphSource::Erdrey { n, m } => format!("erdrey:{n},{m}"),
            GraphSource::Pref { n, d } => format!("pref:{n},{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionPolicy {
    UniformRandom,
    TopKatz,
    MinProductEdge,
}

impl SelectionPolicy {
    pub fn parse(s: &str) -> Result<SelectionPolicy, HarnessError> {
        match s {
            "random" => Ok(SelectionPolicy::UniformRandom),
            "top-katz" => Ok(SelectionPolicy::TopKatz),
            "min-product" => Ok(SelectionPolicy::MinProductEdge),
            _ => Err(HarnessError::Config(format!(
                "unknown policy `{s}` (expected random, top-katz, or min-product)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    Node,
    Edge,
}

impl TargetKind {
    pub fn parse(s: &str) -> Result<TargetKind, HarnessError> {
        match s {
            "node" => Ok(TargetKind::Node),
            "edge" => Ok(TargetKind::Edge),
            _ => Err(HarnessError::Config(format!(
                "unknown target kind `{s}` (expected node or edge)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TargetKind::Node => "node",
            TargetKind::Edge => "edge",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    pub alpha_factor: f64,
    /// Tolerance for the truncated-series methods.
    pub tol: f64,
    /// Tolerance for the conjugate-gradient baselines; defaults to `tol/10`.
    pub tol_pcg: f64,
    pub lmax_node: usize,
    pub lmax_edge: usize,
    /// Fraction of nodes (edges) removed by the sequential experiments.
    pub fraction: f64,
    pub policy: SelectionPolicy,
    pub trials: usize,
    pub seed: u64,
    pub kind: TargetKind,
    pub zero_based: bool,
    pub stale_bounds: bool,
    pub recompute_on_maxlen: bool,
    pub out: Option<PathBuf>,
}

/// Unmerged option set; `None` means "not specified here".
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub graph: Option<PathBuf>,
    pub gen: Option<String>,
    pub alpha_factor: Option<f64>,
    pub tol: Option<f64>,
    pub tol_pcg: Option<f64>,
    pub lmax_node: Option<usize>,
    pub lmax_edge: Option<usize>,
    pub fraction: Option<f64>,
    pub policy: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub kind: Option<String>,
    pub zero_based: Option<bool>,
    pub stale_bounds: Option<bool>,
    pub recompute_on_maxlen: Option<bool>,
    pub out: Option<PathBuf>,
}

impl ConfigOverlay {
    /// Parses the flat `key = value` config format; keys mirror the CLI
    /// flag names, `#` starts a comment.
    pub fn from_file_text(text: &str) -> Result<ConfigOverlay, HarnessError> {
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("config line {}: expected key = value", idx + 1))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        let mut overlay = ConfigOverlay::default();
        let parse_f64 = |v: &str, key: &str| {
            v.parse::<f64>()
                .map_err(|_| HarnessError::Config(format!("config key {key}: bad number `{v}`")))
        };
        let parse_usize = |v: &str, key: &str| {
            v.parse::<usize>()
                .map_err(|_| HarnessError::Config(format!("config key {key}: bad integer `{v}`")))
        };
        let parse_bool = |v: &str, key: &str| match v {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(HarnessError::Config(format!(
                "config key {key}: bad flag `{v}`"
            ))),
        };
        for (key, value) in &map {
            match key.as_str() {
                "graph" => overlay.graph = Some(PathBuf::from(value)),
                "gen" => overlay.gen = Some(value.clone()),
                "alpha-factor" => overlay.alpha_factor = Some(parse_f64(value, key)?),
                "tol" => overlay.tol = Some(parse_f64(value, key)?),
                "tol-pcg" => overlay.tol_pcg = Some(parse_f64(value, key)?),
                "lmax-node" => overlay.lmax_node = Some(parse_usize(value, key)?),
                "lmax-edge" => overlay.lmax_edge = Some(parse_usize(value, key)?),
                "fraction" => overlay.fraction = Some(parse_f64(value, key)?),
                "policy" => overlay.policy = Some(value.clone()),
                "trials" => overlay.trials = Some(parse_usize(value, key)?),
                "seed" => {
                    overlay.seed = Some(value.parse::<u64>().map_err(|_| {
                        HarnessError::Config(format!("config key seed: bad integer `{value}`"))
                    })?)
                }
                "kind" => overlay.kind = Some(value.clone()),
                "zero-based" => overlay.zero_based = Some(parse_bool(value, key)?),
                "stale-bounds" => overlay.stale_bounds = Some(parse_bool(value, key)?),
                "recompute-on-maxlen" => {
                    overlay.recompute_on_maxlen = Some(parse_bool(value, key)?)
                }
                "out" => overlay.out = Some(PathBuf::from(value)),
                _ => return Err(HarnessError::Config(format!("unknown config key `{key}`"))),
            }
        }
        Ok(overlay)
    }

    /// Fields set in `other` win over fields set here.
    pub fn overridden_by(mut self, other: ConfigOverlay) -> ConfigOverlay {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            graph,
            gen,
            alpha_factor,
            tol,
            tol_pcg,
            lmax_node,
            lmax_edge,
            fraction,
            policy,
            trials,
            seed,
            kind,
            zero_based,
            stale_bounds,
            recompute_on_maxlen,
            out
        );
        self
    }

    /// Applies defaults and validates.
    pub fn finish(self) -> Result<ExperimentConfig, HarnessError> {
        let source = match (self.graph, self.gen) {
            (Some(_), Some(_)) => {
                return Err(HarnessError::Config(
                    "both a graph file and a generator were given".into(),
                ))
            }
            (Some(path), None) => GraphSource::File(path),
            (None, Some(spec)) => GraphSource::parse_gen(&spec)?,
            (None, None) => {
                return Err(HarnessError::Config(
                    "no graph source: pass --graph <path> or --gen <spec>".into(),
                ))
            }
        };
        let tol = self.tol.unwrap_or(1e-4);
        let config = ExperimentConfig {
            source,
            alpha_factor: self.alpha_factor.unwrap_or(0.85),
            tol,
            tol_pcg: self.tol_pcg.unwrap_or(tol / 10.0),
            lmax_node: self.lmax_node.unwrap_or(30),
            lmax_edge: self.lmax_edge.unwrap_or(30),
            fraction: self.fraction.unwrap_or(0.01),
            policy: match self.policy.as_deref() {
                Some(p) => SelectionPolicy::parse(p)?,
                None => SelectionPolicy::UniformRandom,
            },
            trials: self.trials.unwrap_or(30),
            seed: self.seed.unwrap_or(1),
            kind: match self.kind.as_deref() {
                Some(k) => TargetKind::parse(k)?,
                None => TargetKind::Node,
            },
            zero_based: self.zero_based.unwrap_or(false),
            stale_bounds: self.stale_bounds.unwrap_or(false),
            recompute_on_maxlen: self.recompute_on_maxlen.unwrap_or(false),
            out: self.out,
        };
        config.validate()?;
        Ok(config)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.alpha_factor > 0.0 && self.alpha_factor < 1.0) {
            return Err(HarnessError::Config(format!(
                "alpha-factor must lie in (0,1), got {}",
                self.alpha_factor
            )));
        }
        if !(self.tol > 0.0) || !(self.tol_pcg > 0.0) {
            return Err(HarnessError::Config("tolerances must be positive".into()));
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(HarnessError::Config(format!(
                "fraction must lie in (0,1], got {}",
                self.fraction
            )));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.lmax_node == 0 || self.lmax_edge == 0 {
            return Err(HarnessError::Config("lmax must be at least 1".into()));
        }
        Ok(())
    }

    /// Per-trial seed: trial `i` runs on `seed ^ i`, so trials are
    /// reproducible independently of execution order.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed ^ trial as u64
    }
}
