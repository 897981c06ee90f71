use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::Deserialize;
use teatkey_core::{EvalConfig, ExtractorConfig, SplitSpec, TaskName};

use crate::args::GlobalArgs;
use crate::exit::{OrExit, Outcome, USAGE};

pub const DEFAULT_BUDGET_MS: u64 = 2000;
pub const MIN_BUDGET_MS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    Scripted(PathBuf),
    Wire(String),
}

impl FromStr for BackendSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.split_once(':') {
            Some(("scripted", path)) if !path.is_empty() => Ok(BackendSpec::Scripted(path.into())),
            Some(("wire", endpoint)) if !endpoint.is_empty() => Ok(BackendSpec::Wire(endpoint.into())),
            _ => bail!("backend {s:?} must be scripted:<fixture> or wire:<endpoint>"),
        }
    }
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSpec::Scripted(p) => write!(f, "scripted:{}", p.display()),
            BackendSpec::Wire(e) => write!(f, "wire:{e}"),
        }
    }
}

/// Everything a run needs, read from one JSON document.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub extractor: ExtractorConfig,
    pub eval: EvalConfig,
    pub split: SplitSpec,
    /// `scripted:<fixture>` or `wire:<endpoint>`.
    pub backend: Option<String>,
    pub budget_ms: u64,
    pub timeout_ms: u64,
    pub task: Option<TaskName>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            extractor: ExtractorConfig::default(),
            eval: EvalConfig::default(),
            split: SplitSpec::default(),
            backend: None,
            budget_ms: DEFAULT_BUDGET_MS,
            timeout_ms: teatkey_core::gateway::DEFAULT_TIMEOUT_MS,
            task: None,
        }
    }
}

impl PipelineConfig {
    pub fn backend(&self) -> anyhow::Result<BackendSpec> {
        match &self.backend {
            Some(spec) => spec.parse(),
            None => bail!("no detector backend selected (use --backend or set \"backend\" in the config)"),
        }
    }

    pub fn task(&self) -> anyhow::Result<TaskName> {
        self.task.context("no task selected (use --task teat_shape|skin_condition)")
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.budget_ms < MIN_BUDGET_MS {
            bail!("budget_ms {} is below the {MIN_BUDGET_MS} ms minimum", self.budget_ms);
        }
        if self.timeout_ms == 0 {
            bail!("timeout_ms must be positive");
        }
        if let Some(spec) = &self.backend {
            spec.parse::<BackendSpec>()?;
        }
        self.extractor.validate()?;
        self.eval.validate()?;
        Ok(())
    }
}

/// Read the config file (if any), apply flag overrides and validate.
pub fn load(flags: &GlobalArgs) -> Outcome<PipelineConfig> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).or_exit(USAGE)?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).or_exit(USAGE)?
        }
        None => PipelineConfig::default(),
    };
    if let Some(b) = &flags.backend {
        cfg.backend = Some(b.clone());
    }
    if let Some(ms) = flags.budget_ms {
        cfg.budget_ms = ms;
    }
    if let Some(seed) = flags.seed {
        cfg.split.seed = seed;
    }
    if let Some(task) = flags.task {
        cfg.task = Some(task);
    }
    cfg.validate().or_exit(USAGE)?;
    Ok(cfg)
}
