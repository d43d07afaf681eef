use std::path::{Path, PathBuf};

use serde::Deserialize;

use invforge::gf::make_field;
use invforge::groups::DEFAULT_ENUMERATION_CAP;
use invforge::ratexpr::EXACT_TERM_THRESHOLD;
use invforge::suite::{GroupName, SuiteParams, CLAIMS};

/// Environment variable overriding `caps.enumeration`.
pub const CAP_ENV: &str = "INVFORGE_CAP";

pub const DEFAULT_OUTPUT_DIR: &str = "invforge-out";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub p: u64,
    #[serde(default = "one")]
    pub e: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub m: usize,
    #[serde(alias = "size")]
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_enumeration")]
    pub enumeration: u64,
    #[serde(default = "default_terms")]
    pub terms: usize,
}

fn default_enumeration() -> u64 {
    DEFAULT_ENUMERATION_CAP
}

fn default_terms() -> usize {
    EXACT_TERM_THRESHOLD
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumeration: default_enumeration(), terms: default_terms() }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimConfig {
    pub k: Option<u32>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub s: Option<usize>,
    pub removed: Option<(usize, usize)>,
    pub trials: Option<u32>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldConfig,
    pub grid: GridConfig,
    #[serde(default = "default_group")]
    pub group: String,
    #[serde(default = "default_form")]
    pub form: String,
    #[serde(default)]
    pub tasks: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub params: ClaimConfig,
}

fn default_group() -> String {
    "GL".into()
}

fn default_form() -> String {
    "standard".into()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    Construct,
    Verify(String),
    Stabilizer,
    Jacobian,
    Bench,
}

impl std::str::FromStr for Task {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "construct" => Task::Construct,
            "stabilizer" => Task::Stabilizer,
            "jacobian" => Task::Jacobian,
            "bench" => Task::Bench,
            _ => match s.strip_prefix("verify:") {
                Some(claim) if CLAIMS.contains(&claim) => Task::Verify(claim.to_string()),
                Some(claim) => return Err(ConfigError::Invalid(format!("unknown claim {claim:?}"))),
                None => return Err(ConfigError::Invalid(format!("unknown task {s:?}"))),
            },
        })
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn tasks(&self) -> Result<Vec<Task>, ConfigError> {
        self.tasks.iter().map(|t| t.parse()).collect()
    }

    /// Validated parameters with command-line and environment overrides applied.
    pub fn suite_params(&self, seed: Option<u64>, cap_env: Option<&str>) -> Result<SuiteParams, ConfigError> {
        let mut p = SuiteParams::new(self.field.p, self.field.e, self.grid.m, self.grid.n);
        p.group = self.group.parse().map_err(|e: invforge::suite::SuiteError| ConfigError::Invalid(e.to_string()))?;
        p.form = (self.form != "standard").then(|| self.form.clone());
        p.k = self.params.k;
        p.i = self.params.i;
        p.j = self.params.j;
        p.s = self.params.s;
        p.removed = self.params.removed;
        p.trials = self.params.trials;
        p.samples = self.params.samples;
        p.seed = seed.unwrap_or(self.seed);
        p.enumeration_cap = match cap_env {
            Some(v) => v.trim().parse().map_err(|_| ConfigError::Invalid(format!("{CAP_ENV}={v:?} is not a number")))?,
            None => self.caps.enumeration,
        };
        p.term_cap = self.caps.terms;
        make_field(p.p, p.e).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if p.m == 0 || p.n == 0 {
            return Err(ConfigError::Invalid("grid sizes must be positive".into()));
        }
        if p.group != GroupName::GL && p.group != GroupName::SL {
            p.form_matrix().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(p)
    }

    pub fn output_dir(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| self.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }
}
