use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sawtrace::lorentz::{Exponent, LorentzParams};
use sawtrace::report::Format;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the directory for reports written without an
/// explicit path.
pub const OUT_DIR_ENV: &str = "SAWTRACE_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Rearrange,
    Rnorm,
    Classify,
    Witness,
    Sawyer,
    Domination,
    Trace,
    TwoMeasure,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Rearrange => "rearrange",
            Suite::Rnorm => "rnorm",
            Suite::Classify => "classify",
            Suite::Witness => "witness",
            Suite::Sawyer => "sawyer",
            Suite::Domination => "domination",
            Suite::Trace => "trace",
            Suite::TwoMeasure => "two-measure",
        }
    }

    /// Suites that produce a single record rather than one row per
    /// experiment.
    pub fn is_single_record(&self) -> bool {
        matches!(self, Suite::Classify | Suite::Witness)
    }

    fn default_format(&self) -> Format {
        if self.is_single_record() {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Lorentz pair written `r,s`, each part an exponent such as `3`, `3/2`,
/// `1.5` or `inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LorentzSpec(pub String);

impl LorentzSpec {
    fn exponents(&self) -> Result<(Exponent, Exponent), CliError> {
        let (r, s) = self
            .0
            .split_once(',')
            .ok_or_else(|| CliError::Parse(format!("Lorentz pair {:?} must be written r,s", self.0)))?;
        let r: Exponent = r.parse().map_err(|e| CliError::Parse(format!("{e}")))?;
        let s: Exponent = s.parse().map_err(|e| CliError::Parse(format!("{e}")))?;
        Ok((r, s))
    }

    pub fn parse(&self) -> Result<LorentzParams, CliError> {
        let (r, s) = self.exponents()?;
        Ok(LorentzParams::new(r, s)?)
    }
}

/// Checks syntax only; admissibility is a range question left to the run.
impl FromStr for LorentzSpec {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let spec = LorentzSpec(s.to_string());
        spec.exponents()?;
        Ok(spec)
    }
}

/// Parameters of a suite; fields a suite does not use are ignored and
/// missing ones take the suite defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n: Option<usize>,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub alpha: Option<f64>,
    pub d: Option<f64>,
    pub delta: Option<f64>,
    pub depth: Option<u32>,
    pub lorentz_in: Option<LorentzSpec>,
    pub lorentz_out: Option<LorentzSpec>,
    pub experiments: Option<usize>,
    pub target: Option<f64>,
    pub growth_cap: Option<f64>,
    pub two_weight_cap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: Suite,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
    /// Report path; relative paths are taken from the working directory.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

/// Where a report goes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Destination {
    File(PathBuf),
    Stdout,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            params: Params::default(),
            seed: 0,
            output: None,
            format: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Explicit format, else the output file extension, else the suite
    /// default (JSON for single-record suites, CSV otherwise).
    pub fn resolved_format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self
            .output
            .as_ref()
            .and_then(|p| p.extension())
            .and_then(|e| e.to_str())
        {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ => self.suite.default_format(),
        }
    }

    /// Explicit path, else `$SAWTRACE_OUT_DIR/<suite>-seed<seed>.<ext>`,
    /// else standard output.
    pub fn destination(&self, out_dir: Option<&Path>) -> Destination {
        if let Some(p) = &self.output {
            return Destination::File(p.clone());
        }
        match out_dir {
            Some(dir) => {
                let ext = match self.resolved_format() {
                    Format::Csv => "csv",
                    Format::Json => "json",
                };
                Destination::File(dir.join(format!("{}-seed{}.{ext}", self.suite, self.seed)))
            }
            None => Destination::Stdout,
        }
    }
}
