//! Command-line experiment runner for `sawtrace`.
//!
//! A run is described by a [`SuiteConfig`], given either as subcommand flags
//! or as a JSON file (`--config`). [`run_suite`] executes it and writes one
//! report; the bytes depend only on the configuration.

pub mod config;
pub mod error;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sawtrace::lorentz::Exponent;
use sawtrace::report::Format;

pub use config::{Destination, LorentzSpec, Params, Suite, SuiteConfig, OUT_DIR_ENV};
pub use error::CliError;

/// Renders the report of a configuration without writing it.
pub fn render(cfg: &SuiteConfig) -> Result<String, CliError> {
    let table = suites::run(cfg)?;
    let format = cfg.resolved_format();
    Ok(
        if cfg.suite.is_single_record() && format == Format::Json && table.rows().len() == 1 {
            table.row_json(0) + "\n"
        } else {
            table.render(format)
        },
    )
}

/// Runs a suite and writes its report; returns where it went.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Destination, CliError> {
    let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    run_suite_in(cfg, out_dir.as_deref())
}

/// [`run_suite`] with an explicit default output directory.
pub fn run_suite_in(cfg: &SuiteConfig, out_dir: Option<&Path>) -> Result<Destination, CliError> {
    let bytes = render(cfg)?;
    let dest = cfg.destination(out_dir);
    match &dest {
        Destination::File(path) => {
            if cfg.output.is_none() {
                if let Some(dir) = out_dir {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
                }
            }
            std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        }
        Destination::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("writing to standard output: {e}")))?;
        }
    }
    Ok(dest)
}

#[derive(Parser, Debug)]
#[command(
    name = "sawtrace",
    version,
    about = "Seeded experiment suites for the sawtrace library"
)]
pub struct Cli {
    /// JSON file holding a complete suite configuration (instead of a
    /// subcommand).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// csv or json; defaults from the report extension, then the suite.
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub experiments: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Tuple {
    #[arg(long)]
    pub p: Option<Exponent>,
    #[arg(long)]
    pub q: Option<Exponent>,
    /// Input Lorentz pair `r,s`.
    #[arg(long = "in")]
    pub lorentz_in: Option<LorentzSpec>,
    /// Output Lorentz pair `r,s`.
    #[arg(long = "out")]
    pub lorentz_out: Option<LorentzSpec>,
    /// Report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Planar {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: Option<Exponent>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub depth: Option<u32>,
    /// Report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decreasing rearrangements of random step functions.
    Rearrange {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lorentz norms of `R_{p,q} f` against those of `f`.
    Rnorm {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tuple: Tuple,
    },
    /// Exact boundedness classification of `R_{p,q}` between Lorentz spaces.
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tuple: Tuple,
    },
    /// Witness of unboundedness from the truncated-power and
    /// characteristic families.
    Witness {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long)]
        target: Option<f64>,
    },
    /// Pointwise constant of the lattice-summed maximal operator.
    Sawyer {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        planar: Planar,
    },
    /// Domination of a Riesz potential by fractional maximal functions.
    Domination {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        planar: Planar,
    },
    /// Choquet trace integral of `|I_α χ_E|^p` against `|E|`.
    Trace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        planar: Planar,
    },
    /// Two-measure trace ratio with growth and two-weight constants.
    TwoMeasure {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        planar: Planar,
        #[arg(long)]
        growth_cap: Option<f64>,
        #[arg(long)]
        two_weight_cap: Option<f64>,
    },
}

fn with_common(suite: Suite, common: Common, params: Params, output: Option<PathBuf>) -> SuiteConfig {
    SuiteConfig {
        suite,
        params: Params {
            experiments: common.experiments,
            ..params
        },
        seed: common.seed,
        output,
        format: common.format,
    }
}

fn tuple_config(suite: Suite, common: Common, t: Tuple, target: Option<f64>) -> SuiteConfig {
    let params = Params {
        p: t.p,
        q: t.q,
        lorentz_in: t.lorentz_in,
        lorentz_out: t.lorentz_out,
        target,
        ..Params::default()
    };
    with_common(suite, common, params, t.report)
}

fn planar_config(suite: Suite, common: Common, pl: Planar, caps: (Option<f64>, Option<f64>)) -> SuiteConfig {
    let params = Params {
        n: pl.n,
        alpha: pl.alpha,
        p: pl.p,
        d: pl.d,
        delta: pl.delta,
        depth: pl.depth,
        growth_cap: caps.0,
        two_weight_cap: caps.1,
        ..Params::default()
    };
    with_common(suite, common, params, pl.out)
}

impl Command {
    pub fn into_config(self) -> SuiteConfig {
        match self {
            Command::Rearrange { common, out } => with_common(Suite::Rearrange, common, Params::default(), out),
            Command::Rnorm { common, tuple } => tuple_config(Suite::Rnorm, common, tuple, None),
            Command::Classify { common, tuple } => tuple_config(Suite::Classify, common, tuple, None),
            Command::Witness { common, tuple, target } => tuple_config(Suite::Witness, common, tuple, target),
            Command::Sawyer { common, planar } => planar_config(Suite::Sawyer, common, planar, (None, None)),
            Command::Domination { common, planar } => planar_config(Suite::Domination, common, planar, (None, None)),
            Command::Trace { common, planar } => planar_config(Suite::Trace, common, planar, (None, None)),
            Command::TwoMeasure {
                common,
                planar,
                growth_cap,
                two_weight_cap,
            } => planar_config(Suite::TwoMeasure, common, planar, (growth_cap, two_weight_cap)),
        }
    }
}

/// Parses arguments into a configuration. `Ok(None)` means help or version
/// output was requested and printed.
pub fn parse_args<I, T>(args: I) -> Result<Option<SuiteConfig>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return Ok(None);
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::Parse(first.trim_start_matches("error: ").to_string()));
        }
    };
    match (cli.config, cli.command) {
        (Some(path), None) => SuiteConfig::load(&path).map(Some),
        (None, Some(cmd)) => Ok(Some(cmd.into_config())),
        (Some(_), Some(_)) => Err(CliError::Parse("give either --config or a subcommand, not both".into())),
        (None, None) => Err(CliError::Parse("no suite given; see --help".into())),
    }
}

/// Full command-line entry point; returns the exit status. Failures are
/// reported on standard error as one JSON record.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(args).and_then(|cfg| cfg.map(|c| run_suite(&c)).transpose()) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
