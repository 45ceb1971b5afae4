//! Command-line parsing and validation of a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entbound::correlations::MonotoneKind;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "entbound", version, about = "Internal entanglement versus external correlations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandName {
    Curve,
    Verify,
    Tightness,
    Ccbound,
    Gd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a bound curve on an equally spaced grid.
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        /// `xi` bounds any state; `zeta` is the classical-classical curve.
        #[arg(long, value_enum, default_value_t = Series::Xi)]
        series: Series,
    },
    /// Check the bound on Haar-random pure states of A ⊗ B.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Measure how closely optimal states approach the bound.
    Tightness {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check strictly correlated classical states against the classical curve.
    Ccbound {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare the numeric infimum g_4 with the closed-form bound.
    Gd {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    Xi,
    Zeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "mutual_information", alias = "mi")]
    MutualInformation,
    Bures,
    Hellinger,
}

impl From<KindArg> for MonotoneKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::MutualInformation => MonotoneKind::MutualInformation,
            KindArg::Bures => MonotoneKind::Bures,
            KindArg::Hellinger => MonotoneKind::Hellinger,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Dimension of the external system B.
    #[arg(long = "dim-b", default_value_t = 16)]
    pub dim_b: usize,
    /// Number of grid points (default 201 for curves, 20 otherwise).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::Hellinger)]
    pub kind: KindArg,
    /// Pass/fail tolerance (default depends on the subcommand).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Keep per-sample records in large JSON reports.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub seed: u64,
    pub samples: usize,
    pub dim_b: usize,
    pub grid: usize,
    #[serde(serialize_with = "kind_name")]
    pub kind: MonotoneKind,
    pub tolerance: f64,
    pub series: Series,
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub full: bool,
    pub workers: usize,
}

fn kind_name<S: serde::Serializer>(k: &MonotoneKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

impl RunConfig {
    /// Builds and validates the configuration of a parsed command line.
    pub fn from_command(command: &Command) -> Result<Self, CliError> {
        let (name, common, series) = match command {
            Command::Curve { common, series } => (CommandName::Curve, common, *series),
            Command::Verify { common } => (CommandName::Verify, common, Series::Xi),
            Command::Tightness { common } => (CommandName::Tightness, common, Series::Xi),
            Command::Ccbound { common } => (CommandName::Ccbound, common, Series::Zeta),
            Command::Gd { common } => (CommandName::Gd, common, Series::Xi),
        };
        let default_tolerance = match name {
            CommandName::Curve => 1e-12,
            CommandName::Verify => 1e-9,
            CommandName::Tightness => 1e-6,
            CommandName::Ccbound | CommandName::Gd => 1e-3,
        };
        let config = Self {
            command: name,
            seed: common.seed,
            samples: common.samples,
            dim_b: common.dim_b,
            grid: common.grid.unwrap_or(if name == CommandName::Curve { 201 } else { 20 }),
            kind: common.kind.into(),
            tolerance: common.tolerance.unwrap_or(default_tolerance),
            series,
            out_path: common.out.clone(),
            format: common.format,
            full: common.full,
            workers: common.workers,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.samples < 1 {
            return bad("--samples must be at least 1".into());
        }
        if self.grid < 2 {
            return bad("--grid must be at least 2".into());
        }
        if self.dim_b < 1 {
            return bad("--dim-b must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("--tolerance must be positive, got {}", self.tolerance));
        }
        if self.workers < 1 {
            return bad("--workers must be at least 1".into());
        }
        let kind = self.kind;
        let ok = match (self.command, self.series) {
            (CommandName::Curve, Series::Xi) => kind != MonotoneKind::MutualInformation,
            (CommandName::Curve, Series::Zeta) => kind != MonotoneKind::Bures,
            (CommandName::Verify, _) => true,
            (CommandName::Tightness | CommandName::Gd, _) => kind != MonotoneKind::MutualInformation,
            (CommandName::Ccbound, _) => kind == MonotoneKind::Hellinger,
        };
        if !ok {
            return bad(format!(
                "kind {kind} is not supported by {:?} (series {:?})",
                self.command, self.series
            ));
        }
        Ok(())
    }
}
