use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qedcorr::correlations::Scenario;

use crate::config::{CommandKind, Format, RunConfig, Values};

/// Tree-level QED polarization correlations and Bell/CH violation search.
///
/// Angles are in degrees, speeds are v/c.
#[derive(Debug, Parser)]
#[command(name = "qedcorr", version)]
pub struct Cli {
    /// JSON run configuration; flags given on the command line take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint and single-detector probabilities for angle pairs
    Eval(EvalArgs),
    /// The S functional at one set of analyzer angles
    Bell(BellArgs),
    /// Search analyzer angles for the largest violation at each speed
    Scan(ScanArgs),
    /// S over a speed range, at fixed angles or searched per speed
    Sweep(SweepArgs),
    /// Run the internal consistency checks
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// csv or json
    #[arg(long)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BetaRange {
    /// First speed of the range
    #[arg(long)]
    pub beta_from: Option<f64>,
    /// Last speed of the range (inclusive)
    #[arg(long)]
    pub beta_to: Option<f64>,
    /// Increment, must be positive
    #[arg(long)]
    pub beta_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub scenario: Option<Scenario>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// First analyzer angle(s), comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub chi1: Vec<f64>,
    /// Second analyzer angle(s), comma separated; every pair with --chi1 is evaluated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub chi2: Vec<f64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct Angles {
    #[arg(long)]
    pub chi1: Option<f64>,
    #[arg(long)]
    pub chi2: Option<f64>,
    #[arg(long)]
    pub chi1p: Option<f64>,
    #[arg(long)]
    pub chi2p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[arg(long)]
    pub scenario: Option<Scenario>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub angles: Angles,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct Search {
    /// Coarse grid spacing in degrees, in (0, 45]
    #[arg(long)]
    pub step: Option<f64>,
    /// Skip the simplex polish of the best grid point
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub scenario: Option<Scenario>,
    /// Speeds to scan, comma separated (alternative to the range flags)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub beta: Vec<f64>,
    #[command(flatten)]
    pub range: BetaRange,
    #[command(flatten)]
    pub search: Search,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: Option<Scenario>,
    #[command(flatten)]
    pub range: BetaRange,
    /// Fixed angles; omit all four to search for the best angles at each speed
    #[command(flatten)]
    pub angles: Angles,
    #[command(flatten)]
    pub search: Search,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Smaller grids and fewer random draws
    #[arg(long)]
    pub quick: bool,
    /// Offset added to rho in the closed-form bilinears (sensitivity probe)
    #[arg(long, hide = true, value_name = "DELTA")]
    pub perturb_rho: Option<f64>,
    #[command(flatten)]
    pub out: Output,
}

fn list(v: Vec<f64>) -> Option<Values> {
    match v.len() {
        0 => None,
        1 => Some(Values::One(v[0])),
        _ => Some(Values::Many(v)),
    }
}

fn flag(set: bool) -> Option<bool> {
    set.then_some(true)
}

impl Command {
    /// The flags of this invocation as a partial configuration.
    pub fn into_config(self) -> RunConfig {
        let mut c = RunConfig::default();
        let output = |c: &mut RunConfig, o: Output| {
            c.format = o.format;
            c.output = o.output;
        };
        let angles = |c: &mut RunConfig, a: Angles| {
            c.chi1 = a.chi1.map(Values::One);
            c.chi2 = a.chi2.map(Values::One);
            c.chi1p = a.chi1p;
            c.chi2p = a.chi2p;
        };
        let range = |c: &mut RunConfig, r: BetaRange| {
            c.beta_from = r.beta_from;
            c.beta_to = r.beta_to;
            c.beta_step = r.beta_step;
        };
        let search = |c: &mut RunConfig, s: Search| {
            c.step = s.step;
            c.refine = s.no_refine.then_some(false);
        };
        match self {
            Command::Eval(a) => {
                c.command = Some(CommandKind::Eval);
                c.scenario = a.scenario;
                c.beta = a.beta.map(Values::One);
                c.chi1 = list(a.chi1);
                c.chi2 = list(a.chi2);
                output(&mut c, a.out);
            }
            Command::Bell(a) => {
                c.command = Some(CommandKind::Bell);
                c.scenario = a.scenario;
                c.beta = a.beta.map(Values::One);
                angles(&mut c, a.angles);
                output(&mut c, a.out);
            }
            Command::Scan(a) => {
                c.command = Some(CommandKind::Scan);
                c.scenario = a.scenario;
                c.beta = list(a.beta);
                range(&mut c, a.range);
                search(&mut c, a.search);
                output(&mut c, a.out);
            }
            Command::Sweep(a) => {
                c.command = Some(CommandKind::Sweep);
                c.scenario = a.scenario;
                range(&mut c, a.range);
                angles(&mut c, a.angles);
                search(&mut c, a.search);
                output(&mut c, a.out);
            }
            Command::Verify(a) => {
                c.command = Some(CommandKind::Verify);
                c.quick = flag(a.quick);
                c.perturb_rho = a.perturb_rho;
                output(&mut c, a.out);
            }
        }
        c
    }
}
