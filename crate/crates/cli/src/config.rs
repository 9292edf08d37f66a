//! Run configuration shared by the flags and the optional JSON file, and its
//! validation into a concrete job. Degrees become radians here and nowhere
//! else.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use qedcorr::bell::{BellSettings, ScanOptions, DEFAULT_COARSE_STEP};
use qedcorr::correlations::Scenario;
use qedcorr::kinematics::Speed;
use qedcorr::verify::VerifyOptions;
use serde::{Deserialize, Serialize};

/// An invalid or incomplete invocation; reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Eval,
    Bell,
    Scan,
    Sweep,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A single number or a list of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    One(f64),
    Many(Vec<f64>),
}

impl Values {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Values::One(x) => vec![*x],
            Values::Many(v) => v.clone(),
        }
    }
}

/// Everything a run can be configured with. Angles are in degrees. Unknown
/// keys are ignored, so the JSON written by `bell` can be fed back in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub scenario: Option<Scenario>,
    pub beta: Option<Values>,
    pub beta_from: Option<f64>,
    pub beta_to: Option<f64>,
    pub beta_step: Option<f64>,
    pub chi1: Option<Values>,
    pub chi2: Option<Values>,
    pub chi1p: Option<f64>,
    pub chi2p: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub step: Option<f64>,
    pub refine: Option<bool>,
    pub quick: Option<bool>,
    pub perturb_rho: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        match serde_json::from_str(&text) {
            Ok(c) => Ok(c),
            Err(e) => usage(format!("invalid config {}: {e}", path.display())),
        }
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        RunConfig {
            command: self.command.or(base.command),
            scenario: self.scenario.or(base.scenario),
            beta: self.beta.or(base.beta),
            beta_from: self.beta_from.or(base.beta_from),
            beta_to: self.beta_to.or(base.beta_to),
            beta_step: self.beta_step.or(base.beta_step),
            chi1: self.chi1.or(base.chi1),
            chi2: self.chi2.or(base.chi2),
            chi1p: self.chi1p.or(base.chi1p),
            chi2p: self.chi2p.or(base.chi2p),
            format: self.format.or(base.format),
            output: self.output.or(base.output),
            step: self.step.or(base.step),
            refine: self.refine.or(base.refine),
            quick: self.quick.or(base.quick),
            perturb_rho: self.perturb_rho.or(base.perturb_rho),
        }
    }
}

/// An angle as given (degrees) and its radian value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub degrees: f64,
    pub radians: f64,
}

fn angle(name: &str, deg: f64) -> anyhow::Result<Angle> {
    if !deg.is_finite() || !(0.0..360.0).contains(&deg) {
        return usage(format!("{name} must lie in [0, 360) degrees, got {deg}"));
    }
    Ok(Angle {
        degrees: deg,
        radians: deg.to_radians(),
    })
}

fn speed(beta: f64) -> anyhow::Result<Speed> {
    Speed::new(beta).or_else(|e| usage(e.to_string()))
}

/// `from, from + step, …` up to `to`, each rounded to 12 decimals so that
/// accumulated floating-point error never leaks into the output.
pub fn beta_range(from: f64, to: f64, step: f64) -> anyhow::Result<Vec<Speed>> {
    if !(step > 0.0) || !step.is_finite() {
        return usage(format!("beta step must be positive, got {step}"));
    }
    for end in [from, to] {
        speed(end)?;
    }
    if !(from <= to) {
        return usage(format!("empty beta range: from {from} is above to {to}"));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| speed(((from + i as f64 * step) * 1e12).round() / 1e12))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedAngles {
    pub degrees: [f64; 4],
    pub radians: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Eval {
        scenario: Scenario,
        beta: Speed,
        pairs: Vec<(Angle, Angle)>,
    },
    Bell {
        settings: BellSettings,
        degrees: [f64; 4],
    },
    Scan {
        scenario: Scenario,
        betas: Vec<Speed>,
        options: ScanOptions,
    },
    SweepFixed {
        scenario: Scenario,
        betas: Vec<Speed>,
        angles: FixedAngles,
    },
    SweepSearch {
        scenario: Scenario,
        betas: Vec<Speed>,
        options: ScanOptions,
    },
    Verify(VerifyOptions),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub job: Job,
    pub format: Format,
    pub output: Option<PathBuf>,
}

fn require<T>(v: Option<T>, what: &str, cmd: CommandKind) -> anyhow::Result<T> {
    match v {
        Some(x) => Ok(x),
        None => usage(format!("{} needs --{what}", cmd_name(cmd))),
    }
}

fn cmd_name(c: CommandKind) -> &'static str {
    match c {
        CommandKind::Eval => "eval",
        CommandKind::Bell => "bell",
        CommandKind::Scan => "scan",
        CommandKind::Sweep => "sweep",
        CommandKind::Verify => "verify",
    }
}

fn single_beta(c: &RunConfig, cmd: CommandKind) -> anyhow::Result<Speed> {
    if c.beta_from.is_some() || c.beta_to.is_some() || c.beta_step.is_some() {
        return usage(format!("{} takes a single --beta, not a range", cmd_name(cmd)));
    }
    match require(c.beta.as_ref(), "beta", cmd)? {
        Values::One(b) => speed(*b),
        Values::Many(_) => usage(format!("{} takes a single --beta", cmd_name(cmd))),
    }
}

fn beta_grid(c: &RunConfig, cmd: CommandKind, allow_list: bool) -> anyhow::Result<Vec<Speed>> {
    let range = [c.beta_from, c.beta_to, c.beta_step];
    let any_range = range.iter().any(Option::is_some);
    match (&c.beta, any_range) {
        (Some(_), true) => usage("give either --beta or a --beta-from/--beta-to/--beta-step range, not both"),
        (Some(v), false) if allow_list => v.to_vec().into_iter().map(speed).collect(),
        (_, true) => match range {
            [Some(f), Some(t), Some(s)] => beta_range(f, t, s),
            _ => usage("--beta-from, --beta-to and --beta-step must be given together"),
        },
        _ => usage(format!(
            "{} needs --beta-from, --beta-to and --beta-step{}",
            cmd_name(cmd),
            if allow_list { " (or --beta)" } else { "" }
        )),
    }
}

fn four_angles(c: &RunConfig) -> anyhow::Result<Option<FixedAngles>> {
    let single = |name: &str, v: &Option<Values>| -> anyhow::Result<Option<f64>> {
        match v {
            None => Ok(None),
            Some(Values::One(x)) => Ok(Some(*x)),
            Some(Values::Many(_)) => usage(format!("--{name} takes a single angle here")),
        }
    };
    let given = [single("chi1", &c.chi1)?, single("chi2", &c.chi2)?, c.chi1p, c.chi2p];
    if given.iter().all(Option::is_none) {
        return Ok(None);
    }
    let names = ["chi1", "chi2", "chi1p", "chi2p"];
    let mut degrees = [0.0; 4];
    let mut radians = [0.0; 4];
    for i in 0..4 {
        let Some(d) = given[i] else {
            return usage(format!("--{} is missing; give all four angles", names[i]));
        };
        let a = angle(names[i], d)?;
        degrees[i] = a.degrees;
        radians[i] = a.radians;
    }
    Ok(Some(FixedAngles { degrees, radians }))
}

fn scan_options(c: &RunConfig) -> anyhow::Result<ScanOptions> {
    let coarse_step = match c.step {
        None => DEFAULT_COARSE_STEP,
        Some(d) if d > 0.0 && d <= 45.0 => d.to_radians(),
        Some(d) => return usage(format!("--step must lie in (0, 45] degrees, got {d}")),
    };
    Ok(ScanOptions {
        coarse_step,
        refine: c.refine.unwrap_or(true),
    })
}

fn reject_search_flags(c: &RunConfig, cmd: CommandKind) -> anyhow::Result<()> {
    if c.step.is_some() || c.refine.is_some() {
        return usage(format!("{} does not search; --step and --no-refine do not apply", cmd_name(cmd)));
    }
    Ok(())
}

impl RunConfig {
    /// Validates the merged configuration for its command.
    pub fn plan(self) -> anyhow::Result<Plan> {
        let Some(cmd) = self.command else {
            return usage("no command given (eval, bell, scan, sweep or verify)");
        };
        let scenario = || require(self.scenario, "scenario", cmd);
        let job = match cmd {
            CommandKind::Eval => {
                let beta = single_beta(&self, cmd)?;
                let c1 = require(self.chi1.as_ref(), "chi1", cmd)?.to_vec();
                let c2 = require(self.chi2.as_ref(), "chi2", cmd)?.to_vec();
                let mut pairs = Vec::with_capacity(c1.len() * c2.len());
                for &a in &c1 {
                    for &b in &c2 {
                        pairs.push((angle("chi1", a)?, angle("chi2", b)?));
                    }
                }
                Job::Eval {
                    scenario: scenario()?,
                    beta,
                    pairs,
                }
            }
            CommandKind::Bell => {
                let beta = single_beta(&self, cmd)?;
                let Some(a) = four_angles(&self)? else {
                    return usage("bell needs --chi1, --chi2, --chi1p and --chi2p");
                };
                reject_search_flags(&self, cmd)?;
                Job::Bell {
                    settings: BellSettings::new(scenario()?, beta, a.radians),
                    degrees: a.degrees,
                }
            }
            CommandKind::Scan => Job::Scan {
                scenario: scenario()?,
                betas: beta_grid(&self, cmd, true)?,
                options: scan_options(&self)?,
            },
            CommandKind::Sweep => {
                let betas = beta_grid(&self, cmd, false)?;
                match four_angles(&self)? {
                    Some(angles) => {
                        reject_search_flags(&self, cmd)?;
                        Job::SweepFixed {
                            scenario: scenario()?,
                            betas,
                            angles,
                        }
                    }
                    None => Job::SweepSearch {
                        scenario: scenario()?,
                        betas,
                        options: scan_options(&self)?,
                    },
                }
            }
            CommandKind::Verify => Job::Verify(VerifyOptions {
                quick: self.quick.unwrap_or(false),
                rho_perturbation: self.perturb_rho.unwrap_or(0.0),
            }),
        };
        let default_format = match cmd {
            CommandKind::Bell => Format::Json,
            _ => Format::Csv,
        };
        Ok(Plan {
            job,
            format: self.format.unwrap_or(default_format),
            output: self.output,
        })
    }
}
