//! Command-line flags, the structured config file, and their merge into a
//! fully resolved [`RunConfig`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "wlc", version, about = "World-line condition checks for relativity groups")]
pub struct Cli {
    /// TOML file with default values for any flag; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket defects of a law against a group's structure constants.
    Check(RunArgs),
    /// Residuals of Conditions I, II, IIIG and IIIP.
    Conditions(RunArgs),
    /// Whether a finite group element maps a world line to a world line.
    Covariance(RunArgs),
    /// List the available groups.
    Catalog {
        #[arg(long)]
        beta: Option<f64>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Integrate a law and write the trajectory as CSV.
    Integrate(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Conditions(_) => "conditions",
            Command::Covariance(_) => "covariance",
            Command::Catalog { .. } => "catalog",
            Command::Integrate(_) => "integrate",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Group key, e.g. full-galilei or poincare-vsr.
    #[arg(long)]
    pub group: Option<String>,
    /// Parameter of the galilei-very-special and poincare-vsr groups.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Closed-form family for the law.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as name=value (beta, g).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Family profile definition, e.g. "W(u)=u^2".
    #[arg(long = "profile", value_name = "DEF")]
    pub profiles: Vec<String>,
    /// One-particle law "A=(e1,e2,e3)".
    #[arg(long, allow_hyphen_values = true)]
    pub law: Option<String>,
    /// Two-particle law "A1=(...);A2=(...)".
    #[arg(long, allow_hyphen_values = true)]
    pub law2: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Residual above which a failure counts as witnessed.
    #[arg(long)]
    pub witness: Option<f64>,
    /// Position sampling interval "lo,hi".
    #[arg(long, allow_hyphen_values = true)]
    pub position_box: Option<String>,
    /// Velocity sampling interval "lo,hi".
    #[arg(long, allow_hyphen_values = true)]
    pub velocity_box: Option<String>,
    /// Sample velocities in the ball of this radius.
    #[arg(long)]
    pub speed_cap: Option<f64>,
    /// Minimum of 1 - |v|^2 at sampled points.
    #[arg(long)]
    pub lorentz_margin: Option<f64>,
    /// Minimum distance of v3 from the law's poles.
    #[arg(long)]
    pub pole_margin: Option<f64>,
    /// Group element, e.g. "lorentz:axis=3,u=0.3" or "galilean:u=0.3,0,0".
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
    /// Initial positions "x1,x2,x3[;x1,x2,x3]".
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Initial velocities, same layout as --x0.
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Omit the wall time so identical runs give identical reports.
    #[arg(long)]
    pub no_timing: bool,
}

/// Every setting of a run. Loaded from a file, overridden by flags, then
/// echoed into the report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub group: Option<String>,
    pub beta: Option<f64>,
    pub family: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub profiles: Vec<String>,
    pub law: Option<String>,
    pub law2: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub witness: Option<f64>,
    pub position_box: Option<[f64; 2]>,
    pub velocity_box: Option<[f64; 2]>,
    pub speed_cap: Option<f64>,
    pub lorentz_margin: Option<f64>,
    pub pole_margin: Option<f64>,
    pub element: Option<String>,
    pub x0: Option<String>,
    pub v0: Option<String>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub output: Option<PathBuf>,
    pub no_timing: Option<bool>,
}

pub fn parse_pair(flag: &str, text: &str) -> Result<[f64; 2], CliError> {
    let v = parse_floats(flag, text)?;
    match v[..] {
        [lo, hi] if lo < hi => Ok([lo, hi]),
        _ => Err(CliError::Usage(format!("--{flag} expects \"lo,hi\" with lo < hi, got `{text}`"))),
    }
}

pub fn parse_floats(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("--{flag}: `{}` is not a number", s.trim())))
        })
        .collect()
}

fn parse_param(text: &str) -> Result<(String, f64), CliError> {
    let (k, v) =
        text.split_once('=').ok_or_else(|| CliError::Usage(format!("--param expects NAME=VALUE, got `{text}`")))?;
    let v = v.trim().parse().map_err(|_| CliError::Usage(format!("--param {k}: `{v}` is not a number")))?;
    Ok((k.trim().to_string(), v))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Apply flags on top of `self`.
    pub fn merge(mut self, a: &RunArgs) -> Result<Self, CliError> {
        fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
            if v.is_some() {
                slot.clone_from(v);
            }
        }
        set(&mut self.group, &a.group);
        set(&mut self.beta, &a.beta);
        set(&mut self.family, &a.family);
        for p in &a.params {
            let (k, v) = parse_param(p)?;
            self.params.insert(k, v);
        }
        self.profiles.extend(a.profiles.iter().cloned());
        set(&mut self.law, &a.law);
        set(&mut self.law2, &a.law2);
        set(&mut self.samples, &a.samples);
        set(&mut self.seed, &a.seed);
        set(&mut self.tol, &a.tol);
        set(&mut self.witness, &a.witness);
        if let Some(t) = &a.position_box {
            self.position_box = Some(parse_pair("position-box", t)?);
        }
        if let Some(t) = &a.velocity_box {
            self.velocity_box = Some(parse_pair("velocity-box", t)?);
        }
        set(&mut self.speed_cap, &a.speed_cap);
        set(&mut self.lorentz_margin, &a.lorentz_margin);
        set(&mut self.pole_margin, &a.pole_margin);
        set(&mut self.element, &a.element);
        set(&mut self.x0, &a.x0);
        set(&mut self.v0, &a.v0);
        set(&mut self.t_end, &a.t_end);
        set(&mut self.dt, &a.dt);
        set(&mut self.output, &a.output);
        if a.no_timing {
            self.no_timing = Some(true);
        }
        Ok(self)
    }
}
