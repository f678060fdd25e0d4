use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

/// Largest spin size accepted; `N = 2J + 1` dense eigenvectors are stored.
pub const MAX_J: f64 = 5000.0;
/// Upper bound on emitted time samples per dynamics cell.
pub const MAX_SAMPLES: f64 = 5.0e6;

#[derive(Debug, Parser)]
#[command(name = "spinlab", version, about = "Thermalization experiments for H = -Jx + Lambda/(2J) Jz^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads for grid fan-out (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Per-level energies, parities, branches and observables.
    Spectrum(SpectrumArgs),
    /// Classical orbits and the separatrix.
    Portrait(PortraitArgs),
    /// Diagonal versus micro-canonical long-time observables over a (J, phi') grid.
    Ensemble(EnsembleArgs),
    /// Exact time series of an observable after a coherent-state quench.
    Dynamics(DynamicsArgs),
    /// Memory of the initial phase on the separatrix against 1/sqrt(J ln J).
    Scaling(ScalingArgs),
    /// Orbit periods, orbit-averaged observables and WKB levels.
    Semiclassics(SemiclassicsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Portrait(_) => "portrait",
            Command::Ensemble(_) => "ensemble",
            Command::Dynamics(_) => "dynamics",
            Command::Scaling(_) => "scaling",
            Command::Semiclassics(_) => "semiclassics",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableArg {
    Jx,
    Jz,
    Jz2,
    Energy,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    /// Spin sizes (multiples of 1/2).
    #[arg(long = "J", value_delimiter = ',', required = true)]
    pub j: Vec<f64>,
    #[arg(long)]
    pub lambda: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PortraitArgs {
    #[arg(long)]
    pub lambda: f64,
    /// Per-spin orbit energies; self-trapped energies give one orbit per lobe.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = [-0.5, 0.0, 0.5, 0.9, 1.2, 2.0, 3.0])]
    pub energies: Vec<f64>,
    /// Samples per orbit.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Points on the separatrix polyline.
    #[arg(long, default_value_t = 401)]
    pub separatrix_points: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct EnsembleArgs {
    #[arg(long = "J", value_delimiter = ',', required = true)]
    pub j: Vec<f64>,
    #[arg(long)]
    pub lambda: f64,
    /// Per-spin energy of the initial coherent states.
    #[arg(long)]
    pub energy: f64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub phi: Vec<f64>,
    /// Sign of z' for the initial states.
    #[arg(long, value_enum, default_value_t = Side::Plus)]
    pub branch: Side,
    /// Levels in the micro-canonical window.
    #[arg(long, default_value_t = 21)]
    pub window: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct DynamicsArgs {
    #[arg(long = "J", value_delimiter = ',', required = true)]
    pub j: Vec<f64>,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub energy: f64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub phi: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Side::Plus)]
    pub branch: Side,
    #[arg(long, value_enum, default_value_t = ObservableArg::Jx)]
    pub observable: ObservableArg,
    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,
    #[arg(long)]
    pub t_end: f64,
    /// Time step; defaults to 0.1 over the fastest retained frequency.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ScalingArgs {
    #[arg(long = "J", value_delimiter = ',', required = true)]
    pub j: Vec<f64>,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = [0.5, 1.5, 2.5])]
    pub phi: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SemiclassicsArgs {
    #[arg(long)]
    pub lambda: f64,
    /// Per-spin energies for periods and orbit averages.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = [-0.5, 0.0, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0, 3.0])]
    pub energies: Vec<f64>,
    /// Spin size for the WKB-versus-exact level table (omit to skip).
    #[arg(long = "J")]
    pub j: Option<f64>,
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_js(js: &[f64]) -> Result<(), CliError> {
    if js.is_empty() {
        return Err(config("--J needs at least one value"));
    }
    for &j in js {
        let doubled = 2.0 * j;
        if !(j > 0.0 && j <= MAX_J) || doubled.fract() != 0.0 {
            return Err(config(format!("--J {j}: need a positive multiple of 1/2 up to {MAX_J}")));
        }
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<(), CliError> {
    if !(lambda.is_finite() && lambda > 1.0) {
        return Err(config(format!("--lambda {lambda}: need a finite value above 1")));
    }
    Ok(())
}

fn check_finite(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(config(format!("--{name} needs at least one value")));
    }
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(config(format!("--{name} {v}: values must be finite"))),
        None => Ok(()),
    }
}

fn check_energy(energy: f64, lambda: f64) -> Result<(), CliError> {
    if !(energy > -1.0 && energy < 0.5 * lambda) {
        return Err(config(format!("--energy {energy}: need -1 < E < lambda/2")));
    }
    Ok(())
}

impl Cli {
    /// Rejects inconsistent settings before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        match &self.command {
            Command::Spectrum(a) => {
                check_js(&a.j)?;
                check_lambda(a.lambda)
            }
            Command::Portrait(a) => {
                check_lambda(a.lambda)?;
                check_finite("energies", &a.energies)?;
                for &e in &a.energies {
                    if e == 1.0 {
                        return Err(config("--energies: the separatrix is drawn separately; omit E = 1"));
                    }
                    check_energy(e, a.lambda)?;
                }
                if a.samples < 2 || a.separatrix_points < 2 {
                    return Err(config("--samples and --separatrix-points must be at least 2"));
                }
                Ok(())
            }
            Command::Ensemble(a) => {
                check_js(&a.j)?;
                check_lambda(a.lambda)?;
                check_energy(a.energy, a.lambda)?;
                check_finite("phi", &a.phi)?;
                if a.window == 0 {
                    return Err(config("--window must be positive"));
                }
                Ok(())
            }
            Command::Dynamics(a) => {
                check_js(&a.j)?;
                check_lambda(a.lambda)?;
                check_energy(a.energy, a.lambda)?;
                check_finite("phi", &a.phi)?;
                if !(a.t_start >= 0.0 && a.t_end.is_finite() && a.t_end > a.t_start) {
                    return Err(config("need 0 <= --t-start < --t-end"));
                }
                if let Some(dt) = a.dt {
                    if !(dt > 0.0 && dt.is_finite()) {
                        return Err(config("--dt must be positive"));
                    }
                    if (a.t_end - a.t_start) / dt > MAX_SAMPLES {
                        return Err(config(format!("more than {MAX_SAMPLES} samples requested")));
                    }
                }
                Ok(())
            }
            Command::Scaling(a) => {
                check_js(&a.j)?;
                check_lambda(a.lambda)?;
                check_finite("phi", &a.phi)?;
                if a.j.len() < 2 || a.j.iter().any(|&j| j < 3.0) {
                    return Err(config("--J needs at least two values, each >= 3"));
                }
                if a.energy != 1.0 {
                    return Err(config("scaling applies to states on the separatrix: --energy must be 1"));
                }
                Ok(())
            }
            Command::Semiclassics(a) => {
                check_lambda(a.lambda)?;
                check_finite("energies", &a.energies)?;
                for &e in &a.energies {
                    if e == 1.0 {
                        return Err(config("--energies: periods diverge at E = 1"));
                    }
                    check_energy(e, a.lambda)?;
                }
                if let Some(j) = a.j {
                    check_js(&[j])?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(argv: &[&str]) -> Result<(), CliError> {
        let mut full = vec!["spinlab"];
        full.extend_from_slice(argv);
        Cli::try_parse_from(full).expect("parses").validate()
    }

    #[test]
    fn accepts_typical_runs() {
        check(&["spectrum", "--J", "0.5,1000", "--lambda", "10"]).unwrap();
        check(&["portrait", "--lambda", "10", "--energies", "-0.5,2"]).unwrap();
        check(&["dynamics", "--J", "20", "--lambda", "10", "--energy", "-0.2", "--phi", "0", "--t-end", "5"]).unwrap();
        check(&["scaling", "--J", "100,200", "--lambda", "10"]).unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        for argv in [
            &["spectrum", "--J", "0.3", "--lambda", "10"][..],
            &["spectrum", "--J", "6000", "--lambda", "10"],
            &["spectrum", "--J", "10", "--lambda", "1"],
            &["portrait", "--lambda", "10", "--energies", "1"],
            &["ensemble", "--J", "10", "--lambda", "10", "--energy", "5", "--phi", "0"],
            &["ensemble", "--J", "10", "--lambda", "10", "--energy", "0", "--phi", "0", "--window", "0"],
            &["dynamics", "--J", "10", "--lambda", "10", "--energy", "0", "--phi", "0", "--t-end", "1", "--dt", "1e-9"],
            &["scaling", "--J", "100", "--lambda", "10"],
            &["semiclassics", "--lambda", "10", "--J", "2.25"],
        ] {
            let err = check(argv).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{argv:?}");
        }
    }

    #[test]
    fn names_match_serialized_tags() {
        let cli = Cli::try_parse_from(["spinlab", "semiclassics", "--lambda", "3"]).unwrap();
        let value = serde_json::to_value(&cli.command).unwrap();
        assert_eq!(value["command"], cli.command.name());
    }
}
