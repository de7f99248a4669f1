use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fsi_core::phase_search::{
    Objective, DEFAULT_BINARY_RESOLUTION, DEFAULT_TERNARY_CAP, DEFAULT_TERNARY_RESOLUTION, DEFAULT_ZERO_TOL,
};

#[derive(Debug, Parser)]
#[command(name = "fsi", version, about = "Fock-state interferometry: phase discrimination and optical reading")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    MinError,
    MaxInformation,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::MinError => Objective::MinError,
            ObjectiveArg::MaxInformation => Objective::MaxInformation,
        }
    }
}

#[derive(Clone, Copy, Debug, Args)]
pub struct StateArgs {
    /// Photons entering port a.
    #[arg(long)]
    pub na: u32,
    /// Photons entering port b.
    #[arg(long)]
    pub nb: u32,
}

#[derive(Clone, Copy, Debug, Args)]
pub struct TernaryArgs {
    /// Coarse grid step in radians (suffix `deg` for degrees).
    #[arg(long, value_parser = parse_angle, default_value_t = DEFAULT_TERNARY_RESOLUTION)]
    pub grid: f64,
    /// Largest phase searched.
    #[arg(long, value_parser = parse_angle, default_value_t = DEFAULT_TERNARY_CAP)]
    pub cap: f64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::MinError)]
    pub objective: ObjectiveArg,
}

/// Comma-separated phases, each in radians or with a `deg` suffix.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseList(pub Vec<f64>);

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P_e and MI of {0, theta} along a phase grid.
    BinarySweep {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_parser = parse_angle, default_value_t = DEFAULT_BINARY_RESOLUTION)]
        grid: f64,
        /// Sweep every projection sharing the input's total photon number.
        #[arg(long)]
        batch: bool,
    },
    /// Smallest optimum phase series and the power-law fit over balanced inputs.
    SopFit {
        #[arg(long, default_value_t = 10)]
        max_two_j: u32,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
    },
    /// Long-format ternary error surface (theta1, theta2, pe).
    TernarySurface {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_parser = parse_angle, default_value_t = DEFAULT_TERNARY_RESOLUTION)]
        grid: f64,
        #[arg(long, value_parser = parse_angle, default_value_t = DEFAULT_TERNARY_CAP)]
        cap: f64,
    },
    /// Optimal ternary placement {0, theta1, theta2}, or evaluation of a given one.
    TernaryOptimize {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        search: TernaryArgs,
        /// Evaluate `theta1,theta2` instead of searching.
        #[arg(long, value_parser = parse_phase_list)]
        phases: Option<PhaseList>,
    },
    /// Ternary optima for every input with 2 <= j <= 6, checked against reference values.
    Table2 {
        #[command(flatten)]
        search: TernaryArgs,
    },
    /// Optical-reading capacities and photon information efficiency.
    Reading {
        /// Signal photon grid: `a,b,c` or `start:stop:step`.
        #[arg(long, value_parser = parse_ns_grid)]
        ns_grid: Option<NsGrid>,
        /// FSI BPSK capacity for every probe up to --max-two-j.
        #[arg(long, conflicts_with_all = ["ns_grid", "na"])]
        bpsk_sweep: bool,
        #[arg(long, default_value_t = 10)]
        max_two_j: u32,
        /// BPSK and TPSK reports for this probe.
        #[arg(long, requires = "nb", conflicts_with = "ns_grid")]
        na: Option<u32>,
        #[arg(long, requires = "na")]
        nb: Option<u32>,
        /// TPSK placement `theta1,theta2` for the probe report.
        #[arg(long, value_parser = parse_phase_list, requires = "na")]
        phases: Option<PhaseList>,
    },
    /// Compare the spin engine with the Fock-space simulation.
    OracleCheck {
        #[arg(long, default_value_t = 8)]
        max_two_j: u32,
        /// Number of phases k*pi/17, k = 0, 1, ...
        #[arg(long, default_value_t = 33)]
        points: u32,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NsGrid(pub Vec<f64>);

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (body, deg) = match s.strip_suffix("deg") {
        Some(b) => (b.trim_end(), true),
        None => (s, false),
    };
    let v: f64 = body.parse().map_err(|_| format!("invalid angle `{s}`"))?;
    if !v.is_finite() {
        return Err(format!("angle `{s}` is not finite"));
    }
    Ok(if deg { v.to_radians() } else { v })
}

pub fn parse_phase_list(s: &str) -> Result<PhaseList, String> {
    let v = s.split(',').map(parse_angle).collect::<Result<Vec<_>, _>>()?;
    if v.len() != 2 {
        return Err(format!("expected two phases `theta1,theta2`, got {}", v.len()));
    }
    Ok(PhaseList(v))
}

pub fn parse_ns_grid(s: &str) -> Result<NsGrid, String> {
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t.trim().parse().map_err(|_| format!("invalid number `{t}`"))?;
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(format!("signal photon number `{t}` must be positive"))
        }
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if stop < start {
                return Err("range stop is below start".into());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|k| start + k as f64 * step).collect()
        }
        [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("invalid grid `{s}`")),
    };
    Ok(NsGrid(grid))
}
