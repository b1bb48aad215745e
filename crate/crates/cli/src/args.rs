use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use srd_core::ConstantSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Table1,
    WorkedExample,
    Detector,
    GrCompare,
    Sweep,
    Mincell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Constants {
    Paper,
    Codata,
}

impl From<Constants> for ConstantSet {
    fn from(c: Constants) -> Self {
        match c {
            Constants::Paper => ConstantSet::Paper,
            Constants::Codata => ConstantSet::Codata,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Spiral,
    Ring,
    Gravity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Intensity {
    Uniform,
    Narrowband,
    Broadband,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// Rotor frequency Λ/2π, Hz.
    RotorHz,
    /// Rotor radius, m.
    RotorR,
    /// Coherence time, s.
    Tau,
    /// Optical depth ξ.
    OpticalDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

/// Deflection of superradiant x-ray emission by gravity and rotor time
/// dilation.
#[derive(Debug, Clone, Parser)]
#[command(name = "srd", version)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Command,

    #[arg(long, value_enum, default_value = "paper")]
    pub constants: Constants,

    /// Isotope database (CSV). The bundled table is used when absent.
    #[arg(long, env = "SRD_DB")]
    pub db: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Restrict to one isotope label, e.g. 57Fe.
    #[arg(long)]
    pub isotope: Option<String>,

    /// Rotor radius, m.
    #[arg(long = "rotor-R", default_value_t = 5e-3)]
    pub rotor_r: f64,

    /// Rotor frequency Λ/2π, Hz.
    #[arg(long, default_value_t = 70e3)]
    pub rotor_hz: f64,

    /// Gravitating mass, kg. Defaults to the Earth.
    #[arg(long)]
    pub mass: Option<f64>,

    /// Distance from the mass centre, m. Defaults to the Earth radius.
    #[arg(long)]
    pub radius: Option<f64>,

    /// Target to detector distance, m.
    #[arg(long = "detector-D", default_value_t = 1.0)]
    pub detector_d: f64,

    /// Target height, m.
    #[arg(long, default_value_t = 1e-3)]
    pub height: f64,

    #[arg(long, value_enum, default_value = "spiral")]
    pub mode: Mode,

    #[arg(long, value_enum, default_value = "narrowband")]
    pub intensity: Intensity,

    /// Collective frequency √N·Ω for the narrowband model, rad/s.
    #[arg(long, default_value_t = 1e3)]
    pub collective_rate: f64,

    /// Optical depth ξ for the broadband model.
    #[arg(long, default_value_t = 1.0)]
    pub optical_depth: f64,

    /// Nuclear resonance cross section, m².
    #[arg(long, default_value_t = 2.56e-22)]
    pub cross_section: f64,

    /// Crystal length, m.
    #[arg(long, default_value_t = 1e-5)]
    pub length: f64,

    /// End of the time grid, s. Defaults to the isotope's coherence time
    /// when one is selected, else 10 ms.
    #[arg(long)]
    pub t_max: Option<f64>,

    /// Number of time steps.
    #[arg(long, default_value_t = 1000)]
    pub t_steps: usize,

    /// Sample a fixed number of points per rotor revolution instead of a
    /// uniform time grid.
    #[arg(long)]
    pub per_revolution: Option<usize>,

    /// Time step for the velocity comparison, s.
    #[arg(long, default_value_t = 1e-6)]
    pub dt: f64,

    #[arg(long, value_enum, default_value = "rotor-hz")]
    pub sweep_param: SweepParam,

    #[arg(long, default_value_t = 1e3)]
    pub sweep_from: f64,

    #[arg(long, default_value_t = 1e5)]
    pub sweep_to: f64,

    /// Number of sweep points.
    #[arg(long, default_value_t = 11)]
    pub sweep_points: usize,

    #[arg(long, value_enum, default_value = "linear")]
    pub sweep_scale: Scale,

    /// Largest accepted grid (sweep points or time samples).
    #[arg(long, default_value_t = 1_000_000)]
    pub max_grid: usize,

    /// Worker threads for sweeps; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}
