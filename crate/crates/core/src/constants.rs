//! Physical constants and unit conversions.
//!
//! Two constant sets are provided. [`ConstantSet::Paper`], the default,
//! carries rounded values (notably `c = 3e8 m/s`); [`ConstantSet::Codata`]
//! replaces the speed of light with its exact SI value.

use std::fmt;
use std::str::FromStr;

/// Joules per kilo-electronvolt (exact, SI 2019).
pub const JOULE_PER_KEV: f64 = 1.602_176_634e-16;

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Exact speed of light in m/s.
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConstantSet {
    #[default]
    Paper,
    Codata,
}

impl ConstantSet {
    pub fn constants(self) -> PhysicalConstants {
        match self {
            ConstantSet::Paper => PhysicalConstants::PAPER,
            ConstantSet::Codata => PhysicalConstants::CODATA,
        }
    }
}

impl fmt::Display for ConstantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantSet::Paper => "paper",
            ConstantSet::Codata => "codata",
        })
    }
}

impl FromStr for ConstantSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(ConstantSet::Paper),
            "codata" => Ok(ConstantSet::Codata),
            other => Err(format!("unknown constant set `{other}`")),
        }
    }
}

/// Fundamental constants plus the Earth parameters used as the default
/// gravitational source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant, m³·kg⁻¹·s⁻².
    pub g: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Mass of the Earth, kg.
    pub earth_mass: f64,
    /// Mean radius of the Earth, m.
    pub earth_radius: f64,
}

impl PhysicalConstants {
    pub const PAPER: PhysicalConstants = PhysicalConstants {
        g: 6.673_84e-11,
        c: 3.0e8,
        hbar: HBAR,
        earth_mass: 5.972_19e24,
        earth_radius: 6.371e6,
    };

    pub const CODATA: PhysicalConstants = PhysicalConstants {
        c: SPEED_OF_LIGHT_SI,
        ..PhysicalConstants::PAPER
    };

    /// Schwarzschild radius `2GM/c²` of a mass `m`.
    pub fn schwarzschild_radius(&self, m: f64) -> f64 {
        2.0 * self.g * m / (self.c * self.c)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::PAPER
    }
}

pub fn kev_to_joule(e_kev: f64) -> f64 {
    e_kev * JOULE_PER_KEV
}

pub fn joule_to_kev(e_joule: f64) -> f64 {
    e_joule / JOULE_PER_KEV
}

pub fn deg(rad: f64) -> f64 {
    rad.to_degrees()
}
