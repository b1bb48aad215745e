//! Nuclear transition records and the delimited-text isotope database.
//!
//! File format: UTF-8, comma separated, header
//! `label,E_keV,tau_coh_s,mu_over_hbar_HzT,Gamma_rad_s`. Lines starting
//! with `#` are comments. The two trailing columns may be empty.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::constants::{kev_to_joule, PhysicalConstants};
use crate::error::{Error, Result};

pub const DB_HEADER: [&str; 5] = [
    "label",
    "E_keV",
    "tau_coh_s",
    "mu_over_hbar_HzT",
    "Gamma_rad_s",
];

/// The bundled database reproducing the eight candidate transitions.
pub const BUNDLED_DB: &str = include_str!("../data/isotopes.csv");

/// Angular frequency `E/ħ` of a transition with energy `e_kev`.
pub fn angular_frequency(e_kev: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(e_kev > 0.0) || !e_kev.is_finite() {
        return Err(Error::domain(format!(
            "transition energy must be positive, got {e_kev} keV"
        )));
    }
    Ok(kev_to_joule(e_kev) / constants.hbar)
}

/// Vacuum wavenumber `ω/c`.
pub fn photon_wavenumber(omega: f64, constants: &PhysicalConstants) -> f64 {
    omega / constants.c
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotopeRecord {
    pub label: String,
    /// Transition energy, keV.
    pub energy_kev: f64,
    /// Coherence time, s.
    pub tau_coh: f64,
    /// Nuclear magnetic moment over ħ, Hz/T.
    pub mu_over_hbar: Option<f64>,
    /// Linewidth, rad/s.
    pub gamma: Option<f64>,
    /// Angular frequency, rad/s (derived).
    pub omega: f64,
    /// Vacuum wavenumber, m⁻¹ (derived).
    pub k0: f64,
}

impl IsotopeRecord {
    pub fn new(
        label: impl Into<String>,
        energy_kev: f64,
        tau_coh: f64,
        mu_over_hbar: Option<f64>,
        gamma: Option<f64>,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        if !(tau_coh > 0.0) || !tau_coh.is_finite() {
            return Err(Error::domain(format!(
                "coherence time must be positive, got {tau_coh} s"
            )));
        }
        let omega = angular_frequency(energy_kev, constants)?;
        Ok(IsotopeRecord {
            label: label.into(),
            energy_kev,
            tau_coh,
            mu_over_hbar,
            gamma,
            omega,
            k0: photon_wavenumber(omega, constants),
        })
    }
}

/// Loads a database file from disk.
pub fn load_isotope_db(path: &Path, constants: &PhysicalConstants) -> Result<Vec<IsotopeRecord>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_isotope_db(&text, path, constants)
}

/// Loads the database compiled into the crate.
pub fn bundled_isotope_db(constants: &PhysicalConstants) -> Vec<IsotopeRecord> {
    parse_isotope_db(BUNDLED_DB, Path::new("<bundled>"), constants)
        .expect("bundled isotope database is valid")
}

/// Parses database text. `origin` is only used for error messages.
pub fn parse_isotope_db(
    text: &str,
    origin: &Path,
    constants: &PhysicalConstants,
) -> Result<Vec<IsotopeRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let parse_err = |line: u64, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut header_seen = false;
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if !header_seen {
            header_seen = true;
            if row.iter().eq(DB_HEADER.iter().copied()) {
                continue;
            }
            if row.get(0) == Some(DB_HEADER[0]) {
                return Err(parse_err(
                    line,
                    format!("unexpected header, expected `{}`", DB_HEADER.join(",")),
                ));
            }
        }
        if row.len() != DB_HEADER.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", DB_HEADER.len(), row.len()),
            ));
        }
        let label = &row[0];
        if label.is_empty() {
            return Err(parse_err(line, "empty label".into()));
        }
        let required = |i: usize| -> Result<f64> {
            row[i].parse::<f64>().map_err(|e| {
                parse_err(
                    line,
                    format!("{}: cannot parse `{}`: {e}", DB_HEADER[i], &row[i]),
                )
            })
        };
        let optional = |i: usize| -> Result<Option<f64>> {
            if row[i].is_empty() {
                Ok(None)
            } else {
                required(i).map(Some)
            }
        };
        let energy = required(1)?;
        let tau = required(2)?;
        let mu = optional(3)?;
        let gamma = optional(4)?;
        let record = IsotopeRecord::new(label, energy, tau, mu, gamma, constants)
            .map_err(|e| parse_err(line, e.to_string()))?;
        if !seen.insert(record.label.clone()) {
            return Err(Error::DuplicateLabel {
                path: origin.to_path_buf(),
                line,
                label: record.label,
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Serializes records back to the database format. Derived fields are
/// omitted; numbers use the shortest representation that parses back to
/// the same `f64`.
pub fn serialize_isotope_db(records: &[IsotopeRecord]) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = DB_HEADER.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.label,
            r.energy_kev,
            r.tau_coh,
            opt(r.mu_over_hbar),
            opt(r.gamma)
        ));
    }
    out
}

pub fn find<'a>(records: &'a [IsotopeRecord], label: &str) -> Option<&'a IsotopeRecord> {
    records.iter().find(|r| r.label == label)
}

/// Default database location: `$SRD_DB` when set.
pub fn db_path_from_env() -> Option<PathBuf> {
    std::env::var_os("SRD_DB").map(PathBuf::from)
}
