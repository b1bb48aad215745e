use rayon::prelude::*;
use srd_core::broadband::{geometric_deflection, AngleConvention, MediumParams};
use srd_core::collective::{divergence_angle, CollectiveParams};
use srd_core::detector::{
    gravity_trace, lighthouse_ring, per_revolution_grid, rotor_spiral, Broadband, DetectorGeometry,
    DetectorPattern, IntensityModel, Narrowband, Uniform,
};
use srd_core::geodesic::{
    deflection_velocity_ratio, flat_space_radial_acceleration, radial_acceleration_closest,
};
use srd_core::gradient::{
    compensation_schedule, deflection_angle_small, detuning_for_transverse, gravity_coefficients,
    gravity_deflection, min_length_scale, requires_compensation, rotor_coefficients,
    rotor_deflection, rotor_deflection_rate, saturation_time, GravityEnvironment, RotorEnvironment,
};
use srd_core::isotope::{
    bundled_isotope_db, find, load_isotope_db, photon_wavenumber, IsotopeRecord,
};
use srd_core::table1::build_table1;
use srd_core::{ConstantSet, PhysicalConstants};

use crate::args::{Cli, Command, Intensity, Mode, Scale, SweepParam};
use crate::error::{config, Result};
use crate::report::{Cell, Report};

pub fn execute(cli: &Cli) -> Result<Report> {
    let k = ConstantSet::from(cli.constants).constants();
    match cli.command {
        Command::Table1 => table1(cli, &k),
        Command::WorkedExample => worked_example(cli, &k),
        Command::Detector => detector(cli, &k),
        Command::GrCompare => gr_compare(cli, &k),
        Command::Sweep => sweep(cli, &k),
        Command::Mincell => mincell(cli, &k),
    }
}

fn database(cli: &Cli, k: &PhysicalConstants) -> Result<Vec<IsotopeRecord>> {
    let records = match &cli.db {
        Some(path) if !path.exists() => {
            return Err(config(format!(
                "isotope database {} does not exist",
                path.display()
            )))
        }
        Some(path) => load_isotope_db(path, k)?,
        None => bundled_isotope_db(k),
    };
    let records = match &cli.isotope {
        Some(label) => vec![find(&records, label)
            .ok_or_else(|| config(format!("isotope `{label}` not in database")))?
            .clone()],
        None => records,
    };
    if records.is_empty() {
        return Err(config("isotope database is empty"));
    }
    Ok(records)
}

/// The selected isotope, or `fallback` when none is selected.
fn isotope(cli: &Cli, k: &PhysicalConstants, fallback: &str) -> Result<IsotopeRecord> {
    let records = database(cli, k)?;
    let label = cli.isotope.as_deref().unwrap_or(fallback);
    find(&records, label)
        .cloned()
        .ok_or_else(|| config(format!("isotope `{label}` not in database")))
}

fn rotor(cli: &Cli) -> RotorEnvironment {
    RotorEnvironment::from_hz(cli.rotor_r, cli.rotor_hz)
}

fn gravity(cli: &Cli, k: &PhysicalConstants) -> GravityEnvironment {
    GravityEnvironment {
        mass: cli.mass.unwrap_or(k.earth_mass),
        radius: cli.radius.unwrap_or(k.earth_radius),
    }
}

fn table1(cli: &Cli, k: &PhysicalConstants) -> Result<Report> {
    let rows = build_table1(&database(cli, k)?, &rotor(cli), &gravity(cli, k), k)?;
    let mut report = Report::new(
        "table1",
        &[
            "label",
            "E_keV",
            "tau_coh_s",
            "phi_g_deg",
            "phi_c_deg",
            "gravity_saturated",
            "rotor_saturated",
        ],
    );
    for r in rows {
        report.push(vec![
            r.label.into(),
            r.energy_kev.into(),
            r.tau_coh.into(),
            r.phi_gravity_deg.into(),
            r.phi_rotor_deg.into(),
            r.gravity_saturated.into(),
            r.rotor_saturated.into(),
        ]);
    }
    Ok(report)
}

/// Inputs of the rotating Th:CaF2 example as quoted in the literature.
mod th229 {
    /// Transition angular frequency, rad/s.
    pub const OMEGA: f64 = 1.1564e16;
    pub const TAU_COH: f64 = 1e-3;
    /// Nuclear magnetic moment over ħ, Hz/T.
    pub const MU_OVER_HBAR: f64 = 2.538e7;
    /// Isomer linewidth in CaF2, Hz.
    pub const LINEWIDTH: f64 = 100.0;
    /// Quoted transverse wavenumber Q·τ, m⁻¹.
    pub const Q_TAU_QUOTED: f64 = 6214.0;
}

/// Rounds `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

fn status(value: f64, quoted: Option<(f64, i32)>) -> &'static str {
    match quoted {
        None => "derived",
        Some((q, digits)) if (round_sig(value, digits) - q).abs() <= 1e-9 * q.abs() => {
            "matches-paper"
        }
        Some(_) => "paper-inconsistent",
    }
}

/// Quantity name, value, quoted value with its significant digits, unit.
type Line = (&'static str, Cell, Option<(f64, i32)>, &'static str);

fn worked_example(cli: &Cli, k: &PhysicalConstants) -> Result<Report> {
    use th229::*;
    let rotor = rotor(cli);
    let coeff = rotor_coefficients(&rotor, OMEGA, k)?;
    let k0 = photon_wavenumber(OMEGA, k);
    let q_tau = coeff.q.abs() * TAU_COH;
    let sched = compensation_schedule(coeff.q, k0, Some(MU_OVER_HBAR))?;
    let detuning_quoted = detuning_for_transverse(Q_TAU_QUOTED, k0, k);
    let detuning_formula = detuning_for_transverse(q_tau, k0, k);

    let lines: Vec<Line> = vec![
        (
            "alpha_over_omega",
            (coeff.alpha / OMEGA).into(),
            Some((-2.69e-11, 3)),
            "1",
        ),
        (
            "q_over_omega",
            (coeff.q / OMEGA).into(),
            Some((-5.37e-11, 3)),
            "m^-1",
        ),
        ("q", coeff.q.into(), None, "rad s^-1 m^-1"),
        ("k0", k0.into(), None, "m^-1"),
        ("q_tau", q_tau.into(), Some((Q_TAU_QUOTED, 4)), "m^-1"),
        (
            "phi_tau",
            deflection_angle_small(coeff.q, k0, TAU_COH).into(),
            Some((3.2e-3, 2)),
            "rad",
        ),
        (
            "detuning_quoted_q_tau",
            detuning_quoted.into(),
            Some((1.5e8, 2)),
            "Hz",
        ),
        (
            "detuning_formula_q_tau",
            detuning_formula.into(),
            None,
            "Hz",
        ),
        (
            "requires_compensation",
            requires_compensation(detuning_formula, LINEWIDTH).into(),
            None,
            "",
        ),
        (
            "zeeman_ramp_a",
            sched.zeeman_ramp()?.into(),
            Some((2.52e-7, 3)),
            "T s^-1 m^-1",
        ),
        (
            "saturation_time",
            sched.t_max().into(),
            Some((0.31, 2)),
            "s",
        ),
    ];

    let mut report = Report::new(
        "worked-example",
        &["quantity", "value", "paper_value", "unit", "status"],
    );
    for (name, value, quoted, unit) in lines {
        let st = match value {
            Cell::Num(v) => status(v, quoted),
            _ => "derived",
        };
        report.push(vec![
            name.into(),
            value,
            quoted.map(|q| q.0).into(),
            unit.into(),
            st.into(),
        ]);
    }
    Ok(report)
}

fn time_grid(cli: &Cli, t_end: f64) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(config(format!("--t-max must be positive, got {t_end}")));
    }
    let grid = match cli.per_revolution {
        Some(n) => {
            let est = (t_end * cli.rotor_hz * n as f64).ceil();
            if est > cli.max_grid as f64 {
                return Err(config(format!(
                    "grid of ~{est} samples exceeds --max-grid {}",
                    cli.max_grid
                )));
            }
            per_revolution_grid(&rotor(cli), t_end, n)?
        }
        None => {
            if cli.t_steps == 0 {
                return Err(config("--t-steps must be at least 1"));
            }
            if cli.t_steps + 1 > cli.max_grid {
                return Err(config(format!(
                    "{} time samples exceed --max-grid {}",
                    cli.t_steps + 1,
                    cli.max_grid
                )));
            }
            (0..=cli.t_steps)
                .map(|i| t_end * i as f64 / cli.t_steps as f64)
                .collect()
        }
    };
    Ok(grid)
}

fn detector(cli: &Cli, k: &PhysicalConstants) -> Result<Report> {
    let geom = DetectorGeometry::new(cli.detector_d, cli.rotor_r, cli.height)?;
    let t_end = match (cli.t_max, &cli.isotope) {
        (Some(t), _) => t,
        (None, Some(_)) => isotope(cli, k, "")?.tau_coh,
        (None, None) => 1e-2,
    };
    let grid = time_grid(cli, t_end)?;
    let rotor = rotor(cli);
    let gravity = gravity(cli, k);

    let model: Box<dyn IntensityModel> = match cli.intensity {
        Intensity::Uniform => Box::new(Uniform),
        Intensity::Narrowband => Box::new(Narrowband(CollectiveParams::new(
            1.0,
            cli.collective_rate,
            0.0,
        )?)),
        Intensity::Broadband => {
            let iso = isotope(cli, k, "57Fe")?;
            let q = match cli.mode {
                Mode::Gravity => gravity_coefficients(&gravity, iso.omega, k)?.q,
                Mode::Spiral | Mode::Ring => rotor_coefficients(&rotor, iso.omega, k)?.q,
            };
            let gamma = iso.gamma.unwrap_or(1.0 / iso.tau_coh);
            Box::new(Broadband(MediumParams::with_optical_depth(
                cli.optical_depth,
                cli.cross_section,
                cli.length,
                gamma,
                iso.k0,
                q,
            )?))
        }
    };

    let pattern: DetectorPattern = match cli.mode {
        Mode::Spiral => rotor_spiral(&geom, &rotor, model.as_ref(), &grid, k)?,
        Mode::Ring => {
            rotor_deflection_rate(&rotor, k)?;
            lighthouse_ring(&geom, &rotor, model.as_ref(), &grid)?
        }
        Mode::Gravity => gravity_trace(&geom, &gravity, model.as_ref(), &grid, k)?,
    };

    let mut report = Report::new("detector", &["t_s", "r_m", "theta_rad", "intensity"]);
    for e in &pattern.events {
        report.push(vec![
            e.t.into(),
            e.r.into(),
            e.theta.into(),
            e.intensity.into(),
        ]);
    }
    report.warnings.extend(pattern.warning);
    Ok(report)
}

fn gr_compare(cli: &Cli, k: &PhysicalConstants) -> Result<Report> {
    let env = gravity(cli, k);
    let (b, m) = (env.radius, env.mass);
    let ca = radial_acceleration_closest(b, m, k)?;
    let ratio = deflection_velocity_ratio(b, m, cli.dt, k)?;
    let newton = k.g * m / (b * b);
    let stored = k.c * gravity_deflection(&env, cli.dt, k)?;

    let mut report = Report::new("gr-compare", &["quantity", "value", "unit"]);
    let rows: [(&str, f64, &str); 14] = [
        ("impact_parameter", b, "m"),
        ("mass", m, "kg"),
        ("u_closest", ca.u, "m^-1"),
        ("r_closest", ca.r, "m"),
        ("phi_dot", ca.phi_dot, "rad s^-1"),
        ("r_ddot_exact", ca.r_ddot_exact, "m s^-2"),
        ("flat_term", ca.flat_term, "m s^-2"),
        ("gravity_term", ca.gravity_term, "m s^-2"),
        ("r_ddot_two_term", ca.r_ddot_approx, "m s^-2"),
        (
            "flat_space_artifact",
            flat_space_radial_acceleration(b, 0.0, k),
            "m s^-2",
        ),
        ("newtonian_acceleration", newton, "m s^-2"),
        (
            "free_light_velocity_change",
            2.0 * newton * cli.dt,
            "m s^-1",
        ),
        ("stored_velocity_change", stored, "m s^-1"),
        ("velocity_ratio", ratio, "1"),
    ];
    for (name, v, unit) in rows {
        report.push(vec![name.into(), v.into(), unit.into()]);
    }
    report.warnings.extend(ca.warning);
    Ok(report)
}

fn sweep_values(cli: &Cli) -> Result<Vec<f64>> {
    let n = cli.sweep_points;
    if n == 0 {
        return Err(config("--sweep-points must be at least 1"));
    }
    if n > cli.max_grid {
        return Err(config(format!(
            "sweep of {n} points exceeds --max-grid {}",
            cli.max_grid
        )));
    }
    let (a, b) = (cli.sweep_from, cli.sweep_to);
    if !(a.is_finite() && b.is_finite()) {
        return Err(config("sweep bounds must be finite"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let frac = |i: usize| i as f64 / (n - 1) as f64;
    match cli.sweep_scale {
        Scale::Linear => Ok((0..n).map(|i| a + (b - a) * frac(i)).collect()),
        Scale::Log => {
            if !(a > 0.0 && b > 0.0) {
                return Err(config("log sweep needs positive bounds"));
            }
            let (la, lb) = (a.ln(), b.ln());
            Ok((0..n).map(|i| (la + (lb - la) * frac(i)).exp()).collect())
        }
    }
}

const SWEEP_COLUMNS: [&str; 6] = [
    "param",
    "value",
    "rate_deg_s",
    "saturation_time_s",
    "phi_c_deg",
    "phi_g_deg",
];

/// Rotor deflection in degrees, 90 once `t` reaches saturation.
fn rotor_angle_deg(
    rotor: &RotorEnvironment,
    t: f64,
    k: &PhysicalConstants,
) -> srd_core::Result<f64> {
    let rate = rotor_deflection_rate(rotor, k)?;
    if rate > 0.0 && t >= 1.0 / rate {
        return Ok(90.0);
    }
    Ok(rotor_deflection(rotor, t, k)?.to_degrees())
}

fn sweep(cli: &Cli, k: &PhysicalConstants) -> Result<Report> {
    let values = sweep_values(cli)?;
    let iso = isotope(cli, k, "57Fe")?;
    let t_eval = cli.t_max.unwrap_or(iso.tau_coh);
    let gravity = gravity(cli, k);
    let phi_g = gravity_deflection(&gravity, t_eval, k)?.to_degrees();
    let name = match cli.sweep_param {
        SweepParam::RotorHz => "rotor-hz",
        SweepParam::RotorR => "rotor-R",
        SweepParam::Tau => "tau",
        SweepParam::OpticalDepth => "optical-depth",
    };

    let row = |v: f64| -> srd_core::Result<Vec<Cell>> {
        let rotor_row = |rotor: RotorEnvironment, t: f64| -> srd_core::Result<Vec<Cell>> {
            let rate = rotor_deflection_rate(&rotor, k)?;
            let phi_g = gravity_deflection(&gravity, t, k)?.to_degrees();
            Ok(vec![
                name.into(),
                v.into(),
                rate.to_degrees().into(),
                saturation_time(rate, 1.0).into(),
                rotor_angle_deg(&rotor, t, k)?.into(),
                phi_g.into(),
            ])
        };
        match cli.sweep_param {
            SweepParam::RotorHz => rotor_row(RotorEnvironment::from_hz(cli.rotor_r, v), t_eval),
            SweepParam::RotorR => rotor_row(RotorEnvironment::from_hz(v, cli.rotor_hz), t_eval),
            SweepParam::Tau => {
                if !(v >= 0.0) {
                    return Err(srd_core::Error::Domain(format!(
                        "coherence time must be non-negative, got {v}"
                    )));
                }
                rotor_row(rotor(cli), v)
            }
            SweepParam::OpticalDepth => {
                let q = rotor_coefficients(&rotor(cli), iso.omega, k)?.q;
                let gamma = iso.gamma.unwrap_or(1.0 / iso.tau_coh);
                let m = MediumParams::with_optical_depth(
                    v,
                    cli.cross_section,
                    cli.length,
                    gamma,
                    iso.k0,
                    q,
                )?;
                let rate = v * q.abs() / iso.k0;
                Ok(vec![
                    name.into(),
                    v.into(),
                    rate.to_degrees().into(),
                    saturation_time(rate, 1.0).into(),
                    geometric_deflection(&m, AngleConvention::Linewidth)
                        .to_degrees()
                        .into(),
                    phi_g.into(),
                ])
            }
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| config(format!("cannot start worker pool: {e}")))?;
    let rows = pool.install(|| {
        values
            .par_iter()
            .map(|&v| row(v))
            .collect::<srd_core::Result<Vec<_>>>()
    })?;

    let mut report = Report::new("sweep", &SWEEP_COLUMNS);
    for r in rows {
        report.push(r);
    }
    Ok(report)
}

fn mincell(cli: &Cli, k: &PhysicalConstants) -> Result<Report> {
    let gravity = gravity(cli, k);
    let mut report = Report::new(
        "mincell",
        &[
            "label",
            "k0_per_m",
            "phi_g_rad",
            "min_length_m",
            "divergence_rad",
        ],
    );
    for iso in database(cli, k)? {
        let phi = gravity_deflection(&gravity, iso.tau_coh, k)?;
        let length = min_length_scale(phi, iso.k0);
        report.push(vec![
            iso.label.into(),
            iso.k0.into(),
            phi.into(),
            length.into(),
            divergence_angle(iso.k0, length.powi(3)).into(),
        ]);
    }
    Ok(report)
}
