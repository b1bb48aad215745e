//! Numerical Maxwell–Bloch propagation of a short resonant pulse.
//!
//! Solves, in the retarded time `τ = t − z/c` along the light
//! characteristics,
//!
//! ```text
//! ∂z Ω = iη ρ,      ∂τ ρ = −(Γ/2) ρ + (i/2) Ω,
//! Ω(τ, 0) = p(τ),   ρ(0, z) = 0
//! ```
//!
//! where `p` is a unit-area Hann pulse standing in for `δ(τ)`. Each z step
//! integrates ρ over the whole τ grid with an exponential trapezoid rule
//! and advances Ω with Heun's method, so the scheme is second order in
//! both steps.

use num_complex::Complex64;

use crate::broadband::MediumParams;
use crate::error::{Error, Result};
use crate::ode::check_grid;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Minimum number of τ samples across the boundary pulse.
pub const MIN_PULSE_SAMPLES: usize = 8;

/// Default pulse width as a fraction of the lifetime `1/Γ`.
pub const DEFAULT_PULSE_WIDTH: f64 = 1e-3;

/// Unit-area Hann pulse of width `w` starting at 0.
pub fn hann_pulse(t: f64, w: f64) -> f64 {
    if (0.0..=w).contains(&t) {
        (1.0 - (2.0 * std::f64::consts::PI * t / w).cos()) / w
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellBlochSolution {
    /// Retarded time grid.
    pub t: Vec<f64>,
    /// Depth grid.
    pub z: Vec<f64>,
    /// `field[j][n]` is Ω at depth `z[j]` and retarded time `t[n]`.
    pub field: Vec<Vec<Complex64>>,
    pub pulse_width: f64,
}

impl MaxwellBlochSolution {
    /// Centroid of the boundary pulse; the smooth response lags the ideal
    /// δ-pulse solution by this much.
    pub fn pulse_centroid(&self) -> f64 {
        self.pulse_width / 2.0
    }

    pub fn exit_field(&self) -> &[Complex64] {
        self.field.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Time grid with `pulse_steps` uniform steps across the pulse `[0, w]`
/// followed by `steps` uniform steps up to `t_end`.
pub fn pulse_time_grid(t_end: f64, pulse_width: f64, pulse_steps: usize, steps: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..pulse_steps)
        .map(|i| pulse_width * i as f64 / pulse_steps as f64)
        .collect();
    let dt = (t_end - pulse_width) / steps as f64;
    grid.extend((0..=steps).map(|i| pulse_width + dt * i as f64));
    grid
}

pub fn uniform_grid(end: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| end * i as f64 / steps as f64).collect()
}

fn integrate_coherence(field: &[Complex64], t: &[f64], gamma: f64, out: &mut [Complex64]) {
    out[0] = Complex64::new(0.0, 0.0);
    for n in 0..t.len() - 1 {
        let h = t[n + 1] - t[n];
        let decay = (-0.5 * gamma * h).exp();
        out[n + 1] = decay * out[n] + I * 0.25 * h * (decay * field[n] + field[n + 1]);
    }
}

pub fn maxwell_bloch_numeric(
    medium: &MediumParams,
    t_grid: &[f64],
    z_grid: &[f64],
    pulse_width: f64,
) -> Result<MaxwellBlochSolution> {
    medium.validate()?;
    check_grid(t_grid)?;
    check_grid(z_grid)?;
    if t_grid[0] != 0.0 || z_grid[0] != 0.0 {
        return Err(Error::Grid("time and depth grids must start at 0".into()));
    }
    if z_grid[z_grid.len() - 1] > medium.length * (1.0 + 1e-12) {
        return Err(Error::Grid("depth grid extends beyond the crystal".into()));
    }
    if !(pulse_width > 0.0) {
        return Err(Error::Grid("pulse width must be positive".into()));
    }
    let in_pulse = t_grid.iter().filter(|&&t| t < pulse_width).count();
    if in_pulse < MIN_PULSE_SAMPLES {
        return Err(Error::Grid(format!(
            "only {in_pulse} time samples resolve the pulse, need {MIN_PULSE_SAMPLES}"
        )));
    }
    let eta = medium.propagation_coupling();
    let t_end = t_grid[t_grid.len() - 1];
    let max_dt = t_grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if max_dt * medium.gamma > 0.1 {
        return Err(Error::Grid(format!(
            "time step {max_dt:e} s too coarse for linewidth {:e} rad/s",
            medium.gamma
        )));
    }
    let max_dz = z_grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    // Growth rate of the z march is ~ (η/2)·t_end per unit length.
    if max_dz * eta / 2.0 * t_end > 1.0 {
        return Err(Error::Grid(format!(
            "depth step {max_dz:e} m too coarse for optical depth {}",
            medium.optical_depth()
        )));
    }

    let nt = t_grid.len();
    let mut field = Vec::with_capacity(z_grid.len());
    let mut omega: Vec<Complex64> = t_grid
        .iter()
        .map(|&t| Complex64::from(hann_pulse(t, pulse_width)))
        .collect();
    let mut rho = vec![Complex64::default(); nt];
    let mut rho_pred = vec![Complex64::default(); nt];
    let mut omega_pred = vec![Complex64::default(); nt];

    integrate_coherence(&omega, t_grid, medium.gamma, &mut rho);
    field.push(omega.clone());
    for w in z_grid.windows(2) {
        let dz = w[1] - w[0];
        for n in 0..nt {
            omega_pred[n] = omega[n] + I * eta * dz * rho[n];
        }
        integrate_coherence(&omega_pred, t_grid, medium.gamma, &mut rho_pred);
        for n in 0..nt {
            omega[n] += I * eta * dz * 0.5 * (rho[n] + rho_pred[n]);
        }
        integrate_coherence(&omega, t_grid, medium.gamma, &mut rho);
        field.push(omega.clone());
    }

    Ok(MaxwellBlochSolution {
        t: t_grid.to_vec(),
        z: z_grid.to_vec(),
        field,
        pulse_width,
    })
}

/// Relative L² deviation of the numeric exit field from the analytic
/// Bessel response, over grid times after the boundary pulse has passed.
/// The analytic solution is evaluated at `t − pulse_centroid`.
pub fn exit_deviation(medium: &MediumParams, sol: &MaxwellBlochSolution) -> Result<f64> {
    let shift = sol.pulse_centroid();
    let z = sol.z[sol.z.len() - 1];
    let (mut num, mut den) = (0.0, 0.0);
    for (&t, &f) in sol.t.iter().zip(sol.exit_field()) {
        if t <= sol.pulse_width {
            continue;
        }
        let a = crate::broadband::bessel_response(medium, t - shift, z)?.envelope;
        num += (f - a).norm_sqr();
        den += a * a;
    }
    if den == 0.0 {
        return Err(Error::Grid("no samples after the pulse".into()));
    }
    Ok((num / den).sqrt())
}
