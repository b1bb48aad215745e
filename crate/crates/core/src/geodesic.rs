//! Radial acceleration of light at closest approach to a mass, compared
//! with the deflection of a stored superradiant excitation.
//!
//! The orbit is the first-order perturbative null geodesic
//! `u(φ) = sin φ / b + (3GM / 2c²b²)(1 + cos 2φ / 3)` with `u = 1/r`.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::gradient::{gravity_deflection, GravityEnvironment};

/// Above this `r_s/b` the first-order orbit is no longer trustworthy.
pub const PERTURBATIVE_LIMIT: f64 = 1e-3;

fn check(b: f64, mass: f64) -> Result<()> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!(
            "impact parameter must be positive, got {b}"
        )));
    }
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::domain(format!(
            "mass must be non-negative, got {mass}"
        )));
    }
    Ok(())
}

/// Warning text when `r_s/b` exceeds [`PERTURBATIVE_LIMIT`].
pub fn perturbative_warning(b: f64, mass: f64, k: &PhysicalConstants) -> Option<String> {
    let ratio = k.schwarzschild_radius(mass) / b;
    (ratio > PERTURBATIVE_LIMIT).then(|| {
        format!("r_s/b = {ratio:e} exceeds {PERTURBATIVE_LIMIT:e}; first-order orbit is inaccurate")
    })
}

/// `GM / (c² b²)`, the strength of the orbit perturbation.
fn perturbation(b: f64, mass: f64, k: &PhysicalConstants) -> f64 {
    k.g * mass / (k.c * k.c * b * b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub b: f64,
    pub mass: f64,
    pub phi: f64,
    pub u: f64,
}

impl GeodesicState {
    pub fn new(phi: f64, b: f64, mass: f64, k: &PhysicalConstants) -> Result<Self> {
        let u = geodesic_u(phi, b, mass, k)?;
        if !(u > 0.0) {
            return Err(Error::domain(format!("orbit does not reach φ = {phi}")));
        }
        Ok(Self { b, mass, phi, u })
    }

    pub fn r(&self) -> f64 {
        1.0 / self.u
    }
}

pub fn geodesic_u(phi: f64, b: f64, mass: f64, k: &PhysicalConstants) -> Result<f64> {
    check(b, mass)?;
    let eps = perturbation(b, mass, k);
    Ok(phi.sin() / b + 1.5 * eps * (1.0 + (2.0 * phi).cos() / 3.0))
}

/// `du/dt` along the orbit.
pub fn geodesic_u_dot(phi: f64, phi_dot: f64, b: f64, mass: f64, k: &PhysicalConstants) -> f64 {
    let eps = perturbation(b, mass, k);
    phi_dot * phi.cos() / b - eps * phi_dot * (2.0 * phi).sin()
}

/// `d²u/dt²` along the orbit.
pub fn geodesic_u_ddot(
    phi: f64,
    phi_dot: f64,
    phi_ddot: f64,
    b: f64,
    mass: f64,
    k: &PhysicalConstants,
) -> f64 {
    let eps = perturbation(b, mass, k);
    (-phi_dot * phi_dot * phi.sin() + phi_ddot * phi.cos()) / b
        - eps * (2.0 * phi_dot * phi_dot * (2.0 * phi).cos() + phi_ddot * (2.0 * phi).sin())
}

/// Angular velocity of light moving tangentially at radius `r`,
/// `(c/r)√(1 − r_s/r)`.
pub fn angular_velocity(r: f64, mass: f64, k: &PhysicalConstants) -> f64 {
    k.c / r * (1.0 - k.schwarzschild_radius(mass) / r).sqrt()
}

/// `dφ̇/dt` for radial velocity `r_dot`; zero at closest approach.
pub fn angular_acceleration(r: f64, r_dot: f64, mass: f64, k: &PhysicalConstants) -> f64 {
    let rs = k.schwarzschild_radius(mass);
    let f = (1.0 - rs / r).sqrt();
    -k.c / (r * r) * f * r_dot + k.c / r * (0.5 / f) * rs / (r * r) * r_dot
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosestApproach {
    /// Inverse radius at `φ = π/2`.
    pub u: f64,
    pub r: f64,
    pub phi_dot: f64,
    pub phi_ddot: f64,
    pub u_dot: f64,
    pub u_ddot: f64,
    /// `r̈ = 2u̇²/u³ − ü/u²` without approximation.
    pub r_ddot_exact: f64,
    /// `c²/b`, the straight-line artifact of polar coordinates.
    pub flat_term: f64,
    /// `−2GM/b²`.
    pub gravity_term: f64,
    /// `flat_term + gravity_term`.
    pub r_ddot_approx: f64,
    pub warning: Option<String>,
}

/// Radial acceleration of light at `φ = π/2`, exactly from the orbit and
/// as the leading terms `c²/b − 2GM/b²` (taking `r ≈ b`, `r_s/r ≈ 0`).
pub fn radial_acceleration_closest(
    b: f64,
    mass: f64,
    k: &PhysicalConstants,
) -> Result<ClosestApproach> {
    let phi = std::f64::consts::FRAC_PI_2;
    let state = GeodesicState::new(phi, b, mass, k)?;
    let r = state.r();
    if k.schwarzschild_radius(mass) >= r {
        return Err(Error::domain("closest approach inside the horizon"));
    }
    let phi_dot = angular_velocity(r, mass, k);
    let u_dot = geodesic_u_dot(phi, phi_dot, b, mass, k);
    let r_dot = -u_dot / (state.u * state.u);
    let phi_ddot = angular_acceleration(r, r_dot, mass, k);
    let u_ddot = geodesic_u_ddot(phi, phi_dot, phi_ddot, b, mass, k);
    let u = state.u;
    let flat_term = k.c * k.c / b;
    let gravity_term = -2.0 * k.g * mass / (b * b);
    Ok(ClosestApproach {
        u,
        r,
        phi_dot,
        phi_ddot,
        u_dot,
        u_ddot,
        r_ddot_exact: 2.0 * u_dot * u_dot / (u * u * u) - u_ddot / (u * u),
        flat_term,
        gravity_term,
        r_ddot_approx: flat_term + gravity_term,
        warning: perturbative_warning(b, mass, k),
    })
}

/// `d²/dt² √(r² + c²t²) = c²r² / (r² + c²t²)^{3/2}`: radial acceleration
/// of a straight light ray passing at distance `r`, in polar coordinates.
pub fn flat_space_radial_acceleration(r: f64, t: f64, k: &PhysicalConstants) -> f64 {
    let ct = k.c * t;
    k.c * k.c * r * r / (r * r + ct * ct).powf(1.5)
}

/// Ratio of the transverse velocity gained by free light, `(2GM/b²)Δt`, to
/// that of the stored excitation, `c·φ_g(Δt)`. Tends to 2.
pub fn deflection_velocity_ratio(b: f64, mass: f64, dt: f64, k: &PhysicalConstants) -> Result<f64> {
    check(b, mass)?;
    if !(dt > 0.0) {
        return Err(Error::domain(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if mass == 0.0 {
        return Err(Error::domain("ratio undefined without a mass"));
    }
    let env = GravityEnvironment { mass, radius: b };
    let free = 2.0 * k.g * mass / (b * b) * dt;
    let stored = k.c * gravity_deflection(&env, dt, k)?;
    Ok(free / stored)
}
