//! Frequency-gradient coefficients for the gravity and rotor scenarios and
//! the deflection laws that follow from them.
//!
//! A crystal whose lab-frame transition frequency varies across the sample
//! as `ω' ≈ ω + α + Q·r⊥` re-emits along `k_S(t) = k0 ê∥ − Q t ê⊥`. Only
//! `|Q|` enters the angles; the sign of `Q` is kept so callers can tell the
//! direction of deflection. Gravity gives `Q > 0` (toward the Earth, where
//! clocks run slower); the rotor gives `Q < 0` (radially inward, toward
//! lower rim speed).

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// A static crystal at radius `radius` from a spherical mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityEnvironment {
    /// Source mass, kg.
    pub mass: f64,
    /// Radial position of the crystal, m.
    pub radius: f64,
}

impl GravityEnvironment {
    pub fn earth_surface(k: &PhysicalConstants) -> Self {
        GravityEnvironment {
            mass: k.earth_mass,
            radius: k.earth_radius,
        }
    }

    pub fn schwarzschild_radius(&self, k: &PhysicalConstants) -> f64 {
        k.schwarzschild_radius(self.mass)
    }

    fn check(&self, k: &PhysicalConstants) -> Result<()> {
        let rs = self.schwarzschild_radius(k);
        if !(self.mass >= 0.0) {
            return Err(Error::domain(format!(
                "mass must be non-negative, got {}",
                self.mass
            )));
        }
        if !(self.radius > rs) {
            return Err(Error::domain(format!(
                "radius {} m is not outside the Schwarzschild radius {rs} m",
                self.radius
            )));
        }
        Ok(())
    }
}

/// A crystal mounted on the rim of a rotor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorEnvironment {
    /// Rotor radius, m.
    pub radius: f64,
    /// Angular frequency Λ, rad/s.
    pub angular_frequency: f64,
}

impl RotorEnvironment {
    /// Rotor specified by its rotation frequency in Hz (`Λ = 2π f`).
    pub fn from_hz(radius: f64, hz: f64) -> Self {
        RotorEnvironment {
            radius,
            angular_frequency: 2.0 * std::f64::consts::PI * hz,
        }
    }

    /// The rotor used for the candidate table: R = 5 mm, Λ = 2π·70 kHz.
    pub fn reference() -> Self {
        Self::from_hz(5e-3, 70e3)
    }

    pub fn rim_speed(&self) -> f64 {
        self.angular_frequency * self.radius
    }

    fn check(&self, k: &PhysicalConstants) -> Result<()> {
        if !(self.radius >= 0.0) {
            return Err(Error::domain(format!(
                "rotor radius must be non-negative, got {}",
                self.radius
            )));
        }
        if !(self.rim_speed().abs() < k.c) {
            return Err(Error::domain(format!(
                "rim speed {} m/s is not below c",
                self.rim_speed().abs()
            )));
        }
        Ok(())
    }

    /// `√(1 − Λ²R²/c²)`
    fn inverse_gamma(&self, k: &PhysicalConstants) -> f64 {
        let beta = self.rim_speed() / k.c;
        (1.0 - beta * beta).sqrt()
    }
}

/// Uniform offset `alpha` (rad/s) and transverse gradient `q`
/// (rad·s⁻¹·m⁻¹) of the lab-frame transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCoefficients {
    pub alpha: f64,
    pub q: f64,
}

/// Schwarzschild function `F(r) = 1 − r_s/r`.
pub fn schwarzschild_f(r: f64, m: f64, k: &PhysicalConstants) -> Result<f64> {
    GravityEnvironment { mass: m, radius: r }.check(k)?;
    Ok(1.0 - k.schwarzschild_radius(m) / r)
}

pub fn gravity_coefficients(
    env: &GravityEnvironment,
    omega: f64,
    k: &PhysicalConstants,
) -> Result<GradientCoefficients> {
    let f = schwarzschild_f(env.radius, env.mass, k)?;
    let rs = env.schwarzschild_radius(k);
    let sqrt_f = f.sqrt();
    Ok(GradientCoefficients {
        // √F − 1 = −(r_s/r)/(1 + √F), which keeps the tiny offset accurate.
        alpha: -omega * (rs / env.radius) / (1.0 + sqrt_f),
        q: omega * rs / (2.0 * env.radius * env.radius * sqrt_f),
    })
}

pub fn rotor_coefficients(
    env: &RotorEnvironment,
    omega: f64,
    k: &PhysicalConstants,
) -> Result<GradientCoefficients> {
    env.check(k)?;
    let beta = env.rim_speed() / k.c;
    let inv_gamma = env.inverse_gamma(k);
    Ok(GradientCoefficients {
        alpha: -omega * beta * beta / (1.0 + inv_gamma),
        q: -env.radius * env.angular_frequency.powi(2) * omega / (k.c * k.c * inv_gamma),
    })
}

/// Small-angle deflection `atan(|Q| t / k0)`.
pub fn deflection_angle_small(q: f64, k0: f64, t: f64) -> f64 {
    (q.abs() * t / k0).atan()
}

/// Deflection with the longitudinal compensation applied,
/// `atan(|Q|t / √(k0² − Q²t²))`. Reaches exactly π/2 at `|Q|t = k0` and is
/// undefined beyond.
pub fn deflection_angle_exact(q: f64, k0: f64, t: f64) -> Result<f64> {
    let kt = q.abs() * t;
    if kt > k0 {
        return Err(Error::Saturated {
            t,
            t_max: saturation_time(q, k0),
        });
    }
    let kz = ((k0 - kt) * (k0 + kt)).sqrt();
    Ok(kt.atan2(kz))
}

/// Initial deflection rate `GM / (c r² √F)` in rad/s.
pub fn gravity_deflection_rate(env: &GravityEnvironment, k: &PhysicalConstants) -> Result<f64> {
    let f = schwarzschild_f(env.radius, env.mass, k)?;
    Ok(k.g * env.mass / (k.c * env.radius * env.radius * f.sqrt()))
}

/// Closed-form gravitational deflection
/// `atan(GMt / (c r² √(1 − 2GM/(c² r))))`.
pub fn gravity_deflection(env: &GravityEnvironment, t: f64, k: &PhysicalConstants) -> Result<f64> {
    Ok((gravity_deflection_rate(env, k)? * t).atan())
}

/// Initial deflection rate `RΛ² / √(c² − Λ²R²)` in rad/s.
pub fn rotor_deflection_rate(env: &RotorEnvironment, k: &PhysicalConstants) -> Result<f64> {
    env.check(k)?;
    let v = env.rim_speed();
    Ok(env.radius * env.angular_frequency.powi(2) / ((k.c - v) * (k.c + v)).sqrt())
}

/// Closed-form rotor deflection `atan(RΛ²t / √(c² − Λ²R²))`.
pub fn rotor_deflection(env: &RotorEnvironment, t: f64, k: &PhysicalConstants) -> Result<f64> {
    Ok((rotor_deflection_rate(env, k)? * t).atan())
}

/// Time at which `|Q| t` reaches `k0` and the deflection reaches 90°.
/// Returns `f64::INFINITY` when `Q = 0`.
pub fn saturation_time(q: f64, k0: f64) -> f64 {
    if q == 0.0 {
        f64::INFINITY
    } else {
        k0 / q.abs()
    }
}

/// Longitudinal compensation keeping `|k_S(t)| = k0`.
///
/// `P(t) = k0 − √(k0² − Q²t²)`, `β(t) = dP/dt = Q²t / √(k0² − Q²t²)` and
/// the Zeeman ramp `A = Q² / (k0 μ/ħ)` that realizes `β` to lowest order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompensationSchedule {
    q: f64,
    k0: f64,
    mu_over_hbar: Option<f64>,
}

pub fn compensation_schedule(
    q: f64,
    k0: f64,
    mu_over_hbar: Option<f64>,
) -> Result<CompensationSchedule> {
    if !(k0 > 0.0) {
        return Err(Error::domain(format!("k0 must be positive, got {k0}")));
    }
    if !(q.abs() > 0.0) {
        return Err(Error::domain("compensation needs a non-zero gradient Q"));
    }
    Ok(CompensationSchedule {
        q,
        k0,
        mu_over_hbar,
    })
}

impl CompensationSchedule {
    pub fn t_max(&self) -> f64 {
        saturation_time(self.q, self.k0)
    }

    /// `√(k0² − Q²t²)`, the longitudinal wavenumber after compensation.
    fn longitudinal(&self, t: f64) -> Result<f64> {
        let kt = self.q.abs() * t;
        if kt > self.k0 {
            return Err(Error::Saturated {
                t,
                t_max: self.t_max(),
            });
        }
        Ok(((self.k0 - kt) * (self.k0 + kt)).sqrt())
    }

    /// Longitudinal wavenumber correction, m⁻¹.
    pub fn p(&self, t: f64) -> Result<f64> {
        let kz = self.longitudinal(t)?;
        let kt = self.q * t;
        // k0 − kz written without cancellation.
        Ok(kt * kt / (self.k0 + kz))
    }

    /// Longitudinal gradient rate `dP/dt`, rad·s⁻¹·m⁻¹.
    pub fn beta(&self, t: f64) -> Result<f64> {
        let kz = self.longitudinal(t)?;
        if kz == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.q * self.q * t / kz)
    }

    /// Lowest-order rate `Q²t/k0`.
    pub fn beta_small(&self, t: f64) -> f64 {
        self.q * self.q * t / self.k0
    }

    /// Zeeman gradient ramp rate `A`, T·s⁻¹·m⁻¹.
    pub fn zeeman_ramp(&self) -> Result<f64> {
        let mu = self
            .mu_over_hbar
            .ok_or(Error::Unavailable("magnetic moment mu/hbar"))?;
        Ok(self.q * self.q / (self.k0 * mu))
    }

    /// Compensated deflection angle at `t`.
    pub fn deflection(&self, t: f64) -> Result<f64> {
        deflection_angle_exact(self.q, self.k0, t)
    }
}

/// Detuning `c√(k0² + k⊥²) − c k0` of the uncompensated emission for a
/// given transverse wavenumber `k⊥`, in rad/s.
pub fn detuning_for_transverse(k_perp: f64, k0: f64, k: &PhysicalConstants) -> f64 {
    let kt2 = k_perp * k_perp;
    k.c * kt2 / ((k0 * k0 + kt2).sqrt() + k0)
}

/// Detuning accumulated by time `t` without compensation.
pub fn detuning_uncompensated(q: f64, k0: f64, t: f64, k: &PhysicalConstants) -> f64 {
    detuning_for_transverse(q * t, k0, k)
}

/// Whether the detuning exceeds the transition linewidth, so coherent
/// re-emission needs the longitudinal compensation.
pub fn requires_compensation(detuning: f64, linewidth: f64) -> bool {
    detuning.abs() > linewidth
}

/// Minimum ensemble size `∛V = 10π / (k0 φ_max)` for which the diffraction
/// divergence stays below a tenth of the deflection `phi_max` (rad).
pub fn min_length_scale(phi_max: f64, k0: f64) -> f64 {
    10.0 * std::f64::consts::PI / (k0 * phi_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: PhysicalConstants = PhysicalConstants::PAPER;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn schwarzschild_f_earth() {
        let f = schwarzschild_f(K.earth_radius, K.earth_mass, &K).unwrap();
        assert!(rel(1.0 - f, 1.39e-9) < 5e-3, "1-F = {:e}", 1.0 - f);
        assert_eq!(schwarzschild_f(1.0, 0.0, &K).unwrap(), 1.0);
        assert!(1.0 - schwarzschild_f(1e30, K.earth_mass, &K).unwrap() < 1e-20);
    }

    #[test]
    fn schwarzschild_f_inside_horizon() {
        assert!(matches!(
            schwarzschild_f(1e-3, K.earth_mass, &K),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gravity_q_over_omega() {
        let c = gravity_coefficients(&GravityEnvironment::earth_surface(&K), 1.0, &K).unwrap();
        assert!(rel(c.q, 1.09e-16) < 1e-2, "Q/omega = {:e}", c.q);
        assert!(c.q > 0.0 && c.alpha < 0.0);
        let flat = GravityEnvironment {
            mass: 0.0,
            radius: 1.0,
        };
        let c = gravity_coefficients(&flat, 1e18, &K).unwrap();
        assert_eq!((c.alpha, c.q), (0.0, 0.0));
    }

    #[test]
    fn rotor_alpha_and_q() {
        let c = rotor_coefficients(&RotorEnvironment::reference(), 1.0, &K).unwrap();
        assert!(
            rel(c.alpha, -2.69e-11) < 5e-3,
            "alpha/omega = {:e}",
            c.alpha
        );
        assert!(rel(c.q, -1.074e-8) < 1e-3, "Q/omega = {:e}", c.q);
        let still = RotorEnvironment {
            radius: 5e-3,
            angular_frequency: 0.0,
        };
        let c = rotor_coefficients(&still, 1e18, &K).unwrap();
        assert_eq!(c.alpha, 0.0);
        assert_eq!(c.q, 0.0);
    }

    #[test]
    fn superluminal_rim_rejected() {
        let env = RotorEnvironment {
            radius: 1.0,
            angular_frequency: 3e8,
        };
        assert!(matches!(
            rotor_coefficients(&env, 1.0, &K),
            Err(Error::Domain(_))
        ));
        assert!(rotor_deflection(&env, 1.0, &K).is_err());
    }

    #[test]
    fn small_angle_examples() {
        assert_eq!(deflection_angle_small(1.0, 1.0, 0.0), 0.0);
        let omega = 1.1564e16;
        let q = rotor_coefficients(&RotorEnvironment::reference(), omega, &K)
            .unwrap()
            .q;
        let phi = deflection_angle_small(q, omega / K.c, 1e-3);
        assert!(rel(phi, 3.2e-3) < 1e-2, "phi = {phi:e}");
    }

    #[test]
    fn exact_angle_examples() {
        let k0 = 3.0;
        assert_eq!(
            deflection_angle_exact(1.5, k0, 2.0).unwrap(),
            std::f64::consts::FRAC_PI_2
        );
        assert_eq!(deflection_angle_exact(1.5, k0, 0.0).unwrap(), 0.0);
        let t = k0 / 2f64.sqrt();
        let phi = deflection_angle_exact(1.0, k0, t).unwrap();
        assert!((phi - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(matches!(
            deflection_angle_exact(1.0, k0, 3.0001),
            Err(Error::Saturated { .. })
        ));
    }

    #[test]
    fn exact_and_small_agree_for_small_angles() {
        let (q, k0) = (2.0, 1e6);
        for t in [1.0, 10.0, 100.0] {
            let a = deflection_angle_exact(q, k0, t).unwrap();
            let b = deflection_angle_small(q, k0, t);
            assert!(rel(a, b) < 1e-6);
        }
    }

    #[test]
    fn earth_gravity_rate() {
        let env = GravityEnvironment::earth_surface(&K);
        let rate = gravity_deflection_rate(&env, &K).unwrap().to_degrees();
        assert!(rel(rate, 1.9e-6) < 3e-2, "rate = {rate:e}");
        let phi = gravity_deflection(&env, 57.13, &K).unwrap();
        assert!(phi < 1e-5 && phi > 1e-6);
    }

    #[test]
    fn compressed_earth_rate() {
        let env = GravityEnvironment {
            mass: K.earth_mass,
            radius: 650.0,
        };
        let rate = gravity_deflection_rate(&env, &K).unwrap().to_degrees();
        assert!(rel(rate, 180.0) < 2e-2, "rate = {rate}");
    }

    #[test]
    fn rotor_rate_and_saturation() {
        let env = RotorEnvironment::reference();
        let rate = rotor_deflection_rate(&env, &K).unwrap().to_degrees();
        assert!(rel(rate, 185.0) < 1e-2, "rate = {rate}");
        let omega = 1e19;
        let q = rotor_coefficients(&env, omega, &K).unwrap().q;
        let t90 = saturation_time(q, omega / K.c);
        assert!(rel(t90, 0.31) < 3e-2, "t90 = {t90}");
        let still = RotorEnvironment {
            radius: 5e-3,
            angular_frequency: 0.0,
        };
        assert_eq!(rotor_deflection(&still, 10.0, &K).unwrap(), 0.0);
    }

    #[test]
    fn saturation_unbounded_for_zero_gradient() {
        assert_eq!(saturation_time(0.0, 1.0), f64::INFINITY);
    }

    #[test]
    fn gravity_closed_form_is_generic_pipeline() {
        let env = GravityEnvironment::earth_surface(&K);
        for omega in [1e16, 2.2e19] {
            let q = gravity_coefficients(&env, omega, &K).unwrap().q;
            for t in [1e-6, 1.0, 57.13] {
                let generic = deflection_angle_small(q, omega / K.c, t);
                let closed = gravity_deflection(&env, t, &K).unwrap();
                assert!(rel(generic, closed) < 1e-13);
            }
        }
    }

    #[test]
    fn rotor_closed_form_is_generic_pipeline() {
        let env = RotorEnvironment::reference();
        let omega = 2.19e19;
        let q = rotor_coefficients(&env, omega, &K).unwrap().q;
        for t in [1e-9, 1e-3, 0.2] {
            let generic = deflection_angle_small(q, omega / K.c, t);
            let closed = rotor_deflection(&env, t, &K).unwrap();
            assert!(rel(generic, closed) < 1e-13);
        }
    }

    #[test]
    fn compensation_basics() {
        let s = compensation_schedule(-1.242e8, 3.855e7, Some(2.538e7)).unwrap();
        assert_eq!(s.p(0.0).unwrap(), 0.0);
        assert_eq!(s.beta(0.0).unwrap(), 0.0);
        let a = s.zeeman_ramp().unwrap();
        assert!(rel(a, 15.8) < 5e-3, "A = {a}");
        let t = 1e-6;
        assert!(rel(s.beta(t).unwrap(), s.beta_small(t)) < 1e-4);
        assert!(matches!(s.p(1.0), Err(Error::Saturated { .. })));
        assert_eq!(s.beta(s.t_max()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn compensation_requires_moment_and_gradient() {
        let s = compensation_schedule(1.0, 1.0, None).unwrap();
        assert!(matches!(s.zeeman_ramp(), Err(Error::Unavailable(_))));
        assert!(compensation_schedule(0.0, 1.0, None).is_err());
        assert!(compensation_schedule(1.0, 0.0, None).is_err());
    }

    #[test]
    fn thorium_detuning() {
        let k0 = 1.1564e16 / K.c;
        let d = detuning_for_transverse(6214.0, k0, &K);
        assert!(rel(d, 1.5e8) < 5e-2, "detuning = {d:e}");
        assert!(requires_compensation(d, 2.0 * std::f64::consts::PI * 100.0));
        assert_eq!(detuning_uncompensated(1e8, k0, 0.0, &K), 0.0);
    }

    #[test]
    fn silver_min_length() {
        let l = min_length_scale(1.1e-4f64.to_radians(), 4.46e11);
        assert!(rel(l, 3.7e-5) < 3e-2, "l = {l:e}");
        let half = min_length_scale(2.2e-4f64.to_radians(), 4.46e11);
        assert!(rel(half, l / 2.0) < 1e-15);
    }

    #[test]
    fn iron_min_length_from_formula() {
        // 57Fe: phi_g(141 ns) and k0 from 14.41 keV
        let env = GravityEnvironment::earth_surface(&K);
        let phi = gravity_deflection(&env, 1.41e-7, &K).unwrap();
        let k0 = 14.41 * crate::constants::JOULE_PER_KEV / K.hbar / K.c;
        let l = min_length_scale(phi, k0);
        assert!(rel(l, 10.0 * std::f64::consts::PI / (k0 * phi)) < 1e-15);
        assert!(l > 1.0, "iron needs a macroscopic sample: {l:e} m");
    }
}
