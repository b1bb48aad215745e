//! Broadband (semiclassical) forward scattering through an optically thick
//! crystal: Bloch steady state, susceptibility, geometrical-optics
//! deflection, curved trajectory length and the Bessel-type time response.

use num_complex::Complex64;

use crate::bessel::j1_over_x;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Particle number density ℘, m⁻³.
    pub density: f64,
    /// On-resonance cross section σ, m².
    pub cross_section: f64,
    /// Crystal length L, m.
    pub length: f64,
    /// Linewidth Γ, rad/s.
    pub gamma: f64,
    /// Vacuum wavenumber, m⁻¹.
    pub k0: f64,
    /// Transverse frequency gradient, rad·s⁻¹·m⁻¹.
    pub q: f64,
}

impl MediumParams {
    /// Medium with a prescribed optical depth `ξ = ℘σL`, expressed through
    /// the density at fixed cross section and length.
    pub fn with_optical_depth(
        optical_depth: f64,
        cross_section: f64,
        length: f64,
        gamma: f64,
        k0: f64,
        q: f64,
    ) -> Result<Self> {
        let m = MediumParams {
            density: optical_depth / (cross_section * length),
            cross_section,
            length,
            gamma,
            k0,
            q,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cross_section", self.cross_section),
            ("length", self.length),
            ("gamma", self.gamma),
            ("k0", self.k0),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.density >= 0.0) {
            return Err(Error::domain(format!(
                "density must be non-negative, got {}",
                self.density
            )));
        }
        if !self.q.is_finite() {
            return Err(Error::domain("gradient Q must be finite"));
        }
        Ok(())
    }

    /// `ξ = ℘σL`
    pub fn optical_depth(&self) -> f64 {
        self.density * self.cross_section * self.length
    }

    /// Propagation coupling `η = Γ℘σ/2` of the wave equation.
    pub fn propagation_coupling(&self) -> f64 {
        self.gamma * self.density * self.cross_section / 2.0
    }

    /// Transverse tilt per unit depth and time, `℘σ|Q|/k0`; the local ray
    /// slope is this times `z t`.
    fn tilt_rate(&self) -> f64 {
        self.density * self.cross_section * self.q.abs() / self.k0
    }
}

/// Steady-state coherence in the printed form
/// `ρ21 = (2ΔΩp + 2iΓΩp)/(Γ² + 4Δ²)`.
///
/// The real part is the fixed point of `∂tρ = −(Γ/2 + iΔ)ρ + iΩp/2`; the
/// imaginary part is twice that fixed point's. The susceptibility below is
/// built on this form.
pub fn bloch_steady_state(delta: f64, gamma: f64, omega_p: f64) -> Complex64 {
    let d = gamma * gamma + 4.0 * delta * delta;
    Complex64::new(2.0 * delta * omega_p / d, 2.0 * gamma * omega_p / d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    pub chi: Complex64,
    /// Refractive index `√(1 + χ)`, principal branch.
    pub index: Complex64,
}

impl Susceptibility {
    fn from_chi(chi: Complex64) -> Self {
        Susceptibility {
            chi,
            index: (Complex64::from(1.0) + chi).sqrt(),
        }
    }
}

/// `χp = (℘σΓ/k0)(Δ + iΓ)/(Γ² + 4Δ²)` at detuning `delta`.
pub fn susceptibility(medium: &MediumParams, delta: f64) -> Susceptibility {
    let g = medium.gamma;
    let d = g * g + 4.0 * delta * delta;
    let pref = medium.density * medium.cross_section * g / medium.k0;
    Susceptibility::from_chi(Complex64::new(pref * delta / d, pref * g / d))
}

/// `χp = ℘σΓ/(2 k0 Ωp) · ρ21` for a given coherence and probe Rabi
/// frequency.
pub fn susceptibility_from_coherence(
    rho21: Complex64,
    omega_p: f64,
    medium: &MediumParams,
) -> Susceptibility {
    let pref = medium.density * medium.cross_section * medium.gamma / (2.0 * medium.k0 * omega_p);
    Susceptibility::from_chi(rho21 * pref)
}

/// Which time enters the geometrical-optics deflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleConvention {
    /// `atan(ξ|Q|/(k0Γ))`: the deflection accumulated over one lifetime.
    Linewidth,
    /// `atan(ξ|Q|t/k0)`: the instantaneous angle at time `t`.
    AtTime(f64),
}

pub fn geometric_deflection(medium: &MediumParams, convention: AngleConvention) -> f64 {
    let t = match convention {
        AngleConvention::Linewidth => 1.0 / medium.gamma,
        AngleConvention::AtTime(t) => t,
    };
    (medium.optical_depth() * medium.q.abs() * t / medium.k0).atan()
}

fn check_depth(medium: &MediumParams, t: f64, z: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be non-negative, got {t}")));
    }
    if !(0.0..=medium.length).contains(&z) {
        return Err(Error::domain(format!(
            "depth {z} outside crystal [0, {}]",
            medium.length
        )));
    }
    Ok(())
}

/// Arc length `s(t, z) = ∫₀^z √(1 + (℘σz′Qt/k0)²) dz′` of the deflected
/// ray, in closed form.
pub fn trajectory_length(medium: &MediumParams, t: f64, z: f64) -> Result<f64> {
    check_depth(medium, t, z)?;
    let a = medium.tilt_rate() * t;
    let x = a * z;
    if x == 0.0 {
        return Ok(z);
    }
    Ok(0.5 * z * (1.0 + x * x).sqrt() + 0.5 * z * x.asinh() / x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselResponse {
    /// Smooth part of the transmitted field envelope.
    pub envelope: f64,
    /// True at `t = 0`, where the transmitted prompt pulse `δ(t)` sits on
    /// top of the envelope.
    pub prompt: bool,
}

impl BesselResponse {
    pub fn intensity(&self) -> f64 {
        self.envelope * self.envelope
    }
}

/// Transmitted field for a δ-pulse excitation,
///
/// ```text
/// Ωp(t, z) = δ(t) − κ s · J1(2√(κ s t)) / √(κ s t) · e^{−Γt/2},   κ = η/2
/// ```
///
/// with `η = Γ℘σ/2` and `s = s(t, z)`. This is the Green's function of
/// `∂zΩ = iηρ`, `∂tρ = −(Γ/2)ρ + iΩ/2`; for a thin slice it reduces to the
/// first-order response `−(ηz/2) e^{−Γt/2}`.
pub fn bessel_response(medium: &MediumParams, t: f64, z: f64) -> Result<BesselResponse> {
    let s = trajectory_length(medium, t, z)?;
    let kappa = medium.propagation_coupling() / 2.0;
    let y = kappa * s * t;
    let envelope = -kappa * s * 2.0 * j1_over_x(2.0 * y.sqrt()) * (-medium.gamma * t / 2.0).exp();
    Ok(BesselResponse {
        envelope,
        prompt: t == 0.0,
    })
}

/// Times `t > 0` at which the exit intensity vanishes (nodes of the
/// dynamical beat), ignoring the slow growth of `s(t, L)`.
pub fn beat_minimum_time(medium: &MediumParams, zero: f64) -> f64 {
    let kappa = medium.propagation_coupling() / 2.0;
    zero * zero / (4.0 * kappa * medium.length)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSample {
    pub t: f64,
    /// Deflection angle at the crystal exit, rad.
    pub angle: f64,
    /// `|Ωp(t, L)|²`
    pub intensity: f64,
}

/// Photon counts behind the crystal: the exit intensity together with the
/// deflection angle at which it is registered. `Q` comes from the medium.
pub fn broadband_count_profile(
    medium: &MediumParams,
    grid: &[f64],
    use_linewidth_angle: bool,
) -> Result<Vec<CountSample>> {
    medium.validate()?;
    grid.iter()
        .map(|&t| {
            let convention = if use_linewidth_angle {
                AngleConvention::Linewidth
            } else {
                AngleConvention::AtTime(t)
            };
            Ok(CountSample {
                t,
                angle: geometric_deflection(medium, convention),
                intensity: bessel_response(medium, t, medium.length)?.intensity(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::J1_FIRST_ZERO;

    fn medium(xi: f64) -> MediumParams {
        // 57Fe-like: Γ = 1/141 ns, 14.4 keV, 10 µm foil, rotor gradient
        MediumParams::with_optical_depth(xi, 2.56e-22, 1e-5, 7.09e6, 7.3e10, -2.35e11).unwrap()
    }

    #[test]
    fn steady_state_on_resonance() {
        let r = bloch_steady_state(0.0, 2.0, 3.0);
        assert_eq!(r, Complex64::new(0.0, 3.0));
    }

    #[test]
    fn steady_state_half_linewidth() {
        let (g, w) = (4.0, 1.5);
        let r = bloch_steady_state(g / 2.0, g, w);
        assert!((r - Complex64::new(w / (2.0 * g), w / g)).norm() < 1e-15);
        assert!(bloch_steady_state(1e12, 1.0, 1.0).norm() < 1e-11);
    }

    #[test]
    fn steady_state_real_part_is_ode_fixed_point() {
        let (delta, g, w) = (0.7, 1.3, 0.4);
        let fixed = Complex64::new(0.0, w / 2.0) / Complex64::new(g / 2.0, delta);
        let printed = bloch_steady_state(delta, g, w);
        assert!((printed.re - fixed.re).abs() < 1e-15);
        assert!((printed.im - 2.0 * fixed.im).abs() < 1e-15);
    }

    #[test]
    fn susceptibility_on_resonance_and_vacuum() {
        let m = medium(3.0);
        let s = susceptibility(&m, 0.0);
        assert_eq!(s.chi.re, 0.0);
        let expect = m.density * m.cross_section / m.k0;
        assert!((s.chi.im / expect - 1.0).abs() < 1e-14);

        let vac = MediumParams { density: 0.0, ..m };
        let s = susceptibility(&vac, 123.0);
        assert_eq!(s.chi, Complex64::new(0.0, 0.0));
        assert_eq!(s.index, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn susceptibility_routes_agree() {
        let m = medium(2.0);
        for delta in [-3e7, 0.0, 1e6, 4e7] {
            let rho = bloch_steady_state(delta, m.gamma, 0.25);
            let a = susceptibility(&m, delta).chi;
            let b = susceptibility_from_coherence(rho, 0.25, &m).chi;
            assert!((a - b).norm() <= 1e-14 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn susceptibility_symmetry() {
        let m = medium(1.0);
        for delta in [1e5, 3.3e6, 7e8] {
            let p = susceptibility(&m, delta).chi;
            let n = susceptibility(&m, -delta).chi;
            assert_eq!(p.re, -n.re);
            assert_eq!(p.im, n.im);
        }
    }

    #[test]
    fn thin_medium_deflection_is_small_angle() {
        let m = medium(1.0);
        let phi = geometric_deflection(&m, AngleConvention::Linewidth);
        let sda = crate::gradient::deflection_angle_small(m.q, m.k0, 1.0 / m.gamma);
        assert!((phi - sda).abs() <= 1e-12 * sda);
        assert_eq!(
            geometric_deflection(&medium(0.0), AngleConvention::Linewidth),
            0.0
        );
    }

    #[test]
    fn thick_medium_enhancement() {
        let one = geometric_deflection(&medium(1.0), AngleConvention::Linewidth);
        let ten = geometric_deflection(&medium(10.0), AngleConvention::Linewidth);
        assert!((ten / one / 10.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trajectory_straight_cases() {
        let m = medium(5.0);
        assert_eq!(trajectory_length(&m, 0.0, 7e-6).unwrap(), 7e-6);
        let flat = MediumParams { q: 0.0, ..m };
        assert_eq!(trajectory_length(&flat, 1.0, 7e-6).unwrap(), 7e-6);
        assert!(trajectory_length(&m, 1.0, 2e-5).is_err());
        assert!(trajectory_length(&m, -1.0, 1e-6).is_err());
    }

    #[test]
    fn response_small_argument_limit() {
        let m = medium(2.0);
        let t = 1e-18;
        let r = bessel_response(&m, t, m.length).unwrap();
        let expect = -m.propagation_coupling() * m.length / 2.0;
        assert!((r.envelope / expect - 1.0).abs() < 1e-9);
        assert!(!r.prompt);
        assert!(bessel_response(&m, 0.0, m.length).unwrap().prompt);
    }

    #[test]
    fn first_beat_minimum() {
        let m = MediumParams {
            q: 0.0,
            ..medium(5.0)
        };
        let t0 = beat_minimum_time(&m, J1_FIRST_ZERO);
        let at = bessel_response(&m, t0, m.length).unwrap().intensity();
        let before = bessel_response(&m, 0.9 * t0, m.length).unwrap().intensity();
        let after = bessel_response(&m, 1.1 * t0, m.length).unwrap().intensity();
        assert!(
            at < 1e-20 * before.min(after),
            "{at:e} {before:e} {after:e}"
        );
    }

    #[test]
    fn count_profile_angles() {
        let m = medium(4.0);
        let grid = [0.0, 1e-9, 1e-8];
        let prof = broadband_count_profile(&m, &grid, false).unwrap();
        assert_eq!(prof[0].angle, 0.0);
        let slope = m.optical_depth() * m.q.abs() / m.k0;
        assert!((prof[1].angle / (slope * 1e-9) - 1.0).abs() < 1e-9);
        let lw = broadband_count_profile(&m, &grid, true).unwrap();
        assert!(lw.iter().all(|s| s.angle == lw[0].angle));
    }
}
