//! Narrowband collective emission of a single shared excitation.
//!
//! With `χ(t) = ∫₀ᵗ e^{−iατ} η(τ) dτ` the Weisskopf–Wigner equations
//! reduce, under on-resonance re-emission, to
//!
//! ```text
//! χ'' + iα χ' + NΩ² χ = 0,   χ(0) = 0,   χ'(0) = 1
//! ```
//!
//! whose solution gives the excitation amplitude `η = e^{iαt} χ'` and the
//! forward photon amplitude `b = −iχ`.

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::ode::{check_grid, Dopri5};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveParams {
    /// Number of particles sharing the excitation.
    pub n: f64,
    /// Single-particle coupling Ω (Ω² = 2g²), rad/s.
    pub coupling: f64,
    /// Uniform frequency offset α, rad/s.
    pub alpha: f64,
    /// Ensemble volume, m³. Only needed for the finite-volume regimes.
    pub volume: Option<f64>,
}

impl CollectiveParams {
    pub fn new(n: f64, coupling: f64, alpha: f64) -> Result<Self> {
        let p = CollectiveParams {
            n,
            coupling,
            alpha,
            volume: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_volume(mut self, volume: f64) -> Result<Self> {
        self.volume = Some(volume);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n >= 1.0) {
            return Err(Error::domain(format!(
                "particle count must be >= 1, got {}",
                self.n
            )));
        }
        if !(self.coupling > 0.0) {
            return Err(Error::domain(format!(
                "coupling must be positive, got {}",
                self.coupling
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::domain("alpha must be finite"));
        }
        if let Some(v) = self.volume {
            if !(v > 0.0) {
                return Err(Error::domain(format!("volume must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Collective frequency `√N Ω`.
    pub fn collective_frequency(&self) -> f64 {
        self.n.sqrt() * self.coupling
    }

    /// `NΩ²`
    pub fn coupling_strength(&self) -> f64 {
        self.n * self.coupling * self.coupling
    }

    /// Generalized oscillation frequency `√(α² + 4NΩ²)`.
    pub fn generalized_frequency(&self) -> f64 {
        (self.alpha * self.alpha + 4.0 * self.coupling_strength()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSolution {
    pub chi: Complex64,
    pub eta: Complex64,
    pub b: Complex64,
}

/// Closed-form solution of the χ equation at time `t`.
pub fn solve_chi_analytic(p: &CollectiveParams, t: f64) -> ChiSolution {
    let w = p.generalized_frequency();
    let phase = w * t / 2.0;
    // 2 sin(Wt/2)/W, continuous at W = 0
    let sinc = if w == 0.0 { t } else { 2.0 * phase.sin() / w };
    let half_alpha = Complex64::new(0.0, p.alpha * t / 2.0);
    let chi = (-half_alpha).exp() * sinc;
    let eta = half_alpha.exp() * (Complex64::from(phase.cos()) - I * (p.alpha / 2.0) * sinc);
    ChiSolution {
        chi,
        eta,
        b: -I * chi,
    }
}

/// The weak-detuning limit `α ≪ 2√NΩ`:
/// `η = e^{iαt/2} cos(√NΩt)`, `b = −i/(√NΩ) e^{−iαt/2} sin(√NΩt)`.
pub fn solve_weak_detuning(p: &CollectiveParams, t: f64) -> (Complex64, Complex64) {
    let wn = p.collective_frequency();
    let half_alpha = Complex64::new(0.0, p.alpha * t / 2.0);
    let eta = half_alpha.exp() * (wn * t).cos();
    let b = -I / wn * (-half_alpha).exp() * (wn * t).sin();
    (eta, b)
}

/// Amplitudes sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub t: Vec<f64>,
    pub chi: Vec<Complex64>,
    pub eta: Vec<Complex64>,
    pub b: Vec<Complex64>,
    /// Emitted photon probability `NΩ²|b|²`.
    pub intensity: Vec<f64>,
}

impl AmplitudeTrace {
    fn from_parts(
        p: &CollectiveParams,
        t: Vec<f64>,
        chi: Vec<Complex64>,
        eta: Vec<Complex64>,
    ) -> Self {
        let b: Vec<_> = chi.iter().map(|c| -I * c).collect();
        let g = p.coupling_strength();
        let intensity = b.iter().map(|b| g * b.norm_sqr()).collect();
        AmplitudeTrace {
            t,
            chi,
            eta,
            b,
            intensity,
        }
    }

    /// Closed-form trace on the given grid.
    pub fn analytic(p: &CollectiveParams, grid: &[f64]) -> Self {
        let (chi, eta) = grid
            .iter()
            .map(|&t| {
                let s = solve_chi_analytic(p, t);
                (s.chi, s.eta)
            })
            .unzip();
        Self::from_parts(p, grid.to_vec(), chi, eta)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Integrates the χ equation numerically with adaptive step control.
///
/// Time is rescaled by `s = max(√(α²+4NΩ²)/2, 1/t_end)` so the integrator
/// works with order-one quantities; tolerances refer to the rescaled
/// system.
pub fn solve_chi_numeric(p: &CollectiveParams, grid: &[f64]) -> Result<AmplitudeTrace> {
    solve_chi_numeric_with(p, grid, &Dopri5::default())
}

pub fn solve_chi_numeric_with(
    p: &CollectiveParams,
    grid: &[f64],
    integrator: &Dopri5,
) -> Result<AmplitudeTrace> {
    p.validate()?;
    check_grid(grid)?;
    if grid[0] != 0.0 {
        return Err(Error::Grid(format!(
            "grid must start at 0, starts at {}",
            grid[0]
        )));
    }
    let t_end = grid[grid.len() - 1];
    let mut s = p.generalized_frequency() / 2.0;
    if t_end > 0.0 {
        s = s.max(1.0 / t_end);
    }
    if s == 0.0 {
        s = 1.0;
    }
    let a = p.alpha / s;
    let g = p.coupling_strength() / (s * s);
    let scaled: Vec<f64> = grid.iter().map(|t| t * s).collect();

    // y = [Re χ̃, Im χ̃, Re χ̃', Im χ̃'], χ̃(τ) = s χ(τ/s)
    let states = integrator.integrate(
        |_, y, dy| {
            dy[0] = y[2];
            dy[1] = y[3];
            // χ̃'' = −i a χ̃' − g χ̃
            dy[2] = a * y[3] - g * y[0];
            dy[3] = -a * y[2] - g * y[1];
        },
        &scaled,
        &[0.0, 0.0, 1.0, 0.0],
    )?;

    let mut chi = Vec::with_capacity(grid.len());
    let mut eta = Vec::with_capacity(grid.len());
    for (&t, y) in grid.iter().zip(&states) {
        chi.push(Complex64::new(y[0], y[1]) / s);
        eta.push(Complex64::new(0.0, p.alpha * t).exp() * Complex64::new(y[2], y[3]));
    }
    Ok(AmplitudeTrace::from_parts(p, grid.to_vec(), chi, eta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeRegime {
    /// `∛V/c ≫ 1/(√NΩ)`: damped collective oscillation.
    LargeSample,
    /// `∛V/c ≪ 1/(√NΩ)`: plain superradiant exponential decay.
    SmallSample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteVolumeIntensity {
    pub value: f64,
    pub regime: VolumeRegime,
    /// `(∛V/c)·√NΩ`; the regime is picked by comparing this with 1.
    pub ratio: f64,
    /// Set when the ratio lies within a factor 3 of 1, where neither
    /// asymptotic form is reliable.
    pub ambiguous: bool,
}

/// Relative emitted intensity of a finite ensemble.
pub fn finite_volume_intensity(
    p: &CollectiveParams,
    t: f64,
    k: &PhysicalConstants,
) -> Result<FiniteVolumeIntensity> {
    let volume = p.volume.ok_or(Error::Unavailable("ensemble volume"))?;
    let size = volume.cbrt();
    let wn = p.collective_frequency();
    let ratio = size / k.c * wn;
    let (regime, value) = if ratio > 1.0 {
        (
            VolumeRegime::LargeSample,
            (wn * t).sin().powi(2) * (-3.0 * k.c * t / (4.0 * size)).exp(),
        )
    } else {
        (
            VolumeRegime::SmallSample,
            (-3.0 * p.coupling_strength() * size * t / (4.0 * k.c)).exp(),
        )
    };
    Ok(FiniteVolumeIntensity {
        value,
        regime,
        ratio,
        ambiguous: ratio > 1.0 / 3.0 && ratio < 3.0,
    })
}

/// Diffraction divergence `π / (k0 ∛V)` of the re-emitted photon.
pub fn divergence_angle(k0: f64, volume: f64) -> f64 {
    std::f64::consts::PI / (k0 * volume.cbrt())
}

/// Direct phase sum `Σ_ℓ exp(i Δk·r_ℓ)` over lattice sites.
pub fn lattice_sum_bruteforce(sites: &[[f64; 3]], delta_k: [f64; 3]) -> Complex64 {
    sites
        .iter()
        .map(|r| {
            let phase = delta_k[0] * r[0] + delta_k[1] * r[1] + delta_k[2] * r[2];
            Complex64::from_polar(1.0, phase)
        })
        .sum()
}

/// Continuum phase sum `sin(x)/q³ − a cos(x)/q²` with `x = q a`, where
/// `a` is the ensemble size. Multiplying by `4π ρ` (site density) gives
/// the lattice sum of a ball of radius `a`; the value tends to `a³/3` as
/// `q → 0`.
pub fn lattice_sum_continuum(q: f64, size: f64) -> f64 {
    let x = q * size;
    if x.abs() < 1e-3 {
        let x2 = x * x;
        return size.powi(3) * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0);
    }
    (x.sin() - x * x.cos()) / q.powi(3)
}

/// Times of the local maxima of a sampled signal, refined by fitting a
/// parabola through each peak sample and its neighbours.
pub fn peak_times(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut peaks = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            let (t0, t1, t2) = (t[i - 1], t[i], t[i + 1]);
            let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
            let d0 = (y1 - y0) / (t1 - t0);
            let d1 = (y2 - y1) / (t2 - t1);
            let curv = (d1 - d0) / (t2 - t0);
            let vertex = if curv < 0.0 {
                0.5 * (t0 + t1) - d0 / (2.0 * curv)
            } else {
                t1
            };
            peaks.push(vertex.clamp(t0, t2));
        }
    }
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn initial_conditions() {
        let p = CollectiveParams::new(1e4, 3.0, 40.0).unwrap();
        let s = solve_chi_analytic(&p, 0.0);
        assert_eq!(s.chi, Complex64::new(0.0, 0.0));
        assert_eq!(s.eta, Complex64::new(1.0, 0.0));
        assert_eq!(s.b, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resonant_closed_form() {
        let p = CollectiveParams::new(400.0, 0.5, 0.0).unwrap();
        let wn = p.collective_frequency();
        for t in [0.01, 0.3, 1.7] {
            let s = solve_chi_analytic(&p, t);
            assert!(close(s.eta, Complex64::from((wn * t).cos()), 1e-14));
            assert!(close(s.b, -I / wn * (wn * t).sin(), 1e-14));
            let (eta, b) = solve_weak_detuning(&p, t);
            assert!(close(eta, s.eta, 1e-14) && close(b, s.b, 1e-14));
        }
    }

    #[test]
    fn general_b_prefactor_matches_weak_limit() {
        // −2i/√(α²+4NΩ²) → −i/(√NΩ) as α → 0: the two printed forms agree.
        let p = CollectiveParams::new(100.0, 1.0, 1e-7).unwrap();
        let t = 0.37;
        let s = solve_chi_analytic(&p, t);
        let (_, b) = solve_weak_detuning(&p, t);
        assert!(close(s.b, b, 1e-8));
    }

    #[test]
    fn normalization_holds_for_any_detuning() {
        let p = CollectiveParams::new(50.0, 2.0, 35.0).unwrap();
        for i in 0..200 {
            let t = i as f64 * 0.013;
            let s = solve_chi_analytic(&p, t);
            let total = s.eta.norm_sqr() + p.coupling_strength() * s.b.norm_sqr();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decoupled_limit() {
        // NΩ² tiny relative to α: η keeps unit modulus, χ is the ramp.
        let p = CollectiveParams {
            n: 1.0,
            coupling: 1e-12,
            alpha: 0.0,
            volume: None,
        };
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let tr = solve_chi_numeric(&p, &grid).unwrap();
        for (t, c) in grid.iter().zip(&tr.chi) {
            assert!(close(*c, Complex64::from(*t), 1e-9));
        }
        let p = CollectiveParams {
            n: 1.0,
            coupling: 1e-12,
            alpha: 3.0,
            volume: None,
        };
        let tr = solve_chi_numeric(&p, &grid).unwrap();
        for e in &tr.eta {
            assert!((e.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn numeric_matches_analytic() {
        let p = CollectiveParams::new(2.5e3, 4.0e4, 3.0e6).unwrap();
        let t_end = 20.0 / p.collective_frequency();
        let grid: Vec<f64> = (0..=400).map(|i| t_end * i as f64 / 400.0).collect();
        let num = solve_chi_numeric(&p, &grid).unwrap();
        let ana = AmplitudeTrace::analytic(&p, &grid);
        let scale = ana.chi.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, n) in ana.chi.iter().zip(&num.chi) {
            assert!((a - n).norm() / scale < 1e-8);
        }
        for (a, n) in ana.eta.iter().zip(&num.eta) {
            assert!((a - n).norm() < 1e-8);
        }
    }

    #[test]
    fn numeric_rejects_grid_not_starting_at_zero() {
        let p = CollectiveParams::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            solve_chi_numeric(&p, &[0.1, 0.2]),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn invalid_params() {
        assert!(CollectiveParams::new(0.5, 1.0, 0.0).is_err());
        assert!(CollectiveParams::new(1.0, 0.0, 0.0).is_err());
        let p = CollectiveParams::new(1.0, 1.0, 0.0).unwrap();
        assert!(p.with_volume(-1.0).is_err());
    }

    #[test]
    fn finite_volume_regimes() {
        let k = PhysicalConstants::PAPER;
        // ∛V = 1 mm: ∛V/c ≈ 3.3e-12 s
        let large = CollectiveParams::new(1e6, 1e10, 0.0)
            .unwrap()
            .with_volume(1e-9)
            .unwrap();
        let r = finite_volume_intensity(&large, 0.0, &k).unwrap();
        assert_eq!(r.regime, VolumeRegime::LargeSample);
        assert_eq!(r.value, 0.0);
        assert!(!r.ambiguous);

        let small = CollectiveParams::new(1e6, 1e5, 0.0)
            .unwrap()
            .with_volume(1e-9)
            .unwrap();
        let size = 1e-3;
        let slope = -3.0 * small.coupling_strength() * size / (4.0 * k.c);
        let t1 = 1e-3;
        let a = finite_volume_intensity(&small, 0.0, &k).unwrap();
        let b = finite_volume_intensity(&small, t1, &k).unwrap();
        assert_eq!(b.regime, VolumeRegime::SmallSample);
        assert!((((b.value.ln() - a.value.ln()) / t1) / slope - 1.0).abs() < 1e-9);

        let edge = CollectiveParams::new(1.0, 3e8 / 1e-3 * 1.5, 0.0)
            .unwrap()
            .with_volume(1e-9)
            .unwrap();
        assert!(finite_volume_intensity(&edge, 0.0, &k).unwrap().ambiguous);
        let no_v = CollectiveParams::new(1.0, 1.0, 0.0).unwrap();
        assert!(finite_volume_intensity(&no_v, 0.0, &k).is_err());
    }

    #[test]
    fn divergence_examples() {
        let d = divergence_angle(4.46e11, 3.7e-5f64.powi(3));
        assert!((d / 1.9e-7 - 1.0).abs() < 2e-2, "d = {d:e}");
        assert!(divergence_angle(4.46e11, 1e300) < 1e-100);
        let hard = divergence_angle(2.0 * std::f64::consts::PI / 1e-10, 1e-9);
        assert!((hard / 5e-8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_sum_trivial_cases() {
        let sites: Vec<[f64; 3]> = (0..5).map(|i| [i as f64, 0.5, -1.0]).collect();
        let s = lattice_sum_bruteforce(&sites, [0.0; 3]);
        assert_eq!(s, Complex64::new(5.0, 0.0));
        let s = lattice_sum_bruteforce(&[[0.0; 3]], [3.0, -1.0, 7.0]);
        assert_eq!(s, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn continuum_sum_small_argument_branch_is_continuous() {
        let a = 2.0;
        let below = lattice_sum_continuum(0.999e-3 / a, a);
        let above = lattice_sum_continuum(1.001e-3 / a, a);
        assert!((below / above - 1.0).abs() < 1e-9);
        assert_eq!(lattice_sum_continuum(0.0, a), a.powi(3) / 3.0);
    }

    #[test]
    fn peaks_of_sine_squared() {
        let t: Vec<f64> = (0..2000).map(|i| i as f64 * 0.01).collect();
        let y: Vec<f64> = t.iter().map(|t| (t * 1.3f64).sin().powi(2)).collect();
        let peaks = peak_times(&t, &y);
        let period = std::f64::consts::PI / 1.3;
        for (i, p) in peaks.iter().enumerate() {
            let expect = (i as f64 + 0.5) * period;
            assert!((p - expect).abs() < 1e-6, "{p} vs {expect}");
        }
    }
}
