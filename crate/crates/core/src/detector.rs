//! Count patterns on a position-sensitive detector.
//!
//! The detector sits a distance `D` behind the target. A photon emitted at
//! deflection angle `φ` lands at `D·tan φ` from the undeflected point. On the
//! rotor the undeflected point circles at radius `R + h/2` with azimuth
//! `Θ = Λt`.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use crate::broadband::{bessel_response, MediumParams};
use crate::collective::CollectiveParams;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::format::sci;
use crate::gradient::{
    gravity_deflection, rotor_deflection, rotor_deflection_rate, GravityEnvironment,
    RotorEnvironment,
};

pub const CSV_HEADER: &str = "t_s,r_m,theta_rad,intensity";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorGeometry {
    /// Target to detector distance, m.
    pub distance: f64,
    /// Rotor radius, m.
    pub rotor_radius: f64,
    /// Target height, m.
    pub height: f64,
}

impl DetectorGeometry {
    pub fn new(distance: f64, rotor_radius: f64, height: f64) -> Result<Self> {
        let g = Self {
            distance,
            rotor_radius,
            height,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance > 0.0 && self.distance.is_finite()) {
            return Err(Error::domain(format!(
                "detector distance must be positive, got {}",
                self.distance
            )));
        }
        if !(self.rotor_radius >= 0.0 && self.height >= 0.0) {
            return Err(Error::domain(
                "rotor radius and target height must be non-negative",
            ));
        }
        Ok(())
    }

    /// Radius of the undeflected spot, `R + h/2`.
    pub fn base_radius(&self) -> f64 {
        self.rotor_radius + self.height / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorEvent {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectorPattern {
    pub events: Vec<DetectorEvent>,
    /// Set when part of the requested grid was dropped.
    pub warning: Option<String>,
}

/// Relative count rate as a function of emission time.
pub trait IntensityModel: Sync {
    fn intensity(&self, t: f64) -> f64;
}

/// Collective Rabi oscillation `sin²(√N Ω t)`.
#[derive(Debug, Clone, Copy)]
pub struct Narrowband(pub CollectiveParams);

impl IntensityModel for Narrowband {
    fn intensity(&self, t: f64) -> f64 {
        (self.0.collective_frequency() * t).sin().powi(2)
    }
}

/// Forward-scattered exit intensity `|Ωp(t, L)|²` of a thick target.
#[derive(Debug, Clone, Copy)]
pub struct Broadband(pub MediumParams);

impl IntensityModel for Broadband {
    fn intensity(&self, t: f64) -> f64 {
        bessel_response(&self.0, t, self.0.length)
            .map(|r| r.intensity())
            .unwrap_or(0.0)
    }
}

/// Uniform weight, for pure geometry.
#[derive(Debug, Clone, Copy)]
pub struct Uniform;

impl IntensityModel for Uniform {
    fn intensity(&self, _t: f64) -> f64 {
        1.0
    }
}

/// Emission times with a fixed number of samples per rotor revolution,
/// starting at 0 and not exceeding `t_end`.
pub fn per_revolution_grid(
    rotor: &RotorEnvironment,
    t_end: f64,
    samples_per_rev: usize,
) -> Result<Vec<f64>> {
    if samples_per_rev == 0 {
        return Err(Error::domain("need at least one sample per revolution"));
    }
    if !(rotor.angular_frequency > 0.0) {
        return Err(Error::domain(
            "per-revolution sampling needs a spinning rotor",
        ));
    }
    let dt = 2.0 * std::f64::consts::PI / (rotor.angular_frequency * samples_per_rev as f64);
    let n = (t_end / dt * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * dt).collect())
}

/// Spiral traced by the deflected emission of a spinning target:
/// `r = R + h/2 + D·tan φ_c(t)`, `Θ = Λt`. Grid points at or beyond the
/// saturation time are dropped and reported in the warning.
pub fn rotor_spiral(
    geom: &DetectorGeometry,
    rotor: &RotorEnvironment,
    model: &dyn IntensityModel,
    grid: &[f64],
    k: &PhysicalConstants,
) -> Result<DetectorPattern> {
    geom.validate()?;
    let rate = rotor_deflection_rate(rotor, k)?;
    let t_max = if rate > 0.0 {
        1.0 / rate
    } else {
        f64::INFINITY
    };
    let mut pattern = DetectorPattern::default();
    let mut dropped = 0usize;
    for &t in grid {
        if t >= t_max {
            dropped += 1;
            continue;
        }
        let phi = rotor_deflection(rotor, t, k)?;
        pattern.events.push(DetectorEvent {
            t,
            r: geom.base_radius() + geom.distance * phi.tan(),
            theta: rotor.angular_frequency * t,
            intensity: model.intensity(t),
        });
    }
    if dropped > 0 {
        pattern.warning = Some(format!(
            "{dropped} samples at or beyond saturation time {} s dropped",
            sci(t_max)
        ));
    }
    Ok(pattern)
}

/// Pattern of a spinning target without time dilation: the spot only
/// rotates, giving a ring at `R + h/2`.
pub fn lighthouse_ring(
    geom: &DetectorGeometry,
    rotor: &RotorEnvironment,
    model: &dyn IntensityModel,
    grid: &[f64],
) -> Result<DetectorPattern> {
    geom.validate()?;
    Ok(DetectorPattern {
        events: grid
            .iter()
            .map(|&t| DetectorEvent {
                t,
                r: geom.base_radius(),
                theta: rotor.angular_frequency * t,
                intensity: model.intensity(t),
            })
            .collect(),
        warning: None,
    })
}

/// Gravitational deflection of a resting target: the spot moves along the
/// local vertical toward the Earth (`Θ = −π/2`) by `D·tan φ_g(t)`.
pub fn gravity_trace(
    geom: &DetectorGeometry,
    gravity: &GravityEnvironment,
    model: &dyn IntensityModel,
    grid: &[f64],
    k: &PhysicalConstants,
) -> Result<DetectorPattern> {
    geom.validate()?;
    let events = grid
        .iter()
        .map(|&t| {
            Ok(DetectorEvent {
                t,
                r: geom.distance * gravity_deflection(gravity, t, k)?.tan(),
                theta: -FRAC_PI_2,
                intensity: model.intensity(t),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DetectorPattern {
        events,
        warning: None,
    })
}

/// Orders events by emission time.
pub fn sort_events(events: &mut [DetectorEvent]) {
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
}

pub fn write_events_csv<W: Write>(mut w: W, events: &[DetectorEvent]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for e in events {
        writeln!(
            w,
            "{},{},{},{}",
            sci(e.t),
            sci(e.r),
            sci(e.theta),
            sci(e.intensity)
        )?;
    }
    Ok(())
}

/// Trapezoid integral of the event intensities over emission time.
pub fn total_counts(events: &[DetectorEvent]) -> f64 {
    events
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].intensity + w[1].intensity))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ConstantSet;

    fn setup() -> (DetectorGeometry, RotorEnvironment, PhysicalConstants) {
        (
            DetectorGeometry::new(1.0, 5e-3, 1e-3).unwrap(),
            RotorEnvironment::reference(),
            ConstantSet::Paper.constants(),
        )
    }

    fn grid(end: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| end * i as f64 / n as f64).collect()
    }

    #[test]
    fn spiral_starts_at_base_radius() {
        let (g, rotor, k) = setup();
        let p = rotor_spiral(&g, &rotor, &Uniform, &[0.0], &k).unwrap();
        assert_eq!(p.events[0].r, 5.5e-3);
        assert_eq!(p.events[0].theta, 0.0);
    }

    #[test]
    fn one_revolution_is_two_pi() {
        let (g, rotor, k) = setup();
        let period = 1.0 / 70e3;
        let p = rotor_spiral(&g, &rotor, &Uniform, &[period], &k).unwrap();
        assert!((p.events[0].theta - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn initial_radial_speed() {
        let (g, rotor, k) = setup();
        let h = 1e-7;
        let p = rotor_spiral(&g, &rotor, &Uniform, &[0.0, h], &k).unwrap();
        let v = rotor.rim_speed();
        let expect = g.distance * rotor.radius * rotor.angular_frequency.powi(2)
            / (k.c * k.c - v * v).sqrt();
        let fd = (p.events[1].r - p.events[0].r) / h;
        assert!((fd / expect - 1.0).abs() < 1e-6);
    }

    #[test]
    fn spiral_truncates_at_saturation() {
        let (g, rotor, k) = setup();
        let t_max = 1.0 / rotor_deflection_rate(&rotor, &k).unwrap();
        let p = rotor_spiral(&g, &rotor, &Uniform, &grid(2.0 * t_max, 100), &k).unwrap();
        assert_eq!(p.events.len(), 50);
        assert!(p.warning.unwrap().contains("51 samples"));
        assert!(p.events.windows(2).all(|w| w[1].r > w[0].r));
    }

    #[test]
    fn ring_is_constant_and_spiral_offset_is_exact() {
        let (g, rotor, k) = setup();
        let ts = grid(0.01, 500);
        let model = Narrowband(CollectiveParams::new(1e6, 30.0, 0.0).unwrap());
        let s = rotor_spiral(&g, &rotor, &model, &ts, &k).unwrap();
        let r = lighthouse_ring(&g, &rotor, &model, &ts).unwrap();
        for (a, b) in s.events.iter().zip(&r.events) {
            assert_eq!(b.r, g.base_radius());
            assert_eq!(a.theta, b.theta);
            let offset = g.distance * rotor_deflection(&rotor, a.t, &k).unwrap().tan();
            assert!(((a.r - b.r) - offset).abs() <= 1e-12 * offset.max(g.base_radius()));
        }
        assert_eq!(total_counts(&s.events), total_counts(&r.events));
    }

    #[test]
    fn stopped_rotor_gives_single_point() {
        let (g, _, k) = setup();
        let rotor = RotorEnvironment::from_hz(5e-3, 0.0);
        let s = rotor_spiral(&g, &rotor, &Uniform, &grid(1.0, 10), &k).unwrap();
        assert!(s
            .events
            .iter()
            .all(|e| e.r == g.base_radius() && e.theta == 0.0));
    }

    #[test]
    fn silver_gravity_displacement() {
        let k = ConstantSet::Paper.constants();
        let g = DetectorGeometry::new(10.0, 0.0, 0.0).unwrap();
        let earth = GravityEnvironment::earth_surface(&k);
        let p = gravity_trace(&g, &earth, &Uniform, &[0.0, 57.13], &k).unwrap();
        assert_eq!(p.events[0].r, 0.0);
        assert!(
            (p.events[1].r / 1.87e-5 - 1.0).abs() < 0.01,
            "{}",
            p.events[1].r
        );
        assert_eq!(p.events[1].theta, -FRAC_PI_2);
    }

    #[test]
    fn rejects_non_positive_distance() {
        assert!(DetectorGeometry::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn per_revolution_sampling() {
        let rotor = RotorEnvironment::reference();
        let ts = per_revolution_grid(&rotor, 3.0 / 70e3, 8).unwrap();
        assert_eq!(ts.len(), 25);
        let dtheta = rotor.angular_frequency * ts[1];
        assert!((dtheta - std::f64::consts::PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        let ev = [DetectorEvent {
            t: 1e-3,
            r: 0.0055,
            theta: 0.5,
            intensity: 1.0,
        }];
        write_events_csv(&mut buf, &ev).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t_s,r_m,theta_rad,intensity\n1.000000e-03,5.500000e-03,5.000000e-01,1.000000e+00\n"
        );
    }
}
