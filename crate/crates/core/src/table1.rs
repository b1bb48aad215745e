//! Maximum deflection angles over the coherence time for each candidate
//! transition, under Earth's gravity and on the reference rotor.

use crate::constants::PhysicalConstants;
use crate::error::Result;
use crate::gradient::{
    gravity_coefficients, gravity_deflection, rotor_coefficients, rotor_deflection,
    saturation_time, GravityEnvironment, RotorEnvironment,
};
use crate::isotope::IsotopeRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub label: String,
    pub energy_kev: f64,
    pub tau_coh: f64,
    /// φ_g(τ_coh), degrees.
    pub phi_gravity_deg: f64,
    /// φ_c(τ_coh), degrees.
    pub phi_rotor_deg: f64,
    pub gravity_saturated: bool,
    pub rotor_saturated: bool,
}

/// Evaluates both deflection laws at each record's coherence time. An
/// angle is reported as 90° once `τ_coh` reaches the saturation time of
/// its scenario.
pub fn build_table1(
    registry: &[IsotopeRecord],
    rotor: &RotorEnvironment,
    gravity: &GravityEnvironment,
    k: &PhysicalConstants,
) -> Result<Vec<Table1Row>> {
    registry
        .iter()
        .map(|iso| {
            let t_rotor = saturation_time(rotor_coefficients(rotor, iso.omega, k)?.q, iso.k0);
            let t_grav = saturation_time(gravity_coefficients(gravity, iso.omega, k)?.q, iso.k0);
            let rotor_saturated = iso.tau_coh >= t_rotor;
            let gravity_saturated = iso.tau_coh >= t_grav;
            let angle = |saturated: bool, phi: f64| if saturated { 90.0 } else { phi.to_degrees() };
            Ok(Table1Row {
                label: iso.label.clone(),
                energy_kev: iso.energy_kev,
                tau_coh: iso.tau_coh,
                phi_gravity_deg: angle(
                    gravity_saturated,
                    gravity_deflection(gravity, iso.tau_coh, k)?,
                ),
                phi_rotor_deg: angle(rotor_saturated, rotor_deflection(rotor, iso.tau_coh, k)?),
                gravity_saturated,
                rotor_saturated,
            })
        })
        .collect()
}
