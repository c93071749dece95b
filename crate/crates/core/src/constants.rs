//! Physical constants (Gaussian/CGS) and unit conversions used at the
//! input boundary.

/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;
/// Boltzmann constant, erg/K.
pub const K_B: f64 = 1.380_649e-16;
/// Speed of light in vacuum, cm/s.
pub const C: f64 = 2.997_924_58e10;
/// One electronvolt, erg.
pub const EV: f64 = 1.602_176_634e-12;

/// Centimetres per micrometre.
pub const CM_PER_UM: f64 = 1.0e-4;

/// Converts an energy quantum ħω given in eV into an angular frequency in rad/s.
pub fn ev_to_rad_s(energy_ev: f64) -> f64 {
    energy_ev * EV / HBAR
}

pub fn um_to_cm(length_um: f64) -> f64 {
    length_um * CM_PER_UM
}

pub fn cm_to_um(length_cm: f64) -> f64 {
    length_cm / CM_PER_UM
}

/// Stefan–Boltzmann constant σ = π²k⁴/(60ħ³c²), erg/(s·cm²·K⁴).
pub fn stefan_boltzmann() -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    pi2 * K_B.powi(4) / (60.0 * HBAR.powi(3) * C * C)
}

/// Bose occupation 1/(e^(ħω/kT) − 1). Zero temperature gives zero occupation.
pub fn bose(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// coth(ħω/2kT) = 1 + 2n(ω, T); equals 1 at T = 0.
pub fn coth_thermal(omega: f64, temperature: f64) -> f64 {
    1.0 + 2.0 * bose(omega, temperature)
}

/// Snapshot of every constant, for run manifests.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConstantsRecord {
    pub hbar_erg_s: f64,
    pub k_b_erg_per_k: f64,
    pub c_cm_per_s: f64,
    pub ev_erg: f64,
}

impl ConstantsRecord {
    pub fn current() -> Self {
        Self {
            hbar_erg_s: HBAR,
            k_b_erg_per_k: K_B,
            c_cm_per_s: C,
            ev_erg: EV,
        }
    }
}
