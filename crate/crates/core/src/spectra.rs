//! Equilibrium spectral densities of the TE and TM field amplitudes radiated
//! by a single metal surface, expressed through its surface impedance.
//!
//! Each density is the coefficient of δ(ω − ω′)δ(k⊥ − k⊥′) in the second
//! moment of the mode amplitudes a (TE, electric field) and b (TM, magnetic
//! field). The normal wavevector enters in its dimensionless form p = c·k_z/ω.
//!
//! Only the two diagonal moments ⟨a a*⟩ and ⟨b b*⟩ are non-zero: ⟨a a⟩,
//! ⟨b b⟩, ⟨a b*⟩ and ⟨a b⟩ vanish identically, so they are exposed solely
//! through [`cross_correlations`], which returns exact zeros.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{coth_thermal, C, HBAR};
use crate::error::{Error, Result};
use crate::materials::{impedance_of, p_of, Frequency, MaterialModel};

/// A radiating surface: its material and temperature (K).
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceState {
    pub model: MaterialModel,
    pub temperature: f64,
}

impl SurfaceState {
    pub fn new(model: MaterialModel, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!(
                "surface temperature must be positive, got {temperature}"
            )));
        }
        Ok(Self { model, temperature })
    }
}

/// Non-negative density of an amplitude second moment.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct AmplitudeSpectralDensity(f64);

impl AmplitudeSpectralDensity {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn density(
    omega: f64,
    kperp: f64,
    surface: &SurfaceState,
    denominator: impl Fn(Complex64, Complex64) -> Complex64,
) -> Result<AmplitudeSpectralDensity> {
    let p = p_of(omega, kperp)?;
    let zeta = impedance_of(&surface.model, Frequency::Real(omega))?;
    if zeta.re == 0.0 {
        return Ok(AmplitudeSpectralDensity(0.0));
    }
    let den = denominator(zeta, p.value()).norm_sqr();
    if den == 0.0 {
        return Err(Error::Singularity {
            what: "amplitude spectral density",
            omega,
            p_re: p.value().re,
            p_im: p.value().im,
        });
    }
    let prefactor = 4.0 * std::f64::consts::PI * HBAR * omega / C
        * coth_thermal(omega, surface.temperature);
    Ok(AmplitudeSpectralDensity(prefactor * zeta.re / den))
}

/// ⟨a a*⟩ = (4πħω/c)·coth(ħω/2kT)·Re ζ / |1 + ζp|².
pub fn te_amplitude_density(
    omega: f64,
    kperp: f64,
    surface: &SurfaceState,
) -> Result<AmplitudeSpectralDensity> {
    density(omega, kperp, surface, |zeta, p| 1.0 + zeta * p)
}

/// ⟨b b*⟩ = (4πħω/c)·coth(ħω/2kT)·Re ζ / |ζ + p|².
pub fn tm_amplitude_density(
    omega: f64,
    kperp: f64,
    surface: &SurfaceState,
) -> Result<AmplitudeSpectralDensity> {
    density(omega, kperp, surface, |zeta, p| zeta + p)
}

/// The anomalous and mixed moments, all identically zero at every (ω, k⊥).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CrossCorrelations;

impl CrossCorrelations {
    /// ⟨a a⟩
    pub fn te_anomalous(&self, _omega: f64, _kperp: f64) -> f64 {
        0.0
    }

    /// ⟨b b⟩
    pub fn tm_anomalous(&self, _omega: f64, _kperp: f64) -> f64 {
        0.0
    }

    /// ⟨a b*⟩
    pub fn mixed(&self, _omega: f64, _kperp: f64) -> f64 {
        0.0
    }

    /// ⟨a b⟩
    pub fn mixed_anomalous(&self, _omega: f64, _kperp: f64) -> f64 {
        0.0
    }
}

pub fn cross_correlations() -> CrossCorrelations {
    CrossCorrelations
}
