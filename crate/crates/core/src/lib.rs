//! Fluctuational electrodynamics of metal plates described by a surface
//! impedance: field-amplitude correlation spectra, the Casimir force and
//! radiative heat transfer, evaluated alongside the Lifshitz
//! dielectric-model counterparts.
//!
//! All quantities are Gaussian/CGS internally: erg, s, cm, K. Angular
//! frequencies are in rad/s.

pub mod casimir;
pub mod constants;
pub mod error;
pub mod heat;
pub mod materials;
pub mod quadrature;
pub mod sectors;
pub mod spectra;
pub mod table;

pub use casimir::{
    c_alpha, casimir_force, casimir_spectral_density, thermal_te_ew_correction, CAlpha,
    CasimirConfig, CavitySpec, ForceDecomposition, SpectralForce,
};
pub use error::{Error, Result, Stage};
pub use heat::{
    b_factor, heat_spectral_density, heat_transfer, spectral_difference, HeatCavitySpec,
    HeatConfig, HeatResult, SpectralDifference, SpectralPoint,
};
pub use materials::{
    drude_epsilon, impedance_of, p_of, reflection_fresnel, reflection_impedance,
    BoundaryResponse, DrudeParams, Frequency, ImpedanceRow, ImpedanceTable, MaterialModel,
    ModelTag, PValue, Polarization, Sector,
};
pub use quadrature::{
    integrate_adaptive, integrate_frequency, integrate_p_contour, matsubara_sum, ContourIntegral,
    Estimate, MatsubaraConfig, MatsubaraEstimate, QuadratureConfig,
};
pub use sectors::SectorSpectrum;
pub use spectra::{
    cross_correlations, te_amplitude_density, tm_amplitude_density, AmplitudeSpectralDensity,
    CrossCorrelations, SurfaceState,
};
pub use table::{SweepRow, SweepTable};
