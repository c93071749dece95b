//! Radiative heat transfer between two plates held at different
//! temperatures.
//!
//! Two kernels are provided. The impedance kernel is
//!
//! s(ω) = −(4ħω³/π²c²)·[n(ω,T1) − n(ω,T2)]·Re ζ1·Re ζ2
//!        ·Re ∫ dp p|p|²|e^(2ipωL/c)|·(1/B_TE + 1/B_TM),
//!
//! and the dielectric (Polder–van Hove) kernel weights the transmission
//! factors (1−|r1|²)(1−|r2|²)/|1 − r1r2e^(2ipωL/c)|² (propagating) and
//! 4 Im r1 Im r2 e^(−2sωL/c)/|1 − r1r2e^(−2sωL/c)|² (evanescent) by
//! (ħω³/4π²c²)[n(T1) − n(T2)]. Both are integrated along the same p-contour;
//! its real leg runs from 1 to 0, which together with the leading minus sign
//! makes s(ω) > 0 when T1 > T2.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{bose, C, HBAR};
use crate::error::{Error, Result};
use crate::materials::{
    BoundaryResponse, Frequency, MaterialModel, ModelTag, PValue, Polarization, Sector,
};
use crate::quadrature::{
    integrate_frequency, integrate_p_contour, omega_max, Components, QuadratureConfig, OMEGA_MIN,
};
use crate::sectors::SectorSpectrum;

/// Two plates, gap in cm, temperatures in K.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatCavitySpec {
    pub mirror1: MaterialModel,
    pub mirror2: MaterialModel,
    pub gap: f64,
    pub t1: f64,
    pub t2: f64,
}

impl HeatCavitySpec {
    pub fn new(mirror1: MaterialModel, mirror2: MaterialModel, gap: f64, t1: f64, t2: f64) -> Result<Self> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::Domain(format!("gap must be positive, got {gap:e} cm")));
        }
        if !(t1 > 0.0 && t2 > 0.0 && t1.is_finite() && t2.is_finite()) {
            return Err(Error::Domain(format!(
                "plate temperatures must be positive, got {t1} K and {t2} K"
            )));
        }
        Ok(Self {
            mirror1,
            mirror2,
            gap,
            t1,
            t2,
        })
    }

    /// The same cavity with the plate temperatures exchanged.
    pub fn swapped_temperatures(&self) -> Self {
        Self {
            t1: self.t2,
            t2: self.t1,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub omega: f64,
    pub sectors: SectorSpectrum,
}

impl SpectralPoint {
    pub fn log10_omega(&self) -> f64 {
        self.omega.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatConfig {
    pub quadrature: QuadratureConfig,
    /// Density of the stored spectral table; 0 disables the table.
    pub points_per_decade: usize,
}

impl Default for HeatConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            points_per_decade: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatResult {
    pub model: ModelTag,
    /// Power per unit area S, erg/(s·cm²).
    pub total: f64,
    pub error: f64,
    pub sectors: SectorSpectrum,
    /// s(ω) on a log grid, for plotting only.
    pub spectrum: Vec<SpectralPoint>,
    pub evaluations: usize,
}

/// e^z − 1 without cancellation for small |z|.
pub(crate) fn expm1_complex(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        z.re.exp() * z.im.sin(),
    )
}

/// (u1+v1)(u2+v2) − (u1−v1)(u2−v2)e^(2ipx), formed as
/// 2(u1v2 + v1u2) − (u1−v1)(u2−v2)(e^(2ipx) − 1).
pub(crate) fn cavity_numerator(
    (u1, v1): (Complex64, Complex64),
    (u2, v2): (Complex64, Complex64),
    p: Complex64,
    phase: f64,
) -> Complex64 {
    let i2px = Complex64::new(0.0, 2.0 * phase) * p;
    2.0 * (u1 * v2 + v1 * u2) - (u1 - v1) * (u2 - v2) * expm1_complex(i2px)
}

/// B_TE = |(1+pζ1)(1+pζ2) − (1−pζ1)(1−pζ2)e^(2ipx)|² and
/// B_TM = |(p+ζ1)(p+ζ2) − (p−ζ1)(p−ζ2)e^(2ipx)|², with x = Lω/c.
pub fn b_factor(pol: Polarization, p: Complex64, zeta1: Complex64, zeta2: Complex64, phase: f64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let (m1, m2) = match pol {
        Polarization::TE => ((zeta1 * p, one), (zeta2 * p, one)),
        Polarization::TM => ((p, zeta1), (p, zeta2)),
    };
    cavity_numerator(m1, m2, p, phase).norm_sqr()
}

fn attach_omega(e: Error, omega: f64) -> Error {
    match e {
        Error::Singularity { what, p_re, p_im, .. } => Error::Singularity {
            what,
            omega,
            p_re,
            p_im,
        },
        other => other,
    }
}

fn singular(what: &'static str, omega: f64, p: PValue) -> Error {
    Error::Singularity {
        what,
        omega,
        p_re: p.value().re,
        p_im: p.value().im,
    }
}

fn contour_sectors(
    omega: f64,
    gap: f64,
    cfg: &QuadratureConfig,
    prefactor: f64,
    mut kernel: impl FnMut(PValue, Polarization) -> Result<Complex64>,
) -> Result<SectorSpectrum> {
    let mut out = [0.0; 4];
    for (k, pol) in Polarization::BOTH.into_iter().enumerate() {
        let legs = integrate_p_contour(|p| kernel(p, pol), omega, gap, cfg)?;
        out[2 * k] = -prefactor * legs.propagating.value.re;
        out[2 * k + 1] = -prefactor * legs.evanescent.value.re;
    }
    Ok(SectorSpectrum::from_components(Components(out)))
}

fn impedance_spectrum(omega: f64, cavity: &HeatCavitySpec, occupation: f64, cfg: &QuadratureConfig) -> Result<SectorSpectrum> {
    let freq = Frequency::Real(omega);
    let z1 = crate::materials::impedance_of(&cavity.mirror1, freq)?;
    let z2 = crate::materials::impedance_of(&cavity.mirror2, freq)?;
    let loss = z1.re * z2.re;
    if loss == 0.0 {
        return Ok(SectorSpectrum::default());
    }
    let phase = cavity.gap * omega / C;
    let prefactor = 4.0 * HBAR * omega.powi(3) / (std::f64::consts::PI.powi(2) * C * C) * occupation * loss;
    contour_sectors(omega, cavity.gap, cfg, prefactor, |p, pol| {
        let pv = p.value();
        let b = b_factor(pol, pv, z1, z2, phase);
        if b == 0.0 {
            return Err(singular("heat-transfer B factor", omega, p));
        }
        let envelope = (Complex64::new(0.0, 2.0 * phase) * pv).exp().norm();
        Ok(pv * pv.norm_sqr() * envelope / b)
    })
}

fn dielectric_spectrum(
    omega: f64,
    cavity: &HeatCavitySpec,
    r1: BoundaryResponse,
    r2: BoundaryResponse,
    occupation: f64,
    cfg: &QuadratureConfig,
) -> Result<SectorSpectrum> {
    let phase = cavity.gap * omega / C;
    let prefactor = HBAR * omega.powi(3) / (4.0 * std::f64::consts::PI.powi(2) * C * C) * occupation;
    contour_sectors(omega, cavity.gap, cfg, prefactor, |p, pol| {
        let pv = p.value();
        let (u1, v1) = r1.split(pv, pol);
        let (u2, v2) = r2.split(pv, pol);
        let den1 = (u1 + v1).norm_sqr();
        let den2 = (u2 + v2).norm_sqr();
        let cav = cavity_numerator((u1, v1), (u2, v2), pv, phase).norm_sqr();
        if den1 == 0.0 || den2 == 0.0 || cav == 0.0 {
            return Err(singular("Polder-van Hove transmission", omega, p));
        }
        // products of 1 − |r|² (propagating) or Im r (evanescent), times |1 − r1r2E|⁻²
        let c1 = u1 * v1.conj();
        let c2 = u2 * v2.conj();
        let transmission = match p.sector() {
            Sector::Propagating => 16.0 * c1.re * c2.re / cav,
            Sector::Evanescent => {
                let envelope = (-2.0 * pv.im * phase).exp();
                16.0 * c1.im * c2.im * envelope / cav
            }
        };
        // den1·den2 cancels between the reflection factors and the cavity term
        Ok(pv * transmission)
    })
}

/// Spectral density s(ω) of the transferred power, erg/(rad·cm²), by sector.
pub fn heat_spectral_density(
    omega: f64,
    cavity: &HeatCavitySpec,
    model: ModelTag,
    cfg: &QuadratureConfig,
) -> Result<SectorSpectrum> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega:e}")));
    }
    let occupation = bose(omega, cavity.t1) - bose(omega, cavity.t2);
    let freq = Frequency::Real(omega);
    // resolve responses first so model mismatches surface even when T1 = T2
    let r1 = cavity.mirror1.response(model, freq)?;
    let r2 = cavity.mirror2.response(model, freq)?;
    if occupation == 0.0 {
        return Ok(SectorSpectrum::default());
    }
    let result = match model {
        ModelTag::Impedance => impedance_spectrum(omega, cavity, occupation, cfg),
        ModelTag::LifshitzDielectric => dielectric_spectrum(omega, cavity, r1, r2, occupation, cfg),
    };
    result.map_err(|e| attach_omega(e, omega))
}

/// Log-spaced frequencies from `lo` to `hi` inclusive, anchored on decades.
pub fn log_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    if points_per_decade == 0 || !(lo > 0.0 && lo <= hi) {
        return Vec::new();
    }
    let ppd = points_per_decade as f64;
    let start = (lo.log10() * ppd - 1e-9).ceil() as i64;
    let stop = (hi.log10() * ppd + 1e-9).floor() as i64;
    (start..=stop).map(|k| 10f64.powf(k as f64 / ppd)).collect()
}

/// Tabulates s(ω) on the given frequencies; points are computed in parallel
/// and returned in input order.
pub fn heat_spectrum(
    omegas: &[f64],
    cavity: &HeatCavitySpec,
    model: ModelTag,
    cfg: &QuadratureConfig,
) -> Result<Vec<SpectralPoint>> {
    omegas
        .par_iter()
        .map(|&omega| {
            heat_spectral_density(omega, cavity, model, cfg).map(|sectors| SpectralPoint { omega, sectors })
        })
        .collect()
}

/// Total transferred power S = ∫ s(ω) dω with its sector decomposition.
pub fn heat_transfer(cavity: &HeatCavitySpec, model: ModelTag, cfg: &HeatConfig) -> Result<HeatResult> {
    let q = &cfg.quadrature;
    q.validate()?;
    let t_max = cavity.t1.max(cavity.t2);
    let est = integrate_frequency(
        |omega| heat_spectral_density(omega, cavity, model, q).map(|s| s.components()),
        t_max,
        q,
    )?;
    let spectrum = heat_spectrum(
        &log_grid(OMEGA_MIN, omega_max(t_max), cfg.points_per_decade),
        cavity,
        model,
        q,
    )?;
    let sectors = SectorSpectrum::from_components(est.value);
    Ok(HeatResult {
        model,
        total: sectors.total(),
        error: est.error,
        sectors,
        spectrum,
        evaluations: est.evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralDifference {
    pub omega: f64,
    pub impedance: f64,
    pub lifshitz: f64,
}

impl SpectralDifference {
    /// s_imp,TE-ew(ω) − s_Lif,TE-ew(ω).
    pub fn difference(&self) -> f64 {
        self.impedance - self.lifshitz
    }
}

/// Difference of the TE-evanescent spectral densities of the two models over
/// a frequency band inside [10⁸, 10¹⁶] rad/s.
pub fn spectral_difference(
    cavity: &HeatCavitySpec,
    band: (f64, f64),
    points_per_decade: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<SpectralDifference>> {
    let (lo, hi) = band;
    if !(lo >= OMEGA_MIN && hi <= 1.0e16 * (1.0 + 1e-12) && lo < hi) {
        return Err(Error::Domain(format!(
            "band [{lo:e}, {hi:e}] must lie inside [1e8, 1e16] rad/s"
        )));
    }
    let omegas = log_grid(lo, hi, points_per_decade);
    let imp = heat_spectrum(&omegas, cavity, ModelTag::Impedance, cfg)?;
    let lif = heat_spectrum(&omegas, cavity, ModelTag::LifshitzDielectric, cfg)?;
    Ok(imp
        .iter()
        .zip(&lif)
        .map(|(a, b)| SpectralDifference {
            omega: a.omega,
            impedance: a.sectors.te_evanescent,
            lifshitz: b.sectors.te_evanescent,
        })
        .collect())
}
