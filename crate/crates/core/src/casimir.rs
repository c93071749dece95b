//! Casimir attraction between two parallel mirrors.
//!
//! The real-frequency spectral density is
//!
//! F_ω = coth(ħω/2kT)·(ħω³/2π²c³)·Re ∫ p² dp Σ_α (C_α − 1)⁻¹,
//! C_α = e^(−2ipωL/c)/(r⁽¹⁾_α r⁽²⁾_α),
//!
//! over the usual p-contour, with the L-independent ½ terms dropped. Totals
//! are computed after rotating both contours onto the imaginary axis:
//!
//! F = (kT/π)·Σ′_n I(ξ_n),  I_α(ξ) = ∫_{ξ/c}^∞ q² dq · ρ_α e^(−2qL)/(1 − ρ_α e^(−2qL)),
//!
//! where ρ_α = r⁽¹⁾_α r⁽²⁾_α at ω = iξ and p̃ = cq/ξ. At T = 0 the sum becomes
//! (ħ/2π²)∫dξ. The n = 0 term uses the ξ → 0⁺ limit of the reflection
//! coefficients of the chosen model. F > 0 is attraction.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{coth_thermal, C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::heat::cavity_numerator;
use crate::materials::{BoundaryResponse, Frequency, MaterialModel, ModelTag, PValue, Polarization};
use crate::quadrature::{
    integrate_band, integrate_p_contour, integrate_panels, matsubara_sum, Components,
    MatsubaraConfig, QuadratureConfig,
};
use crate::sectors::SectorSpectrum;

/// Two mirrors at a common temperature; gap in cm, temperature in K.
#[derive(Debug, Clone, PartialEq)]
pub struct CavitySpec {
    pub mirror1: MaterialModel,
    pub mirror2: MaterialModel,
    pub gap: f64,
    pub temperature: f64,
}

impl CavitySpec {
    pub fn new(mirror1: MaterialModel, mirror2: MaterialModel, gap: f64, temperature: f64) -> Result<Self> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::Domain(format!("gap must be positive, got {gap:e} cm")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        Ok(Self {
            mirror1,
            mirror2,
            gap,
            temperature,
        })
    }

    pub fn at_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.mirror1.clone(), self.mirror2.clone(), self.gap, temperature)
    }

    /// Force between perfect mirrors at T = 0, π²ħc/(240L⁴).
    pub fn ideal_force(&self) -> f64 {
        std::f64::consts::PI.powi(2) * HBAR * C / (240.0 * self.gap.powi(4))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CasimirConfig {
    pub quadrature: QuadratureConfig,
    pub matsubara: MatsubaraConfig,
}

impl CasimirConfig {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.matsubara.validate()
    }
}

/// Round-trip factor C_α of one polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CAlpha {
    Finite(Complex64),
    /// r1·r2 = 0: the mode is not reflected and contributes nothing.
    Infinite,
}

impl CAlpha {
    /// (C − 1)⁻¹, zero for the infinite case.
    pub fn resolvent(&self) -> Complex64 {
        match self {
            CAlpha::Finite(c) => 1.0 / (c - 1.0),
            CAlpha::Infinite => Complex64::new(0.0, 0.0),
        }
    }
}

/// C_α = e^(−2ipωL/c)/(r1·r2).
pub fn c_alpha(p: PValue, omega: f64, gap: f64, r1: Complex64, r2: Complex64) -> Result<CAlpha> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega:e}")));
    }
    if !(gap >= 0.0 && gap.is_finite()) {
        return Err(Error::Domain(format!("gap must be non-negative, got {gap:e}")));
    }
    let rr = r1 * r2;
    if rr == Complex64::new(0.0, 0.0) {
        return Ok(CAlpha::Infinite);
    }
    let phase = Complex64::new(0.0, -2.0 * omega * gap / C) * p.value();
    Ok(CAlpha::Finite(phase.exp() / rr))
}

/// F_ω at one frequency, dyn·s/(cm²·rad), by sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralForce {
    pub omega: f64,
    pub sectors: SectorSpectrum,
}

/// Threshold on |C_α − 1|/min(1, |p|²) below which a real resonance is reported.
/// C_α → 1 at the grazing point p = 0 for every mirror, but there the p²
/// weight makes the integrand vanish.
const POLE_GUARD: f64 = 1e-12;

pub fn casimir_spectral_density(
    omega: f64,
    cavity: &CavitySpec,
    model: ModelTag,
    cfg: &QuadratureConfig,
) -> Result<SpectralForce> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega:e}")));
    }
    let freq = Frequency::Real(omega);
    let r1 = cavity.mirror1.response(model, freq)?;
    let r2 = cavity.mirror2.response(model, freq)?;
    let phase = omega * cavity.gap / C;
    let prefactor = coth_thermal(omega, cavity.temperature) * HBAR * omega.powi(3)
        / (2.0 * std::f64::consts::PI.powi(2) * C.powi(3));
    let mut out = [0.0; 4];
    for (k, pol) in Polarization::BOTH.into_iter().enumerate() {
        let legs = integrate_p_contour(
            |p| {
                let pv = p.value();
                let (u1, v1) = r1.split(pv, pol);
                let (u2, v2) = r2.split(pv, pol);
                // (C − 1)⁻¹ = a·E/N with a = (u1−v1)(u2−v2), N the cavity numerator
                let a = (u1 - v1) * (u2 - v2);
                if a == Complex64::new(0.0, 0.0) {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let e = (Complex64::new(0.0, 2.0 * phase) * pv).exp();
                let n = cavity_numerator((u1, v1), (u2, v2), pv, phase);
                if n.norm() < POLE_GUARD * pv.norm_sqr().min(1.0) * (a * e).norm() {
                    return Err(Error::Singularity {
                        what: "Casimir round-trip pole",
                        omega,
                        p_re: pv.re,
                        p_im: pv.im,
                    });
                }
                Ok(pv * pv * a * e / n)
            },
            omega,
            cavity.gap,
            cfg,
        )?;
        out[2 * k] = prefactor * legs.propagating.value.re;
        out[2 * k + 1] = prefactor * legs.evanescent.value.re;
    }
    Ok(SpectralForce {
        omega,
        sectors: SectorSpectrum::from_components(Components(out)),
    })
}

/// ∫ F_ω dω over a finite real-frequency band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandForce {
    pub lo: f64,
    pub hi: f64,
    pub sectors: SectorSpectrum,
    pub error: f64,
    pub evaluations: usize,
}

/// Band-limited real-frequency force. `outer` governs the ω integral and
/// `inner` the p-contour at each frequency.
pub fn casimir_band_force(
    cavity: &CavitySpec,
    model: ModelTag,
    band: (f64, f64),
    outer: &QuadratureConfig,
    inner: &QuadratureConfig,
) -> Result<BandForce> {
    let est = integrate_band(
        |omega| casimir_spectral_density(omega, cavity, model, inner).map(|s| s.sectors.components()),
        band.0,
        band.1,
        outer,
    )?;
    Ok(BandForce {
        lo: band.0,
        hi: band.1,
        sectors: SectorSpectrum::from_components(est.value),
        error: est.error,
        evaluations: est.evaluations,
    })
}

/// The n = 0 Matsubara contribution, already halved and scaled by kT/π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroTerm {
    pub te: f64,
    pub tm: f64,
}

/// Total force in the rotated representation, split by polarization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceDecomposition {
    pub model: ModelTag,
    pub gap: f64,
    pub temperature: f64,
    /// dyn/cm², positive = attraction.
    pub total: f64,
    pub te: f64,
    pub tm: f64,
    pub error: f64,
    /// Matsubara terms summed; zero at T = 0.
    pub matsubara_terms: usize,
    pub zero_term: Option<ZeroTerm>,
}

/// Mode integrand on t = 2L(q − ξ/c) for one polarization.
struct RotatedMode {
    gap: f64,
    xi: f64,
    kind: ModeKind,
}

enum ModeKind {
    /// ξ > 0: boundary responses at ω = iξ.
    Dynamic(BoundaryResponse, BoundaryResponse, Polarization),
    /// ξ = 0: product of the static reflection limits as a function of q.
    Static(Box<dyn Fn(f64) -> Result<f64>>),
}

impl RotatedMode {
    fn eval(&self, t: f64) -> Result<f64> {
        let two_l = 2.0 * self.gap;
        let q = self.xi / C + t / two_l;
        let tau = two_l * q;
        // ρe^(−τ)/(1 − ρe^(−τ)) written as a·e^(−τ)/(b − a·expm1(−τ)), ρ = a/(a + b)
        let (a, b) = match &self.kind {
            ModeKind::Dynamic(r1, r2, pol) => {
                let p = Complex64::new(C * q / self.xi, 0.0);
                let (u1, v1) = r1.split(p, *pol);
                let (u2, v2) = r2.split(p, *pol);
                ((u1 - v1).re * (u2 - v2).re, 2.0 * (u1 * v2 + v1 * u2).re)
            }
            ModeKind::Static(rho) => {
                let rho = rho(q)?;
                (rho, 1.0 - rho)
            }
        };
        if a == 0.0 {
            return Ok(0.0);
        }
        let den = b - a * (-tau).exp_m1();
        if !(den > 0.0) {
            return Err(Error::Singularity {
                what: "imaginary-axis round trip",
                omega: self.xi,
                p_re: C * q / self.xi.max(f64::MIN_POSITIVE),
                p_im: 0.0,
            });
        }
        Ok(q * q * a * (-tau).exp() / den / two_l)
    }
}

/// Breakpoints of the t integral: 0, ½, 1, 2, 4, …, up to where e^(−t) is
/// far below rel_tol.
fn t_breakpoints(rel_tol: f64) -> Vec<f64> {
    let upper = (2.0 * (1.0 / rel_tol).ln() + 30.0).max(64.0);
    let mut pts = vec![0.0, 0.5];
    let mut t = 1.0;
    while t < upper {
        pts.push(t);
        t *= 2.0;
    }
    pts.push(upper);
    pts
}

/// I_α(ξ) for one polarization, 1/cm³.
fn mode_integral(
    xi: f64,
    cavity: &CavitySpec,
    model: ModelTag,
    pol: Polarization,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let kind = if xi == 0.0 {
        let (m1, m2) = (cavity.mirror1.clone(), cavity.mirror2.clone());
        ModeKind::Static(Box::new(move |q| {
            Ok(m1.static_reflection(model, pol, q)? * m2.static_reflection(model, pol, q)?)
        }))
    } else {
        let freq = Frequency::Imaginary(xi);
        ModeKind::Dynamic(
            cavity.mirror1.response(model, freq)?,
            cavity.mirror2.response(model, freq)?,
            pol,
        )
    };
    let mode = RotatedMode {
        gap: cavity.gap,
        xi,
        kind,
    };
    Ok(integrate_panels(|t| mode.eval(t), &t_breakpoints(cfg.rel_tol), cfg)?.value)
}

fn both_modes(xi: f64, cavity: &CavitySpec, model: ModelTag, cfg: &QuadratureConfig) -> Result<Components<2>> {
    Ok(Components([
        mode_integral(xi, cavity, model, Polarization::TE, cfg)?,
        mode_integral(xi, cavity, model, Polarization::TM, cfg)?,
    ]))
}

/// T = 0 force of one polarization, (ħ/2π²)∫dξ I_α(ξ), with its error.
fn zero_temperature(
    cavity: &CavitySpec,
    model: ModelTag,
    pol: Polarization,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let xi_c = C / (2.0 * cavity.gap);
    let upper = (2.0 * (1.0 / cfg.rel_tol).ln() + 20.0).max(50.0);
    let mut pts = vec![0.0];
    let mut x = 1e-8;
    while x < 1.0 {
        pts.push(x * xi_c);
        x *= 10.0;
    }
    let mut x = 1.0;
    while x < upper {
        pts.push(x * xi_c);
        x *= 2.0;
    }
    pts.push(upper * xi_c);
    let est = integrate_panels(|xi| mode_integral(xi, cavity, model, pol, cfg), &pts, cfg)?;
    let k = HBAR / (2.0 * std::f64::consts::PI.powi(2));
    Ok((k * est.value, k * est.error))
}

/// Total force F(L, T) in the rotated representation.
pub fn casimir_force(cavity: &CavitySpec, model: ModelTag, cfg: &CasimirConfig) -> Result<ForceDecomposition> {
    cfg.validate()?;
    let q = &cfg.quadrature;
    // surface model mismatches before any quadrature
    cavity.mirror1.response(model, Frequency::Imaginary(1.0))?;
    cavity.mirror2.response(model, Frequency::Imaginary(1.0))?;
    if cavity.temperature == 0.0 {
        let (te, e_te) = zero_temperature(cavity, model, Polarization::TE, q)?;
        let (tm, e_tm) = zero_temperature(cavity, model, Polarization::TM, q)?;
        return Ok(ForceDecomposition {
            model,
            gap: cavity.gap,
            temperature: 0.0,
            total: te + tm,
            te,
            tm,
            error: e_te + e_tm,
            matsubara_terms: 0,
            zero_term: None,
        });
    }
    let scale = K_B * cavity.temperature / std::f64::consts::PI;
    let mut zero = Components([0.0; 2]);
    let sum = matsubara_sum(
        |n, xi| {
            let v = both_modes(xi, cavity, model, q)?;
            if n == 0 {
                zero = v;
            }
            Ok(v)
        },
        cavity.temperature,
        &cfg.matsubara,
    )?;
    let [te, tm] = (sum.value * scale).0;
    let total = te + tm;
    Ok(ForceDecomposition {
        model,
        gap: cavity.gap,
        temperature: cavity.temperature,
        total,
        te,
        tm,
        error: sum.tail * scale + q.rel_tol * total.abs(),
        matsubara_terms: sum.terms,
        zero_term: Some(ZeroTerm {
            te: 0.5 * scale * zero.0[0],
            tm: 0.5 * scale * zero.0[1],
        }),
    })
}

/// ΔF_TE = F_TE(T) − F_TE(0); positive adds to the attraction.
pub fn thermal_te_ew_correction(cavity: &CavitySpec, model: ModelTag, cfg: &CasimirConfig) -> Result<f64> {
    if !(cavity.temperature > 0.0) {
        return Err(Error::Domain(format!(
            "thermal correction needs T > 0, got {}",
            cavity.temperature
        )));
    }
    cfg.validate()?;
    let warm = casimir_force(cavity, model, cfg)?;
    let (cold, _) = zero_temperature(cavity, model, Polarization::TE, &cfg.quadrature)?;
    Ok(warm.te - cold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::DrudeParams;

    fn al() -> MaterialModel {
        MaterialModel::DrudeImpedance(DrudeParams::aluminium())
    }

    fn cavity(m: MaterialModel, gap_um: f64, t: f64) -> CavitySpec {
        CavitySpec::new(m.clone(), m, gap_um * 1e-4, t).unwrap()
    }

    #[test]
    fn c_alpha_resonance_edge() {
        let one = Complex64::new(1.0, 0.0);
        let p = PValue::propagating(0.4).unwrap();
        match c_alpha(p, 1e14, 0.0, one, one).unwrap() {
            CAlpha::Finite(c) => assert!((c - 1.0).norm() < 1e-15),
            CAlpha::Infinite => panic!("expected finite C"),
        }
    }

    #[test]
    fn c_alpha_infinite_when_unreflected() {
        let p = PValue::evanescent(2.0).unwrap();
        let c = c_alpha(p, 1e14, 1e-4, Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(c, CAlpha::Infinite);
        assert_eq!(c.resolvent(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn no_evanescent_poles_for_passive_mirrors() {
        let r1 = Complex64::new(0.6, 0.7);
        let r2 = Complex64::new(-0.9, 0.1);
        for s in [1e-6, 0.1, 1.0, 10.0] {
            let p = PValue::evanescent(s).unwrap();
            let CAlpha::Finite(c) = c_alpha(p, 1e14, 1e-4, r1, r2).unwrap() else {
                panic!()
            };
            assert!(c.norm() > 1.0);
        }
    }

    #[test]
    fn ideal_mirrors_at_zero_temperature() {
        let cav = cavity(MaterialModel::Ideal, 1.0, 0.0);
        let f = casimir_force(&cav, ModelTag::Impedance, &CasimirConfig::default()).unwrap();
        assert!((f.total / cav.ideal_force() - 1.0).abs() < 1e-6, "{}", f.total / cav.ideal_force());
        assert!((f.te - f.tm).abs() < 1e-6 * f.total);
    }

    #[test]
    fn ideal_matsubara_static_term() {
        // both polarizations have ρ = 1 at n = 0: (kT/2π)·ζ(3)/(4L³) each
        let cav = cavity(MaterialModel::Ideal, 5.0, 300.0);
        let f = casimir_force(&cav, ModelTag::Impedance, &CasimirConfig::default()).unwrap();
        let z = f.zero_term.unwrap();
        let zeta3 = 1.202_056_903_159_594_2;
        let expected = K_B * 300.0 / (2.0 * std::f64::consts::PI) * zeta3 / (4.0 * cav.gap.powi(3));
        assert!((z.te / expected - 1.0).abs() < 1e-6);
        assert!((z.tm / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sector_additivity() {
        let cav = cavity(al(), 1.0, 300.0);
        let f = casimir_force(&cav, ModelTag::Impedance, &CasimirConfig::default()).unwrap();
        assert!((f.total - (f.te + f.tm)).abs() <= 1e-10 * f.total);
    }

    #[test]
    fn dielectric_drude_loses_static_te() {
        let cav = cavity(al(), 1.0, 300.0);
        let f = casimir_force(&cav, ModelTag::LifshitzDielectric, &CasimirConfig::default()).unwrap();
        assert_eq!(f.zero_term.unwrap().te, 0.0);
        assert!(f.total > 0.0);
    }

    #[test]
    fn spectral_density_decays_with_gap() {
        // r vanishes at p = 1 when ζ = 1, removing the slow endpoint term
        let lossy = MaterialModel::ConstantImpedance(1.0);
        let cfg = QuadratureConfig::default();
        let near = casimir_spectral_density(1e15, &cavity(lossy.clone(), 0.5, 300.0), ModelTag::Impedance, &cfg).unwrap();
        let far = casimir_spectral_density(1e15, &cavity(lossy, 5.0, 300.0), ModelTag::Impedance, &cfg).unwrap();
        assert!(near.sectors.total().abs() > 1e3 * far.sectors.total().abs());
    }

    #[test]
    fn spectral_density_cold_limit() {
        let cfg = QuadratureConfig::default();
        let a = casimir_spectral_density(1e15, &cavity(al(), 1.0, 1e-3), ModelTag::Impedance, &cfg).unwrap();
        let b = casimir_spectral_density(1e15, &cavity(al(), 1.0, 0.0), ModelTag::Impedance, &cfg).unwrap();
        assert!((a.sectors.total() / b.sectors.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tabulated_impedance_has_no_rotated_force() {
        let table = crate::materials::ImpedanceTable::from_csv(
            "omega_rad_s,zeta_re,zeta_im\n1e10,1e-3,-1e-3\n1e16,1e-2,-1e-2\n".as_bytes(),
        )
        .unwrap();
        let cav = cavity(MaterialModel::TabulatedImpedance(table), 1.0, 300.0);
        let err = casimir_force(&cav, ModelTag::Impedance, &CasimirConfig::default()).unwrap_err();
        assert!(matches!(err, Error::ModelMismatch(_)));
    }

    #[test]
    fn rejects_bad_cavities() {
        assert!(CavitySpec::new(MaterialModel::Ideal, MaterialModel::Ideal, 0.0, 0.0).is_err());
        assert!(CavitySpec::new(MaterialModel::Ideal, MaterialModel::Ideal, 1e-4, -1.0).is_err());
        let cav = cavity(al(), 1.0, 0.0);
        assert!(thermal_te_ew_correction(&cav, ModelTag::Impedance, &CasimirConfig::default()).is_err());
    }

    fn oracle(key: &str) -> serde_json::Value {
        let all: serde_json::Value = serde_json::from_str(include_str!("../tests/oracle_values.json")).unwrap();
        all[key].clone()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn c_alpha_matches_arbitrary_precision() {
        let o = oracle("c_alpha_al_1e15_p05_1um");
        let z = crate::materials::impedance_of(&al(), Frequency::Real(1e15)).unwrap();
        let p = PValue::propagating(0.5).unwrap();
        for pol in Polarization::BOTH {
            let r = crate::materials::reflection_impedance(0.5, z, pol).unwrap();
            let CAlpha::Finite(c) = c_alpha(p, 1e15, 1e-4, r, r).unwrap() else {
                panic!()
            };
            let want = &o[if pol == Polarization::TE { "TE" } else { "TM" }];
            let want = Complex64::new(want[0].as_f64().unwrap(), want[1].as_f64().unwrap());
            assert!((c - want).norm() < 1e-12 * want.norm(), "{pol:?}: {c} vs {want}");
        }
    }

    #[test]
    fn matsubara_force_matches_independent_summation() {
        for (model, key) in [
            (ModelTag::Impedance, "casimir_impedance_al_1um_300K"),
            (ModelTag::LifshitzDielectric, "casimir_lifshitz_al_1um_300K"),
        ] {
            let o = oracle(key);
            let f = casimir_force(&cavity(al(), 1.0, 300.0), model, &CasimirConfig::default()).unwrap();
            for (got, name) in [(f.total, "total"), (f.te, "TE"), (f.tm, "TM")] {
                let want = o[name].as_f64().unwrap();
                assert!(close(got, want, 1e-6), "{model} {name}: {got:e} vs {want:e}");
            }
        }
    }

    /// Perfect mirrors: ρ = 1 in both polarizations, and each reflection
    /// order m integrates in closed form.
    fn ideal_closed_sum(gap: f64, temperature: f64) -> f64 {
        let mode = |xi: f64| {
            let a = xi / C;
            let mut sum = 0.0;
            for m in 1..100_000 {
                let b = 2.0 * m as f64 * gap;
                let term = (-a * b).exp() * (a * a / b + 2.0 * a / (b * b) + 2.0 / (b * b * b));
                sum += term;
                if term < 1e-18 * sum {
                    break;
                }
            }
            sum
        };
        let mut total = 0.5 * mode(0.0);
        for n in 1.. {
            let term = mode(crate::quadrature::matsubara_frequency(n, temperature));
            total += term;
            if term < 1e-18 * total {
                break;
            }
        }
        // two polarizations
        2.0 * K_B * temperature / std::f64::consts::PI * total
    }

    #[test]
    fn ideal_finite_temperature_matches_closed_sum() {
        let cav = cavity(MaterialModel::Ideal, 5.0, 300.0);
        let f = casimir_force(&cav, ModelTag::Impedance, &CasimirConfig::default()).unwrap();
        let want = ideal_closed_sum(cav.gap, 300.0);
        assert!(close(f.total, want, 1e-6), "{:e} vs {want:e}", f.total);
        let d = thermal_te_ew_correction(&cav, ModelTag::Impedance, &CasimirConfig::default()).unwrap();
        let d_want = 0.5 * want - 0.5 * cav.ideal_force();
        assert!(close(d, d_want, 1e-5), "{d:e} vs {d_want:e}");
    }

    #[test]
    fn ideal_scaling_and_continuity() {
        let cfg = CasimirConfig::default();
        let near = MaterialModel::ConstantImpedance(1e-5);
        let f1 = casimir_force(&cavity(near.clone(), 1.0, 0.0), ModelTag::Impedance, &cfg).unwrap();
        let f2 = casimir_force(&cavity(near, 2.0, 0.0), ModelTag::Impedance, &cfg).unwrap();
        assert!(close(f2.total / f1.total, 1.0 / 16.0, 1e-3));
        let mut last = 0.0;
        for z in [1e-3, 1e-4, 1e-5] {
            let cav = cavity(MaterialModel::ConstantImpedance(z), 1.0, 0.0);
            let ratio = casimir_force(&cav, ModelTag::Impedance, &cfg).unwrap().total / cav.ideal_force();
            assert!(ratio > last && ratio < 1.0, "zeta {z}: {ratio}");
            last = ratio;
        }
        assert!(last > 0.999);
    }

    #[test]
    fn attraction_decreases_with_gap() {
        let cfg = CasimirConfig::default();
        let dielectric = MaterialModel::DrudeDielectric(DrudeParams::aluminium());
        for (m, model) in [(al(), ModelTag::Impedance), (dielectric, ModelTag::LifshitzDielectric)] {
            let mut last = f64::INFINITY;
            for k in 0..12 {
                let gap_um = 0.1 * 50f64.powf(k as f64 / 11.0);
                let f = casimir_force(&cavity(m.clone(), gap_um, 300.0), model, &cfg).unwrap();
                assert!(f.total > 0.0 && f.total < last, "{model} at {gap_um} um");
                last = f.total;
            }
        }
    }

    /// Straight transcription of the spectral force with naive reflection
    /// coefficients, midpoint rule on uniform grids.
    fn dense_spectral_force(omega: f64, cav: &CavitySpec) -> f64 {
        let z = crate::materials::impedance_of(&cav.mirror1, Frequency::Real(omega)).unwrap();
        let x = omega * cav.gap / C;
        let i = Complex64::new(0.0, 1.0);
        let g = |p: Complex64| -> Complex64 {
            let mut sum = Complex64::new(0.0, 0.0);
            for r in [(z * p - 1.0) / (z * p + 1.0), (p - z) / (p + z)] {
                let c = (-2.0 * i * p * x).exp() / (r * r);
                sum += p * p / (c - 1.0);
            }
            sum
        };
        let midpoint = |f: &dyn Fn(f64) -> Complex64, hi: f64, n: usize| {
            let h = hi / n as f64;
            (0..n).map(|k| f((k as f64 + 0.5) * h)).sum::<Complex64>() * h
        };
        let n = 1_000_000;
        let real = midpoint(&|p| g(Complex64::new(p, 0.0)), 1.0, n);
        let imag = midpoint(&|s| g(Complex64::new(0.0, s)), 30.0, n);
        let contour = -real + i * imag;
        coth_thermal(omega, cav.temperature) * HBAR * omega.powi(3) / (2.0 * std::f64::consts::PI.powi(2) * C.powi(3))
            * contour.re
    }

    #[test]
    fn spectral_force_matches_dense_grid() {
        let cav = cavity(al(), 1.0, 300.0);
        let got = casimir_spectral_density(2e15, &cav, ModelTag::Impedance, &QuadratureConfig::with_rel_tol(1e-9))
            .unwrap()
            .sectors
            .total();
        let want = dense_spectral_force(2e15, &cav);
        assert!(close(got, want, 1e-5), "{got:e} vs {want:e}");
    }
}
