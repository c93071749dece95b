//! Mirror response models: Drude permittivity, surface impedance, the
//! normal wavevector component and the two families of reflection
//! coefficients (impedance boundary condition and dielectric half-space).
//!
//! Conventions: µ = 1, time dependence e^(−iωt), p = c·k_z/ω with the branch
//! Re p ≥ 0, Im p ≥ 0. Evaluation on the imaginary frequency axis (ω = iξ) is
//! selected with [`Frequency::Imaginary`].

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{ev_to_rad_s, C};
use crate::error::{Error, Result};

/// A frequency argument: either a real angular frequency ω or the
/// magnitude ξ of an imaginary one, ω = iξ. Both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Real(f64),
    Imaginary(f64),
}

impl Frequency {
    fn magnitude(self) -> f64 {
        match self {
            Frequency::Real(w) | Frequency::Imaginary(w) => w,
        }
    }

    fn check(self) -> Result<()> {
        let w = self.magnitude();
        if w > 0.0 && w.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "frequency must be positive and finite, got {w:e}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    /// Plasma frequency Ω_p, rad/s.
    pub plasma: f64,
    /// Relaxation frequency γ, rad/s.
    pub relaxation: f64,
}

impl DrudeParams {
    pub fn new(plasma: f64, relaxation: f64) -> Result<Self> {
        if !(plasma > 0.0 && plasma.is_finite()) {
            return Err(Error::Domain(format!(
                "plasma frequency must be positive, got {plasma:e}"
            )));
        }
        if !(relaxation >= 0.0 && relaxation.is_finite()) {
            return Err(Error::Domain(format!(
                "relaxation frequency must be non-negative, got {relaxation:e}"
            )));
        }
        Ok(Self { plasma, relaxation })
    }

    /// Builds the parameters from ħΩ_p and ħγ given in eV.
    pub fn from_ev(plasma_ev: f64, relaxation_ev: f64) -> Result<Self> {
        Self::new(ev_to_rad_s(plasma_ev), ev_to_rad_s(relaxation_ev))
    }

    /// Aluminium: ħΩ_p = 11.5 eV, ħγ = 0.05 eV.
    pub fn aluminium() -> Self {
        Self::from_ev(11.5, 0.05).expect("aluminium parameters are valid")
    }
}

/// Drude permittivity ε(ω) = 1 − Ω_p²/[ω(ω + iγ)].
///
/// On the imaginary axis this is the real quantity 1 + Ω_p²/[ξ(ξ + γ)].
pub fn drude_epsilon(freq: Frequency, params: &DrudeParams) -> Result<Complex64> {
    freq.check()?;
    let wp2 = params.plasma * params.plasma;
    Ok(match freq {
        Frequency::Real(w) => {
            Complex64::new(1.0, 0.0) - wp2 / Complex64::new(w * w, w * params.relaxation)
        }
        Frequency::Imaginary(xi) => Complex64::new(1.0 + wp2 / (xi * (xi + params.relaxation)), 0.0),
    })
}

/// Principal square root with the tie-break Im ≥ 0 when Re = 0.
pub(crate) fn sqrt_upper(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re == 0.0 && r.im < 0.0 {
        -r
    } else {
        r
    }
}

/// One row of a tabulated surface impedance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceRow {
    pub omega: f64,
    pub zeta_re: f64,
    pub zeta_im: f64,
}

/// Surface impedance sampled on a strictly increasing frequency grid and
/// interpolated linearly in log ω. No extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceTable {
    rows: Vec<ImpedanceRow>,
}

pub const IMPEDANCE_TABLE_HEADER: [&str; 3] = ["omega_rad_s", "zeta_re", "zeta_im"];

impl ImpedanceTable {
    pub fn new(rows: Vec<ImpedanceRow>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Table("at least two rows are required".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if !(row.omega > 0.0 && row.omega.is_finite()) {
                return Err(Error::Table(format!("row {i}: omega must be positive")));
            }
            if !(row.zeta_re >= 0.0) || !row.zeta_im.is_finite() || !row.zeta_re.is_finite() {
                return Err(Error::Table(format!(
                    "row {i}: Re zeta must be finite and non-negative (passivity)"
                )));
            }
        }
        if let Some(i) = rows.windows(2).position(|w| w[1].omega <= w[0].omega) {
            return Err(Error::Table(format!(
                "rows must be strictly increasing in omega (row {})",
                i + 1
            )));
        }
        Ok(Self { rows })
    }

    /// Reads the `omega_rad_s,zeta_re,zeta_im` CSV format.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Table(e.to_string()))?
            .clone();
        if header.iter().collect::<Vec<_>>() != IMPEDANCE_TABLE_HEADER {
            return Err(Error::Table(format!(
                "expected header {}, found {}",
                IMPEDANCE_TABLE_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Table(e.to_string()))?;
            let field = |j: usize| -> Result<f64> {
                record
                    .get(j)
                    .ok_or_else(|| Error::Table(format!("row {i}: missing column {j}")))?
                    .parse::<f64>()
                    .map_err(|e| Error::Table(format!("row {i}: {e}")))
            };
            rows.push(ImpedanceRow {
                omega: field(0)?,
                zeta_re: field(1)?,
                zeta_im: field(2)?,
            });
        }
        Self::new(rows)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::from_csv(file)
    }

    pub fn rows(&self) -> &[ImpedanceRow] {
        &self.rows
    }

    pub fn range(&self) -> (f64, f64) {
        (self.rows[0].omega, self.rows[self.rows.len() - 1].omega)
    }

    pub fn interpolate(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = self.range();
        if !(omega >= min && omega <= max) {
            return Err(Error::OutOfRange { omega, min, max });
        }
        let hi = self
            .rows
            .partition_point(|r| r.omega < omega)
            .clamp(1, self.rows.len() - 1);
        let (a, b) = (&self.rows[hi - 1], &self.rows[hi]);
        let t = (omega.ln() - a.omega.ln()) / (b.omega.ln() - a.omega.ln());
        Ok(Complex64::new(
            a.zeta_re + t * (b.zeta_re - a.zeta_re),
            a.zeta_im + t * (b.zeta_im - a.zeta_im),
        ))
    }
}

/// Electromagnetic response of one mirror.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum MaterialModel {
    /// Perfect conductor, ζ ≡ 0.
    Ideal,
    /// Drude half-space described by its permittivity.
    DrudeDielectric(DrudeParams),
    /// Drude metal described through ζ = 1/√ε_D.
    DrudeImpedance(DrudeParams),
    /// Frequency-independent real impedance ζ ≥ 0, valid on both axes.
    ConstantImpedance(f64),
    /// Measured impedance, real frequencies only.
    TabulatedImpedance(ImpedanceTable),
}

/// Which boundary treatment the reflection coefficients come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    Impedance,
    LifshitzDielectric,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Impedance => "impedance",
            ModelTag::LifshitzDielectric => "lifshitz-dielectric",
        }
    }
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "impedance" => Ok(ModelTag::Impedance),
            "lifshitz-dielectric" | "lifshitz" | "dielectric" => Ok(ModelTag::LifshitzDielectric),
            other => Err(Error::Config(format!("unknown model tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    Propagating,
    Evanescent,
}

/// A point p = c·k_z/ω tagged with its sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValue {
    value: Complex64,
    sector: Sector,
}

impl PValue {
    /// Real p ∈ [0, 1].
    pub fn propagating(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("propagating p must lie in [0, 1], got {p}")));
        }
        Ok(Self {
            value: Complex64::new(p, 0.0),
            sector: Sector::Propagating,
        })
    }

    /// p = i·s with s > 0.
    pub fn evanescent(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("evanescent s must be positive, got {s}")));
        }
        Ok(Self {
            value: Complex64::new(0.0, s),
            sector: Sector::Evanescent,
        })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }
}

impl From<PValue> for Complex64 {
    fn from(p: PValue) -> Self {
        p.value
    }
}

/// p for a wave of frequency ω and tangential wavenumber k⊥ (1/cm).
///
/// The point k⊥ = ω/c yields p = 0 and is assigned to the propagating sector.
pub fn p_of(omega: f64, kperp: f64) -> Result<PValue> {
    Frequency::Real(omega).check()?;
    if !(kperp >= 0.0 && kperp.is_finite()) {
        return Err(Error::Domain(format!("kperp must be non-negative, got {kperp:e}")));
    }
    let ratio = C * kperp / omega;
    let arg = 1.0 - ratio * ratio;
    if arg >= 0.0 {
        PValue::propagating(arg.sqrt())
    } else {
        PValue::evanescent((-arg).sqrt())
    }
}

fn singular(what: &'static str, p: Complex64) -> Error {
    Error::Singularity {
        what,
        omega: f64::NAN,
        p_re: p.re,
        p_im: p.im,
    }
}

/// Reflection coefficients under the impedance boundary condition:
/// r_TM = (p − ζ)/(p + ζ), r_TE = (ζp − 1)/(ζp + 1).
pub fn reflection_impedance(
    p: impl Into<Complex64>,
    zeta: Complex64,
    pol: Polarization,
) -> Result<Complex64> {
    let p = p.into();
    let (num, den) = match pol {
        Polarization::TM => (p - zeta, p + zeta),
        Polarization::TE => (zeta * p - 1.0, zeta * p + 1.0),
    };
    if den == Complex64::new(0.0, 0.0) {
        return Err(singular("impedance reflection coefficient", p));
    }
    Ok(num / den)
}

/// Fresnel coefficients of a dielectric half-space, with
/// p_m = √(ε − 1 + p²) on the branch Re p_m ≥ 0, Im p_m ≥ 0.
pub fn reflection_fresnel(
    p: impl Into<Complex64>,
    eps: Complex64,
    pol: Polarization,
) -> Result<Complex64> {
    let p = p.into();
    let pm = sqrt_upper(eps - 1.0 + p * p);
    let (num, den) = match pol {
        Polarization::TE => (p - pm, p + pm),
        Polarization::TM => (eps * p - pm, eps * p + pm),
    };
    if den == Complex64::new(0.0, 0.0) {
        return Err(singular("Fresnel reflection coefficient", p));
    }
    Ok(num / den)
}

/// Surface impedance ζ of a model.
///
/// Drude models give 1/√ε_D with Re ζ ≥ 0; ties at Re ζ = 0 take Im √ε ≥ 0.
pub fn impedance_of(model: &MaterialModel, freq: Frequency) -> Result<Complex64> {
    freq.check()?;
    match model {
        MaterialModel::Ideal => Ok(Complex64::new(0.0, 0.0)),
        MaterialModel::ConstantImpedance(z) => Ok(Complex64::new(*z, 0.0)),
        MaterialModel::DrudeDielectric(params) | MaterialModel::DrudeImpedance(params) => {
            let eps = drude_epsilon(freq, params)?;
            Ok(1.0 / sqrt_upper(eps))
        }
        MaterialModel::TabulatedImpedance(table) => match freq {
            Frequency::Real(w) => table.interpolate(w),
            Frequency::Imaginary(_) => Err(Error::ModelMismatch(
                "tabulated impedance has no continuation to imaginary frequencies".into(),
            )),
        },
    }
}

/// A mirror's boundary response resolved at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryResponse {
    /// Perfect reflector: r_TE = −1, r_TM = 1.
    Perfect,
    Impedance(Complex64),
    Dielectric(Complex64),
}

impl BoundaryResponse {
    /// Writes r = (u − v)/(u + v). The split lets 1 − |r|² and Im r be formed
    /// without cancellation when |r| is close to one.
    pub fn split(&self, p: Complex64, pol: Polarization) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match (self, pol) {
            (BoundaryResponse::Perfect, Polarization::TE) => (zero, one),
            (BoundaryResponse::Perfect, Polarization::TM) => (one, zero),
            (BoundaryResponse::Impedance(z), Polarization::TE) => (z * p, one),
            (BoundaryResponse::Impedance(z), Polarization::TM) => (p, *z),
            (BoundaryResponse::Dielectric(eps), Polarization::TE) => {
                (p, sqrt_upper(eps - 1.0 + p * p))
            }
            (BoundaryResponse::Dielectric(eps), Polarization::TM) => {
                (eps * p, sqrt_upper(eps - 1.0 + p * p))
            }
        }
    }

    pub fn reflection(&self, p: impl Into<Complex64>, pol: Polarization) -> Result<Complex64> {
        let p = p.into();
        match self {
            BoundaryResponse::Perfect => {
                let (u, v) = self.split(p, pol);
                Ok((u - v) / (u + v))
            }
            BoundaryResponse::Impedance(z) => reflection_impedance(p, *z, pol),
            BoundaryResponse::Dielectric(eps) => reflection_fresnel(p, *eps, pol),
        }
    }
}

impl MaterialModel {
    /// Short human-readable description used in tables and manifests.
    pub fn label(&self) -> String {
        match self {
            MaterialModel::Ideal => "ideal".into(),
            MaterialModel::DrudeDielectric(d) | MaterialModel::DrudeImpedance(d) => format!(
                "drude(Op={:e} rad/s, gamma={:e} rad/s)",
                d.plasma, d.relaxation
            ),
            MaterialModel::ConstantImpedance(z) => format!("impedance({z:e})"),
            MaterialModel::TabulatedImpedance(t) => format!("table({} rows)", t.rows().len()),
        }
    }

    pub fn drude_params(&self) -> Option<&DrudeParams> {
        match self {
            MaterialModel::DrudeDielectric(d) | MaterialModel::DrudeImpedance(d) => Some(d),
            _ => None,
        }
    }

    /// Resolves the boundary response for the requested treatment.
    ///
    /// The dielectric treatment needs a permittivity, so only ideal and
    /// Drude mirrors qualify for it.
    pub fn response(&self, tag: ModelTag, freq: Frequency) -> Result<BoundaryResponse> {
        match tag {
            ModelTag::Impedance => impedance_of(self, freq).map(BoundaryResponse::Impedance),
            ModelTag::LifshitzDielectric => match self {
                MaterialModel::Ideal => Ok(BoundaryResponse::Perfect),
                MaterialModel::DrudeDielectric(d) | MaterialModel::DrudeImpedance(d) => {
                    drude_epsilon(freq, d).map(BoundaryResponse::Dielectric)
                }
                other => Err(Error::ModelMismatch(format!(
                    "{} carries no permittivity; the lifshitz-dielectric model needs one",
                    other.label()
                ))),
            },
        }
    }

    /// ξ → 0⁺ limit of the imaginary-axis reflection coefficient at fixed
    /// k⊥ = q (1/cm), as entering the zeroth Matsubara term.
    pub fn static_reflection(&self, tag: ModelTag, pol: Polarization, q: f64) -> Result<f64> {
        // rejects combinations without an imaginary-axis continuation
        self.response(tag, Frequency::Imaginary(1.0))?;
        if pol == Polarization::TM {
            return Ok(1.0);
        }
        Ok(match (tag, self) {
            (_, MaterialModel::Ideal) => -1.0,
            // ζp̃ → ∞ unless ζ vanishes
            (ModelTag::Impedance, MaterialModel::ConstantImpedance(z)) => {
                if *z > 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            (ModelTag::Impedance, MaterialModel::DrudeDielectric(d) | MaterialModel::DrudeImpedance(d)) => {
                if d.relaxation > 0.0 {
                    // ζ ~ √(ξγ)/Ω_p, so ζp̃ grows like ξ^(-1/2)
                    1.0
                } else {
                    let zp = C * q / d.plasma;
                    (zp - 1.0) / (zp + 1.0)
                }
            }
            (
                ModelTag::LifshitzDielectric,
                MaterialModel::DrudeDielectric(d) | MaterialModel::DrudeImpedance(d),
            ) => {
                if d.relaxation > 0.0 {
                    0.0
                } else {
                    let km = (q * q + (d.plasma / C).powi(2)).sqrt();
                    (q - km) / (q + km)
                }
            }
            (_, other) => {
                return Err(Error::ModelMismatch(format!("no static limit for {}", other.label())))
            }
        })
    }
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn drude() -> impl Strategy<Value = DrudeParams> {
        (1.0f64..20.0, 1e-3f64..1.0).prop_map(|(op, g)| DrudeParams::from_ev(op, g).unwrap())
    }

    fn omega() -> impl Strategy<Value = f64> {
        (8.0f64..17.0).prop_map(|e| 10f64.powf(e))
    }

    fn responses(d: &DrudeParams, omega: f64) -> [BoundaryResponse; 2] {
        let m = MaterialModel::DrudeImpedance(*d);
        [
            m.response(ModelTag::Impedance, Frequency::Real(omega)).unwrap(),
            m.response(ModelTag::LifshitzDielectric, Frequency::Real(omega)).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn impedance_is_passive(d in drude(), w in omega()) {
            let z = impedance_of(&MaterialModel::DrudeImpedance(d), Frequency::Real(w)).unwrap();
            prop_assert!(z.re >= 0.0);
        }

        #[test]
        fn propagating_reflection_bounded(d in drude(), w in omega(), p in 0.0f64..=1.0) {
            for r in responses(&d, w) {
                for pol in Polarization::BOTH {
                    let v = r.reflection(p, pol).unwrap();
                    prop_assert!(v.norm() <= 1.0 + 1e-12, "{:?} {:?} |r| = {}", r, pol, v.norm());
                }
            }
        }

        #[test]
        fn evanescent_reflection_absorbs(d in drude(), w in omega(), s in 1e-6f64..1e4) {
            for r in responses(&d, w) {
                for pol in Polarization::BOTH {
                    let v = r.reflection(Complex64::new(0.0, s), pol).unwrap();
                    prop_assert!(v.im >= -1e-12 * v.norm(), "{:?} {:?} r = {}", r, pol, v);
                }
            }
        }

        #[test]
        fn split_reproduces_reflection(d in drude(), w in omega(), p in 0.0f64..=1.0, s in 1e-3f64..1e3) {
            for r in responses(&d, w) {
                for pol in Polarization::BOTH {
                    for pv in [Complex64::new(p, 0.0), Complex64::new(0.0, s)] {
                        let (u, v) = r.split(pv, pol);
                        let direct = r.reflection(pv, pol).unwrap();
                        prop_assert!(((u - v) / (u + v) - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
                    }
                }
            }
        }

        #[test]
        fn p_on_principal_branch(w in omega(), ratio in 0.0f64..50.0) {
            let p = p_of(w, ratio * w / C).unwrap().value();
            prop_assert!(p.re >= 0.0 && p.im >= 0.0);
            prop_assert!(p.re == 0.0 || p.im == 0.0);
            prop_assert!((p * p - (1.0 - ratio * ratio)).norm() <= 1e-12 * (1.0 + ratio * ratio));
        }

        #[test]
        fn tie_break_keeps_upper_root(x in 1e-6f64..1e6) {
            // ε real and negative: √ε purely imaginary with positive part, ζ = −i/√|ε|
            let z = impedance_of(&MaterialModel::DrudeImpedance(DrudeParams::new(x.sqrt() * 1e15, 0.0).unwrap()), Frequency::Real(1e14)).unwrap();
            prop_assert!(z.re >= 0.0);
        }
    }
}
