//! Numerical integration: adaptive Gauss–Kronrod quadrature, the composite
//! p-contour, log-paneled frequency integrals and Matsubara summation.
//!
//! Integrands are fallible (`FnMut(x) -> Result<V>`) so that singularities
//! detected deep inside a reflection coefficient surface with context
//! instead of as NaN. Values may be real, complex or a fixed-size vector of
//! real components (used to carry several sectors through one pass).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result, Stage};
use crate::materials::PValue;

/// Tolerances for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Absolute error accepted regardless of the result's size, in result units.
    pub abs_floor: f64,
    /// Bisections allowed per initial panel.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_floor: 1e-30,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::Config(format!(
                "rel_tol must lie in (0, 1e-2], got {:e}",
                self.rel_tol
            )));
        }
        if !(self.abs_floor >= 0.0 && self.abs_floor.is_finite()) {
            return Err(Error::Config("abs_floor must be non-negative".into()));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::Config(format!(
                "max_subdivisions must be at least 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatsubaraConfig {
    pub tail_rel_tol: f64,
    pub max_terms: usize,
}

impl Default for MatsubaraConfig {
    fn default() -> Self {
        Self {
            tail_rel_tol: 1e-8,
            max_terms: 1_000_000,
        }
    }
}

impl MatsubaraConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_rel_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::Config(
                "matsubara tail_rel_tol and max_terms must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Values the integrators can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    /// Number of real components.
    const DIM: usize;
    fn zero() -> Self;
    fn component(&self, i: usize) -> f64;

    /// Largest component magnitude, the norm tolerances refer to.
    fn norm(&self) -> f64 {
        (0..Self::DIM)
            .map(|i| self.component(i).abs())
            .fold(0.0, f64::max)
    }
}

impl QuadValue for f64 {
    const DIM: usize = 1;
    fn zero() -> Self {
        0.0
    }
    fn component(&self, _: usize) -> f64 {
        *self
    }
}

impl QuadValue for Complex64 {
    const DIM: usize = 2;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn component(&self, i: usize) -> f64 {
        if i == 0 {
            self.re
        } else {
            self.im
        }
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

/// Fixed-size vector of real components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Components<const N: usize>(#[serde(with = "serde_arrays")] pub [f64; N]);

mod serde_arrays {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(v: &[f64; N], s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(d: D) -> Result<[f64; N], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom(format!("expected {N} components")))
    }
}

impl<const N: usize> Add for Components<N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Components<N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Components<N> {
    type Output = Self;
    fn mul(mut self, k: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= k;
        }
        self
    }
}

impl<const N: usize> QuadValue for Components<N> {
    const DIM: usize = N;
    fn zero() -> Self {
        Components([0.0; N])
    }
    fn component(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// An integral with its absolute error estimate (largest over components).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

impl<V: QuadValue> Estimate<V> {
    pub fn zero() -> Self {
        Self {
            value: V::zero(),
            error: 0.0,
            evaluations: 0,
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> Estimate<W> {
        Estimate {
            value: f(self.value),
            error: self.error,
            evaluations: self.evaluations,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            value: self.value * k,
            error: self.error * k.abs(),
            evaluations: self.evaluations,
        }
    }

    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    panel: usize,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            // deterministic tie-break: leftmost first
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Rescaled Kronrod–Gauss difference, as in QUADPACK's qk15.
fn rescale_error(diff: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = diff.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn gauss_kronrod_15<V, F>(f: &mut F, a: f64, b: f64) -> Result<(V, f64)>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [V::zero(); 15];
    fv[7] = f(center)?;
    for j in 0..7 {
        let dx = half * XGK[j];
        fv[j] = f(center - dx)?;
        fv[14 - j] = f(center + dx)?;
    }
    let weight = |idx: usize| -> f64 {
        let j = if idx <= 7 { idx } else { 14 - idx };
        WGK[j]
    };
    let gauss_weight = |idx: usize| -> f64 {
        let j = if idx <= 7 { idx } else { 14 - idx };
        if j % 2 == 1 {
            WG[j / 2]
        } else if j == 7 {
            WG[3]
        } else {
            0.0
        }
    };

    let mut kronrod = V::zero();
    let mut gauss = V::zero();
    for (idx, v) in fv.iter().enumerate() {
        kronrod = kronrod + *v * weight(idx);
        gauss = gauss + *v * gauss_weight(idx);
    }

    let mut error: f64 = 0.0;
    for c in 0..V::DIM {
        let mean = 0.5 * kronrod.component(c);
        let mut resabs = 0.0;
        let mut resasc = 0.0;
        for (idx, v) in fv.iter().enumerate() {
            let x = v.component(c);
            resabs += weight(idx) * x.abs();
            resasc += weight(idx) * (x - mean).abs();
        }
        let diff = (kronrod.component(c) - gauss.component(c)) * half;
        error = error.max(rescale_error(diff, resabs * half.abs(), resasc * half.abs()));
    }
    Ok((kronrod * half, error))
}

fn within(error: f64, value_norm: f64, cfg: &QuadratureConfig) -> bool {
    error <= (cfg.rel_tol * value_norm).max(cfg.abs_floor)
}

/// Global adaptive integration over the panels delimited by `breakpoints`
/// (strictly increasing). The interval with the largest error is bisected
/// until the summed error meets the tolerance.
pub fn integrate_panels<V, F>(
    mut f: F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    cfg.validate()?;
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(format!(
            "integration limits must be increasing: {breakpoints:?}"
        )));
    }
    let panels = breakpoints.len() - 1;
    let budget = cfg.max_subdivisions * panels;
    let mut evaluations = 0;
    let mut heap = BinaryHeap::with_capacity(panels + budget + 1);
    for (panel, w) in breakpoints.windows(2).enumerate() {
        let (value, error) = gauss_kronrod_15(&mut f, w[0], w[1])?;
        evaluations += 15;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            panel,
        });
    }

    let total = |heap: &BinaryHeap<Segment<V>>| -> (V, f64) {
        // ordered summation keeps the result independent of heap layout
        let mut segs: Vec<&Segment<V>> = heap.iter().collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        segs.iter().fold((V::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error))
    };

    let mut bisections = 0;
    loop {
        let (value, error) = total(&heap);
        if within(error, value.norm(), cfg) {
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = (worst.b - worst.a) <= 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if bisections >= budget || too_narrow {
            let _ = worst.panel;
            return Err(Error::Convergence {
                stage: Stage::Adaptive,
                a: worst.a,
                b: worst.b,
                value: value.norm(),
                error,
                evaluations,
            });
        }
        let (lv, le) = gauss_kronrod_15(&mut f, worst.a, mid)?;
        let (rv, re) = gauss_kronrod_15(&mut f, mid, worst.b)?;
        evaluations += 30;
        bisections += 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
            panel: worst.panel,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
            panel: worst.panel,
        });
    }
}

/// ∫ₐᵇ f(x) dx by adaptive 7/15-point Gauss–Kronrod bisection.
///
/// The rule is open, so f is never evaluated at a or b.
pub fn integrate_adaptive<V, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    integrate_panels(f, &[a, b], cfg)
}

/// Decade breakpoints 0, 10⁻⁸, …, up to `upper` (exclusive), then `upper`.
fn decade_breakpoints(upper: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut x = 1e-8;
    while x < upper * (1.0 - 1e-12) {
        pts.push(x);
        x *= 10.0;
    }
    pts.push(upper);
    pts
}

/// Length of the evanescent leg: the e^(−2sωL/c) envelope is below
/// rel_tol² at the cut, with a floor of 3.
pub fn evanescent_cutoff(omega: f64, gap: f64, rel_tol: f64) -> f64 {
    let decay = C / (2.0 * omega * gap);
    (2.0 * decay * (1.0 / rel_tol).ln()).max(3.0)
}

/// The two legs of a p-contour integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourIntegral {
    /// Real axis, p from 1 to 0.
    pub propagating: Estimate<Complex64>,
    /// Imaginary axis, p from 0 to i·s_max.
    pub evanescent: Estimate<Complex64>,
    pub s_max: f64,
}

impl ContourIntegral {
    pub fn total(&self) -> Complex64 {
        self.propagating.value + self.evanescent.value
    }

    pub fn error(&self) -> f64 {
        self.propagating.error + self.evanescent.error
    }
}

/// ∫ g(p) dp along the contour 1 → 0 on the real axis, then 0 → i·s_max.
pub fn integrate_p_contour<G>(
    mut g: G,
    omega: f64,
    gap: f64,
    cfg: &QuadratureConfig,
) -> Result<ContourIntegral>
where
    G: FnMut(PValue) -> Result<Complex64>,
{
    let s_max = evanescent_cutoff(omega, gap, cfg.rel_tol);
    integrate_p_contour_to(&mut g, s_max, cfg)
}

pub(crate) fn integrate_p_contour_to<G>(
    g: &mut G,
    s_max: f64,
    cfg: &QuadratureConfig,
) -> Result<ContourIntegral>
where
    G: FnMut(PValue) -> Result<Complex64>,
{
    let propagating = integrate_panels(
        |p| g(PValue::propagating(p)?),
        &decade_breakpoints(1.0),
        cfg,
    )
    .map_err(|e| e.in_stage(Stage::PropagatingLeg))?
    // traversed from 1 to 0
    .scale(-1.0);
    let evanescent = integrate_panels(
        |s| g(PValue::evanescent(s)?),
        &decade_breakpoints(s_max),
        cfg,
    )
    .map_err(|e| e.in_stage(Stage::EvanescentLeg))?
    // dp = i ds
    .map(|v| v * Complex64::new(0.0, 1.0));
    Ok(ContourIntegral {
        propagating,
        evanescent,
        s_max,
    })
}

/// Lower edge of every frequency integral, rad/s.
pub const OMEGA_MIN: f64 = 1.0e8;

/// Upper frequency cut for a Bose-weighted integrand at temperature `t_max`.
pub fn omega_max(t_max: f64) -> f64 {
    60.0 * K_B * t_max / HBAR
}

/// Half-decade breakpoints on [lo, hi].
pub fn half_decade_breakpoints(lo: f64, hi: f64) -> Vec<f64> {
    let step = 10f64.sqrt();
    let mut pts = vec![lo];
    let mut x = lo * step;
    while x < hi * (1.0 - 1e-12) {
        pts.push(x);
        x *= step;
    }
    pts.push(hi);
    pts
}

/// ∫ h(ω) dω over [lo, hi] on half-decade panels.
pub fn integrate_band<V, H>(h: H, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    H: FnMut(f64) -> Result<V>,
{
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::Domain(format!("invalid frequency band [{lo:e}, {hi:e}]")));
    }
    integrate_panels(h, &half_decade_breakpoints(lo, hi), cfg)
        .map_err(|e| e.in_stage(Stage::FrequencyPanel))
}

/// ∫₀^∞ h(ω) dω for an integrand carrying a Bose factor at temperatures
/// up to `t_max`, truncated to [ω_min, 60·k·T_max/ħ].
///
/// The discarded high-frequency tail is estimated from h(ω_max) and the
/// thermal decay length; it must fall below the tolerance.
pub fn integrate_frequency<V, H>(mut h: H, t_max: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    H: FnMut(f64) -> Result<V>,
{
    if !(t_max > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {t_max}")));
    }
    let hi = omega_max(t_max);
    let mut est = integrate_band(&mut h, OMEGA_MIN, hi, cfg)?;
    let thermal_scale = K_B * t_max / HBAR;
    let tail = 2.0 * h(hi)?.norm() * thermal_scale;
    if !within(tail, est.value.norm(), cfg) {
        return Err(Error::Convergence {
            stage: Stage::FrequencyPanel,
            a: hi,
            b: f64::INFINITY,
            value: est.value.norm(),
            error: tail,
            evaluations: est.evaluations + 1,
        });
    }
    est.error += tail;
    est.evaluations += 1;
    Ok(est)
}

/// Matsubara frequency ξ_n = 2πnkT/ħ.
pub fn matsubara_frequency(n: usize, temperature: f64) -> f64 {
    2.0 * std::f64::consts::PI * n as f64 * K_B * temperature / HBAR
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraEstimate<V> {
    pub value: V,
    /// Extrapolated size of the discarded tail.
    pub tail: f64,
    pub terms: usize,
}

/// term(0)/2 + Σ_{n≥1} term(n, ξ_n), stopped once the geometric
/// extrapolation of the last three terms falls below tail_rel_tol of the
/// partial sum.
pub fn matsubara_sum<V, T>(mut term: T, temperature: f64, cfg: &MatsubaraConfig) -> Result<MatsubaraEstimate<V>>
where
    V: QuadValue,
    T: FnMut(usize, f64) -> Result<V>,
{
    cfg.validate()?;
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "matsubara summation needs T > 0, got {temperature}"
        )));
    }
    let mut sum = term(0, 0.0)? * 0.5;
    let mut last = [f64::NAN; 3];
    for n in 1..=cfg.max_terms {
        let t = term(n, matsubara_frequency(n, temperature))?;
        sum = sum + t;
        last = [last[1], last[2], t.norm()];
        if n < 3 {
            continue;
        }
        let tail = if last.iter().all(|&x| x == 0.0) {
            0.0
        } else {
            let ratio = (last[2] / last[1]).max(last[1] / last[0]);
            if ratio.is_finite() && ratio < 1.0 {
                last[2] * ratio / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        };
        if tail <= cfg.tail_rel_tol * sum.norm() || (tail == 0.0 && sum.norm() == 0.0) {
            return Ok(MatsubaraEstimate {
                value: sum,
                tail,
                terms: n + 1,
            });
        }
    }
    Err(Error::Convergence {
        stage: Stage::Matsubara,
        a: 0.0,
        b: cfg.max_terms as f64,
        value: sum.norm(),
        error: last[2],
        evaluations: cfg.max_terms + 1,
    })
}
