//! Gauss–Kronrod quadrature and the oscillatory half-line engine used by the
//! correlator transforms and the mode-function integrals.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_478,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An integral together with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Single 21-point Kronrod rule with its embedded 10-point Gauss estimate.
/// Returns (kronrod value, |kronrod − gauss|, ∫|f| estimate).
pub fn gauss_kronrod<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[10];
    let mut rg = T::default();
    let mut rabs = fc.magnitude() * WGK[10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        let s = f1 + f2;
        rk = rk + s * WGK[j];
        rabs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            rg = rg + s * WG[j / 2];
        }
    }
    let err = ((rk - rg) * h).magnitude();
    (rk * h, err, rabs * h.abs())
}

/// Nodes and weights of the 21-point Kronrod rule on `[a, b]`.
pub fn kronrod_rule(a: f64, b: f64) -> [(f64, f64); 21] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(c, WGK[10] * h); 21];
    for j in 0..10 {
        out[1 + 2 * j] = (c - h * XGK[j], WGK[j] * h);
        out[2 + 2 * j] = (c + h * XGK[j], WGK[j] * h);
    }
    out
}

/// Adaptive bisection until each piece meets its share of `abs_tol`.
/// Pieces that hit the depth limit are accepted and their error is reported.
pub fn integrate_adaptive<T: QuadValue>(
    f: &impl Fn(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Estimate<T> {
    adapt(f, a, b, abs_tol, 0)
}

fn adapt<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64, tol: f64, depth: u32) -> Estimate<T> {
    let (v, e, rabs) = gauss_kronrod(f, a, b);
    adapt_from(f, a, b, tol, depth, (v, e, rabs))
}

fn adapt_from<T: QuadValue>(
    f: &impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    (v, e, rabs): (T, f64, f64),
) -> Estimate<T> {
    let floor = 50.0 * f64::EPSILON * rabs;
    if e <= tol.max(floor) || depth >= 40 {
        return Estimate { value: v, error: e };
    }
    let m = 0.5 * (a + b);
    let left = gauss_kronrod(f, a, m);
    let right = gauss_kronrod(f, m, b);
    // Bisection that fails to shrink the estimate is resolving rounding noise.
    if depth >= 4 && left.1 + right.1 >= e {
        return Estimate {
            value: left.0 + right.0,
            error: left.1 + right.1,
        };
    }
    let l = adapt_from(f, a, m, 0.5 * tol, depth + 1, left);
    let r = adapt_from(f, m, b, 0.5 * tol, depth + 1, right);
    Estimate {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}

/// Tolerances and panel rules for the oscillatory engine. All lengths and
/// momenta are measured in units of the cutoff scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Target absolute error of the returned integral.
    pub abs_tol: f64,
    /// Minimum integration length before the smooth cutoff starts.
    pub k_max: f64,
    /// Panels per oscillation period at the highest frequency; at least 8.
    pub panels_per_period: f64,
    /// Panel width cap, resolving kernel structure at the cutoff scale.
    pub max_panel_width: f64,
    /// Refuse integrals that would need more panels than this.
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            k_max: 20.0,
            panels_per_period: 8.0,
            max_panel_width: 1.0,
            max_panels: 4_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("abs_tol must be positive"));
        }
        if !(self.k_max >= 10.0) {
            return Err(Error::domain("k_max must be at least 10 (cutoff units)"));
        }
        if !(self.panels_per_period >= 8.0) {
            return Err(Error::domain("panels_per_period must be at least 8"));
        }
        if !(self.max_panel_width > 0.0) || self.max_panels == 0 {
            return Err(Error::domain("panel limits must be positive"));
        }
        Ok(())
    }
}

/// Smooth step: 0 at t ≤ 0, 1 at t ≥ 1, all derivatives vanish at both ends.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// Cutoff window: 1 below `k0`, 0 above `2 k0`.
pub(crate) fn taper(k: f64, k0: f64) -> f64 {
    1.0 - smooth_step((k - k0) / k0)
}

/// `∫_0^1 |S''(t)| dt` for the smooth step, with a 10% margin.
fn taper_curvature() -> f64 {
    static J: OnceLock<f64> = OnceLock::new();
    *J.get_or_init(|| {
        let n = 200_000;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 1..n {
            let t = i as f64 * h;
            let d2 = (smooth_step(t + h) - 2.0 * smooth_step(t) + smooth_step(t - h)) / (h * h);
            s += d2.abs() * h;
        }
        1.1 * s
    })
}

/// Power-law bound `|h(k)| ≤ c / k^power` on the non-oscillating factor of an
/// integrand, valid beyond the split point. Derivatives are assumed to follow
/// the same law (`|h'| ≤ p c / k^{p+1}`, `|h''| ≤ p(p+1) c / k^{p+2}`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub c: f64,
    pub power: f64,
}

impl Envelope {
    pub fn inverse_square(c: f64) -> Self {
        Envelope { c, power: 2.0 }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Envelope {
            c: self.c * factor,
            power: self.power,
        }
    }

    /// Bound on the error from cutting `h(k) cos(ωk + φ)` off smoothly at `k0`.
    pub(crate) fn tail_bound(&self, omega_min: f64, k0: f64) -> f64 {
        let p = self.power;
        (3.0 * p + taper_curvature()) * self.c / (omega_min * omega_min * k0.powf(p + 1.0))
    }

    fn split_for(&self, omega_min: f64, tol: f64) -> f64 {
        let p = self.power;
        ((3.0 * p + taper_curvature()) * self.c / (omega_min * omega_min * tol)).powf(1.0 / (p + 1.0))
    }
}

/// Integrates `f` over `[0, ∞)` where `f(k) = h(k) Σ_j a_j e^{±iω_j k}` with
/// frequencies in `[omega_min, omega_max]` and `Σ_j |a_j| |h(k)|` bounded by
/// `envelope` beyond the split point.
pub fn integrate_oscillatory<T: QuadValue>(
    f: impl Fn(f64) -> T,
    omega_min: f64,
    omega_max: f64,
    envelope: Envelope,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>> {
    spec.validate()?;
    if !(omega_min > 0.0) || !(omega_max >= omega_min) || !omega_max.is_finite() {
        return Err(Error::domain(format!(
            "oscillation frequencies must satisfy 0 < {omega_min} <= {omega_max}"
        )));
    }
    let tail_tol = 0.5 * spec.abs_tol;
    let mut k0 = spec.k_max;
    if envelope.c > 0.0 {
        k0 = k0.max(envelope.split_for(omega_min, tail_tol));
    }
    let width = (2.0 * PI / (spec.panels_per_period * omega_max)).min(spec.max_panel_width);
    let n_panels = (2.0 * k0 / width).ceil();
    if n_panels > spec.max_panels as f64 {
        return Err(Error::ToleranceNotMet {
            estimate: envelope.tail_bound(omega_min, spec.max_panels as f64 * width / 2.0),
            tolerance: spec.abs_tol,
            context: format!("{n_panels:.0} panels needed, budget {}", spec.max_panels),
        });
    }
    let n_panels = n_panels as usize;
    let width = 2.0 * k0 / n_panels as f64;
    let panel_tol = 0.5 * spec.abs_tol / n_panels as f64;
    let g = |k: f64| f(k) * taper(k, k0);
    let mut value = T::default();
    let mut error = envelope.tail_bound(omega_min, k0);
    for i in 0..n_panels {
        let a = i as f64 * width;
        let est = integrate_adaptive(&g, a, a + width, panel_tol);
        value = value + est.value;
        error += est.error;
    }
    if error > spec.abs_tol {
        return Err(Error::ToleranceNotMet {
            estimate: error,
            tolerance: spec.abs_tol,
            context: "panel refinement".into(),
        });
    }
    Ok(Estimate { value, error })
}

/// Envelope `c / k^power` fitted as `sup k^power |h(k)|` over a logarithmic
/// grid on `[k_split, 1e7 k_split]`, with a 25% margin.
pub fn fit_envelope(h: impl Fn(f64) -> f64, k_split: f64, power: f64) -> Envelope {
    let mut sup: f64 = 0.0;
    let n = 700;
    for i in 0..=n {
        let k = k_split * 10f64.powf(7.0 * i as f64 / n as f64);
        sup = sup.max(k.powf(power) * h(k).abs());
    }
    Envelope {
        c: 1.25 * sup,
        power,
    }
}
