//! Momentum-to-position transforms of the correlator kernels.
//!
//! Kernels live in cutoff units (`Λ = 1`); the `correlator_*` functions take
//! physical coordinates and rescale.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::flow::AlphaFn;
use crate::quadrature::{fit_envelope, integrate_oscillatory, Envelope, QuadratureSpec};

/// Where the envelope of `kernel − uv_limit` is fitted.
const ENVELOPE_SPLIT: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrClass {
    Integrable,
    /// Behaves like `1/k` at small `k`; only differences of points transform.
    LogDivergent,
}

/// A real, even kernel `h(k)` with its UV limit and IR behaviour.
pub struct MomentumKernel<'a> {
    /// `kernel(k) − uv_limit`.
    sub: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    uv_limit: f64,
    ir_class: IrClass,
    envelope: Envelope,
}

impl fmt::Debug for MomentumKernel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentumKernel")
            .field("uv_limit", &self.uv_limit)
            .field("ir_class", &self.ir_class)
            .field("envelope", &self.envelope)
            .finish()
    }
}

impl<'a> MomentumKernel<'a> {
    /// Wraps `eval`; fits an inverse-square envelope to `eval − uv_limit`.
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'a, uv_limit: f64, ir_class: IrClass) -> Self {
        Self::with_decay(eval, uv_limit, ir_class, 2.0)
    }

    /// As [`MomentumKernel::new`] with an envelope `c / k^power`.
    pub fn with_decay(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'a,
        uv_limit: f64,
        ir_class: IrClass,
        power: f64,
    ) -> Self {
        Self::from_subtracted(move |k| eval(k) - uv_limit, uv_limit, ir_class, power)
    }

    /// Kernel given directly through `kernel(k) − uv_limit`, which avoids
    /// cancellation when the subtracted part is small.
    pub fn from_subtracted(
        sub: impl Fn(f64) -> f64 + Send + Sync + 'a,
        uv_limit: f64,
        ir_class: IrClass,
        power: f64,
    ) -> Self {
        let envelope = fit_envelope(&sub, ENVELOPE_SPLIT, power);
        MomentumKernel {
            sub: Box::new(sub),
            uv_limit,
            ir_class,
            envelope,
        }
    }

    /// `α(k)/2`, contact term `1/2`.
    pub fn pi_pi(alpha: &'a AlphaFn) -> Self {
        MomentumKernel::from_subtracted(move |k| -0.5 * alpha.unit_deficit(k), 0.5, IrClass::Integrable, 2.0)
    }

    /// `1/(2α(k))`, contact term `1/2`.
    pub fn phi_phi(alpha: &'a AlphaFn) -> Self {
        let ir = if alpha.unit_eval(0.0) > 0.0 {
            IrClass::Integrable
        } else {
            IrClass::LogDivergent
        };
        MomentumKernel::from_subtracted(move |k| 0.5 * alpha.unit_deficit(k) / alpha.unit_eval(k), 0.5, ir, 2.0)
    }

    pub fn evaluate(&self, k: f64) -> f64 {
        self.uv_limit + (self.sub)(k)
    }

    /// `kernel(k) − uv_limit`.
    pub fn subtracted(&self, k: f64) -> f64 {
        (self.sub)(k)
    }

    pub fn uv_limit(&self) -> f64 {
        self.uv_limit
    }

    pub fn ir_class(&self) -> IrClass {
        self.ir_class
    }

    pub fn envelope(&self) -> Envelope {
        self.envelope
    }
}

/// `(1/π) ∫_0^∞ cos(kx) (kernel(k) − uv_limit) dk` for `x > 0`.
pub fn cosine_transform(kernel: &MomentumKernel, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if kernel.ir_class == IrClass::LogDivergent {
        return Err(Error::IrDivergent);
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("transform point must be positive, got {x}")));
    }
    let f = |k: f64| (k * x).cos() * kernel.subtracted(k);
    Ok(integrate_oscillatory(f, x, x, kernel.envelope, spec)?.value / PI)
}

/// `(1/π) ∫_0^∞ Σ_j w_j cos(k z_j) (kernel(k) − uv_limit) dk`. For an
/// IR-divergent kernel the weights must sum to zero.
pub fn cosine_combination(
    kernel: &MomentumKernel,
    terms: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let terms: Vec<(f64, f64)> = terms.iter().copied().filter(|&(w, _)| w != 0.0).collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let weight_sum: f64 = terms.iter().map(|t| t.0).sum();
    let weight_abs: f64 = terms.iter().map(|t| t.0.abs()).sum();
    if kernel.ir_class == IrClass::LogDivergent && weight_sum.abs() > 1e-12 * weight_abs {
        return Err(Error::IrDivergent);
    }
    let mut omega_min = f64::INFINITY;
    let mut omega_max: f64 = 0.0;
    for &(_, z) in &terms {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::domain(format!("transform point must be positive, got {z}")));
        }
        omega_min = omega_min.min(z);
        omega_max = omega_max.max(z);
    }
    let f = |k: f64| {
        let s: f64 = terms.iter().map(|&(w, z)| w * (k * z).cos()).sum();
        s * kernel.subtracted(k)
    };
    let env = kernel.envelope.scaled(weight_abs);
    Ok(integrate_oscillatory(f, omega_min, omega_max, env, spec)?.value / PI)
}

/// `(1/π) ∫_0^∞ (cos kx₁ − cos kx₂)(kernel(k) − uv_limit) dk`.
pub fn cosine_difference(kernel: &MomentumKernel, x1: f64, x2: f64, spec: &QuadratureSpec) -> Result<f64> {
    if x1 == x2 {
        if !(x1 > 0.0) {
            return Err(Error::domain(format!("transform point must be positive, got {x1}")));
        }
        return Ok(0.0);
    }
    cosine_combination(kernel, &[(1.0, x1), (-1.0, x2)], spec)
}

/// Regularised `⟨π(x)π(0)⟩` on the full line, contact term excluded.
pub fn correlator_pi_full(alpha: &AlphaFn, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let l = alpha.lambda();
    let kernel = MomentumKernel::pi_pi(alpha);
    Ok(l * l * cosine_transform(&kernel, l * x.abs(), spec)?)
}

/// `C_φφ(x₁) − C_φφ(x₂)` on the full line.
pub fn correlator_phi_diff_full(alpha: &AlphaFn, x1: f64, x2: f64, spec: &QuadratureSpec) -> Result<f64> {
    let l = alpha.lambda();
    let kernel = MomentumKernel::phi_phi(alpha);
    cosine_difference(&kernel, l * x1.abs(), l * x2.abs(), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{Profile, Scale};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn fixed(kind: crate::profiles::ProfileKind) -> AlphaFn {
        AlphaFn::fixed_point(Profile::new(kind, Scale::unit()))
    }

    use crate::profiles::ProfileKind::{Gaussian, Magic};

    #[test]
    fn lorentzian_kernel() {
        let k = MomentumKernel::new(|k| 0.5 / (k * k + 1.0), 0.0, IrClass::Integrable);
        let v = cosine_transform(&k, 1.0, &spec()).unwrap();
        assert!((v - 0.25 * (-1.0f64).exp()).abs() < 1e-10);
        assert!((v - 0.091_969_9).abs() < 1e-7);
    }

    #[test]
    fn exponential_kernel() {
        // Oracle: trapezoid on [0, 60] with 2e6 intervals.
        let n = 2_000_000;
        let h = 60.0 / n as f64;
        let f = |k: f64| (0.5 * k).cos() * (-k).exp();
        let mut s = 0.5 * (f(0.0) + f(60.0));
        for i in 1..n {
            s += f(i as f64 * h);
        }
        let oracle = s * h / PI;
        let kern = MomentumKernel::with_decay(|k| (-k).exp(), 0.0, IrClass::Integrable, 2.0);
        let v = cosine_transform(&kern, 0.5, &spec()).unwrap();
        assert!((v - 1.0 / (PI * 1.25)).abs() < 1e-10);
        assert!((v - oracle).abs() < 1e-9);
        assert!((v - 0.254_647_9).abs() < 1e-7);
    }

    #[test]
    fn pure_contact_is_zero() {
        let k = MomentumKernel::new(|_| 0.7, 0.7, IrClass::Integrable);
        for &x in &[0.1, 1.0, 33.0] {
            assert_eq!(cosine_transform(&k, x, &spec()).unwrap(), 0.0);
        }
    }

    #[test]
    fn divergent_kernel_rejected() {
        let a = fixed(Magic);
        let k = MomentumKernel::phi_phi(&a);
        assert_eq!(cosine_transform(&k, 1.0, &spec()), Err(Error::IrDivergent));
        assert!(cosine_transform(&MomentumKernel::pi_pi(&a), 0.0, &spec()).is_err());
        assert!(cosine_combination(&k, &[(1.0, 1.0), (-0.5, 2.0)], &spec()).is_err());
    }

    #[test]
    fn long_distance_pi_pi() {
        let a = fixed(Magic);
        let x = 30.0;
        let v = correlator_pi_full(&a, x, &spec()).unwrap();
        let exact = -1.0 / (2.0 * PI * x * x);
        assert!(((v - exact) / exact).abs() < 0.01);
    }

    #[test]
    fn long_distance_phi_phi() {
        let a = fixed(Magic);
        let v = correlator_phi_diff_full(&a, 20.0, 40.0, &spec()).unwrap();
        let exact = -(20.0f64 / 40.0).ln() / (2.0 * PI);
        assert!((exact - 0.110_317_8).abs() < 1e-7);
        assert!(((v - exact) / exact).abs() < 0.01);
        let w = correlator_phi_diff_full(&a, 40.0, 20.0, &spec()).unwrap();
        assert_eq!(v, -w);
        assert_eq!(correlator_phi_diff_full(&a, 3.0, 3.0, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn short_distance_regular() {
        for kind in [Gaussian, Magic] {
            let a = fixed(kind);
            let bound = {
                let k = MomentumKernel::pi_pi(&a);
                let n = 400_000;
                let h = 2000.0 / n as f64;
                (0..n).map(|i| k.subtracted((i as f64 + 0.5) * h).abs() * h).sum::<f64>() / PI
            };
            for &x in &[1e-3, 0.05, 0.3] {
                let v = correlator_pi_full(&a, x, &spec()).unwrap();
                assert!(v.is_finite() && v.abs() <= bound * 1.01, "{kind:?} x={x}: {v} vs {bound}");
            }
        }
    }

    /// Composite Simpson oracle for the magic kernel on [0, 200] with 10⁶ intervals.
    /// Points are chosen with sin(200x) = 0 so the truncated boundary term vanishes.
    #[test]
    fn simpson_oracle_magic() {
        let a = fixed(Magic);
        let n = 1_000_000;
        let kmax = 200.0;
        let h = kmax / n as f64;
        for &m in &[64.0, 320.0, 640.0] {
            let x = m * PI / 200.0;
            let f = |k: f64| (k * x).cos() * 0.5 * (a.unit_eval(k) - 1.0);
            let mut s = f(0.0) + f(kmax);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
            }
            let oracle = s * h / 3.0 / PI;
            let v = correlator_pi_full(&a, x, &spec()).unwrap();
            assert!((v - oracle).abs() < 1e-7, "x={x}: {v} vs {oracle}");
        }
    }

    #[test]
    fn halving_tolerance_is_self_consistent() {
        for kind in [Gaussian, Magic] {
            let a = fixed(kind);
            for &tol in &[1e-6, 1e-8, 1e-10] {
                let s1 = QuadratureSpec::with_abs_tol(tol);
                let s2 = QuadratureSpec::with_abs_tol(tol / 2.0);
                for &x in &[0.2, 3.0, 25.0] {
                    let v1 = correlator_pi_full(&a, x, &s1).unwrap();
                    let v2 = correlator_pi_full(&a, x, &s2).unwrap();
                    assert!((v1 - v2).abs() <= tol, "{kind:?} x={x} tol={tol}");
                    let d1 = correlator_phi_diff_full(&a, x, 2.0 * x, &s1).unwrap();
                    let d2 = correlator_phi_diff_full(&a, x, 2.0 * x, &s2).unwrap();
                    assert!((d1 - d2).abs() <= tol);
                }
            }
        }
    }

    #[test]
    fn relative_deviation_decreases_with_distance() {
        let s = QuadratureSpec::with_abs_tol(1e-13);
        for kind in [Gaussian, Magic] {
            let a = fixed(kind);
            let mut prev = f64::INFINITY;
            for &x in &[10.0, 12.0, 15.0, 20.0, 30.0, 45.0, 60.0, 80.0, 100.0] {
                let v = correlator_pi_full(&a, x, &s).unwrap();
                let exact = -1.0 / (2.0 * PI * x * x);
                let dev = ((v - exact) / exact).abs();
                assert!(dev < prev, "{kind:?} x={x}: {dev} >= {prev}");
                prev = dev;
            }
        }
    }

    #[test]
    fn massive_product_state_has_no_correlations() {
        let a = AlphaFn::new(Profile::magic(Scale::unit()), 0.0).unwrap();
        assert_eq!(correlator_pi_full(&a, 2.0, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn physical_units() {
        let l = 3.0;
        for kind in [Gaussian, Magic] {
            let a = AlphaFn::fixed_point(Profile::new(kind, Scale::new(l).unwrap()));
            let u = fixed(kind);
            let v = correlator_pi_full(&a, 2.0 / l, &spec()).unwrap();
            let w = correlator_pi_full(&u, 2.0, &spec()).unwrap();
            assert!((v - l * l * w).abs() < 1e-14);
        }
    }
}
