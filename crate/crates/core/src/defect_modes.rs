//! Mode functions of the free boson with a conformal defect, the gluing data
//! across the defect, and mode-integral oracles for the defect correlators.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::validate_theta;
use crate::error::{Error, Result};
use crate::flow::AlphaFn;
use crate::quadrature::{fit_envelope, gauss_kronrod, integrate_oscillatory, kronrod_rule, QuadratureSpec};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Gluing data of the defect with angle `θ`, parameterised by `sin 2θ` and
/// `cos 2θ` so that the totally reflective angles stay regular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectParams {
    pub theta: f64,
    pub sin2: f64,
    pub cos2: f64,
    pub reflection: f64,
    pub transmission: f64,
}

impl DefectParams {
    pub fn new(theta: f64) -> Self {
        let (sin2, cos2) = (2.0 * theta).sin_cos();
        DefectParams {
            theta,
            sin2,
            cos2,
            reflection: cos2 * cos2,
            transmission: sin2 * sin2,
        }
    }

    /// `cosh η = (tan θ + cot θ)/2 = 1/sin 2θ`; infinite when totally reflective.
    pub fn cosh_eta(&self) -> f64 {
        1.0 / self.sin2
    }

    /// `sinh η = (tan θ − cot θ)/2 = −cos 2θ/sin 2θ`.
    pub fn sinh_eta(&self) -> f64 {
        -self.cos2 / self.sin2
    }

    /// The rapidity `η`, defined when `cosh η ≥ 1`, i.e. for `0 < θ < π/2`.
    pub fn rapidity(&self) -> Option<f64> {
        let c = self.cosh_eta();
        (c.is_finite() && c >= 1.0).then(|| self.sinh_eta().asinh())
    }

    /// Gluing matrix mapping left plane-wave coefficients to right ones.
    pub fn gluing_matrix(&self) -> [[f64; 2]; 2] {
        let (c, s) = (self.cosh_eta(), self.sinh_eta());
        [[c, s], [s, c]]
    }

    /// Coefficients of `(e^{ikx}, e^{-ikx})` on the left (`x < 0`).
    pub fn left_coefficients(&self) -> [Complex64; 2] {
        let a = mode_prefactor();
        [a * Complex64::new(self.sin2, -1.0), a * Complex64::new(0.0, -self.cos2)]
    }

    /// Coefficients of `(e^{ikx}, e^{-ikx})` on the right (`x ≥ 0`).
    pub fn right_coefficients(&self) -> [Complex64; 2] {
        let a = mode_prefactor();
        [a * Complex64::new(1.0, -self.sin2), a * Complex64::new(-self.cos2, 0.0)]
    }

    fn coefficients(&self, x: f64) -> [Complex64; 2] {
        if x < 0.0 {
            self.left_coefficients()
        } else {
            self.right_coefficients()
        }
    }

    /// Upper bound on `|f_k(x)|` over all `k` and `x`.
    fn mode_bound(&self) -> f64 {
        mode_prefactor().norm() * ((1.0 + self.sin2 * self.sin2).sqrt() + self.cos2.abs())
    }
}

/// `e^{iπ/4} / (2√π)`.
fn mode_prefactor() -> Complex64 {
    Complex64::from_polar(0.5 / PI.sqrt(), FRAC_PI_4)
}

/// The orthonormal defect mode `f_k(x)`. The point `x = 0` is assigned to the
/// right side.
pub fn mode_function(theta: f64, k: f64, x: f64) -> Complex64 {
    let p = DefectParams::new(theta);
    let [a, b] = p.coefficients(x);
    let e = Complex64::cis(k * x);
    a * e + b * e.conj()
}

/// Normalised Gaussian window `w(k) = (2πσ²)^{-1/4} exp(−(k−k₀)²/(4σ²))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub center: f64,
    pub width: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !center.is_finite() {
            return Err(Error::domain("packet width must be positive"));
        }
        Ok(GaussianPacket { center, width })
    }

    pub fn weight(&self, k: f64) -> f64 {
        let s2 = self.width * self.width;
        let d = k - self.center;
        (2.0 * PI * s2).powf(-0.25) * (-d * d / (4.0 * s2)).exp()
    }

    /// Support used in quadrature: eight widths either side.
    fn window(&self) -> (f64, f64) {
        (self.center - 8.0 * self.width, self.center + 8.0 * self.width)
    }

    /// `∫ w₁(k) w₂(k) dk` in closed form.
    pub fn inner_product(&self, other: &GaussianPacket) -> f64 {
        let (s1, s2) = (self.width * self.width, other.width * other.width);
        let d = self.center - other.center;
        (2.0 * (s1 * s2).sqrt() / (s1 + s2)).sqrt() * (-d * d / (4.0 * (s1 + s2))).exp()
    }
}

/// Fixed composite Kronrod nodes on `[a, b]` with panels no wider than `width`.
fn composite_nodes(a: f64, b: f64, width: f64) -> Vec<(f64, f64)> {
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n)
        .flat_map(|i| kronrod_rule(a + i as f64 * h, a + (i + 1) as f64 * h))
        .collect()
}

/// Wave packet `F(x) = ∫ w(k) f_k(x) dk` evaluated by fixed composite quadrature.
struct PacketField {
    nodes: Vec<(f64, f64)>,
}

impl PacketField {
    fn new(packet: &GaussianPacket, x_extent: f64) -> Self {
        let (a, b) = packet.window();
        let width = (0.5 * packet.width).min(PI / (4.0 * x_extent));
        let nodes = composite_nodes(a, b, width)
            .into_iter()
            .map(|(k, wt)| (k, wt * packet.weight(k)))
            .collect();
        PacketField { nodes }
    }

    fn evaluate(&self, params: &DefectParams, x: f64) -> Complex64 {
        let [a, b] = params.coefficients(x);
        let mut plus = Complex64::new(0.0, 0.0);
        for &(k, w) in &self.nodes {
            plus += Complex64::cis(k * x) * w;
        }
        let mut minus = Complex64::new(0.0, 0.0);
        for &(k, w) in &self.nodes {
            minus += Complex64::cis(-k * x) * w;
        }
        a * plus + b * minus
    }
}

/// `⟨F₁, F₂⟩ = ∫ dx F₁*(x) F₂(x)` with `F_j = ∫ w_j(k) f_k dk`, computed in
/// position space. Orthonormality of the modes makes this `∫ w₁ w₂ dk`.
pub fn mode_overlap_packet(theta: f64, p1: &GaussianPacket, p2: &GaussianPacket) -> Result<Complex64> {
    let params = DefectParams::new(theta);
    let extent = 8.0 / p1.width.min(p2.width);
    let f1 = PacketField::new(p1, extent);
    let f2 = PacketField::new(p2, extent);
    let k_top = p1.window().0.abs().max(p1.window().1.abs()) + p2.window().0.abs().max(p2.window().1.abs());
    let width = PI / (4.0 * k_top);
    let mut panels = Vec::new();
    for (a, b) in [(-extent, 0.0), (0.0, extent)] {
        let n = ((b - a) / width).ceil() as usize;
        let h = (b - a) / n as f64;
        panels.extend((0..n).map(|i| (a + i as f64 * h, a + (i + 1) as f64 * h)));
    }
    let parts: Vec<(Complex64, f64)> = panels
        .par_iter()
        .map(|&(a, b)| {
            // Panels never straddle the defect and interior nodes avoid x = 0.
            let g = |x: f64| f1.evaluate(&params, x).conj() * f2.evaluate(&params, x);
            let (v, e, _) = gauss_kronrod(&g, a, b);
            (v, e)
        })
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for (v, e) in parts {
        value += v;
        error += e;
    }
    if error > 1e-9 {
        return Err(Error::ToleranceNotMet {
            estimate: error,
            tolerance: 1e-9,
            context: "packet overlap".into(),
        });
    }
    Ok(value)
}

/// Momentum weight of the mode-integral oracle.
#[derive(Clone, Copy, Debug)]
pub enum OracleWeight<'a> {
    /// `1/(2|k|)`: conformal `⟨φφ⟩`, used as a difference of points.
    ExactPhiPhi,
    /// `α(k)/2 − Λ/2`: cMERA `⟨ππ⟩` without contact term.
    CmeraPiPi(&'a AlphaFn),
    /// `1/(2α(k)) − 1/(2Λ)`: cMERA `⟨φφ⟩`, used as a difference of points.
    CmeraPhiPhi(&'a AlphaFn),
}

/// `∫_ℝ dk w(|k|) Re[f_k(x) f_k*(y)]`, or for φφ weights the same with
/// `(x, y)` minus `(x_ref, y)`. Coordinates in physical units.
pub fn defect_correlator_mode_oracle(
    theta: f64,
    weight: OracleWeight,
    x: f64,
    y: f64,
    x_ref: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    validate_theta(theta)?;
    let params = DefectParams::new(theta);
    let (lambda, h): (f64, Box<dyn Fn(f64) -> f64 + Sync + '_>) = match weight {
        OracleWeight::ExactPhiPhi => (1.0, Box::new(|k: f64| 0.5 / k)),
        OracleWeight::CmeraPiPi(a) => (a.lambda(), Box::new(move |k: f64| -0.5 * a.unit_deficit(k))),
        OracleWeight::CmeraPhiPhi(a) => (a.lambda(), Box::new(move |k: f64| 0.5 * a.unit_deficit(k) / a.unit_eval(k))),
    };
    let needs_ref = !matches!(weight, OracleWeight::CmeraPiPi(_));
    let (x, y) = (lambda * x, lambda * y);
    let pairs: Vec<(f64, f64, f64)> = match (needs_ref, x_ref) {
        (false, None) => vec![(1.0, x, y)],
        (true, Some(r)) => {
            let r = lambda * r;
            if (r < 0.0) != (x < 0.0) {
                return Err(Error::domain("reference point must be on the same side as x"));
            }
            vec![(1.0, x, y), (-1.0, r, y)]
        }
        (true, None) => return Err(Error::domain("φφ oracle needs a reference point")),
        (false, Some(_)) => return Err(Error::domain("ππ oracle takes no reference point")),
    };
    let mut freqs = Vec::new();
    for &(_, a, b) in &pairs {
        if a == 0.0 || b == 0.0 || a == b {
            return Err(Error::domain("oracle points must be nonzero and distinct"));
        }
        freqs.push((a - b).abs());
        freqs.push((a + b).abs());
    }
    let omega_min = freqs.iter().copied().fold(f64::INFINITY, f64::min);
    let omega_max = freqs.iter().copied().fold(0.0, f64::max);
    if omega_min < 1e-6 {
        return Err(Error::domain("points too close to mirror images for the oracle"));
    }
    let power = if matches!(weight, OracleWeight::ExactPhiPhi) { 1.0 } else { 2.0 };
    let bound = params.mode_bound();
    let amplitude = 2.0 * bound * bound * pairs.len() as f64;
    let envelope = fit_envelope(&h, 10.0, power).scaled(amplitude);
    let integrand = |k: f64| {
        let mut s = 0.0;
        for &(w, a, b) in &pairs {
            let plus = mode_function_with(&params, k, a) * mode_function_with(&params, k, b).conj();
            let minus = mode_function_with(&params, -k, a) * mode_function_with(&params, -k, b).conj();
            s += w * (plus + minus).re;
        }
        s * h(k)
    };
    let est = integrate_oscillatory(integrand, omega_min, omega_max, envelope, spec)?;
    Ok(lambda.powi(if needs_ref { 0 } else { 2 }) * est.value)
}

fn mode_function_with(p: &DefectParams, k: f64, x: f64) -> Complex64 {
    let [a, b] = p.coefficients(x);
    let e = Complex64::cis(k * x);
    a * e + b * e.conj()
}

/// Inner-product coefficients for the second defect family, whose gluing is
/// `a' = R(η) Z a`. The amplitude `a` is fixed by the same construction as for
/// the first family, `b = (e^{iπ/4}, 0)`, and normalised so that the `δ(k−q)`
/// coefficient is one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondFamilyInnerProduct {
    pub theta: f64,
    /// Coefficient of `δ(k−q)`.
    pub same_momentum: f64,
    /// Coefficient of `π δ(k+q)`.
    pub opposite_momentum: Complex64,
    /// Coefficient of `i/(k−q)`.
    pub difference_pole: Complex64,
    /// Coefficient of `i/(k+q)`; nonzero means different momenta overlap.
    pub sum_pole: Complex64,
}

impl SecondFamilyInnerProduct {
    pub fn new(theta: f64) -> Self {
        let (s, c) = (2.0 * theta).sin_cos();
        let b = Complex64::from_polar(1.0, FRAC_PI_4);
        // v ∝ (s − iN)⁻¹ b with N = sin2θ · R(η)Z = [[1, c], [−c, −1]], scaled by det = 2s².
        let v = [b * Complex64::new(s, 1.0), b * Complex64::new(0.0, -c)];
        // a' = R(η)Z a, written without dividing by sin 2θ.
        let vp = [-I * (v[0] - b * (2.0 * s)), -I * v[1]];
        let norm2 = PI * (sq(v) + sq(vp));
        let scale = 1.0 / norm2.sqrt();
        let a = [v[0] * scale, v[1] * scale];
        let ap = [vp[0] * scale, vp[1] * scale];
        let x_form = |u: [Complex64; 2]| u[0].conj() * u[1] + u[1].conj() * u[0];
        let z_form = |u: [Complex64; 2]| Complex64::from(u[0].norm_sqr() - u[1].norm_sqr());
        let zx_form = |u: [Complex64; 2]| u[0].conj() * u[1] - u[1].conj() * u[0];
        SecondFamilyInnerProduct {
            theta,
            same_momentum: PI * (sq(a) + sq(ap)),
            opposite_momentum: x_form(a) + x_form(ap),
            difference_pole: z_form(a) - z_form(ap),
            sum_pole: zx_form(a) - zx_form(ap),
        }
    }
}

fn sq(u: [Complex64; 2]) -> f64 {
    u[0].norm_sqr() + u[1].norm_sqr()
}

/// Coefficient of `i/(k+q)` in `⟨f_k, f_q⟩` for the second defect family.
pub fn second_family_obstruction(theta: f64, k: f64, q: f64) -> Result<Complex64> {
    if !(k > 0.0 && q > 0.0) {
        return Err(Error::domain("momenta must be positive"));
    }
    Ok(SecondFamilyInnerProduct::new(theta).sum_pole)
}

/// The full overlap term `coefficient · i/(k+q)`.
pub fn second_family_overlap_term(theta: f64, k: f64, q: f64) -> Result<Complex64> {
    Ok(second_family_obstruction(theta, k, q)? * I / (k + q))
}
