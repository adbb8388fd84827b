//! The flow function `α(k, s) = Λ exp(-2 ∫_0^s g(k e^u) du)` and its fixed point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magic;
use crate::profiles::{gaussian_sigma, unit_g_momentum, Profile, ProfileKind};
use crate::quadrature::integrate_adaptive;
use crate::special::e1;

/// Flow time used when the fixed point is evaluated by quadrature.
pub const FIXED_POINT_FLOW_TIME: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowTime {
    Finite(f64),
    FixedPoint,
}

/// `α(k, s)` for one profile at one flow time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaFn {
    pub profile: Profile,
    pub time: FlowTime,
}

impl AlphaFn {
    /// `s = +∞` selects the fixed point.
    pub fn new(profile: Profile, s: f64) -> Result<Self> {
        if s == f64::INFINITY {
            return Ok(AlphaFn::fixed_point(profile));
        }
        if !(s >= 0.0) {
            return Err(Error::domain(format!("flow time must be nonnegative, got {s}")));
        }
        Ok(AlphaFn {
            profile,
            time: FlowTime::Finite(s),
        })
    }

    pub fn fixed_point(profile: Profile) -> Self {
        AlphaFn {
            profile,
            time: FlowTime::FixedPoint,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.profile.lambda()
    }

    /// `α(k)`, using a closed form where one exists and quadrature otherwise.
    pub fn evaluate(&self, k: f64) -> f64 {
        let l = self.lambda();
        l * self.unit_eval(k / l)
    }

    /// `α(k)` by quadrature of the flow integral, ignoring closed forms.
    pub fn evaluate_by_quadrature(&self, k: f64) -> f64 {
        let s = match self.time {
            FlowTime::Finite(s) => s,
            FlowTime::FixedPoint => FIXED_POINT_FLOW_TIME,
        };
        let l = self.lambda();
        l * unit_alpha_flow(self.profile.kind, k / l, s)
    }

    /// Evaluation at `Λ = 1` with `k` in cutoff units.
    pub(crate) fn unit_eval(&self, k: f64) -> f64 {
        match (self.time, self.profile.kind) {
            (FlowTime::FixedPoint, kind) => unit_alpha_fixed(kind, k),
            (FlowTime::Finite(s), ProfileKind::Magic) => magic::unit_alpha(k, s),
            (FlowTime::Finite(s), ProfileKind::Gaussian) => unit_alpha_flow(ProfileKind::Gaussian, k, s),
        }
    }

    /// `1 − α(k)/Λ` at `Λ = 1`, evaluated without cancellation at large `k`.
    pub(crate) fn unit_deficit(&self, k: f64) -> f64 {
        let k = k.abs();
        match (self.time, self.profile.kind) {
            (FlowTime::FixedPoint, ProfileKind::Gaussian) => {
                if k == 0.0 {
                    return 1.0;
                }
                -(-0.5 * e1(k * k / gaussian_sigma())).exp_m1()
            }
            (FlowTime::FixedPoint, ProfileKind::Magic) => {
                let r = (k * k + 1.0).sqrt();
                1.0 / (r * (r + k))
            }
            (FlowTime::Finite(s), ProfileKind::Magic) => {
                let m2 = (-2.0 * s).exp();
                let q = k * k + 1.0;
                (1.0 - m2) / (q * (1.0 + ((k * k + m2) / q).sqrt()))
            }
            (FlowTime::Finite(s), ProfileKind::Gaussian) => -(-2.0 * unit_flow_exponent(ProfileKind::Gaussian, k, s)).exp_m1(),
        }
    }
}

/// `α(k, s)` by adaptive quadrature of the flow integral in `u`.
pub fn alpha_flow(profile: &Profile, k: f64, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("flow time must be nonnegative, got {s}")));
    }
    let l = profile.lambda();
    Ok(l * unit_alpha_flow(profile.kind, k / l, s))
}

/// Closed-form fixed point `α(k)`.
pub fn alpha_fixed(profile: &Profile, k: f64) -> f64 {
    let l = profile.lambda();
    l * unit_alpha_fixed(profile.kind, k / l)
}

pub(crate) fn unit_alpha_fixed(kind: ProfileKind, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    match kind {
        ProfileKind::Gaussian => (-0.5 * e1(k * k / gaussian_sigma())).exp(),
        ProfileKind::Magic => k.abs() / (k * k + 1.0).sqrt(),
    }
}

pub(crate) fn unit_alpha_flow(kind: ProfileKind, k: f64, s: f64) -> f64 {
    if s.is_infinite() {
        return unit_alpha_fixed(kind, k);
    }
    let k = k.abs();
    if k == 0.0 {
        return (-s).exp();
    }
    (-2.0 * unit_flow_exponent(kind, k, s)).exp()
}

/// `∫_0^s g(k e^u) du` for finite `s` and `k > 0`.
fn unit_flow_exponent(kind: ProfileKind, k: f64, s: f64) -> f64 {
    if k == 0.0 {
        return 0.5 * s;
    }
    let integrand = |u: f64| unit_g_momentum(kind, k * u.exp());
    // Both profiles obey g(q) ≤ 0.9/q², so ∫_u^∞ g(k e^t) dt ≤ 0.45 e^{-2u}/k².
    let mut total = 0.0;
    let mut u = 0.0;
    while u < s {
        let b = (u + 1.0).min(s);
        total += integrate_adaptive(&integrand, u, b, 1e-14).value;
        u = b;
        if 0.45 * (-2.0 * u).exp() / (k * k) < 1e-18 {
            break;
        }
    }
    total
}
