//! Exact and cMERA two-point functions on the line, the half-line and the
//! line with a conformal defect.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::AlphaFn;
use crate::profiles::Profile;
use crate::quadrature::QuadratureSpec;
use crate::transforms::{cosine_difference, cosine_transform, MomentumKernel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// Image sign `ξ`.
    pub fn xi(&self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => -1.0,
            BoundaryCondition::Neumann => 1.0,
        }
    }

    pub fn from_xi(xi: f64) -> Result<Self> {
        if xi == -1.0 {
            Ok(BoundaryCondition::Dirichlet)
        } else if xi == 1.0 {
            Ok(BoundaryCondition::Neumann)
        } else {
            Err(Error::domain(format!("boundary sign must be ±1, got {xi}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    FullLine,
    /// Half-line `x > 0` with a boundary at the origin.
    Boundary { condition: BoundaryCondition },
    /// Conformal defect at the origin with angle `θ ∈ (−π/2, π/2]`.
    Defect { theta: f64 },
}

impl Geometry {
    pub fn boundary(condition: BoundaryCondition) -> Self {
        Geometry::Boundary { condition }
    }

    pub fn defect(theta: f64) -> Result<Self> {
        validate_theta(theta)?;
        Ok(Geometry::Defect { theta })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Geometry::Defect { theta } => validate_theta(*theta),
            _ => Ok(()),
        }
    }

    /// Checks that `x` lies where the theory lives.
    pub fn check_point(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::domain("coordinate must be finite"));
        }
        match self {
            Geometry::FullLine => Ok(()),
            Geometry::Boundary { .. } if x > 0.0 => Ok(()),
            Geometry::Boundary { .. } => Err(Error::domain(format!("half-line coordinates must be positive, got {x}"))),
            Geometry::Defect { .. } if x != 0.0 => Ok(()),
            Geometry::Defect { .. } => Err(Error::domain("the defect point x = 0 is excluded")),
        }
    }

    /// Coefficient of the image term at `(x, y)`: 0, `ξ`, or `c_θ(x, y)`.
    pub fn image_coefficient(&self, x: f64, y: f64) -> f64 {
        match self {
            Geometry::FullLine => 0.0,
            Geometry::Boundary { condition } => condition.xi(),
            Geometry::Defect { theta } => CTheta::new(*theta).evaluate(x, y),
        }
    }

    /// Distance entering the image term.
    pub fn image_distance(&self, x: f64, y: f64) -> f64 {
        match self {
            Geometry::FullLine | Geometry::Boundary { .. } => (x + y).abs(),
            Geometry::Defect { .. } => x.abs() + y.abs(),
        }
    }
}

pub(crate) fn validate_theta(theta: f64) -> Result<()> {
    if theta > -FRAC_PI_2 && theta <= FRAC_PI_2 + 1e-15 {
        Ok(())
    } else {
        Err(Error::domain(format!("defect angle must lie in (−π/2, π/2], got {theta}")))
    }
}

/// The quadrant function `c_θ(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CTheta {
    pub theta: f64,
}

impl CTheta {
    pub fn new(theta: f64) -> Self {
        CTheta { theta }
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let t2 = 2.0 * self.theta;
        match (x < 0.0, y < 0.0) {
            (true, true) => t2.cos(),
            (false, false) => -t2.cos(),
            _ => t2.sin() - 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    /// `⟨π(x)π(y)⟩`.
    PiPi,
    /// `⟨φ(x)φ(y)⟩`, available for cMERA only when IR-finite (Dirichlet).
    PhiPhi,
    /// `⟨φ(x)φ(y)⟩ − ⟨φ(x_ref)φ(y)⟩`.
    PhiPhiDiff { x_ref: f64 },
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::PiPi => "pipi",
            Observable::PhiPhi => "phiphi",
            Observable::PhiPhiDiff { .. } => "phiphi-diff",
        }
    }
}

fn cft_phi(z: f64) -> f64 {
    -z.abs().ln() / (2.0 * PI)
}

fn cft_pi(z: f64) -> f64 {
    -1.0 / (2.0 * PI * z * z)
}

fn check_pair(geometry: &Geometry, x: f64, y: f64) -> Result<()> {
    geometry.validate()?;
    geometry.check_point(x)?;
    geometry.check_point(y)?;
    if x == y {
        return Err(Error::domain("coincident points carry only a contact term"));
    }
    Ok(())
}

fn exact_two_point(geometry: &Geometry, c: fn(f64) -> f64, x: f64, y: f64) -> f64 {
    let w = geometry.image_coefficient(x, y);
    let direct = c(x - y);
    if w == 0.0 {
        direct
    } else {
        direct + w * c(geometry.image_distance(x, y))
    }
}

/// Conformal correlator of the massless boson in the given geometry.
pub fn exact_correlator(geometry: &Geometry, observable: &Observable, x: f64, y: f64) -> Result<f64> {
    check_pair(geometry, x, y)?;
    match observable {
        Observable::PiPi => Ok(exact_two_point(geometry, cft_pi, x, y)),
        Observable::PhiPhi => Ok(exact_two_point(geometry, cft_phi, x, y)),
        Observable::PhiPhiDiff { x_ref } => {
            check_pair(geometry, *x_ref, y)?;
            Ok(exact_two_point(geometry, cft_phi, x, y) - exact_two_point(geometry, cft_phi, *x_ref, y))
        }
    }
}

/// cMERA counterpart of [`exact_correlator`] at the fixed point of `profile`.
pub fn cmera_correlator(
    geometry: &Geometry,
    profile: &Profile,
    observable: &Observable,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let alpha = AlphaFn::fixed_point(*profile);
    cmera_correlator_with(geometry, &alpha, observable, x, y, spec)
}

/// [`cmera_correlator`] for an arbitrary flow function.
pub fn cmera_correlator_with(
    geometry: &Geometry,
    alpha: &AlphaFn,
    observable: &Observable,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_pair(geometry, x, y)?;
    let l = alpha.lambda();
    match observable {
        Observable::PiPi => {
            let kernel = MomentumKernel::pi_pi(alpha);
            let direct = cosine_transform(&kernel, l * (x - y).abs(), spec)?;
            let w = geometry.image_coefficient(x, y);
            let image = if w == 0.0 {
                0.0
            } else {
                w * cosine_transform(&kernel, l * geometry.image_distance(x, y), spec)?
            };
            Ok(l * l * (direct + image))
        }
        Observable::PhiPhi => {
            // Only the combination C(x−y) − C(image) is IR-finite.
            let w = geometry.image_coefficient(x, y);
            if (1.0 + w).abs() > 1e-12 {
                return Err(Error::IrDivergent);
            }
            let kernel = MomentumKernel::phi_phi(alpha);
            cosine_difference(&kernel, l * (x - y).abs(), l * geometry.image_distance(x, y), spec)
        }
        Observable::PhiPhiDiff { x_ref } => {
            let x_ref = *x_ref;
            check_pair(geometry, x_ref, y)?;
            let w = geometry.image_coefficient(x, y);
            if w != geometry.image_coefficient(x_ref, y) {
                return Err(Error::domain(
                    "reference point must lie on the same side of the defect as x",
                ));
            }
            let kernel = MomentumKernel::phi_phi(alpha);
            let direct = cosine_difference(&kernel, l * (x - y).abs(), l * (x_ref - y).abs(), spec)?;
            let image = if w == 0.0 {
                0.0
            } else {
                let d1 = geometry.image_distance(x, y);
                let d2 = geometry.image_distance(x_ref, y);
                w * cosine_difference(&kernel, l * d1, l * d2, spec)?
            };
            Ok(direct + image)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorPoint {
    pub x: f64,
    pub y: f64,
    pub exact: f64,
    pub cmera: f64,
}

impl CorrelatorPoint {
    pub fn relative_error(&self) -> f64 {
        ((self.cmera - self.exact) / self.exact).abs()
    }
}

/// A sweep of exact and cMERA values at fixed `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorTable {
    pub geometry: Geometry,
    pub profile: Profile,
    pub observable: Observable,
    pub spec: QuadratureSpec,
    pub points: Vec<CorrelatorPoint>,
}

/// Evaluates both correlators at every `x` in `xs` against fixed `y`. Points
/// at the contact `x = y` or outside the geometry are skipped.
pub fn correlator_table(
    geometry: &Geometry,
    profile: &Profile,
    observable: &Observable,
    y: f64,
    xs: &[f64],
    spec: &QuadratureSpec,
) -> Result<CorrelatorTable> {
    geometry.validate()?;
    geometry.check_point(y)?;
    spec.validate()?;
    let alpha = AlphaFn::fixed_point(*profile);
    let contact = 1e-9 * profile.scale.uv_length();
    let keep: Vec<f64> = xs
        .iter()
        .copied()
        .filter(|&x| geometry.check_point(x).is_ok() && (x - y).abs() > contact)
        .filter(|&x| match observable {
            Observable::PhiPhiDiff { x_ref } => (x - x_ref).abs() > contact,
            _ => true,
        })
        .collect();
    let points = keep
        .par_iter()
        .map(|&x| {
            Ok(CorrelatorPoint {
                x,
                y,
                exact: exact_correlator(geometry, observable, x, y)?,
                cmera: cmera_correlator_with(geometry, &alpha, observable, x, y, spec)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelatorTable {
        geometry: *geometry,
        profile: *profile,
        observable: *observable,
        spec: *spec,
        points,
    })
}

/// Left/right derivative ratio of the φφ correlator across a defect.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub theta: f64,
    pub y: f64,
    pub expected: f64,
    pub exact_ratio: f64,
    pub cmera_ratio: Option<f64>,
}

/// Step used for the one-sided derivatives, in units of `1/Λ`.
pub const MATCHING_STEP: f64 = 1e-4;

/// Differentiates `⟨φ(x)φ(y)⟩` in `x` on both sides of the defect and returns
/// the ratio `∂φ(0⁻)/∂φ(0⁺)`, which must equal `tan θ`.
pub fn defect_matching_check(
    profile: Option<&Profile>,
    theta: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<MatchingReport> {
    let geometry = Geometry::defect(theta)?;
    geometry.check_point(y)?;
    if (2.0 * theta).cos() == -1.0 || (theta - FRAC_PI_2).abs() < 1e-12 {
        return Err(Error::domain("right-hand derivative vanishes at θ = π/2"));
    }
    let scale = profile.map(|p| p.scale.uv_length()).unwrap_or(1.0);
    let h = MATCHING_STEP * scale;

    let exact_diff = |a: f64, b: f64| -> Result<f64> {
        exact_correlator(&geometry, &Observable::PhiPhiDiff { x_ref: b }, a, y)
    };
    let exact_ratio = derivative_ratio(h, &exact_diff)?;
    let cmera_ratio = match profile {
        Some(p) => {
            let alpha = AlphaFn::fixed_point(*p);
            let diff = |a: f64, b: f64| -> Result<f64> {
                cmera_correlator_with(&geometry, &alpha, &Observable::PhiPhiDiff { x_ref: b }, a, y, spec)
            };
            Some(derivative_ratio(h, &diff)?)
        }
        None => None,
    };
    Ok(MatchingReport {
        theta,
        y,
        expected: theta.tan(),
        exact_ratio,
        cmera_ratio,
    })
}

/// One-sided derivatives at `0∓` from central differences at `∓2h` and `∓4h`,
/// extrapolated linearly to the origin.
fn derivative_ratio(h: f64, diff: &dyn Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    let side = |sign: f64| -> Result<f64> {
        let d = |c: f64, step: f64| -> Result<f64> { Ok(diff(sign * (c + step), sign * (c - step))? * sign / (2.0 * step)) };
        let d2 = d(2.0 * h, h)?;
        let d4 = d(4.0 * h, h)?;
        let d2_coarse = d(2.0 * h, 1.5 * h)?;
        let scale = d2.abs().max(f64::MIN_POSITIVE);
        if (d2 - d2_coarse).abs() > 1e-3 * scale {
            return Err(Error::StepSize(format!("central difference unstable: {d2} vs {d2_coarse}")));
        }
        Ok(2.0 * d2 - d4)
    };
    let left = side(-1.0)?;
    let right = side(1.0)?;
    if right == 0.0 {
        return Err(Error::StepSize("right-hand derivative vanishes".into()));
    }
    Ok(left / right)
}
