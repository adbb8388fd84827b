//! Entangler profiles: the position kernel `g(x)` and its Fourier transform
//! `g(k) = ∫ dx e^{-ikx} g(x)`.
//!
//! Both profiles are stored against a [`Scale`]; internally everything is
//! evaluated in units where `Λ = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::EULER_GAMMA;

/// The UV cutoff momentum `Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    lambda: f64,
}

impl Scale {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Scale { lambda })
        } else {
            Err(Error::domain(format!("cutoff scale must be positive, got {lambda}")))
        }
    }

    /// `Λ = 1`.
    pub const fn unit() -> Self {
        Scale { lambda: 1.0 }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The quasilocality length `1/Λ`.
    pub fn uv_length(&self) -> f64 {
        1.0 / self.lambda
    }
}

impl Default for Scale {
    fn default() -> Self {
        Scale::unit()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// Gaussian profile, `g(k) = ½ exp(-k²/(σΛ²))` with `σ = e^γ`.
    Gaussian,
    /// Exponential profile, `g(x) = (Λ/4) e^{-Λ|x|}`.
    Magic,
}

impl std::fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProfileKind::Gaussian => f.write_str("gaussian"),
            ProfileKind::Magic => f.write_str("magic"),
        }
    }
}

impl std::str::FromStr for ProfileKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ProfileKind::Gaussian),
            "magic" => Ok(ProfileKind::Magic),
            other => Err(Error::domain(format!("unknown profile '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub scale: Scale,
}

/// Width parameter of the gaussian profile, `e^γ`.
pub fn gaussian_sigma() -> f64 {
    EULER_GAMMA.exp()
}

impl Profile {
    pub fn new(kind: ProfileKind, scale: Scale) -> Self {
        Profile { kind, scale }
    }

    pub fn gaussian(scale: Scale) -> Self {
        Profile::new(ProfileKind::Gaussian, scale)
    }

    pub fn magic(scale: Scale) -> Self {
        Profile::new(ProfileKind::Magic, scale)
    }

    pub fn lambda(&self) -> f64 {
        self.scale.lambda()
    }

    /// `σ`, only meaningful for the gaussian kind.
    pub fn sigma(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Gaussian => Some(gaussian_sigma()),
            ProfileKind::Magic => None,
        }
    }

    /// Same profile at `Λ = 1`.
    pub fn unit(&self) -> Self {
        Profile::new(self.kind, Scale::unit())
    }

    /// Position kernel `g(x)`.
    pub fn g_position(&self, x: f64) -> f64 {
        let l = self.lambda();
        l * unit_g_position(self.kind, l * x)
    }

    /// Momentum kernel `g(k)`.
    pub fn g_momentum(&self, k: f64) -> f64 {
        unit_g_momentum(self.kind, k / self.lambda())
    }
}

pub fn g_position(profile: &Profile, x: f64) -> f64 {
    profile.g_position(x)
}

pub fn g_momentum(profile: &Profile, k: f64) -> f64 {
    profile.g_momentum(k)
}

/// `g(x)` at `Λ = 1`.
pub(crate) fn unit_g_position(kind: ProfileKind, x: f64) -> f64 {
    match kind {
        ProfileKind::Gaussian => {
            let sigma = gaussian_sigma();
            // Normalised so that its transform is exactly ½ exp(-k²/σ).
            sigma.sqrt() / (4.0 * std::f64::consts::PI.sqrt()) * (-sigma * x * x / 4.0).exp()
        }
        ProfileKind::Magic => 0.25 * (-x.abs()).exp(),
    }
}

/// `g(k)` at `Λ = 1`.
pub(crate) fn unit_g_momentum(kind: ProfileKind, k: f64) -> f64 {
    match kind {
        ProfileKind::Gaussian => 0.5 * (-k * k / gaussian_sigma()).exp(),
        ProfileKind::Magic => 0.5 / (k * k + 1.0),
    }
}
