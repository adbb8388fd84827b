//! Position-space entangler kernels and the locality of the boundary and
//! defect modifications.

use serde::{Deserialize, Serialize};

use crate::correlators::{CTheta, Geometry};
use crate::error::{Error, Result};
use crate::profiles::{gaussian_sigma, Profile, ProfileKind};

/// Coefficient of `φ(x)π(y) + h.c.` in the entangler for one geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelFn {
    pub geometry: Geometry,
    pub profile: Profile,
}

impl KernelFn {
    pub fn new(geometry: Geometry, profile: Profile) -> Result<Self> {
        geometry.validate()?;
        Ok(KernelFn { geometry, profile })
    }

    /// Bulk part `g(x − y)`.
    pub fn bulk(&self, x: f64, y: f64) -> f64 {
        self.profile.g_position(x - y)
    }

    /// Boundary or defect modification; zero on the full line.
    pub fn modification(&self, x: f64, y: f64) -> Result<f64> {
        self.check(x, y)?;
        Ok(match self.geometry {
            Geometry::FullLine => 0.0,
            Geometry::Boundary { condition } => condition.xi() * self.profile.g_position(x + y),
            Geometry::Defect { theta } => {
                CTheta::new(theta).evaluate(x, y) * self.profile.g_position(x.abs() + y.abs())
            }
        })
    }

    fn check(&self, x: f64, y: f64) -> Result<()> {
        match self.geometry {
            Geometry::Boundary { .. } if !(x > 0.0 && y > 0.0) => {
                Err(Error::domain("boundary kernel lives on x, y > 0"))
            }
            _ if !(x.is_finite() && y.is_finite()) => Err(Error::domain("coordinates must be finite")),
            _ => Ok(()),
        }
    }

    /// Largest `|c|` multiplying the modification over all quadrants.
    pub fn max_image_coefficient(&self) -> f64 {
        match self.geometry {
            Geometry::FullLine => 0.0,
            Geometry::Boundary { .. } => 1.0,
            Geometry::Defect { theta } => {
                let (s, c) = (2.0 * theta).sin_cos();
                c.abs().max((s - 1.0).abs())
            }
        }
    }
}

/// Full kernel value.
pub fn kernel_value(kernel: &KernelFn, x: f64, y: f64) -> Result<f64> {
    Ok(kernel.bulk(x, y) + kernel.modification(x, y)?)
}

/// Closed-form decay law of the modification: `(Λ/4) max|c| e^{-2Λd}` for the
/// exponential profile and `(√σ Λ/(4√π)) max|c| e^{-σΛ²d²}` for the gaussian.
pub fn envelope_law(kernel: &KernelFn, d: f64) -> f64 {
    let l = kernel.profile.lambda();
    let c = kernel.max_image_coefficient();
    match kernel.profile.kind {
        ProfileKind::Magic => 0.25 * l * c * (-2.0 * l * d).exp(),
        ProfileKind::Gaussian => {
            let sigma = gaussian_sigma();
            sigma.sqrt() * l / (4.0 * std::f64::consts::PI.sqrt()) * c * (-sigma * l * l * d * d).exp()
        }
    }
}

/// `sup |modification(x, y)|` over `|x|, |y| ≥ d`, searched on a grid of
/// `n × n` points per quadrant spanning `[d, d + 12/Λ]`, corner included.
pub fn minimal_update_envelope(kernel: &KernelFn, d: f64, n: usize) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("envelope distance must be positive"));
    }
    if n < 2 {
        return Err(Error::domain("grid needs at least two points per axis"));
    }
    let span = 12.0 * kernel.profile.scale.uv_length();
    let axis: Vec<f64> = (0..n).map(|i| d + span * i as f64 / (n - 1) as f64).collect();
    let signs: &[(f64, f64)] = match kernel.geometry {
        Geometry::Defect { .. } => &[(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)],
        _ => &[(1.0, 1.0)],
    };
    let mut sup: f64 = 0.0;
    for &(sx, sy) in signs {
        for &x in &axis {
            for &y in &axis {
                sup = sup.max(kernel.modification(sx * x, sy * y)?.abs());
            }
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::BoundaryCondition;
    use crate::profiles::Scale;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn profiles() -> [Profile; 2] {
        [Profile::gaussian(Scale::unit()), Profile::magic(Scale::new(1.7).unwrap())]
    }

    #[test]
    fn point_values() {
        let m = Profile::magic(Scale::unit());
        let k = KernelFn::new(Geometry::boundary(BoundaryCondition::Neumann), m).unwrap();
        let v = kernel_value(&k, 1.0, 1.0).unwrap();
        assert!((v - 0.25 * (1.0 + (-2.0f64).exp())).abs() < 1e-15);
        assert!((v - 0.283_83).abs() < 1e-5);
        assert!(kernel_value(&k, -1.0, 1.0).is_err());
    }

    #[test]
    fn trivial_defect_is_bulk() {
        for p in profiles() {
            let k = KernelFn::new(Geometry::defect(FRAC_PI_4).unwrap(), p).unwrap();
            for &(x, y) in &[(-1.0, 2.0), (0.5, 0.7), (-3.0, -0.2)] {
                assert!((kernel_value(&k, x, y).unwrap() - p.g_position(x - y)).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn reflective_defect_splits_into_boundaries() {
        for p in profiles() {
            for theta in [0.0, FRAC_PI_2] {
                let k = KernelFn::new(Geometry::defect(theta).unwrap(), p).unwrap();
                // Opposite sides: bulk and modification cancel.
                for &(x, y) in &[(-1.0, 2.0), (0.3, -0.1)] {
                    assert!(kernel_value(&k, x, y).unwrap().abs() < 1e-16);
                }
                // Right side: ξ = −cos 2θ.
                let xi_r = -(2.0 * theta).cos();
                let right = KernelFn::new(
                    Geometry::boundary(BoundaryCondition::from_xi(xi_r.round()).unwrap()),
                    p,
                )
                .unwrap();
                let (x, y) = (0.4, 1.3);
                let a = kernel_value(&k, x, y).unwrap();
                let b = kernel_value(&right, x, y).unwrap();
                assert!((a - b).abs() < 1e-16);
                // Left side mirrors with ξ = cos 2θ.
                let left = KernelFn::new(
                    Geometry::boundary(BoundaryCondition::from_xi((-xi_r).round()).unwrap()),
                    p,
                )
                .unwrap();
                let a = kernel_value(&k, -x, -y).unwrap();
                let b = kernel_value(&left, x, y).unwrap();
                assert!((a - b).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn envelope_matches_law() {
        let geoms = [
            Geometry::boundary(BoundaryCondition::Dirichlet),
            Geometry::boundary(BoundaryCondition::Neumann),
            Geometry::defect(3.0 * PI / 8.0).unwrap(),
            Geometry::defect(-0.4).unwrap(),
        ];
        for p in profiles() {
            for g in geoms {
                let k = KernelFn::new(g, p).unwrap();
                for &d in &[0.5, 1.0, 2.0, 5.0] {
                    let num = minimal_update_envelope(&k, d, 60).unwrap();
                    let law = envelope_law(&k, d);
                    assert!((num - law).abs() <= 1e-10, "{:?} {g:?} d={d}: {num} vs {law}", p.kind);
                }
            }
        }
    }

    #[test]
    fn magic_boundary_value_at_five() {
        let k = KernelFn::new(Geometry::boundary(BoundaryCondition::Dirichlet), Profile::magic(Scale::unit())).unwrap();
        let v = envelope_law(&k, 5.0);
        assert!((v - 0.25 * (-10.0f64).exp()).abs() < 1e-18);
        assert!((v - 1.135e-5).abs() < 1e-8);
    }

    #[test]
    fn envelope_decays_and_is_local() {
        for p in profiles() {
            let k = KernelFn::new(Geometry::defect(0.2).unwrap(), p).unwrap();
            let l = p.lambda();
            let mut prev = f64::INFINITY;
            for i in 1..40 {
                let d = 0.25 * i as f64 / l;
                let e = minimal_update_envelope(&k, d, 20).unwrap();
                assert!(e < prev);
                prev = e;
            }
            let e1 = envelope_law(&k, 1.0 / l);
            let e8 = envelope_law(&k, 8.0 / l);
            assert!(e8 <= 1e-6 * e1);
        }
        let g = KernelFn::new(Geometry::defect(0.2).unwrap(), profiles()[0]).unwrap();
        let sigma = gaussian_sigma();
        let r = envelope_law(&g, 4.0) / envelope_law(&g, 2.0);
        assert!((r / (-sigma * 12.0).exp() - 1.0).abs() < 1e-12);
    }
}
