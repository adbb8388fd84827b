//! Structure specific to the exponential profile: parent dispersion,
//! occupation numbers, and the operator-valued automata for the entangler.

pub mod automata;
pub mod mpo;

use crate::profiles::Scale;

/// IR mass `m(s) = Λ e^{-s}`.
pub fn mass(scale: &Scale, s: f64) -> f64 {
    scale.lambda() * (-s).exp()
}

/// Flow time at which the IR mass equals `m`.
pub fn flow_time_for_mass(scale: &Scale, m: f64) -> f64 {
    (scale.lambda() / m).ln()
}

/// `α(k, s) = Λ √(k² + m²) / √(k² + Λ²)` for the magic profile.
pub fn alpha(scale: &Scale, k: f64, s: f64) -> f64 {
    let l = scale.lambda();
    l * unit_alpha(k / l, s)
}

pub(crate) fn unit_alpha(k: f64, s: f64) -> f64 {
    let m = (-s).exp();
    ((k * k + m * m) / (k * k + 1.0)).sqrt()
}

/// Dispersion `ε(k, s) = √(k² + m²) √(k² + Λ²) / Λ` of the parent Hamiltonian.
pub fn dispersion(scale: &Scale, k: f64, s: f64) -> f64 {
    let l = scale.lambda();
    let m = mass(scale, s);
    (k * k + m * m).sqrt() * (k * k + l * l).sqrt() / l
}

/// Occupation `n(k, s) = ¼(α/Λ + Λ/α − 2)` of the initial-state modes.
pub fn occupation_number(scale: &Scale, k: f64, s: f64) -> f64 {
    let r = unit_alpha(k / scale.lambda(), s);
    // Equal to ¼(r + 1/r − 2), written without cancellation.
    (r - 1.0) * (r - 1.0) / (4.0 * r)
}
