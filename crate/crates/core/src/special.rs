//! Exponential integral for negative arguments.
//!
//! `Ei(-x) = -E1(x)` for `x > 0`. E1 is summed from its power series for
//! `x <= 1` and from the continued fraction (modified Lentz) above that.
//! Both branches are accurate to a few ulp at the crossover.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the power series and the continued fraction for E1.
pub const E1_SERIES_CROSSOVER: f64 = 1.0;

/// Exponential integral `Ei(x)` for `x < 0`.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::domain(format!("Ei is only provided for x < 0, got {x}")));
    }
    Ok(-e1(-x))
}

/// `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`. Returns `+inf` at 0.
pub(crate) fn e1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= E1_SERIES_CROSSOVER {
        e1_series(x)
    } else {
        e1_continued_fraction(x)
    }
}

fn e1_series(x: f64) -> f64 {
    // E1(x) = -γ - ln x - Σ_{n≥1} (-x)^n / (n n!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..200 {
        let nf = n as f64;
        term *= -x / nf;
        let contrib = term / nf;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

fn e1_continued_fraction(x: f64) -> f64 {
    if x > 740.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}
