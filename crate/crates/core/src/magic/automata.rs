//! Finite-state automata generating the magic entangler on the full line,
//! the two half-lines and across a defect, with their continuum checks.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mpo::{mpo_path_product, FieldEntry, Field, MpoChain, MpoMatrix, PathKernel, ScalarMatrix, Species};
use crate::correlators::{validate_theta, CTheta};
use crate::error::{Error, Result};
use crate::profiles::Scale;
use crate::quadrature::integrate_adaptive;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Lattice spacings used for the convergence study, in units of `1/Λ`.
pub const CONVERGENCE_SPACINGS: [f64; 3] = [4e-3, 2e-3, 1e-3];

/// Which entangler an automaton is meant to generate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutomatonGeometry {
    FullLine,
    /// `x ≥ 0` with boundary weight `xi`.
    RightHalfLine { xi: f64 },
    /// `x ≤ 0` with boundary weight `xi`.
    LeftHalfLine { xi: f64 },
    Defect { theta: f64 },
}

impl AutomatonGeometry {
    /// Coefficient of `e^{-Λ(|x|+|y|)}` relative to the bulk term.
    pub fn image_coefficient(&self, x: f64, y: f64) -> f64 {
        match *self {
            AutomatonGeometry::FullLine => 0.0,
            AutomatonGeometry::RightHalfLine { xi } | AutomatonGeometry::LeftHalfLine { xi } => xi,
            AutomatonGeometry::Defect { theta } => CTheta::new(theta).evaluate(x, y),
        }
    }

    /// Target symmetrized ψψ kernel `(-iΛ/8)[e^{-Λ|x-y|} + c e^{-Λ(|x|+|y|)}]`.
    pub fn target_kernel(&self, scale: &Scale, x: f64, y: f64) -> Complex64 {
        let l = scale.lambda();
        let bulk = (-l * (x - y).abs()).exp();
        let image = self.image_coefficient(x, y) * (-l * (x.abs() + y.abs())).exp();
        -I * (l / 8.0) * (bulk + image)
    }
}

/// An operator chain with its boundary vectors.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub geometry: AutomatonGeometry,
    pub epsilon: f64,
    pub chain: MpoChain,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

impl Automaton {
    pub fn kernel(&self) -> Result<PathKernel> {
        mpo_path_product(&self.chain, &self.left, &self.right)
    }
}

fn basis(chi: usize, i: usize, c: f64) -> Vec<Complex64> {
    let mut v = vec![Complex64::default(); chi];
    v[i] = Complex64::from(c);
    v
}

/// Per-site weights for a given `Λε`.
struct Steps {
    decay: f64,
    decay2: f64,
    emit: f64,
    emit_image: f64,
    lambda: f64,
}

impl Steps {
    fn new(scale: &Scale, epsilon: f64) -> Self {
        let le = scale.lambda() * epsilon;
        Steps {
            decay: (-le).exp(),
            decay2: (-2.0 * le).exp(),
            emit: epsilon * (-0.5 * le).exp(),
            emit_image: epsilon * (-1.5 * le).exp(),
            lambda: scale.lambda(),
        }
    }

    fn e_psi(&self, w: f64) -> FieldEntry {
        FieldEntry::psi(-I * (self.lambda / 4.0) * w)
    }

    fn e_psi_dag(&self, w: f64) -> FieldEntry {
        FieldEntry::psi_dag(I * (self.lambda / 4.0) * w)
    }

    /// The χ = 4 bulk site; larger `chi` leaves the extra states untouched.
    fn bulk_site(&self, chi: usize, x: f64) -> MpoMatrix {
        let mut m = MpoMatrix::zeros(chi, x);
        m.set(0, 0, FieldEntry::identity(1.0));
        m.set(1, 1, FieldEntry::identity(self.decay));
        m.set(2, 2, FieldEntry::identity(self.decay));
        m.set(3, 3, FieldEntry::identity(1.0));
        m.set(0, 1, self.e_psi(self.emit));
        m.set(0, 2, self.e_psi_dag(self.emit));
        m.set(1, 3, FieldEntry::psi(Complex64::from(self.emit)));
        m.set(2, 3, FieldEntry::psi_dag(Complex64::from(self.emit)));
        m
    }

    fn right_site(&self, x: f64) -> MpoMatrix {
        let mut m = self.bulk_site(5, x);
        m.set(4, 4, FieldEntry::identity(self.decay2));
        m.set(4, 1, self.e_psi(self.emit_image));
        m.set(4, 2, self.e_psi_dag(self.emit_image));
        m
    }

    fn left_site(&self, x: f64) -> MpoMatrix {
        let mut m = self.bulk_site(5, x);
        m.set(4, 4, FieldEntry::identity(self.decay2));
        m.set(1, 4, FieldEntry::psi(Complex64::from(self.emit_image)));
        m.set(2, 4, FieldEntry::psi_dag(Complex64::from(self.emit_image)));
        m
    }
}

fn site_count(length: f64, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && length > 0.0 && epsilon.is_finite() && length.is_finite()) {
        return Err(Error::domain(format!("need positive spacing and length, got ε = {epsilon}, L = {length}")));
    }
    let n = (length / epsilon).round();
    if n < 2.0 || (n * epsilon - length).abs() > 1e-9 * length {
        return Err(Error::domain(format!("length {length} is not a multiple of spacing {epsilon}")));
    }
    Ok(n as usize)
}

/// Cell centres `(j - ½)ε`, `j = 1..n`, measured from `start`.
fn cells(start: f64, n: usize, epsilon: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| start + (j as f64 + 0.5) * epsilon)
}

/// Bulk automaton (bond dimension 4) on `[-half_width, half_width]`.
pub fn full_line_automaton(scale: &Scale, epsilon: f64, half_width: f64) -> Result<Automaton> {
    let n = site_count(2.0 * half_width, epsilon)?;
    let steps = Steps::new(scale, epsilon);
    let mut chain = MpoChain::new();
    for x in cells(-half_width, n, epsilon) {
        chain.push_site(steps.bulk_site(4, x));
    }
    Ok(Automaton {
        geometry: AutomatonGeometry::FullLine,
        epsilon,
        chain,
        left: basis(4, 0, 1.0),
        right: basis(4, 3, 1.0),
    })
}

fn right_chain(steps: &Steps, n: usize, epsilon: f64) -> MpoChain {
    let mut chain = MpoChain::new();
    for x in cells(0.0, n, epsilon) {
        chain.push_site(steps.right_site(x));
    }
    chain
}

fn left_chain(steps: &Steps, n: usize, epsilon: f64) -> MpoChain {
    let mut chain = MpoChain::new();
    for x in cells(-(n as f64) * epsilon, n, epsilon) {
        chain.push_site(steps.left_site(x));
    }
    chain
}

/// Half-line automaton on `[0, length]`, boundary weight entering through
/// the left vector `⟨1| + ξ⟨5|`.
pub fn right_half_line_automaton(scale: &Scale, epsilon: f64, length: f64, xi: f64) -> Result<Automaton> {
    let n = site_count(length, epsilon)?;
    let mut left = basis(5, 0, 1.0);
    left[4] = Complex64::from(xi);
    Ok(Automaton {
        geometry: AutomatonGeometry::RightHalfLine { xi },
        epsilon,
        chain: right_chain(&Steps::new(scale, epsilon), n, epsilon),
        left,
        right: basis(5, 3, 1.0),
    })
}

/// Half-line automaton on `[-length, 0]`, boundary weight entering through
/// the right vector `|4⟩ + ξ|5⟩`.
pub fn left_half_line_automaton(scale: &Scale, epsilon: f64, length: f64, xi: f64) -> Result<Automaton> {
    let n = site_count(length, epsilon)?;
    let mut right = basis(5, 3, 1.0);
    right[4] = Complex64::from(xi);
    Ok(Automaton {
        geometry: AutomatonGeometry::LeftHalfLine { xi },
        epsilon,
        chain: left_chain(&Steps::new(scale, epsilon), n, epsilon),
        left: basis(5, 0, 1.0),
        right,
    })
}

/// Scalar insertion at the defect.
pub fn defect_matrix(theta: f64) -> Result<ScalarMatrix> {
    validate_theta(theta)?;
    let (s, c) = (2.0 * theta).sin_cos();
    ScalarMatrix::from_real(&[
        vec![1.0, 0.0, 0.0, 0.0, -c],
        vec![0.0, s, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, s, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, c, 0.0],
    ])
}

/// Left automaton, defect insertion, right automaton on
/// `[-half_width, half_width]`.
pub fn defect_automaton(scale: &Scale, epsilon: f64, half_width: f64, theta: f64) -> Result<Automaton> {
    let n = site_count(half_width, epsilon)?;
    let steps = Steps::new(scale, epsilon);
    let mut chain = left_chain(&steps, n, epsilon);
    chain.push_insertion(defect_matrix(theta)?);
    chain.extend(right_chain(&steps, n, epsilon));
    Ok(Automaton {
        geometry: AutomatonGeometry::Defect { theta },
        epsilon,
        chain,
        left: basis(5, 0, 1.0),
        right: basis(5, 3, 1.0),
    })
}

/// Pointwise comparison of an accumulated kernel with its target entangler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub geometry: AutomatonGeometry,
    pub epsilon: f64,
    /// Max of `|K_sym − K_target|` over sampled pairs, in units of the bulk
    /// term `(Λ/8)e^{-Λ|x-y|}`.
    pub max_relative_deviation: f64,
    /// Largest `|W|/ε²` carried by the mixed species ψψ† and ψ†ψ.
    pub mixed_species_weight: f64,
    /// Largest deviation of the ψ†ψ† kernel from the conjugate of the ψψ one.
    pub conjugation_defect: f64,
    /// Total weight of single-field and field-free paths.
    pub spurious_weight: f64,
}

/// Rows sampled by the pointwise checks.
const SAMPLED_ROWS: usize = 64;

/// Compares the symmetrized ψψ kernel `W_mn / (2ε²)` with the target entangler
/// on every pair `(m, n)` with `m` on a regular subsample of rows.
pub fn kernel_to_entangler_check(kernel: &PathKernel, geometry: AutomatonGeometry, scale: &Scale) -> Result<KernelCheck> {
    let xs = kernel.positions();
    if xs.len() < 2 {
        return Err(Error::domain("kernel has fewer than two sites"));
    }
    let epsilon = xs[1] - xs[0];
    let l = scale.lambda();
    let stride = (xs.len() / SAMPLED_ROWS).max(1);
    let rows: Vec<usize> = (0..xs.len() - 1).step_by(stride).collect();
    let per_row: Vec<(f64, f64, f64)> = rows
        .par_iter()
        .map(|&m| -> Result<(f64, f64, f64)> {
            let pp = kernel.row(Species::PsiPsi, m)?;
            let dd = kernel.row(Species::PsiDagPsiDag, m)?;
            let pd = kernel.row(Species::PsiPsiDag, m)?;
            let dp = kernel.row(Species::PsiDagPsi, m)?;
            let (mut dev, mut mixed, mut conj) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..pp.len() {
                let n = pp[i].0;
                let (x, y) = (xs[m], xs[n]);
                let sym = pp[i].1 / (2.0 * epsilon * epsilon);
                let target = geometry.target_kernel(scale, x, y);
                let unit = (l / 8.0) * (-l * (y - x)).exp();
                dev = dev.max((sym - target).norm() / unit);
                mixed = mixed.max(pd[i].1.norm().max(dp[i].1.norm()) / (epsilon * epsilon));
                conj = conj.max((dd[i].1 - pp[i].1.conj()).norm() / (epsilon * epsilon));
            }
            Ok((dev, mixed, conj))
        })
        .collect::<Result<_>>()?;
    let fold = |f: fn(&(f64, f64, f64)) -> f64| per_row.iter().map(f).fold(0.0, f64::max);
    Ok(KernelCheck {
        geometry,
        epsilon,
        max_relative_deviation: fold(|r| r.0),
        mixed_species_weight: fold(|r| r.1),
        conjugation_defect: fold(|r| r.2),
        spurious_weight: kernel.scalar.norm() + kernel.linear_weight(Field::Psi) + kernel.linear_weight(Field::PsiDag),
    })
}

/// Gaussian test function used to smear kernels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: f64,
    pub width: f64,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.width;
        (-0.5 * u * u).exp()
    }
}

/// Domain covered by the chains used in the smeared comparison, in units of
/// `1/Λ`, and the test functions placed on it.
fn smearing_setup(geometry: AutomatonGeometry) -> ((f64, f64), TestFunction, TestFunction) {
    let tf = |c| TestFunction { center: c, width: 1.0 };
    match geometry {
        AutomatonGeometry::FullLine | AutomatonGeometry::Defect { .. } => ((-10.0, 10.0), tf(-1.0), tf(1.0)),
        AutomatonGeometry::RightHalfLine { .. } => ((0.0, 10.0), tf(1.5), tf(2.5)),
        AutomatonGeometry::LeftHalfLine { .. } => ((-10.0, 0.0), tf(-2.5), tf(-1.5)),
    }
}

/// Builds the automaton for `geometry` on its smearing domain.
pub fn build_automaton(geometry: AutomatonGeometry, scale: &Scale, epsilon: f64, extent: f64) -> Result<Automaton> {
    match geometry {
        AutomatonGeometry::FullLine => full_line_automaton(scale, epsilon, extent),
        AutomatonGeometry::RightHalfLine { xi } => right_half_line_automaton(scale, epsilon, extent, xi),
        AutomatonGeometry::LeftHalfLine { xi } => left_half_line_automaton(scale, epsilon, extent, xi),
        AutomatonGeometry::Defect { theta } => defect_automaton(scale, epsilon, extent, theta),
    }
}

/// `∫∫_{y<x} K(y, x) f(y) g(x)` over the domain, with `K` the ordered
/// (unsymmetrized) target kernel `2·K_sym`.
fn continuum_bilinear(geometry: AutomatonGeometry, scale: &Scale, (lo, hi): (f64, f64), f: TestFunction, g: TestFunction) -> Complex64 {
    let tol = 1e-15;
    let breaks = |a: f64, b: f64| -> Vec<f64> {
        let mut v = vec![a];
        if a < 0.0 && b > 0.0 {
            v.push(0.0);
        }
        v.push(b);
        v
    };
    let piecewise = |h: &dyn Fn(f64) -> Complex64, a: f64, b: f64| -> Complex64 {
        breaks(a, b)
            .windows(2)
            .map(|w| integrate_adaptive(&|t| h(t), w[0], w[1], tol).value)
            .sum()
    };
    let outer = |x: f64| -> Complex64 {
        if x <= lo {
            return Complex64::default();
        }
        let inner = piecewise(&|y: f64| 2.0 * geometry.target_kernel(scale, y, x) * f.eval(y), lo, x);
        inner * g.eval(x)
    };
    piecewise(&outer, lo, hi)
}

/// Smeared comparison at one spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmearedPoint {
    pub epsilon: f64,
    pub discrete: Complex64,
    pub continuum: Complex64,
    pub relative_error: f64,
}

/// Smeared ψψ form `Σ_{m<n} W_mn f(x_m) g(x_n)` against its continuum value.
pub fn smeared_kernel_error(geometry: AutomatonGeometry, scale: &Scale, epsilon: f64) -> Result<SmearedPoint> {
    let l = scale.lambda();
    let ((lo, hi), f, g) = smearing_setup(geometry);
    let extent = match geometry {
        AutomatonGeometry::FullLine | AutomatonGeometry::Defect { .. } => hi,
        _ => hi - lo,
    };
    let automaton = build_automaton(geometry, scale, epsilon / l, extent / l)?;
    let kernel = automaton.kernel()?;
    let discrete = kernel.bilinear(Species::PsiPsi, |x| f.eval(x * l), |x| g.eval(x * l));
    let continuum = continuum_bilinear(geometry, &Scale::unit(), (lo, hi), f, g) / (l * l);
    // The discrete form carries physical ε² while the unit-scale integral
    // carries 1/Λ² from the measure and Λ from the kernel prefactor.
    let continuum = continuum * l;
    Ok(SmearedPoint {
        epsilon: epsilon / l,
        discrete,
        continuum,
        relative_error: (discrete - continuum).norm() / continuum.norm(),
    })
}

/// Convergence of the smeared kernel over a sequence of spacings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub geometry: AutomatonGeometry,
    pub points: Vec<SmearedPoint>,
    /// Least-squares slope of `ln error` against `ln ε`.
    pub convergence_order: f64,
    /// `log₂` of successive differences of the discrete values alone.
    pub richardson_order: f64,
}

impl ConvergenceStudy {
    pub fn final_error(&self) -> f64 {
        self.points.last().map(|p| p.relative_error).unwrap_or(f64::NAN)
    }
}

/// Runs [`smeared_kernel_error`] at each spacing (in units of `1/Λ`).
pub fn convergence_study(geometry: AutomatonGeometry, scale: &Scale, spacings: &[f64]) -> Result<ConvergenceStudy> {
    if spacings.len() < 2 {
        return Err(Error::domain("need at least two spacings"));
    }
    let points: Vec<SmearedPoint> = spacings
        .par_iter()
        .map(|&e| smeared_kernel_error(geometry, scale, e))
        .collect::<Result<_>>()?;
    let lx: Vec<f64> = spacings.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.relative_error.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let richardson_order = if points.len() >= 3 {
        let k = points.len();
        let d1 = (points[k - 3].discrete - points[k - 2].discrete).norm();
        let d2 = (points[k - 2].discrete - points[k - 1].discrete).norm();
        let ratio = spacings[k - 3] / spacings[k - 2];
        (d1 / d2).ln() / ratio.ln()
    } else {
        f64::NAN
    };
    Ok(ConvergenceStudy {
        geometry,
        points,
        convergence_order: sxy / sxx,
        richardson_order,
    })
}

/// Outcome of splitting a totally reflecting defect chain into two half-lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub theta: f64,
    pub epsilon: f64,
    pub xi_left: f64,
    pub xi_right: f64,
    /// `‖D − (|4⟩+ξ_L|5⟩)⟨4| − |1⟩(⟨1|+ξ_R⟨5|)‖_max`.
    pub insertion_residual: f64,
    /// Largest `|W|/ε²` between a left and a right site, any species.
    pub cross_weight: f64,
    /// Largest `|W_defect − W_half|/ε²` on the left and right blocks.
    pub left_deviation: f64,
    pub right_deviation: f64,
    pub factorization_ok: bool,
}

/// Threshold on cross-side weight and block deviations.
pub const FACTORIZATION_TOLERANCE: f64 = 1e-12;

/// Checks that the defect chain at a totally reflecting angle decouples into
/// the two half-line automata.
pub fn cmpo_defect_factorization_check(scale: &Scale, theta: f64, epsilon: f64, half_width: f64) -> Result<FactorizationReport> {
    validate_theta(theta)?;
    let c = (2.0 * theta).cos();
    if (c.abs() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("θ = {theta} is not totally reflecting")));
    }
    let d = defect_matrix(theta)?;
    let (xi_left, xi_right) = (d.get(4, 3).re, d.get(0, 4).re);
    let mut residual = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let left_part = if j == 3 { [0.0, 0.0, 0.0, 1.0, xi_left][i] } else { 0.0 };
            let right_part = if i == 0 { [1.0, 0.0, 0.0, 0.0, xi_right][j] } else { 0.0 };
            residual = residual.max((d.get(i, j) - (left_part + right_part)).norm());
        }
    }

    let def = defect_automaton(scale, epsilon, half_width, theta)?.kernel()?;
    let left = left_half_line_automaton(scale, epsilon, half_width, xi_left)?.kernel()?;
    let right = right_half_line_automaton(scale, epsilon, half_width, xi_right)?.kernel()?;
    let n = left.n_sites();
    let e2 = epsilon * epsilon;
    let rows: Vec<(f64, f64, f64)> = (0..2 * n - 1)
        .into_par_iter()
        .map(|m| -> Result<(f64, f64, f64)> {
            let (mut cross, mut dl, mut dr) = (0.0f64, 0.0f64, 0.0f64);
            for sp in Species::ALL {
                let row = def.row(sp, m)?;
                if m < n {
                    let half = left.row(sp, m)?;
                    for (k, &(nn, w)) in row.iter().enumerate() {
                        if nn < n {
                            dl = dl.max((w - half[k].1).norm() / e2);
                        } else {
                            cross = cross.max(w.norm() / e2);
                        }
                    }
                } else {
                    let half = right.row(sp, m - n)?;
                    for (k, &(_, w)) in row.iter().enumerate() {
                        dr = dr.max((w - half[k].1).norm() / e2);
                    }
                }
            }
            Ok((cross, dl, dr))
        })
        .collect::<Result<_>>()?;
    let fold = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let (cross_weight, left_deviation, right_deviation) = (fold(|r| r.0), fold(|r| r.1), fold(|r| r.2));
    let scale_ref = scale.lambda() / 4.0;
    let tol = FACTORIZATION_TOLERANCE * scale_ref;
    Ok(FactorizationReport {
        theta,
        epsilon,
        xi_left,
        xi_right,
        insertion_residual: residual,
        cross_weight,
        left_deviation,
        right_deviation,
        factorization_ok: residual <= FACTORIZATION_TOLERANCE && cross_weight <= tol && left_deviation <= tol && right_deviation <= tol,
    })
}

/// Maximal `|W_defect − W_bulk|/ε²` between the defect chain and the bulk
/// automaton on the same sites.
pub fn defect_bulk_deviation(scale: &Scale, theta: f64, epsilon: f64, half_width: f64) -> Result<f64> {
    let def = defect_automaton(scale, epsilon, half_width, theta)?.kernel()?;
    let bulk = full_line_automaton(scale, epsilon, half_width)?.kernel()?;
    let n = bulk.n_sites();
    let stride = (n / SAMPLED_ROWS).max(1);
    let rows: Vec<usize> = (0..n - 1).step_by(stride).collect();
    let devs: Vec<f64> = rows
        .par_iter()
        .map(|&m| -> Result<f64> {
            let mut d = 0.0f64;
            for sp in Species::ALL {
                for (a, b) in def.row(sp, m)?.iter().zip(bulk.row(sp, m)?) {
                    d = d.max((a.1 - b.1).norm());
                }
            }
            Ok(d / (epsilon * epsilon))
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// Summary record for one automaton check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpoReport {
    pub epsilon: f64,
    pub kernel_error: f64,
    pub convergence_order: Option<f64>,
    pub theta: Option<f64>,
    pub factorization_ok: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn unit() -> Scale {
        Scale::unit()
    }

    #[test]
    fn bond_dimensions() {
        let s = unit();
        assert_eq!(full_line_automaton(&s, 0.1, 1.0).unwrap().left.len(), 4);
        assert_eq!(right_half_line_automaton(&s, 0.1, 1.0, 1.0).unwrap().left.len(), 5);
        assert_eq!(left_half_line_automaton(&s, 0.1, 1.0, 1.0).unwrap().right.len(), 5);
        assert_eq!(defect_matrix(0.3).unwrap().chi(), 5);
        assert!(full_line_automaton(&s, 0.3, 1.0).is_err());
        assert!(defect_matrix(2.0).is_err());
    }

    #[test]
    fn bulk_kernel_matches_entangler() {
        let s = unit();
        let k = full_line_automaton(&s, 1e-2, 10.0).unwrap().kernel().unwrap();
        let r = kernel_to_entangler_check(&k, AutomatonGeometry::FullLine, &s).unwrap();
        assert!(r.max_relative_deviation < 1e-11, "{r:?}");
        assert_eq!(r.mixed_species_weight, 0.0);
        assert!(r.conjugation_defect < 1e-12);
        assert_eq!(r.spurious_weight, 0.0);
    }

    #[test]
    fn bulk_kernel_single_pair() {
        let s = Scale::new(2.0).unwrap();
        let eps = 0.01;
        let k = full_line_automaton(&s, eps, 1.0).unwrap().kernel().unwrap();
        let xs = k.positions();
        let w = k.weight(Species::PsiPsi, 10, 60).unwrap() / (eps * eps);
        let expected = -I * (2.0 / 4.0) * (-2.0 * (xs[60] - xs[10])).exp();
        assert!((w - expected).norm() < 1e-13 * expected.norm());
    }

    #[test]
    fn half_line_kernels_carry_image_terms() {
        let s = unit();
        for xi in [1.0, -1.0] {
            let r = right_half_line_automaton(&s, 1e-2, 5.0, xi).unwrap().kernel().unwrap();
            let c = kernel_to_entangler_check(&r, AutomatonGeometry::RightHalfLine { xi }, &s).unwrap();
            assert!(c.max_relative_deviation < 1e-11, "{c:?}");
            let l = left_half_line_automaton(&s, 1e-2, 5.0, xi).unwrap().kernel().unwrap();
            let c = kernel_to_entangler_check(&l, AutomatonGeometry::LeftHalfLine { xi }, &s).unwrap();
            assert!(c.max_relative_deviation < 1e-11, "{c:?}");
        }
        // Relative weight of the image piece at a pair of points.
        let eps = 0.01;
        let k = right_half_line_automaton(&s, eps, 5.0, 1.0).unwrap().kernel().unwrap();
        let xs = k.positions();
        let (m, n) = (20, 70);
        let w = k.weight(Species::PsiPsi, m, n).unwrap() / (eps * eps) / (-I * 0.25);
        let bulk = (-(xs[n] - xs[m])).exp();
        let image = (-(xs[n] + xs[m])).exp();
        assert!(((w.re - bulk) / image - 1.0).abs() < 1e-10);
        let d = right_half_line_automaton(&s, eps, 5.0, -1.0).unwrap().kernel().unwrap();
        let wd = d.weight(Species::PsiPsi, m, n).unwrap() / (eps * eps) / (-I * 0.25);
        assert!(((wd.re - bulk) / image + 1.0).abs() < 1e-10);
    }

    #[test]
    fn defect_kernel_matches_entangler() {
        let s = unit();
        for theta in [-0.4, 0.2, 0.9, 1.3] {
            let k = defect_automaton(&s, 2e-2, 6.0, theta).unwrap().kernel().unwrap();
            let r = kernel_to_entangler_check(&k, AutomatonGeometry::Defect { theta }, &s).unwrap();
            assert!(r.max_relative_deviation < 1e-11, "θ = {theta}: {r:?}");
            assert_eq!(r.mixed_species_weight, 0.0);
        }
    }

    #[test]
    fn transparent_defect_is_bulk() {
        let d = defect_bulk_deviation(&unit(), FRAC_PI_4, 1e-2, 5.0).unwrap();
        assert!(d < 1e-14, "{d}");
        assert!(defect_bulk_deviation(&unit(), 0.3, 1e-2, 5.0).unwrap() > 1e-3);
    }

    #[test]
    fn reflecting_defects_factorize() {
        let s = unit();
        let r0 = cmpo_defect_factorization_check(&s, 0.0, 2e-2, 4.0).unwrap();
        assert_eq!((r0.xi_left, r0.xi_right), (1.0, -1.0));
        assert!(r0.factorization_ok, "{r0:?}");
        let r1 = cmpo_defect_factorization_check(&s, std::f64::consts::FRAC_PI_2, 2e-2, 4.0).unwrap();
        assert_eq!((r1.xi_left, r1.xi_right), (-1.0, 1.0));
        assert!(r1.factorization_ok, "{r1:?}");
        assert!(cmpo_defect_factorization_check(&s, 0.3, 2e-2, 4.0).is_err());
    }

    #[test]
    fn continuum_bilinear_oracle() {
        // Full-line form by a plain midpoint double sum on a fine grid.
        let geometry = AutomatonGeometry::FullLine;
        let ((lo, hi), f, g) = smearing_setup(geometry);
        let q = continuum_bilinear(geometry, &unit(), (lo, hi), f, g);
        let n = 4000;
        let h = (hi - lo) / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
        let mut acc = 0.0;
        for (j, &x) in xs.iter().enumerate() {
            for &y in &xs[..j] {
                acc += 0.25 * (-(x - y)).exp() * f.eval(y) * g.eval(x);
            }
            acc += 0.5 * 0.25 * f.eval(x) * g.eval(x);
        }
        let oracle = -I * acc * h * h;
        assert!((q - oracle).norm() < 1e-6 * q.norm(), "{q} vs {oracle}");
    }

    #[test]
    fn smeared_error_is_first_order() {
        let s = unit();
        let st = convergence_study(AutomatonGeometry::FullLine, &s, &[4e-2, 2e-2, 1e-2]).unwrap();
        assert!((st.convergence_order - 1.0).abs() < 0.05, "{st:?}");
        assert!((st.richardson_order - 1.0).abs() < 0.05, "{st:?}");
        assert!(st.final_error() < 1e-1);
    }

    #[test]
    fn smeared_error_is_scale_covariant() {
        let a = smeared_kernel_error(AutomatonGeometry::RightHalfLine { xi: -1.0 }, &unit(), 2e-2).unwrap();
        let b = smeared_kernel_error(AutomatonGeometry::RightHalfLine { xi: -1.0 }, &Scale::new(3.0).unwrap(), 2e-2).unwrap();
        assert!((a.relative_error - b.relative_error).abs() < 1e-9);
    }
}
