//! Exact Gaussian ground state of the discretized magic parent Hamiltonian
//! `½ Σ (πᵀAπ + φᵀBφ)`, by dense symmetric eigendecomposition.

use faer::{Col, Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::Scale;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeBoundary {
    Periodic,
    /// Sites at `ja`, `j = 1..n`, with `φ` pinned to zero at `0` and `(n+1)a`.
    Dirichlet,
    /// Sites at `(j − ½)a` with mirrored stencils at both ends.
    Neumann,
}

/// Quadratic forms of a lattice Hamiltonian. Lattice fields are `φ_j = φ(x_j)`
/// and `π_j = a π(x_j)`, so the forms already carry the `1/a` weights.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub boundary: LatticeBoundary,
    pub spacing: f64,
    pub a_form: Mat<f64>,
    pub b_form: Mat<f64>,
}

/// Positive graph Laplacian (stencil `2, −1, −1`) for the given boundary.
pub fn laplacian(n: usize, boundary: LatticeBoundary) -> Mat<f64> {
    let mut l = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        l[(j, j)] = 2.0;
        if j + 1 < n {
            l[(j, j + 1)] = -1.0;
            l[(j + 1, j)] = -1.0;
        }
    }
    match boundary {
        LatticeBoundary::Periodic if n > 2 => {
            l[(0, n - 1)] -= 1.0;
            l[(n - 1, 0)] -= 1.0;
        }
        LatticeBoundary::Periodic => {}
        LatticeBoundary::Dirichlet => {}
        LatticeBoundary::Neumann => {
            l[(0, 0)] = 1.0;
            l[(n - 1, n - 1)] = 1.0;
        }
    }
    l
}

impl LatticeModel {
    /// `A = 𝟙 + L/(Λa)²`, `B = L/a² + m²𝟙`.
    pub fn magic(scale: &Scale, mass: f64, n_sites: usize, spacing: f64, boundary: LatticeBoundary) -> Result<Self> {
        if n_sites == 0 || !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::domain(format!("need n > 0 and a > 0, got n = {n_sites}, a = {spacing}")));
        }
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::domain(format!("mass must be nonnegative, got {mass}")));
        }
        let l = laplacian(n_sites, boundary);
        let la = scale.lambda() * spacing;
        let a_form = Mat::from_fn(n_sites, n_sites, |i, j| (i == j) as u8 as f64 + l[(i, j)] / (la * la));
        let b_form = Mat::from_fn(n_sites, n_sites, |i, j| {
            l[(i, j)] / (spacing * spacing) + if i == j { mass * mass } else { 0.0 }
        });
        Ok(LatticeModel {
            boundary,
            spacing,
            a_form,
            b_form,
        })
    }

    /// Model from explicit forms, which must be square, equal-sized and symmetric.
    pub fn from_forms(a_form: Mat<f64>, b_form: Mat<f64>, spacing: f64, boundary: LatticeBoundary) -> Result<Self> {
        let n = a_form.nrows();
        for m in [&a_form, &b_form] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if m.nrows() != n { m.nrows() } else { m.ncols() },
                });
            }
            for i in 0..n {
                for j in 0..i {
                    if (m[(i, j)] - m[(j, i)]).abs() > 1e-14 * (m[(i, j)].abs() + m[(j, i)].abs()).max(1.0) {
                        return Err(Error::domain(format!("form is not symmetric at ({i}, {j})")));
                    }
                }
            }
        }
        Ok(LatticeModel {
            boundary,
            spacing,
            a_form,
            b_form,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.a_form.nrows()
    }

    /// Physical position of site `j` (0-based).
    pub fn position(&self, j: usize) -> f64 {
        let a = self.spacing;
        match self.boundary {
            LatticeBoundary::Periodic => j as f64 * a,
            LatticeBoundary::Dirichlet => (j + 1) as f64 * a,
            LatticeBoundary::Neumann => (j as f64 + 0.5) * a,
        }
    }

    /// Site nearest to position `x`.
    pub fn site_near(&self, x: f64) -> usize {
        let a = self.spacing;
        let j = match self.boundary {
            LatticeBoundary::Periodic => x / a,
            LatticeBoundary::Dirichlet => x / a - 1.0,
            LatticeBoundary::Neumann => x / a - 0.5,
        };
        (j.round().max(0.0) as usize).min(self.n_sites() - 1)
    }
}

/// Spectral data of the ground state. With `A = U diag(a) Uᵀ`, the matrix
/// `M = A^{1/2} B A^{1/2}` is diagonalized in the eigenbasis of `A`, where it
/// reads `diag(√a) UᵀBU diag(√a) = V diag(μ) Vᵀ`.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub spacing: f64,
    a_vectors: Mat<f64>,
    a_values: Vec<f64>,
    m_vectors: Mat<f64>,
    m_values: Vec<f64>,
}

fn eigen(m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values: Vec<f64> = (0..m.nrows()).map(|i| s[i]).collect();
    Ok((values, evd.U().to_owned()))
}

/// `U diag(f(λ)) Uᵀ`.
fn spectral_function(values: &[f64], vectors: &Mat<f64>, f: impl Fn(f64) -> f64) -> Mat<f64> {
    let n = values.len();
    let scaled = Mat::from_fn(n, n, |i, j| vectors[(i, j)] * f(values[j]));
    &scaled * vectors.transpose()
}

/// `B U` using only the nonzero entries of `B`.
fn mul_sparse_left(b: &Mat<f64>, u: &Mat<f64>) -> Mat<f64> {
    let n = b.nrows();
    let mut out = Mat::<f64>::zeros(n, u.ncols());
    let nonzeros: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| (0..b.ncols()).filter(|&k| b[(i, k)] != 0.0).map(|k| (k, b[(i, k)])).collect())
        .collect();
    for j in 0..u.ncols() {
        for (i, row) in nonzeros.iter().enumerate() {
            out[(i, j)] = row.iter().map(|&(k, w)| w * u[(k, j)]).sum();
        }
    }
    out
}

fn min_value(values: &[f64]) -> f64 {
    values.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Positive definite up to rounding: smallest eigenvalue above
/// `n ε_mach · max`.
fn check_definite(values: &[f64]) -> Result<()> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let min = min_value(values);
    if !(min > values.len() as f64 * f64::EPSILON * max) {
        return Err(Error::NotPositiveDefinite(min));
    }
    Ok(())
}

/// Diagonalizes the model. Requires `A` and `B` positive definite.
pub fn ground_state(model: &LatticeModel) -> Result<GroundState> {
    let (a_values, a_vectors) = eigen(&model.a_form)?;
    check_definite(&a_values)?;
    let mut m = a_vectors.transpose() * mul_sparse_left(&model.b_form, &a_vectors);
    let n = m.nrows();
    let root: Vec<f64> = a_values.iter().map(|a| a.sqrt()).collect();
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] *= root[i] * root[j];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let (m_values, m_vectors) = eigen(&m)?;
    check_definite(&m_values)?;
    Ok(GroundState {
        spacing: model.spacing,
        a_vectors,
        a_values,
        m_vectors,
        m_values,
    })
}

impl GroundState {
    pub fn n_sites(&self) -> usize {
        self.m_values.len()
    }

    /// Row `i` of `½ A^p M-function A^p` for `f` applied to the spectrum of `M`.
    fn sandwich_row(&self, power: f64, i: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.n_sites();
        // Row i of U D^p, in the eigenbasis of A.
        let r = Col::<f64>::from_fn(n, |k| self.a_vectors[(i, k)] * self.a_values[k].powf(power));
        let t = self.m_vectors.transpose() * &r;
        let t = Col::<f64>::from_fn(n, |k| t[k] * f(self.m_values[k]));
        let u = &self.m_vectors * &t;
        let u = Col::<f64>::from_fn(n, |k| u[k] * self.a_values[k].powf(power));
        let out = &self.a_vectors * &u;
        (0..n).map(|j| 0.5 * out[j]).collect()
    }

    /// Row `i` of the lattice `⟨φφᵀ⟩ = ½ A^{1/2} M^{-1/2} A^{1/2}`.
    pub fn phi_phi_row(&self, i: usize) -> Vec<f64> {
        self.sandwich_row(0.5, i, |v| 1.0 / v.sqrt())
    }

    /// Row `i` of the lattice `⟨ππᵀ⟩ = ½ A^{-1/2} M^{1/2} A^{-1/2}`.
    pub fn pi_pi_row(&self, i: usize) -> Vec<f64> {
        self.sandwich_row(-0.5, i, f64::sqrt)
    }

    /// Continuum `⟨φ(x_i)φ(x_j)⟩`, row `i`.
    pub fn field_phi_phi_row(&self, i: usize) -> Vec<f64> {
        self.phi_phi_row(i).into_iter().map(|v| v / self.spacing).collect()
    }

    /// Continuum `⟨π(x_i)π(x_j)⟩` away from contact, row `i`.
    pub fn field_pi_pi_row(&self, i: usize) -> Vec<f64> {
        self.pi_pi_row(i).into_iter().map(|v| v / self.spacing).collect()
    }

    fn full(&self, power: f64, f: impl Fn(f64) -> f64) -> Mat<f64> {
        let n = self.n_sites();
        let inner = spectral_function(&self.m_values, &self.m_vectors, f);
        let w: Vec<f64> = self.a_values.iter().map(|a| a.powf(power)).collect();
        let scaled = Mat::from_fn(n, n, |i, j| 0.5 * w[i] * inner[(i, j)] * w[j]);
        &(&self.a_vectors * &scaled) * self.a_vectors.transpose()
    }
}

/// Lattice covariances `(⟨φφᵀ⟩, ⟨ππᵀ⟩)` of the ground state.
pub fn ground_covariance(model: &LatticeModel) -> Result<(Mat<f64>, Mat<f64>)> {
    let gs = ground_state(model)?;
    let phi = gs.full(0.5, |v| 1.0 / v.sqrt());
    let pi = gs.full(-0.5, f64::sqrt);
    Ok((phi, pi))
}

/// As [`ground_covariance`] for a half-line model.
pub fn boundary_ground_covariance(model: &LatticeModel) -> Result<(Mat<f64>, Mat<f64>)> {
    if model.boundary == LatticeBoundary::Periodic {
        return Err(Error::domain("half-line covariance needs a Dirichlet or Neumann model"));
    }
    ground_covariance(model)
}

/// `max |eig(⟨φφ⟩⟨ππ⟩) − ¼|`, zero for a pure Gaussian state. Eigenvalues of
/// the product are those of the symmetric `P^{1/2} Φ P^{1/2}`.
pub fn purity_defect(phi_phi: &Mat<f64>, pi_pi: &Mat<f64>) -> Result<f64> {
    let (pv, pu) = eigen(pi_pi)?;
    check_definite(&pv)?;
    let p_half = spectral_function(&pv, &pu, f64::sqrt);
    let sym = &(&p_half * phi_phi) * &p_half;
    let (vals, _) = eigen(&sym)?;
    Ok(vals.iter().map(|v| (v - 0.25).abs()).fold(0.0, f64::max))
}

/// Lattice parameters for comparing against the analytic flow, in units
/// of `1/Λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub n_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    /// Position of the reference point on a half-line.
    pub half_line_reference: f64,
    /// Reference separation for the φφ difference on the ring.
    pub phi_reference: f64,
    pub ring_separations: Vec<f64>,
    pub half_line_separations: Vec<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_sites: 4096,
            spacing: 0.05,
            mass: 0.1,
            half_line_reference: 2.0,
            phi_reference: 0.5,
            ring_separations: vec![1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0],
            half_line_separations: vec![2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0],
        }
    }
}

/// One lattice-versus-analytic comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub boundary: LatticeBoundary,
    pub observable: String,
    pub x: f64,
    pub y: f64,
    pub lattice: f64,
    pub analytic: f64,
    pub relative_error: f64,
}

fn oracle_row(boundary: LatticeBoundary, observable: &str, x: f64, y: f64, lattice: f64, analytic: f64) -> OracleRow {
    OracleRow {
        boundary,
        observable: observable.into(),
        x,
        y,
        lattice,
        analytic,
        relative_error: ((lattice - analytic) / analytic).abs(),
    }
}

/// Diagonalizes one lattice model with `Λ = 1` and compares its ground-state
/// correlators with the magic flow at the matching mass.
pub fn lattice_oracle(
    boundary: LatticeBoundary,
    config: &OracleConfig,
    spec: &crate::quadrature::QuadratureSpec,
) -> Result<Vec<OracleRow>> {
    use crate::correlators::{cmera_correlator_with, BoundaryCondition, Geometry, Observable};
    use crate::flow::AlphaFn;
    use crate::profiles::Profile;
    use crate::transforms::{correlator_phi_diff_full, correlator_pi_full};

    let scale = Scale::unit();
    let model = LatticeModel::magic(&scale, config.mass, config.n_sites, config.spacing, boundary)?;
    let alpha = AlphaFn::new(Profile::magic(scale), crate::magic::flow_time_for_mass(&scale, config.mass))?;
    let gs = ground_state(&model)?;
    let a = config.spacing;
    let mut rows = Vec::new();
    match boundary {
        LatticeBoundary::Periodic => {
            let pi = gs.field_pi_pi_row(0);
            let phi = gs.field_phi_phi_row(0);
            let r = model.site_near(config.phi_reference);
            for &d in &config.ring_separations {
                let j = model.site_near(d);
                let x = j as f64 * a;
                rows.push(oracle_row(boundary, "pipi", x, 0.0, pi[j], correlator_pi_full(&alpha, x, spec)?));
                let xr = r as f64 * a;
                let analytic = correlator_phi_diff_full(&alpha, x, xr, spec)?;
                rows.push(oracle_row(boundary, "phiphi_diff", x, 0.0, phi[j] - phi[r], analytic));
            }
        }
        LatticeBoundary::Dirichlet | LatticeBoundary::Neumann => {
            let condition = if boundary == LatticeBoundary::Dirichlet {
                BoundaryCondition::Dirichlet
            } else {
                BoundaryCondition::Neumann
            };
            let geometry = Geometry::boundary(condition);
            let i = model.site_near(config.half_line_reference);
            let y = model.position(i);
            let pi = gs.field_pi_pi_row(i);
            let phi = gs.field_phi_phi_row(i);
            let r = model.site_near(y + config.phi_reference);
            let x_ref = model.position(r);
            for &d in &config.half_line_separations {
                let j = model.site_near(y + d);
                let x = model.position(j);
                let analytic = cmera_correlator_with(&geometry, &alpha, &Observable::PiPi, x, y, spec)?;
                rows.push(oracle_row(boundary, "pipi", x, y, pi[j], analytic));
                let analytic = cmera_correlator_with(&geometry, &alpha, &Observable::PhiPhiDiff { x_ref }, x, y, spec)?;
                rows.push(oracle_row(boundary, "phiphi_diff", x, y, phi[j] - phi[r], analytic));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::AlphaFn;
    use crate::profiles::Profile;
    use crate::quadrature::QuadratureSpec;
    use crate::transforms::correlator_pi_full;

    #[test]
    fn single_oscillator() {
        let w: f64 = 1.7;
        let m = LatticeModel::from_forms(
            Mat::from_fn(1, 1, |_, _| 1.0),
            Mat::from_fn(1, 1, |_, _| w * w),
            1.0,
            LatticeBoundary::Periodic,
        )
        .unwrap();
        let (phi, pi) = ground_covariance(&m).unwrap();
        assert!((phi[(0, 0)] - 0.5 / w).abs() < 1e-15);
        assert!((pi[(0, 0)] - 0.5 * w).abs() < 1e-15);
    }

    #[test]
    fn decoupled_sites_are_block_diagonal() {
        let (a1, b1, a2, b2) = (2.0, 3.0, 0.5, 7.0);
        let a = Mat::from_fn(2, 2, |i, j| if i != j { 0.0 } else if i == 0 { a1 } else { a2 });
        let b = Mat::from_fn(2, 2, |i, j| if i != j { 0.0 } else if i == 0 { b1 } else { b2 });
        let m = LatticeModel::from_forms(a, b, 1.0, LatticeBoundary::Periodic).unwrap();
        let (phi, pi) = ground_covariance(&m).unwrap();
        for (i, (a, b)) in [(a1, b1), (a2, b2)].into_iter().enumerate() {
            assert!((phi[(i, i)] - 0.5 * (a / b).sqrt()).abs() < 1e-14);
            assert!((pi[(i, i)] - 0.5 * (b / a).sqrt()).abs() < 1e-14);
        }
        assert!(phi[(0, 1)].abs() < 1e-15 && pi[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn unit_mass_gives_product_state() {
        // m = Λ makes B = Λ² A, so every site decouples.
        let s = Scale::new(1.5).unwrap();
        let m = LatticeModel::magic(&s, 1.5, 64, 0.1, LatticeBoundary::Periodic).unwrap();
        let (phi, pi) = ground_covariance(&m).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let (ep, eq) = if i == j { (0.5 / 1.5, 0.5 * 1.5) } else { (0.0, 0.0) };
                assert!((phi[(i, j)] - ep).abs() < 1e-12 && (pi[(i, j)] - eq).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rows_match_full_matrices_and_state_is_pure() {
        for b in [LatticeBoundary::Periodic, LatticeBoundary::Dirichlet, LatticeBoundary::Neumann] {
            let m = LatticeModel::magic(&Scale::unit(), 0.3, 96, 0.2, b).unwrap();
            let gs = ground_state(&m).unwrap();
            let (phi, pi) = ground_covariance(&m).unwrap();
            let (rp, rq) = (gs.phi_phi_row(17), gs.pi_pi_row(17));
            for j in 0..96 {
                assert!((rp[j] - phi[(17, j)]).abs() < 1e-12);
                assert!((rq[j] - pi[(17, j)]).abs() < 1e-12);
            }
            assert!(purity_defect(&phi, &pi).unwrap() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_models() {
        let bad = Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 0.5 * i as f64 });
        assert!(LatticeModel::from_forms(bad, Mat::zeros(2, 2), 1.0, LatticeBoundary::Periodic).is_err());
        assert!(LatticeModel::from_forms(Mat::zeros(2, 2), Mat::zeros(3, 3), 1.0, LatticeBoundary::Periodic).is_err());
        let massless = LatticeModel::magic(&Scale::unit(), 0.0, 16, 0.1, LatticeBoundary::Periodic).unwrap();
        assert!(matches!(ground_state(&massless), Err(Error::NotPositiveDefinite(_))));
        let periodic = LatticeModel::magic(&Scale::unit(), 0.5, 8, 0.1, LatticeBoundary::Periodic).unwrap();
        assert!(boundary_ground_covariance(&periodic).is_err());
    }

    #[test]
    fn dirichlet_row_vanishes_at_the_wall() {
        // φφ between the first site and a distant one shrinks linearly with a.
        let mut prev = f64::INFINITY;
        for a in [0.2, 0.1, 0.05] {
            let n = (40.0 / a) as usize;
            let m = LatticeModel::magic(&Scale::unit(), 0.3, n, a, LatticeBoundary::Dirichlet).unwrap();
            let gs = ground_state(&m).unwrap();
            let v = gs.field_phi_phi_row(0)[m.site_near(5.0)].abs();
            assert!(v < 0.6 * prev, "a = {a}: {v} vs {prev}");
            prev = v;
        }
    }

    #[test]
    fn image_terms_have_opposite_signs() {
        let (a, n) = (0.1, 600);
        let bulk = ground_state(&LatticeModel::magic(&Scale::unit(), 0.3, 2 * n, a, LatticeBoundary::Periodic).unwrap()).unwrap();
        let dir = LatticeModel::magic(&Scale::unit(), 0.3, n, a, LatticeBoundary::Dirichlet).unwrap();
        let neu = LatticeModel::magic(&Scale::unit(), 0.3, n, a, LatticeBoundary::Neumann).unwrap();
        let (gd, gn) = (ground_state(&dir).unwrap(), ground_state(&neu).unwrap());
        // Separation 2 at distance ~3 from the wall.
        let (i, j) = (dir.site_near(3.0), dir.site_near(5.0));
        let sep = dir.position(j) - dir.position(i);
        let bulk_val = bulk.field_pi_pi_row(0)[(sep / a).round() as usize];
        let d = gd.field_pi_pi_row(i)[j] - bulk_val;
        let (i2, j2) = (neu.site_near(3.0), neu.site_near(5.0));
        let nv = gn.field_pi_pi_row(i2)[j2] - bulk_val;
        assert!(d * nv < 0.0);
        assert!(((d + nv) / d).abs() < 0.1, "{d} vs {nv}");
    }

    #[test]
    fn periodic_chain_approaches_magic_flow() {
        // Coarse ring: a = 0.1, m = 0.5, circumference 60.
        let (a, mass) = (0.1, 0.5);
        let m = LatticeModel::magic(&Scale::unit(), mass, 600, a, LatticeBoundary::Periodic).unwrap();
        let row = ground_state(&m).unwrap().field_pi_pi_row(0);
        let alpha = AlphaFn::new(Profile::magic(Scale::unit()), (1.0f64 / mass).ln()).unwrap();
        let spec = QuadratureSpec::default();
        for d in [10usize, 20, 40] {
            let exact = correlator_pi_full(&alpha, d as f64 * a, &spec).unwrap();
            assert!(((row[d] - exact) / exact).abs() < 1e-2, "d = {d}: {} vs {exact}", row[d]);
        }
    }
}
