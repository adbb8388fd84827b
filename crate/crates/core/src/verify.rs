//! Named verification suites. Each check records its measured value, the
//! threshold it is held to and the resulting margin.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::{
    cmera_correlator_with, correlator_table, defect_matching_check, BoundaryCondition, CorrelatorTable, Geometry,
    Observable,
};
use crate::defect_modes::{
    defect_correlator_mode_oracle, mode_overlap_packet, second_family_obstruction, DefectParams, GaussianPacket,
    OracleWeight,
};
use crate::error::{Error, Result};
use crate::flow::{alpha_fixed, alpha_flow, AlphaFn, FIXED_POINT_FLOW_TIME};
use crate::kernels::{envelope_law, minimal_update_envelope, KernelFn};
use crate::lattice::{lattice_oracle, LatticeBoundary, OracleConfig, OracleRow};
use crate::magic::automata::{
    cmpo_defect_factorization_check, convergence_study, defect_bulk_deviation, full_line_automaton,
    kernel_to_entangler_check, AutomatonGeometry, ConvergenceStudy, FactorizationReport, MpoReport,
    CONVERGENCE_SPACINGS, FACTORIZATION_TOLERANCE,
};
use crate::magic::occupation_number;
use crate::profiles::{Profile, ProfileKind, Scale};
use crate::quadrature::QuadratureSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Flow,
    MinimalUpdate,
    Modes,
    Mpo,
    Oracle,
    Correlators,
    All,
}

impl Suite {
    /// Suites run by [`Suite::All`], cheapest first.
    pub const INDIVIDUAL: [Suite; 6] = [
        Suite::Flow,
        Suite::MinimalUpdate,
        Suite::Mpo,
        Suite::Modes,
        Suite::Correlators,
        Suite::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Flow => "flow",
            Suite::MinimalUpdate => "minimal-update",
            Suite::Modes => "modes",
            Suite::Mpo => "mpo",
            Suite::Oracle => "oracle",
            Suite::Correlators => "correlators",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::INDIVIDUAL)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub passed: bool,
    /// Relative slack: positive when passing.
    pub margin: f64,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            comparison: Comparison::AtMost,
            passed: value <= threshold,
            margin: (threshold - value) / threshold.abs().max(f64::MIN_POSITIVE),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            comparison: Comparison::AtLeast,
            passed: value >= threshold,
            margin: (value - threshold) / threshold.abs().max(f64::MIN_POSITIVE),
        }
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::at_least(name, ok as u8 as f64, 1.0)
    }
}

/// Outcome of one suite, with the tables behind its checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seconds: f64,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceStudy>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factorization: Vec<FactorizationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mpo: Vec<MpoReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracle: Vec<OracleRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub panels: Vec<PanelSummary>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite: suite.name().into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }
}

/// Seed used by the randomized mode-oracle checks unless one is given.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<SuiteReport>> {
    match suite {
        Suite::All => Suite::INDIVIDUAL.iter().map(|&s| run_single(s, seed)).collect(),
        s => Ok(vec![run_single(s, seed)?]),
    }
}

fn run_single(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = match suite {
        Suite::Flow => verify_flow()?,
        Suite::MinimalUpdate => verify_minimal_update()?,
        Suite::Modes => verify_modes(seed)?,
        Suite::Mpo => verify_mpo()?,
        Suite::Oracle => verify_oracle(&OracleConfig::default())?,
        Suite::Correlators => verify_correlators(&QuadratureSpec::default())?,
        Suite::All => unreachable!("expanded by run_suite"),
    };
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Closed-form fixed points against the flow quadrature, IR slope, and the
/// occupation-number tail.
pub fn verify_flow() -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Flow);
    let unit = Scale::unit();
    let ks = log_grid(1e-3, 1e3, 121);
    for kind in [ProfileKind::Gaussian, ProfileKind::Magic] {
        let p = Profile::new(kind, unit);
        let worst = ks
            .par_iter()
            .map(|&k| -> Result<f64> {
                let closed = alpha_fixed(&p, k);
                Ok(((alpha_flow(&p, k, FIXED_POINT_FLOW_TIME)? - closed) / closed).abs())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        r.push(Check::at_most(format!("{kind}: closed form vs flow quadrature, max relative"), worst, 1e-9));
        let k = 1e-4;
        let slope = alpha_fixed(&p, k) / k;
        r.push(Check::at_most(format!("{kind}: |α(k)/k − 1| at k = 1e-4"), (slope - 1.0).abs(), 1e-3));
    }
    let s = f64::INFINITY;
    let k = 100.0;
    let tail = occupation_number(&unit, k, s) * k.powi(4);
    r.push(Check::at_most("n(k)k⁴ at k = 100 vs 1/16, relative", (tail * 16.0 - 1.0).abs(), 1e-3));
    let (k1, k2) = (10.0f64, 100.0f64);
    let slope = (occupation_number(&unit, k2, s) / occupation_number(&unit, k1, s)).ln() / (k2 / k1).ln();
    r.push(Check::at_most("|log-log slope of n(k) on [10, 100] + 4|", (slope + 4.0).abs(), 0.05));
    Ok(r)
}

/// Modification-kernel envelopes against their decay laws.
pub fn verify_minimal_update() -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::MinimalUpdate);
    let geometries = [
        Geometry::boundary(BoundaryCondition::Neumann),
        Geometry::boundary(BoundaryCondition::Dirichlet),
        Geometry::defect(0.0)?,
        Geometry::defect(3.0 * FRAC_PI_8)?,
        Geometry::defect(-0.4)?,
    ];
    for kind in [ProfileKind::Magic, ProfileKind::Gaussian] {
        for g in &geometries {
            let kernel = KernelFn::new(*g, Profile::new(kind, Scale::unit()))?;
            let label = format!("{kind} {}", geometry_label(g));
            let mut worst: f64 = 0.0;
            for d in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
                let law = envelope_law(&kernel, d);
                if law < 1e-290 {
                    continue;
                }
                let env = minimal_update_envelope(&kernel, d, 41)?;
                worst = worst.max(((env - law) / law).abs());
            }
            r.push(Check::at_most(format!("{label}: envelope vs decay law, max relative"), worst, 1e-10));
            let peak = minimal_update_envelope(&kernel, 1e-9, 41)?;
            let far = minimal_update_envelope(&kernel, 8.0, 41)?;
            r.push(Check::at_most(format!("{label}: envelope(8)/peak"), far / peak, 1e-6));
        }
    }
    Ok(r)
}

fn geometry_label(g: &Geometry) -> String {
    match g {
        Geometry::FullLine => "full line".into(),
        Geometry::Boundary { condition } => format!("{condition:?} boundary").to_lowercase(),
        Geometry::Defect { theta } => format!("defect θ = {theta:.4}"),
    }
}

/// Reflection and transmission, matching ratios, the second mode family, and
/// the mode-integral oracle on randomized points.
pub fn verify_modes(seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Modes);
    r.seed = Some(seed);
    let n = 1000;
    let worst_rt = (0..n)
        .map(|i| {
            let theta = -FRAC_PI_2 + PI * (i as f64 + 1.0) / n as f64;
            let p = DefectParams::new(theta);
            (p.reflection + p.transmission - 1.0).abs()
        })
        .fold(0.0, f64::max);
    r.push(Check::at_most("max |R + T − 1| over 1000 angles", worst_rt, 4.0 * f64::EPSILON));

    let spec = QuadratureSpec::with_abs_tol(1e-12);
    let profile = Profile::gaussian(Scale::unit());
    for theta in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, -0.3, 0.1] {
        let m = defect_matching_check(Some(&profile), theta, 10.0, &spec)?;
        let worst = (m.exact_ratio - m.expected)
            .abs()
            .max((m.cmera_ratio.unwrap_or(f64::NAN) - m.expected).abs());
        r.push(Check::at_most(format!("θ = {theta:.4}: matching ratio vs tan θ"), worst, 1e-4));
    }

    r.push(Check::at_least(
        "second family obstruction at θ = π/3",
        second_family_obstruction(PI / 3.0, 1.0, 2.0)?.norm(),
        1e-3,
    ));
    for theta in [0.0, PI] {
        r.push(Check::at_most(
            format!("second family obstruction at θ = {theta:.4}"),
            second_family_obstruction(theta, 1.0, 2.0)?.norm(),
            1e-12,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples = random_triples(&mut rng, 20);
    let oracle_spec = QuadratureSpec::with_abs_tol(1e-8);
    let errors: Vec<(f64, f64)> = triples
        .par_iter()
        .enumerate()
        .map(|(i, &(theta, x, y))| -> Result<(f64, f64)> {
            let kind = if i % 2 == 0 { ProfileKind::Gaussian } else { ProfileKind::Magic };
            let alpha = AlphaFn::fixed_point(Profile::new(kind, Scale::unit()));
            let g = Geometry::defect(theta)?;
            let pi_mode = defect_correlator_mode_oracle(theta, OracleWeight::CmeraPiPi(&alpha), x, y, None, &oracle_spec)?;
            let pi_closed = cmera_correlator_with(&g, &alpha, &Observable::PiPi, x, y, &oracle_spec)?;
            let x_ref = phi_reference(x, y);
            let phi_mode =
                defect_correlator_mode_oracle(theta, OracleWeight::CmeraPhiPhi(&alpha), x, y, Some(x_ref), &oracle_spec)?;
            let phi_closed = cmera_correlator_with(&g, &alpha, &Observable::PhiPhiDiff { x_ref }, x, y, &oracle_spec)?;
            Ok(((pi_mode - pi_closed).abs(), (phi_mode - phi_closed).abs()))
        })
        .collect::<Result<_>>()?;
    let worst_pi = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    let worst_phi = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    r.push(Check::at_most("mode oracle vs closed form ππ, 20 random triples", worst_pi, 1e-6));
    r.push(Check::at_most("mode oracle vs closed form φφ difference, 20 random triples", worst_phi, 1e-6));

    let mut worst_norm: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    for _ in 0..4 {
        let theta = rng.random_range(-1.5..1.5);
        let p1 = GaussianPacket::new(rng.random_range(2.0..4.0), 0.5)?;
        let p2 = GaussianPacket::new(p1.center + 6.0, 0.5)?;
        let own = mode_overlap_packet(theta, &p1, &p1)?;
        worst_norm = worst_norm.max((own - p1.inner_product(&p1)).norm());
        worst_cross = worst_cross.max(mode_overlap_packet(theta, &p1, &p2)?.norm());
    }
    r.push(Check::at_most("packet self-overlap vs momentum-space norm", worst_norm, 1e-6));
    r.push(Check::at_most("overlap of packets 12σ apart", worst_cross, 1e-6));
    Ok(r)
}

/// `(θ, x, y)` with `θ ∈ (−π/2, π/2)`, `x, y ∈ [−15, 15]` and `|x ± y| ≥ 1`.
pub fn random_triples(rng: &mut impl Rng, n: usize) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let theta = rng.random_range(-1.55..1.55);
        let x: f64 = rng.random_range(-15.0..15.0);
        let y: f64 = rng.random_range(-15.0..15.0);
        if (x - y).abs() < 1.0 || (x + y).abs() < 1.0 {
            continue;
        }
        let r = phi_reference(x, y);
        if (r - y).abs() < 1.0 || (r + y).abs() < 1.0 {
            continue;
        }
        out.push((theta, x, y));
    }
    out
}

/// Reference point for φφ differences: same side as `x`, further out.
fn phi_reference(x: f64, _y: f64) -> f64 {
    x + 3.0 * x.signum()
}

/// Minimum measured order for automaton geometries with image terms.
pub const IMAGE_ORDER_FLOOR: f64 = 0.99;

/// Automaton kernels: pointwise agreement, smeared convergence in the
/// spacing, transparency at `θ = π/4` and factorization at reflecting angles.
pub fn verify_mpo() -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Mpo);
    let unit = Scale::unit();

    let eps = 1e-3;
    let kernel = full_line_automaton(&unit, eps, 20.0)?.kernel()?;
    let pointwise = kernel_to_entangler_check(&kernel, AutomatonGeometry::FullLine, &unit)?;
    r.push(Check::at_most(
        "bulk chain on [−20, 20], ε = 1e-3: pointwise kernel deviation",
        pointwise.max_relative_deviation,
        1e-2,
    ));
    r.push(Check::at_most("bulk chain: mixed-species weight", pointwise.mixed_species_weight, 0.0));

    let geometries = [
        AutomatonGeometry::FullLine,
        AutomatonGeometry::RightHalfLine { xi: 1.0 },
        AutomatonGeometry::RightHalfLine { xi: -1.0 },
        AutomatonGeometry::LeftHalfLine { xi: 1.0 },
        AutomatonGeometry::Defect { theta: 3.0 * FRAC_PI_8 },
    ];
    let studies: Vec<ConvergenceStudy> = geometries
        .par_iter()
        .map(|&g| convergence_study(g, &unit, &CONVERGENCE_SPACINGS))
        .collect::<Result<_>>()?;
    for st in &studies {
        let label = format!("{:?}", st.geometry);
        // The criterion is stated for the full-line kernel; the image-carrying
        // chains are held to first order up to their O(ε²) drift.
        let floor = if st.geometry == AutomatonGeometry::FullLine { 1.0 } else { IMAGE_ORDER_FLOOR };
        r.push(Check::at_least(format!("{label}: convergence order"), st.convergence_order, floor));
        r.push(Check::at_most(format!("{label}: final smeared relative error"), st.final_error(), 1e-2));
        let theta = match st.geometry {
            AutomatonGeometry::Defect { theta } => Some(theta),
            _ => None,
        };
        r.mpo.push(MpoReport {
            epsilon: st.points.last().map(|p| p.epsilon).unwrap_or(f64::NAN),
            kernel_error: st.final_error(),
            convergence_order: Some(st.convergence_order),
            theta,
            factorization_ok: None,
        });
    }
    r.convergence = studies;

    let transparent = defect_bulk_deviation(&unit, FRAC_PI_4, 1e-2, 10.0)?;
    r.push(Check::at_most("θ = π/4 defect chain vs bulk chain", transparent, 1e-12));
    for theta in [0.0, FRAC_PI_2] {
        let f = cmpo_defect_factorization_check(&unit, theta, 1e-2, 10.0)?;
        r.push(Check::at_most(format!("θ = {theta:.4}: cross-side weight"), f.cross_weight, FACTORIZATION_TOLERANCE));
        r.push(Check::at_most(
            format!("θ = {theta:.4}: deviation from half-line automata"),
            f.left_deviation.max(f.right_deviation),
            FACTORIZATION_TOLERANCE,
        ));
        let (xl, xr) = if theta == 0.0 { (1.0, -1.0) } else { (-1.0, 1.0) };
        r.push(Check::holds(
            format!("θ = {theta:.4}: boundary weights (ξ_L, ξ_R) = ({xl}, {xr})"),
            f.xi_left == xl && f.xi_right == xr,
        ));
        r.mpo.push(MpoReport {
            epsilon: f.epsilon,
            kernel_error: f.cross_weight,
            convergence_order: None,
            theta: Some(theta),
            factorization_ok: Some(f.factorization_ok),
        });
        r.factorization.push(f);
    }
    Ok(r)
}

/// Lattice ground state against the analytic flow at the same mass.
pub fn verify_oracle(config: &OracleConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Oracle);
    let spec = QuadratureSpec::default();
    let boundaries = [LatticeBoundary::Periodic, LatticeBoundary::Dirichlet, LatticeBoundary::Neumann];
    let rows: Vec<Vec<OracleRow>> = boundaries
        .par_iter()
        .map(|&b| lattice_oracle(b, config, &spec))
        .collect::<Result<_>>()?;
    for (b, rows) in boundaries.iter().zip(&rows) {
        let tol = if *b == LatticeBoundary::Periodic { 1e-3 } else { 2e-3 };
        for obs in ["pipi", "phiphi_diff"] {
            let worst = rows
                .iter()
                .filter(|x| x.observable == obs)
                .map(|x| x.relative_error)
                .fold(f64::NAN, f64::max);
            if !worst.is_nan() {
                r.push(Check::at_most(format!("{b:?} {obs}: max relative deviation"), worst, tol));
            }
        }
    }
    r.oracle = rows.into_iter().flatten().collect();
    Ok(r)
}

/// Summary of one correlator panel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelSummary {
    pub geometry: Geometry,
    pub points: usize,
    pub seconds: f64,
    /// Max relative error over `|x − y| ≥ 10/Λ`.
    pub far_error: f64,
    /// Max relative error over `|x − y| ≤ 1/Λ`.
    pub near_error: f64,
    /// Max `|cMERA|` over `|x − y| ≤ 1/Λ`, in units of `Λ²`.
    pub near_max: f64,
}

/// The three reference panels: full line, Dirichlet boundary, defect at
/// `θ = 3π/8`, with `y = 10/Λ`.
pub fn reference_panels() -> Vec<(Geometry, Vec<f64>)> {
    let grid = |lo: f64, hi: f64| -> Vec<f64> { (0..400).map(|i| lo + (hi - lo) * i as f64 / 399.0).collect() };
    vec![
        (Geometry::FullLine, grid(0.1, 40.0)),
        (Geometry::boundary(BoundaryCondition::Dirichlet), grid(0.1, 40.0)),
        (Geometry::Defect { theta: 3.0 * FRAC_PI_8 }, grid(-40.0, 40.0)),
    ]
}

pub fn summarize_panel(table: &CorrelatorTable, seconds: f64) -> PanelSummary {
    let l = table.profile.lambda();
    let fold = |pred: &dyn Fn(f64) -> bool, f: &dyn Fn(&crate::correlators::CorrelatorPoint) -> f64| {
        table
            .points
            .iter()
            .filter(|p| pred(l * (p.x - p.y).abs()))
            .map(f)
            .fold(0.0, f64::max)
    };
    PanelSummary {
        geometry: table.geometry,
        points: table.points.len(),
        seconds,
        far_error: fold(&|d| d >= 10.0, &|p| p.relative_error()),
        near_error: fold(&|d| d <= 1.0, &|p| p.relative_error()),
        near_max: fold(&|d| d <= 1.0, &|p| p.cmera.abs() / (l * l)),
    }
}

/// Reference panels with the gaussian profile.
pub fn verify_correlators(spec: &QuadratureSpec) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Correlators);
    let profile = Profile::gaussian(Scale::unit());
    for (g, xs) in reference_panels() {
        let start = Instant::now();
        let table = correlator_table(&g, &profile, &Observable::PiPi, 10.0, &xs, spec)?;
        let s = summarize_panel(&table, start.elapsed().as_secs_f64());
        let label = geometry_label(&g);
        r.push(Check::at_most(format!("{label}: max relative error at |x − y| ≥ 10"), s.far_error, 0.02));
        r.push(Check::at_least(format!("{label}: max relative error at |x − y| ≤ 1"), s.near_error, 0.5));
        r.push(Check::holds(format!("{label}: cMERA finite at short distance"), s.near_max.is_finite()));
        r.push(Check::at_most(format!("{label}: seconds for {} points", xs.len()), s.seconds, 60.0));
        r.panels.push(s);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::INDIVIDUAL.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn check_margins() {
        let c = Check::at_most("a", 0.5, 1.0);
        assert!(c.passed && (c.margin - 0.5).abs() < 1e-15);
        let c = Check::at_least("b", 0.5, 1.0);
        assert!(!c.passed && c.margin < 0.0);
        assert!(Check::holds("c", true).passed);
    }

    #[test]
    fn random_triples_respect_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = random_triples(&mut rng, 50);
        assert_eq!(t.len(), 50);
        for &(theta, x, y) in &t {
            assert!(theta.abs() < FRAC_PI_2);
            assert!((x - y).abs() >= 1.0 && (x + y).abs() >= 1.0);
        }
        let mut again = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_triples(&mut again, 50), t);
    }

    #[test]
    fn flow_suite_passes() {
        let r = verify_flow().unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn minimal_update_suite_passes() {
        let r = verify_minimal_update().unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
