//! End-to-end acceptance criteria. Each test prints one PASS/FAIL line and the
//! checks behind it. Timed sections hold a global lock so wall-clock budgets
//! are not skewed by tests running side by side.

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use cmera::verify::{
    verify_correlators, verify_flow, verify_minimal_update, verify_modes, verify_mpo, verify_oracle, Check,
    SuiteReport, DEFAULT_SEED,
};
use cmera::lattice::OracleConfig;
use cmera::quadrature::QuadratureSpec;

static SERIAL: Mutex<()> = Mutex::new(());

/// Wall-clock budgets in seconds.
const PANEL_BUDGET: f64 = 60.0;
const ORACLE_BUDGET: f64 = 300.0;
const FLOW_BUDGET: f64 = 30.0;

/// Writes straight to stdout so the lines survive libtest output capture.
fn report(id: &str, title: &str, checks: &[Check]) {
    let ok = checks.iter().all(|c| c.passed);
    let mut out = std::io::stdout().lock();
    writeln!(out, "{} AC{id} {title}", if ok { "PASS" } else { "FAIL" }).unwrap();
    for c in checks {
        writeln!(
            out,
            "    [{}] {}: value {:.6e}, threshold {:.1e}, margin {:+.3}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold,
            c.margin
        )
        .unwrap();
    }
    drop(out);
    assert!(ok, "AC{id} failed");
}

fn select<'a>(r: &'a SuiteReport, keys: &[&str]) -> Vec<Check> {
    r.checks
        .iter()
        .filter(|c| keys.iter().any(|k| c.name.contains(k)))
        .cloned()
        .collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

#[test]
fn ac1_reference_panels() {
    let (r, _) = timed(|| verify_correlators(&QuadratureSpec::default()).unwrap());
    let mut checks = r.checks.clone();
    for p in &r.panels {
        checks.push(Check::at_most(format!("{:?}: panel seconds", p.geometry), p.seconds, PANEL_BUDGET));
    }
    report("1", "reference panels: 2% at |x − y| ≥ 10, regularized below 1", &checks);
}

#[test]
fn ac2_closed_form_alpha() {
    let (r, secs) = timed(|| verify_flow().unwrap());
    let mut checks = select(&r, &["closed form", "α(k)/k"]);
    assert_eq!(checks.len(), 4);
    checks.push(Check::at_most("flow suite seconds", secs, FLOW_BUDGET));
    report("2", "closed-form α vs flow quadrature, IR slope", &checks);
}

#[test]
fn ac3_lattice_oracle() {
    let config = OracleConfig::default();
    assert_eq!(config.n_sites, 4096);
    assert_eq!(config.spacing, 0.05);
    assert_eq!(config.mass, 0.1);
    let (r, secs) = timed(|| verify_oracle(&config).unwrap());
    let mut checks = r.checks.clone();
    assert_eq!(checks.len(), 6);
    checks.push(Check::at_most("oracle seconds", secs, ORACLE_BUDGET));
    report("3", "lattice ground state vs analytic magic correlators", &checks);
}

#[test]
fn ac4_occupation_tail() {
    let r = verify_flow().unwrap();
    let checks = select(&r, &["n(k)"]);
    assert_eq!(checks.len(), 2);
    report("4", "occupation number tail", &checks);
}

#[test]
fn ac5_mpo_continuum_limit() {
    let (r, _) = timed(|| verify_mpo().unwrap());
    report("5", "automaton kernels: convergence, transparency, factorization", &r.checks);
}

#[test]
fn ac6_defect_algebra() {
    let (r, _) = timed(|| verify_modes(DEFAULT_SEED).unwrap());
    let checks = select(&r, &["R + T", "matching ratio", "second family"]);
    assert_eq!(checks.len(), 9);
    report("6", "reflection/transmission, matching ratio, second family", &checks);
}

#[test]
fn ac7_minimal_update() {
    let r = verify_minimal_update().unwrap();
    report("7", "modification kernel envelope", &r.checks);
}

#[test]
fn ac8_mode_integral_oracle() {
    let (r, _) = timed(|| verify_modes(DEFAULT_SEED).unwrap());
    let checks = select(&r, &["mode oracle", "packet"]);
    assert_eq!(checks.len(), 4);
    writeln!(std::io::stdout(), "    seed {}", r.seed.unwrap()).unwrap();
    report("8", "mode-integral oracle and packet orthonormality", &checks);
}
