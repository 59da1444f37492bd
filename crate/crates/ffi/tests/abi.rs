use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use redundancy_core::model::ScenarioConfig;
use redundancy_ffi::*;

fn last_error() -> String {
    let p = rd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn from_json(text: &str) -> (RdStatus, *mut RdScenario) {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { rd_scenario_from_json(c.as_ptr(), &mut h) };
    (st, h)
}

#[test]
fn evaluate_matches_core() {
    let (st, h) = from_json(&ScenarioConfig::default().with_latent(0.01).to_json());
    assert_eq!(st, RdStatus::Ok);
    assert!(rd_last_error().is_null());
    let mut e = RdEvaluation::default();
    assert_eq!(unsafe { rd_evaluate(h, 1.2, 0.8, &mut e) }, RdStatus::Ok);

    let s = ScenarioConfig::default()
        .with_latent(0.01)
        .validate()
        .unwrap();
    let d = redundancy_core::model::Design::new(1.2, 0.8).unwrap();
    let r = redundancy_core::reliability::system_failure_probability(&d, &s);
    let c = redundancy_core::cost::risk_objective(&d, &s);
    assert_eq!(e.beta_sys, r.beta_sys);
    assert_eq!(e.total, c.total);
    assert_eq!((e.lambda1, e.lambda2), (1.2, 0.8));
    unsafe { rd_scenario_free(h) };
}

#[test]
fn invalid_inputs_report_codes_and_messages() {
    let (st, h) = from_json("{not json");
    assert_eq!(st, RdStatus::Parse);
    assert!(h.is_null());
    assert!(last_error().contains("parse"));

    let c = ScenarioConfig {
        rho12: 1.5,
        ..ScenarioConfig::default()
    };
    let (st, _) = from_json(&c.to_json());
    assert_eq!(st, RdStatus::InvalidScenario);
    assert!(last_error().contains("rho12"));

    let extra = ScenarioConfig::default()
        .to_json()
        .replacen('{', r#"{"unknown_field": 1,"#, 1);
    let (st, _) = from_json(&extra);
    assert_eq!(st, RdStatus::Parse);

    let bytes = [0xffu8, 0xfe, 0];
    let mut h = ptr::null_mut();
    let st = unsafe { rd_scenario_from_json(bytes.as_ptr().cast(), &mut h) };
    assert_eq!(st, RdStatus::InvalidUtf8);

    let mut e = RdEvaluation::default();
    assert_eq!(
        unsafe { rd_evaluate(ptr::null(), 1.0, 1.0, &mut e) },
        RdStatus::NullPointer
    );
    assert_eq!(
        unsafe { rd_scenario_from_json(ptr::null(), &mut h) },
        RdStatus::NullPointer
    );

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { rd_scenario_default(&mut d) }, RdStatus::Ok);
    assert_eq!(
        unsafe { rd_evaluate(d, -1.0, 1.0, &mut e) },
        RdStatus::Domain
    );
    assert_eq!(e, RdEvaluation::default());
    assert_eq!(
        unsafe { rd_evaluate(d, 1.0, 1.0, ptr::null_mut()) },
        RdStatus::NullPointer
    );
    let mut sim = RdSimulation::default();
    assert_eq!(
        unsafe { rd_simulate(d, 1.0, 1.0, 0, 1, &mut sim) },
        RdStatus::Domain
    );
    unsafe { rd_scenario_free(d) };
    unsafe { rd_scenario_free(ptr::null_mut()) };
}

#[test]
fn optimizers_and_simulation() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { rd_scenario_default(&mut h) }, RdStatus::Ok);

    let mut ro = RdOptimum::default();
    assert_eq!(unsafe { rd_ro_optimize(h, &mut ro) }, RdStatus::Ok);
    assert!(ro.local_minima >= 1);
    assert!(ro.evaluation.total > 0.0);

    let mut rb = RdOptimum::default();
    assert_eq!(unsafe { rd_rbdo_optimize(h, 3.0, &mut rb) }, RdStatus::Ok);
    assert!(rb.evaluation.beta_sys >= 3.0 - 1e-4);
    assert_eq!(rb.degenerate, 0);

    assert_eq!(
        unsafe { rd_rbdo_optimize(h, f64::NEG_INFINITY, &mut rb) },
        RdStatus::Ok
    );
    assert_eq!(rb.degenerate, 1);

    assert_eq!(
        unsafe { rd_rbdo_optimize(h, 40.0, &mut rb) },
        RdStatus::Infeasible
    );
    assert!(last_error().contains("not attainable"));

    let mut a = RdSimulation::default();
    let mut b = RdSimulation::default();
    assert_eq!(
        unsafe { rd_simulate(h, 1.1, 1.1, 20_000, 7, &mut a) },
        RdStatus::Ok
    );
    assert_eq!(
        unsafe { rd_simulate(h, 1.1, 1.1, 20_000, 7, &mut b) },
        RdStatus::Ok
    );
    assert_eq!(a, b);
    assert_eq!((a.n, a.seed), (20_000, 7));
    assert!(a.p_sys.value > 0.0 && a.p_sys.se > 0.0);
    unsafe { rd_scenario_free(h) };
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(rd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "redundancy.h"
int use(const char *json) {
    RdScenario *s = NULL;
    RdEvaluation e;
    RdStatus st = rd_scenario_from_json(json, &s);
    if (st != RD_STATUS_OK) return (int)st;
    st = rd_evaluate(s, 1.0, 1.0, &e);
    rd_scenario_free(s);
    return st == RD_STATUS_OK && e.beta_sys > 0.0 ? 0 : 1;
}
"#,
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-c", "-I", include])
        .arg(&src)
        .arg("-o")
        .arg(dir.path().join("use.o"))
        .output()
        .expect("C compiler available");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
