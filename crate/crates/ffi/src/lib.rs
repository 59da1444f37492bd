//! C ABI over `redundancy_core`.
//!
//! Scenarios are opaque handles created from JSON and released with
//! [`rd_scenario_free`]. Every fallible call returns an [`RdStatus`]; on a
//! nonzero status [`rd_last_error`] describes the failure for the calling
//! thread. Output structs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use redundancy_core::cost::risk_objective;
use redundancy_core::model::{Design, Scenario, ScenarioConfig};
use redundancy_core::optimize::{
    rbdo_optimize, ro_optimize, FrontierOptions, OptimizationResult, RbdoOutcome,
};
use redundancy_core::oracle::simulate_system;
use redundancy_core::reliability::system_failure_probability;
use redundancy_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidScenario = 4,
    InvalidInput = 5,
    Domain = 6,
    Infeasible = 7,
    Panic = 8,
}

/// Opaque validated scenario.
pub struct RdScenario {
    inner: Scenario,
}

/// Closed-form reliability and expected costs at one design.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RdEvaluation {
    pub lambda1: f64,
    pub lambda2: f64,
    pub a1: f64,
    pub a2: f64,
    pub beta1: f64,
    pub beta21: f64,
    pub beta_joint: f64,
    pub beta_sys: f64,
    pub p_sys: f64,
    pub material: f64,
    pub sf: f64,
    pub pc: f64,
    pub dc: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RdOptimum {
    pub evaluation: RdEvaluation,
    /// 1 when every refinement converged.
    pub converged: i32,
    /// 1 when the reliability target is met with no material.
    pub degenerate: i32,
    pub local_minima: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RdEstimate {
    pub value: f64,
    pub se: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RdSimulation {
    pub n: u64,
    pub seed: u64,
    pub p_sys: RdEstimate,
    pub sf: RdEstimate,
    pub pc: RdEstimate,
    pub dc: RdEstimate,
    pub total: RdEstimate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RdStatus {
    match e {
        Error::Json(_) | Error::Fixture(_) => RdStatus::Parse,
        Error::InvalidScenario(_) => RdStatus::InvalidScenario,
        Error::Domain(_) => RdStatus::Domain,
        Error::Input(_) | Error::UnknownTable(_) | Error::Io(_) => RdStatus::InvalidInput,
    }
}

struct Failure(RdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RdStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            RdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn scenario_ref<'a>(s: *const RdScenario) -> Result<&'a Scenario, Failure> {
    s.as_ref().map(|h| &h.inner).ok_or_else(|| null("scenario"))
}

fn evaluation(s: &Scenario, d: &Design) -> RdEvaluation {
    let r = system_failure_probability(d, s);
    let c = risk_objective(d, s);
    RdEvaluation {
        lambda1: d.lambda1,
        lambda2: d.lambda2,
        a1: r.indexes.a1,
        a2: r.indexes.a2,
        beta1: r.beta1(),
        beta21: r.beta_21(),
        beta_joint: r.beta_joint(),
        beta_sys: r.beta_sys,
        p_sys: r.p_sys,
        material: c.material,
        sf: c.sf,
        pc: c.pc,
        dc: c.dc,
        total: c.total,
    }
}

fn optimum(s: &Scenario, r: &OptimizationResult, degenerate: bool) -> RdOptimum {
    RdOptimum {
        evaluation: evaluation(s, &r.best),
        converged: r.converged as i32,
        degenerate: degenerate as i32,
        local_minima: r.local_minima.len(),
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn rd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The built-in default scenario.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rd_scenario_default(out: *mut *mut RdScenario) -> RdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = ScenarioConfig::default().validate()?;
        *out = Box::into_raw(Box::new(RdScenario { inner }));
        Ok(())
    })
}

/// Parses and validates a scenario document.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rd_scenario_from_json(
    json: *const c_char,
    out: *mut *mut RdScenario,
) -> RdStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| {
            Failure(
                RdStatus::InvalidUtf8,
                format!("scenario JSON is not UTF-8: {e}"),
            )
        })?;
        let inner = ScenarioConfig::from_json(text)?.validate()?;
        *out = Box::into_raw(Box::new(RdScenario { inner }));
        Ok(())
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rd_scenario_free(s: *mut RdScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Closed-form evaluation at (λ1, λ2).
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rd_evaluate(
    s: *const RdScenario,
    lambda1: f64,
    lambda2: f64,
    out: *mut RdEvaluation,
) -> RdStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = Design::new(lambda1, lambda2)?;
        *out = evaluation(s, &d);
        Ok(())
    })
}

/// Risk-optimal design.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rd_ro_optimize(s: *const RdScenario, out: *mut RdOptimum) -> RdStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = optimum(s, &ro_optimize(s), false);
        Ok(())
    })
}

/// Least-material design with β_sys ≥ `beta_target`. Returns
/// `RD_STATUS_INFEASIBLE` when no design up to the default λ bound meets it.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rd_rbdo_optimize(
    s: *const RdScenario,
    beta_target: f64,
    out: *mut RdOptimum,
) -> RdStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        match rbdo_optimize(s, beta_target, &FrontierOptions::default())? {
            RbdoOutcome::Optimal(r) => *out = optimum(s, &r, false),
            RbdoOutcome::Degenerate(r) => *out = optimum(s, &r, true),
            RbdoOutcome::Infeasible { max_beta_sys, at } => return Err(Failure(
                RdStatus::Infeasible,
                format!(
                    "target β_sys = {beta_target} not attainable; best {max_beta_sys} at ({}, {})",
                    at.lambda1, at.lambda2
                ),
            )),
        }
        Ok(())
    })
}

/// Monte Carlo event-tree estimate at (λ1, λ2); deterministic in `seed`.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rd_simulate(
    s: *const RdScenario,
    lambda1: f64,
    lambda2: f64,
    n: u64,
    seed: u64,
    out: *mut RdSimulation,
) -> RdStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = Design::new(lambda1, lambda2)?;
        let mc = simulate_system(s, &d, n, seed)?;
        let e = |x: redundancy_core::oracle::Estimate| RdEstimate {
            value: x.value,
            se: x.se,
        };
        *out = RdSimulation {
            n: mc.n,
            seed: mc.seed,
            p_sys: e(mc.p_sys),
            sf: e(mc.sf_cost),
            pc: e(mc.pc_cost),
            dc: e(mc.dc_cost),
            total: e(mc.total_cost),
        };
        Ok(())
    })
}
