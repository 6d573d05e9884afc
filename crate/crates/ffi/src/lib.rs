//! C ABI over `barrier_ruin`.
//!
//! Distributions and models are opaque heap handles released with their
//! `_free` function. Every fallible call returns a [`BrStatus`]; on failure
//! [`br_last_error`] describes the most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use barrier_ruin::asymptotics::{self, AsymptoticsError};
use barrier_ruin::harness::HarnessError;
use barrier_ruin::simulator::{self, Estimate, SimOptions, SimulationError, TruncationPolicy};
use barrier_ruin::{psi_asymptotes, DistributionError, HeavyTailDistribution, ModelError, Regime, RiskModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unstable = 3,
    UnorderedPremiums = 4,
    Domain = 5,
    Simulation = 6,
    Panic = 7,
}

/// Opaque claim or inter-arrival law.
pub struct BrDistribution {
    inner: HeavyTailDistribution,
}

/// Opaque two-company risk model.
pub struct BrModel {
    inner: RiskModel,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BrAsymptotes {
    /// 1 when the barriers cross (a < 1), 0 otherwise.
    pub two_dim: i32,
    pub psi_wedge: f64,
    pub psi_vee: f64,
    pub psi_times: f64,
    pub h: f64,
    pub j: f64,
    pub veraverbeke_first: f64,
    pub veraverbeke_second: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BrEstimate {
    pub value: f64,
    pub half_width_95: f64,
    pub residual_bias_bound: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BrPsiEstimates {
    pub wedge: BrEstimate,
    pub vee: BrEstimate,
    pub times: BrEstimate,
    pub first: BrEstimate,
    pub second: BrEstimate,
    pub replications: u64,
    pub censored: u64,
}

impl From<Estimate> for BrEstimate {
    fn from(e: Estimate) -> Self {
        Self {
            value: e.value,
            half_width_95: e.half_width_95,
            residual_bias_bound: e.residual_bias_bound,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

trait Status {
    fn status(&self) -> BrStatus;
}

impl Status for ModelError {
    fn status(&self) -> BrStatus {
        match self {
            ModelError::Unstable { .. } => BrStatus::Unstable,
            ModelError::UnorderedPremiums { .. } => BrStatus::UnorderedPremiums,
            _ => BrStatus::InvalidArgument,
        }
    }
}

impl Status for DistributionError {
    fn status(&self) -> BrStatus {
        BrStatus::InvalidArgument
    }
}

impl Status for AsymptoticsError {
    fn status(&self) -> BrStatus {
        BrStatus::Domain
    }
}

impl Status for SimulationError {
    fn status(&self) -> BrStatus {
        match self {
            SimulationError::InvalidPolicy(_) | SimulationError::InvalidRequest(_) => {
                BrStatus::InvalidArgument
            }
            _ => BrStatus::Simulation,
        }
    }
}

impl Status for HarnessError {
    fn status(&self) -> BrStatus {
        match self {
            HarnessError::Model(e) => e.status(),
            HarnessError::Simulation(e) => e.status(),
            _ => BrStatus::InvalidArgument,
        }
    }
}

fn fail<E: Status + std::fmt::Display>(e: E) -> BrStatus {
    set_error(e.to_string());
    e.status()
}

/// Runs `f`, mapping panics to [`BrStatus::Panic`].
fn guard(f: impl FnOnce() -> BrStatus) -> BrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            BrStatus::Panic
        }
    }
}

fn null() -> BrStatus {
    set_error("null pointer argument");
    BrStatus::NullPointer
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn emit_distribution(
    built: Result<HeavyTailDistribution, DistributionError>,
    out: *mut *mut BrDistribution,
) -> BrStatus {
    if out.is_null() {
        return null();
    }
    match built {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(BrDistribution { inner }));
            BrStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail(e)
        }
    }
}

/// Lomax law with tail `(1 + x/scale)^-alpha`; requires `alpha > 1`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_lomax(
    scale: f64,
    alpha: f64,
    out: *mut *mut BrDistribution,
) -> BrStatus {
    guard(|| emit_distribution(HeavyTailDistribution::lomax(scale, alpha), out))
}

/// Weibull law with `shape < 1`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_weibull(
    shape: f64,
    scale: f64,
    out: *mut *mut BrDistribution,
) -> BrStatus {
    guard(|| emit_distribution(HeavyTailDistribution::weibull(shape, scale), out))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_lognormal(
    location: f64,
    scale: f64,
    out: *mut *mut BrDistribution,
) -> BrStatus {
    guard(|| emit_distribution(HeavyTailDistribution::lognormal(location, scale), out))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_exponential(
    rate: f64,
    out: *mut *mut BrDistribution,
) -> BrStatus {
    guard(|| emit_distribution(HeavyTailDistribution::exponential(rate), out))
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_deterministic(
    value: f64,
    out: *mut *mut BrDistribution,
) -> BrStatus {
    guard(|| emit_distribution(HeavyTailDistribution::deterministic(value), out))
}

/// `P(X > x)`.
///
/// # Safety
/// `dist` must be a live handle and `out` valid for writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_tail(
    dist: *const BrDistribution,
    x: f64,
    out: *mut f64,
) -> BrStatus {
    guard(|| {
        let (Some(d), false) = (dist.as_ref(), out.is_null()) else {
            return null();
        };
        *out = d.inner.tail(x);
        BrStatus::Ok
    })
}

/// `∫_w^∞ P(X > u) du`.
///
/// # Safety
/// `dist` must be a live handle and `out` valid for writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_tail_integral(
    dist: *const BrDistribution,
    w: f64,
    out: *mut f64,
) -> BrStatus {
    guard(|| {
        let (Some(d), false) = (dist.as_ref(), out.is_null()) else {
            return null();
        };
        *out = d.inner.tail_integral(w);
        BrStatus::Ok
    })
}

/// # Safety
/// `dist` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn br_distribution_free(dist: *mut BrDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Builds a model from copies of the two laws; the handles stay owned by
/// the caller.
///
/// # Safety
/// `claim` and `interarrival` must be live handles and `out` valid for
/// writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_model_new(
    claim: *const BrDistribution,
    interarrival: *const BrDistribution,
    p1: f64,
    p2: f64,
    out: *mut *mut BrModel,
) -> BrStatus {
    guard(|| {
        let (Some(c), Some(i), false) = (claim.as_ref(), interarrival.as_ref(), out.is_null()) else {
            return null();
        };
        *out = ptr::null_mut();
        match RiskModel::new(c.inner.clone(), i.inner.clone(), p1, p2) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BrModel { inner }));
                BrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `model` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn br_model_free(model: *mut BrModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Drifts `m_i = p_i E[ζ] - E[σ]`.
///
/// # Safety
/// `model` must be a live handle and `m1`, `m2` valid for writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_model_drifts(model: *const BrModel, m1: *mut f64, m2: *mut f64) -> BrStatus {
    guard(|| {
        let (Some(m), false, false) = (model.as_ref(), m1.is_null(), m2.is_null()) else {
            return null();
        };
        *m1 = m.inner.m1();
        *m2 = m.inner.m2();
        BrStatus::Ok
    })
}

/// Asymptotes at reserves `(a K, K)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_asymptotes(
    model: *const BrModel,
    a: f64,
    k: f64,
    out: *mut BrAsymptotes,
) -> BrStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return null();
        };
        let inst = match m.inner.instance(a, k) {
            Ok(i) => i,
            Err(e) => return fail(e),
        };
        let r = psi_asymptotes(&m.inner, &inst);
        *out = BrAsymptotes {
            two_dim: i32::from(r.regime == Regime::TwoDim),
            psi_wedge: r.psi_wedge_asym,
            psi_vee: r.psi_vee_asym,
            psi_times: r.psi_times_asym,
            h: r.h,
            j: r.j,
            veraverbeke_first: r.veraverbeke_first,
            veraverbeke_second: r.veraverbeke_second,
        };
        BrStatus::Ok
    })
}

/// Crude Monte Carlo at `(a K, K)` under the default truncation policy.
/// `workers = 0` uses all available threads.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_estimate_psi(
    model: *const BrModel,
    a: f64,
    k: f64,
    replications: u64,
    seed: u64,
    workers: u32,
    out: *mut BrPsiEstimates,
) -> BrStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return null();
        };
        let inst = match m.inner.instance(a, k) {
            Ok(i) => i,
            Err(e) => return fail(e),
        };
        let policy = TruncationPolicy::default_for(&m.inner);
        let opts = SimOptions {
            workers: (workers > 0).then_some(workers as usize),
        };
        match simulator::estimate_psi(&m.inner, &inst, &policy, replications, seed, opts) {
            Ok(p) => {
                *out = BrPsiEstimates {
                    wedge: p.wedge.into(),
                    vee: p.vee.into(),
                    times: p.times.into(),
                    first: p.first.into(),
                    second: p.second.into(),
                    replications: p.replications,
                    censored: p.censored,
                };
                BrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `C_α` for `1 < alpha < 2`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn br_stable_norming_constant(alpha: f64, out: *mut f64) -> BrStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        match asymptotics::stable_norming_constant(alpha) {
            Ok(c) => {
                *out = c;
                BrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the `run` harness command on a config file; `*success` is set to 1
/// when every identity passed and censoring stayed below the limit.
///
/// # Safety
/// `config_path` must be a NUL-terminated string and `success` valid for
/// writes, or null.
#[no_mangle]
pub unsafe extern "C" fn br_harness_run(config_path: *const c_char, success: *mut i32) -> BrStatus {
    guard(|| {
        if config_path.is_null() || success.is_null() {
            return null();
        }
        let Ok(path) = std::ffi::CStr::from_ptr(config_path).to_str() else {
            set_error("config path is not UTF-8");
            return BrStatus::InvalidArgument;
        };
        match barrier_ruin::harness::run(path.as_ref(), &Default::default()) {
            Ok(s) => {
                *success = i32::from(s.success());
                BrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn br_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
