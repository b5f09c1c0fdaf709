//! C interface to `qcoherence`.
//!
//! States and channels cross the boundary as opaque handles built from JSON.
//! Every fallible function returns a [`QcStatus`]; on failure the reason is
//! available from [`qc_last_error_message`] on the same thread. Strings
//! returned by the library must be released with [`qc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcoherence::powers::{self, PowerKind};
use qcoherence::quantum::json::{state_from_json, state_to_json};
use qcoherence::quantum::relative_entropy;
use qcoherence::{coherence, CoherenceMeasure, DensityMatrix, Error, ExtendedReal, KrausChannel, OptimizerConfig};

/// Opaque density matrix.
pub struct QcState(DensityMatrix);

/// Opaque Kraus channel.
pub struct QcChannel(KrausChannel);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// JSON that does not parse or has the wrong shape.
    Malformed = 3,
    /// A matrix that is not Hermitian, unit-trace and positive semidefinite.
    InvalidState = 4,
    /// Kraus operators that are not trace preserving.
    InvalidChannel = 5,
    DimensionMismatch = 6,
    InvalidParameter = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcMeasure {
    RelEntropy = 0,
    L1 = 1,
}

impl From<QcMeasure> for CoherenceMeasure {
    fn from(m: QcMeasure) -> Self {
        match m {
            QcMeasure::RelEntropy => CoherenceMeasure::RelEntropy,
            QcMeasure::L1 => CoherenceMeasure::L1,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> QcStatus {
    match err {
        Error::InvalidState { .. } => QcStatus::InvalidState,
        Error::InvalidChannel { .. } => QcStatus::InvalidChannel,
        Error::Dimension(_) => QcStatus::DimensionMismatch,
        Error::InvalidParameter(_) => QcStatus::InvalidParameter,
        Error::Malformed(_) | Error::Json(_) | Error::Io(_) => QcStatus::Malformed,
    }
}

struct Failure(QcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(QcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(QcStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(QcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(QcStatus::NullPointer, format!("{what} is null")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON output has no nul bytes").into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses `{"dims": [...], "matrix": [[[re, im], ...], ...]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_state_from_json(json: *const c_char, out: *mut *mut QcState) -> QcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let rho = state_from_json(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(QcState(rho)));
        Ok(())
    })
}

/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qc_state_free(state: *mut QcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_state_to_json(state: *const QcState, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = c_string(state_to_json(&handle(state, "state")?.0));
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_state_dim(state: *const QcState, out: *mut usize) -> QcStatus {
    guard(|| {
        *out_ptr(out, "out")? = handle(state, "state")?.0.dim();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Accepts Kraus JSON (`{"dim_in", "dim_out", "kraus"}`) or a named spec
/// such as `{"name": "erasing", "dim": 2}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_channel_from_json(json: *const c_char, out: *mut *mut QcChannel) -> QcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let ch = qcoherence::zoo::parse_channel(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(QcChannel(ch)));
        Ok(())
    })
}

/// # Safety
/// `channel` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qc_channel_free(channel: *mut QcChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Applies `channel` to `state`, or to the first factor of a bipartite
/// `state` whose first dimension matches the channel input.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_channel_apply(
    channel: *const QcChannel,
    state: *const QcState,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let ch = &handle(channel, "channel")?.0;
        let rho = &handle(state, "state")?.0;
        let result = if rho.dim() == ch.dim_in() { ch.apply(rho)? } else { ch.apply_on_first(rho)? };
        *out = Box::into_raw(Box::new(QcState(result)));
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_coherence(state: *const QcState, measure: QcMeasure, out: *mut f64) -> QcStatus {
    guard(|| {
        *out_ptr(out, "out")? = coherence(measure.into(), &handle(state, "state")?.0);
        Ok(())
    })
}

/// `S(rho || sigma)` in bits; `+inf` when the support of `rho` is not
/// contained in that of `sigma`.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_relative_entropy(rho: *const QcState, sigma: *const QcState, out: *mut f64) -> QcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = match relative_entropy(&handle(rho, "rho")?.0, &handle(sigma, "sigma")?.0)? {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinity => f64::INFINITY,
        };
        Ok(())
    })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerRequest {
    power: String,
    #[serde(default = "default_measure")]
    measure: CoherenceMeasure,
    #[serde(default)]
    kmax: Option<usize>,
    #[serde(default)]
    restarts: Option<usize>,
    #[serde(default)]
    max_iters: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

fn default_measure() -> CoherenceMeasure {
    CoherenceMeasure::RelEntropy
}

fn power_json(ch: &KrausChannel, request: &str) -> Result<String, Error> {
    let req: PowerRequest = serde_json::from_str(request)?;
    let mut cfg = OptimizerConfig::default();
    if let Some(r) = req.restarts {
        cfg.restarts = r;
    }
    if let Some(m) = req.max_iters {
        cfg.max_iters = m;
    }
    if let Some(s) = req.seed {
        cfg.rng_seed = s;
    }
    cfg.validate()?;
    if req.power == "cgen" {
        return Ok(serde_json::to_string(&powers::cgen_report(ch, &cfg)?)?);
    }
    let kind: PowerKind = req.power.parse()?;
    let k_max = req.kmax.unwrap_or_else(|| powers::default_k_max(ch.dim_in()));
    let reports = powers::compute(kind, ch, req.measure, k_max, &cfg)?;
    let value = reports.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    Ok(serde_json::to_string(&serde_json::json!({ "value": value, "reports": reports }))?)
}

/// Computes a power described by `request`, e.g.
/// `{"power": "complete-decohering", "measure": "rel-entropy", "kmax": 2}`,
/// and writes the JSON report to `out`. Optional keys: `restarts`,
/// `max_iters`, `seed`.
///
/// # Safety
/// `channel` must be a live handle, `request` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_power(
    channel: *const QcChannel,
    request: *const c_char,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let doc = power_json(&handle(channel, "channel")?.0, text(request, "request")?)?;
        *out = c_string(doc);
        Ok(())
    })
}
