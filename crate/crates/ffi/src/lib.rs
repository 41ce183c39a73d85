//! C ABI for the premia pricing library.
//!
//! Handles are opaque pointers created and freed here; every function
//! returns a `premia_status` and writes results through out-pointers.
//! On any non-OK status, `premia_last_error_message` returns a
//! human-readable description (thread-local, valid until the next
//! failing call on the same thread).

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use premia::{
    distortion_premium, identify, robust_premium_r1, robust_premium_rp, wasserstein, BasisKind,
    Distortion, Distribution, EmpiricalDistribution, Error, RobustStatus,
};

/// Result of every ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum premia_status {
    PREMIA_OK = 0,
    PREMIA_NULL_POINTER = 1,
    PREMIA_INVALID_ARGUMENT = 2,
    PREMIA_PARSE = 3,
    PREMIA_NUMERIC = 4,
    PREMIA_UNBOUNDED = 5,
}

use premia_status::*;

/// Opaque sorted loss sample.
pub struct premia_sample(EmpiricalDistribution);

/// Opaque distortion density.
pub struct premia_distortion(Distortion);

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("").expect("empty message"));
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("no interior nul");
    });
}

fn fail(e: &Error) -> premia_status {
    set_error(&e.to_string());
    match e {
        Error::Parse { .. } | Error::Io(_) => PREMIA_PARSE,
        Error::Domain(_) | Error::Config(_) | Error::InvalidDistortion(_) => {
            PREMIA_INVALID_ARGUMENT
        }
        Error::Unbounded(_) => PREMIA_UNBOUNDED,
        _ => PREMIA_NUMERIC,
    }
}

fn null_pointer() -> premia_status {
    set_error("null pointer argument");
    PREMIA_NULL_POINTER
}

fn guard(f: impl FnOnce() -> premia_status) -> premia_status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PREMIA_NUMERIC
        }
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn premia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Build a sample handle from `len` finite loss values.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` must be
/// writable. The handle must be released with `premia_sample_free`.
#[no_mangle]
pub unsafe extern "C" fn premia_sample_new(
    values: *const c_double,
    len: usize,
    out: *mut *mut premia_sample,
) -> premia_status {
    if values.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let slice = std::slice::from_raw_parts(values, len);
        match EmpiricalDistribution::new(slice.to_vec()) {
            Ok(sample) => {
                *out = Box::into_raw(Box::new(premia_sample(sample)));
                PREMIA_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a sample handle. Null is a no-op.
///
/// # Safety
/// `sample` must be a handle from `premia_sample_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn premia_sample_free(sample: *mut premia_sample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Parse a distortion from its JSON description, e.g.
/// `{"kind":"avar","alpha":0.9}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
/// The handle must be released with `premia_distortion_free`.
#[no_mangle]
pub unsafe extern "C" fn premia_distortion_from_json(
    json: *const c_char,
    out: *mut *mut premia_distortion,
) -> premia_status {
    if json.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("distortion JSON is not valid UTF-8");
                return PREMIA_INVALID_ARGUMENT;
            }
        };
        match serde_json_parse(text) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(premia_distortion(h)));
                PREMIA_OK
            }
            Err(e) => fail(&e),
        }
    })
}

fn serde_json_parse(text: &str) -> Result<Distortion, Error> {
    serde_json::from_str(text).map_err(|e| Error::InvalidDistortion(e.to_string()))
}

/// Release a distortion handle. Null is a no-op.
///
/// # Safety
/// `distortion` must be a handle from `premia_distortion_from_json`, not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn premia_distortion_free(distortion: *mut premia_distortion) {
    if !distortion.is_null() {
        drop(Box::from_raw(distortion));
    }
}

/// Premium of the sample under the distortion.
///
/// # Safety
/// All pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn premia_distortion_premium(
    sample: *const premia_sample,
    distortion: *const premia_distortion,
    out: *mut c_double,
) -> premia_status {
    if sample.is_null() || distortion.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = distortion_premium(&(*sample).0, &(*distortion).0).value;
        PREMIA_OK
    })
}

/// Left-continuous quantile of the sample at probability `level`.
///
/// # Safety
/// All pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn premia_quantile(
    sample: *const premia_sample,
    level: c_double,
    out: *mut c_double,
) -> premia_status {
    if sample.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| match (*sample).0.quantile(level) {
        Ok(x) => {
            *out = x;
            PREMIA_OK
        }
        Err(e) => fail(&e),
    })
}

/// Transport distance of the given order between two samples.
///
/// # Safety
/// All pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn premia_wasserstein(
    a: *const premia_sample,
    b: *const premia_sample,
    order: c_double,
    out: *mut c_double,
) -> premia_status {
    if a.is_null() || b.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let fa: Distribution = (*a).0.clone().into();
        let fb: Distribution = (*b).0.clone().into();
        match wasserstein(&fa, &fb, order) {
            Ok(d) => {
                *out = d;
                PREMIA_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Worst-case premium over a transport ball of radius `epsilon` and
/// order `order` around the sample. `out_attainment` receives 0 when a
/// worst case exists, 1 when the value is only a supremum, 2 when it is
/// infinite (then `out_value` is +inf).
///
/// # Safety
/// All pointers must be valid; `out_value` and `out_attainment` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn premia_robust_premium(
    sample: *const premia_sample,
    distortion: *const premia_distortion,
    epsilon: c_double,
    order: c_double,
    out_value: *mut c_double,
    out_attainment: *mut c_int,
) -> premia_status {
    if sample.is_null() || distortion.is_null() || out_value.is_null() || out_attainment.is_null()
    {
        return null_pointer();
    }
    guard(|| {
        let dist: Distribution = (*sample).0.clone().into();
        let h = &(*distortion).0;
        let result = if order == 1.0 {
            robust_premium_r1(&dist, h, epsilon)
        } else {
            robust_premium_rp(&dist, h, epsilon, order)
        };
        match result {
            Ok(r) => {
                *out_value = r.value;
                *out_attainment = match r.status {
                    RobustStatus::Attained => 0,
                    RobustStatus::ApproachableNotAttained => 1,
                    RobustStatus::Unbounded => 2,
                };
                PREMIA_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Fit a nondecreasing step density on `subintervals` pieces to observed
/// prices. `losses` is row-major with `contracts` rows of `sample_size`
/// losses; `prices` has one price per contract. Writes `subintervals`
/// coefficients to `out_lambda` and the squared residual to
/// `out_objective`.
///
/// # Safety
/// `losses` must hold `contracts * sample_size` doubles, `prices` must
/// hold `contracts` doubles, `out_lambda` must have room for
/// `subintervals` doubles, and `out_objective` must be writable.
#[no_mangle]
pub unsafe extern "C" fn premia_identify_step(
    losses: *const c_double,
    contracts: usize,
    sample_size: usize,
    prices: *const c_double,
    subintervals: usize,
    out_lambda: *mut c_double,
    out_objective: *mut c_double,
) -> premia_status {
    if losses.is_null() || prices.is_null() || out_lambda.is_null() || out_objective.is_null() {
        return null_pointer();
    }
    guard(|| {
        let flat = std::slice::from_raw_parts(losses, contracts * sample_size);
        let samples: Vec<Vec<f64>> = flat.chunks(sample_size).map(<[f64]>::to_vec).collect();
        let observed = std::slice::from_raw_parts(prices, contracts);
        match identify(&samples, observed, BasisKind::Step, subintervals) {
            Ok(fit) => {
                let out = std::slice::from_raw_parts_mut(out_lambda, subintervals);
                out.copy_from_slice(&fit.coefficients);
                *out_objective = fit.objective;
                PREMIA_OK
            }
            Err(e) => fail(&e),
        }
    })
}
