//! C ABI over the supergaudin batch runner.
//!
//! A system is created from a JSON run configuration, queried, and checked; reports
//! come back as JSON strings owned by the library. Every call returns an [`SgStatus`];
//! the message of the most recent failure on the calling thread is available from
//! [`sg_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use supergaudin::cli::{build_system, run_system, RunConfig};
use supergaudin::gaudin::GaudinSystem;
use supergaudin::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The configuration was rejected.
    ConfigError = 3,
    /// A computation failed.
    ComputeError = 4,
    /// The report was produced but at least one check failed.
    ChecksFailed = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Opaque handle to a constructed system.
pub struct SgSystem {
    config: RunConfig,
    system: GaudinSystem,
    auto: Option<Value>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::ConfigError { .. } | Error::UnknownDemo(_) => SgStatus::ConfigError,
        _ => SgStatus::ComputeError,
    }
}

fn guarded(f: impl FnOnce() -> SgStatus) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == SgStatus::Ok {
                set_error("");
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SgStatus::Panic
        }
    }
}

/// Build a system from a JSON run configuration and store a new handle in
/// `*out_handle`. The handle must be released with [`sg_system_free`].
///
/// # Safety
/// `config_json` must be a valid NUL-terminated string and `out_handle` a valid
/// pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn sg_system_new(config_json: *const c_char, out_handle: *mut *mut SgSystem) -> SgStatus {
    guarded(|| {
        if config_json.is_null() || out_handle.is_null() {
            set_error("null argument");
            return SgStatus::NullPointer;
        }
        *out_handle = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(config_json).to_str() else {
            set_error("configuration is not valid UTF-8");
            return SgStatus::InvalidUtf8;
        };
        let built = RunConfig::from_json(text).and_then(|config| {
            let (system, auto) = build_system(&config)?;
            Ok(SgSystem { config, system, auto })
        });
        match built {
            Ok(h) => {
                *out_handle = Box::into_raw(Box::new(h));
                SgStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Release a handle. Null is accepted and ignored.
///
/// # Safety
/// `handle` must be null or a pointer returned by [`sg_system_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn sg_system_free(handle: *mut SgSystem) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Dimension of the tensor product module of the system.
///
/// # Safety
/// `handle` must be a live handle and `out_dim` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_system_module_dim(handle: *const SgSystem, out_dim: *mut usize) -> SgStatus {
    guarded(|| {
        if handle.is_null() || out_dim.is_null() {
            set_error("null argument");
            return SgStatus::NullPointer;
        }
        *out_dim = (*handle).system.dim();
        SgStatus::Ok
    })
}

/// Run the configured checks and store the JSON report in `*out_json`. The string
/// must be released with [`sg_string_free`]. Returns `CHECKS_FAILED` (with the
/// report still written) when any check failed.
///
/// # Safety
/// `handle` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_run_checks(handle: *const SgSystem, out_json: *mut *mut c_char) -> SgStatus {
    guarded(|| {
        if handle.is_null() || out_json.is_null() {
            set_error("null argument");
            return SgStatus::NullPointer;
        }
        *out_json = ptr::null_mut();
        let h = &*handle;
        match run_system(&h.system, &h.config, h.auto.clone(), false) {
            Ok(out) => {
                let text = serde_json::to_string(&out.document).expect("report serializes");
                *out_json = CString::new(text).expect("JSON has no NUL bytes").into_raw();
                if out.exit_code() == 0 {
                    SgStatus::Ok
                } else {
                    set_error("at least one check failed");
                    SgStatus::ChecksFailed
                }
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Release a string returned by the library. Null is accepted and ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message describing the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
