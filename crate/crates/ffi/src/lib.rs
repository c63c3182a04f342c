//! C ABI over the verification engine.
//!
//! Every object crosses the boundary as an opaque pointer that the caller
//! releases with the matching `*_free`. Functions return an [`HwStatus`]; on
//! anything but `HW_STATUS_OK` or `HW_STATUS_CHECKS_FAILED` a message is available from
//! [`hw_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hookwalg::cli::{report_for, ConfigError};
use hookwalg::report::{Report, Status};
use hookwalg::superspace::Config;
use hookwalg::wgens::{HookAlgebra, WGenId};

/// Result codes. The numeric values of the first three match the command
/// line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwStatus {
    Ok = 0,
    ChecksFailed = 1,
    ConfigError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// A finished run: its report and the JSON rendering.
pub struct HwReport {
    report: Report,
    json: CString,
    ids: Vec<CString>,
}

/// A hook-type W-algebra for fixed (m, n), symbolic in k.
pub struct HwHook {
    hook: HookAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn guard(f: impl FnOnce() -> HwStatus) -> HwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            HwStatus::Panic
        }
    }
}

/// The message of the last failing call on this thread; empty if none. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn hw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Runs the command line `args[0..argc]` (flags only, without a program
/// name) and stores the report in `*out`. Returns `HW_STATUS_OK` when every check
/// passed and `HW_STATUS_CHECKS_FAILED` when some failed; `*out` is set in both
/// cases.
///
/// # Safety
/// `args` must point to `argc` valid NUL-terminated strings and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hw_run(
    args: *const *const c_char,
    argc: usize,
    out: *mut *mut HwReport,
) -> HwStatus {
    guard(|| {
        if out.is_null() || (args.is_null() && argc > 0) {
            set_error("null pointer");
            return HwStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let mut argv = vec!["hookwalg".to_string()];
        for i in 0..argc {
            let p = *args.add(i);
            if p.is_null() {
                set_error(format!("argument {i} is null"));
                return HwStatus::NullPointer;
            }
            match CStr::from_ptr(p).to_str() {
                Ok(s) => argv.push(s.to_string()),
                Err(_) => {
                    set_error(format!("argument {i} is not UTF-8"));
                    return HwStatus::InvalidUtf8;
                }
            }
        }
        let report = match report_for(argv) {
            Ok((_, r)) => r,
            Err(ConfigError(msg)) => {
                set_error(msg);
                return HwStatus::ConfigError;
            }
        };
        let json = CString::new(report.to_json()).expect("JSON has no NUL");
        let ids = report
            .checks
            .iter()
            .map(|c| CString::new(c.id.clone()).expect("ids have no NUL"))
            .collect();
        let passed = report.all_passed();
        *out = Box::into_raw(Box::new(HwReport { report, json, ids }));
        if passed {
            HwStatus::Ok
        } else {
            HwStatus::ChecksFailed
        }
    })
}

/// The report as JSON, owned by the report.
///
/// # Safety
/// `r` must come from [`hw_run`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn hw_report_json(r: *const HwReport) -> *const c_char {
    match r.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

/// Number of checks in the report.
///
/// # Safety
/// `r` must come from [`hw_run`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn hw_report_len(r: *const HwReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.checks.len())
}

/// Number of failed checks in the report.
///
/// # Safety
/// `r` must come from [`hw_run`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn hw_report_failed(r: *const HwReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.totals.fail)
}

/// Id and status (0 pass, 1 fail, 2 skip) of check `index`. The id is owned
/// by the report.
///
/// # Safety
/// `r` must come from [`hw_run`]; `id` and `status` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hw_report_check(
    r: *const HwReport,
    index: usize,
    id: *mut *const c_char,
    status: *mut i32,
) -> HwStatus {
    let (Some(r), false, false) = (r.as_ref(), id.is_null(), status.is_null()) else {
        set_error("null pointer");
        return HwStatus::NullPointer;
    };
    let Some(c) = r.report.checks.get(index) else {
        set_error(format!("check {index} out of range"));
        return HwStatus::OutOfRange;
    };
    *id = r.ids[index].as_ptr();
    *status = match c.status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Skip => 2,
    };
    HwStatus::Ok
}

/// # Safety
/// `r` must come from [`hw_run`] or be null; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hw_report_free(r: *mut HwReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Builds the W-algebra generators for (m, n) with m > n ≥ 3.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hw_hook_new(m: usize, n: usize, out: *mut *mut HwHook) -> HwStatus {
    guard(|| {
        if out.is_null() {
            set_error("null pointer");
            return HwStatus::NullPointer;
        }
        *out = ptr::null_mut();
        match Config::new(m, n) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(HwHook {
                    hook: HookAlgebra::new(cfg),
                }));
                HwStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                HwStatus::ConfigError
            }
        }
    })
}

/// Number of strong generators.
///
/// # Safety
/// `h` must come from [`hw_hook_new`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn hw_hook_generator_count(h: *const HwHook) -> usize {
    h.as_ref().map_or(0, |h| WGenId::all(&h.hook.cfg).len())
}

/// W^{(level)}_{i,j} written in the PBW basis; release the string with
/// [`hw_string_free`].
///
/// # Safety
/// `h` must come from [`hw_hook_new`]; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hw_hook_generator(
    h: *const HwHook,
    level: u8,
    i: usize,
    j: usize,
    out: *mut *mut c_char,
) -> HwStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            set_error("null pointer");
            return HwStatus::NullPointer;
        };
        *out = ptr::null_mut();
        let id = match WGenId::new(&h.hook.cfg, level, i, j) {
            Ok(id) => id,
            Err(e) => {
                set_error(e.to_string());
                return HwStatus::OutOfRange;
            }
        };
        let state = h.hook.w_gen(id).expect("validated id");
        let text = CString::new(h.hook.display(&state)).expect("display has no NUL");
        *out = text.into_raw();
        HwStatus::Ok
    })
}

/// # Safety
/// `h` must come from [`hw_hook_new`] or be null; it must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn hw_hook_free(h: *mut HwHook) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn hw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstrs(args: &[&str]) -> (Vec<CString>, Vec<*const c_char>) {
        let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
        let ptrs = owned.iter().map(|c| c.as_ptr()).collect();
        (owned, ptrs)
    }

    #[test]
    fn run_kernel_suite() {
        let (_keep, argv) = cstrs(&["--m", "4", "--n", "3", "--suite", "kernel"]);
        let mut r = ptr::null_mut();
        unsafe {
            assert_eq!(hw_run(argv.as_ptr(), argv.len(), &mut r), HwStatus::Ok);
            assert_eq!(hw_report_len(r), 25);
            assert_eq!(hw_report_failed(r), 0);
            let mut id = ptr::null();
            let mut st = -1;
            assert_eq!(hw_report_check(r, 0, &mut id, &mut st), HwStatus::Ok);
            assert_eq!(CStr::from_ptr(id).to_str().unwrap(), "kernel/W1(1,1)");
            assert_eq!(st, 0);
            assert_eq!(
                hw_report_check(r, 25, &mut id, &mut st),
                HwStatus::OutOfRange
            );
            let json = CStr::from_ptr(hw_report_json(r)).to_str().unwrap();
            assert!(json.contains("\"totals\""));
            hw_report_free(r);
        }
    }

    #[test]
    fn config_error_sets_message() {
        let (_keep, argv) = cstrs(&["--m", "3", "--n", "3", "--suite", "kernel"]);
        let mut r = ptr::null_mut();
        unsafe {
            assert_eq!(
                hw_run(argv.as_ptr(), argv.len(), &mut r),
                HwStatus::ConfigError
            );
            assert!(r.is_null());
            let msg = CStr::from_ptr(hw_last_error()).to_str().unwrap();
            assert!(msg.contains("m > n"), "{msg}");
            assert_eq!(
                hw_run(ptr::null(), 0, ptr::null_mut()),
                HwStatus::NullPointer
            );
        }
    }

    #[test]
    fn hook_handle() {
        let mut h = ptr::null_mut();
        unsafe {
            assert_eq!(hw_hook_new(4, 3, &mut h), HwStatus::Ok);
            assert_eq!(hw_hook_generator_count(h), 25);
            let mut s = ptr::null_mut();
            assert_eq!(hw_hook_generator(h, 1, 1, 2, &mut s), HwStatus::Ok);
            assert!(!CStr::from_ptr(s).to_str().unwrap().is_empty());
            hw_string_free(s);
            assert_eq!(hw_hook_generator(h, 2, 1, 1, &mut s), HwStatus::OutOfRange);
            hw_hook_free(h);
            assert_eq!(hw_hook_new(3, 3, &mut h), HwStatus::ConfigError);
        }
    }
}
