//! C ABI over `heartloc`: parse a problem (or load a shipped example), run a
//! command on it, read back the report text.
//!
//! Every handle is opaque and owned by the caller until passed to the
//! matching `_free`. Functions return an [`HlStatus`]; on anything other
//! than `HL_STATUS_OK` or `HL_STATUS_VERIFICATION_FAILED`, [`hl_last_error`] describes
//! the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heartloc::commands;
use heartloc::context::Config;
use heartloc::error::Error;
use heartloc::fixtures;
use heartloc::problem::{Problem, ProblemFile};
use heartloc::report::exit_code;

/// Outcome of a call. The first four agree with the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    Inconclusive = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A parsed and built problem.
pub struct HlProblem {
    inner: Problem,
}

/// The rendered report of one command.
pub struct HlReport {
    text: CString,
    passed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(e: Error) -> HlStatus {
    let code = exit_code(&Err(e.clone()));
    set_error(e.to_string());
    match code {
        1 => HlStatus::VerificationFailed,
        3 => HlStatus::Inconclusive,
        _ => HlStatus::InvalidInput,
    }
}

/// Runs `f`, turning a panic into `HL_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> HlStatus) -> HlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        HlStatus::Panic
    })
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, HlStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(HlStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        HlStatus::InvalidUtf8
    })
}

fn config(seed: u64) -> Config {
    Config { seed, ..Config::default() }
}

/// Message for the last failed call on this thread. Valid until the next
/// call on the same thread; never null.
#[no_mangle]
pub extern "C" fn hl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a problem file. `field` overrides the file's characteristic
/// unless it is 0.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_problem_parse(source: *const c_char, field: u32, seed: u64, out: *mut *mut HlProblem) -> HlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return HlStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let source = match text(source) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let field = (field != 0).then_some(field);
        match ProblemFile::parse(source).and_then(|pf| pf.build(field, config(seed))) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(HlProblem { inner }));
                HlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Loads a shipped example (`"ex61"` or `"ex62"`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_problem_demo(name: *const c_char, out: *mut *mut HlProblem) -> HlStatus {
    guard(|| {
        let name = match text(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match fixtures::by_name(name) {
            Some(src) => {
                let src = CString::new(src).expect("fixtures contain no NUL");
                hl_problem_parse(src.as_ptr(), 0, Config::default().seed, out)
            }
            None => {
                set_error(format!("no example `{name}`"));
                HlStatus::InvalidInput
            }
        }
    })
}

/// Number of indecomposables in the problem's atlas; 0 for null.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_problem_atlas_len(problem: *const HlProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.inner.ctx.len())
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_problem_free(problem: *mut HlProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Runs a whitespace-separated command line such as
/// `"verify-main-theorem C D Cprime"`. A report is produced both for
/// `HL_STATUS_OK` and `HL_STATUS_VERIFICATION_FAILED`; otherwise `*out` is null.
///
/// # Safety
/// `problem` must be a live handle, `command` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_run(problem: *const HlProblem, command: *const c_char, out: *mut *mut HlReport) -> HlStatus {
    guard(|| {
        if out.is_null() || problem.is_null() {
            set_error("null handle or output pointer");
            return HlStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let line = match text(command) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let mut words = line.split_whitespace();
        let Some(name) = words.next() else {
            set_error("empty command");
            return HlStatus::InvalidInput;
        };
        let args: Vec<String> = words.map(String::from).collect();
        match commands::run(&(*problem).inner, name, &args, false) {
            Ok(output) => {
                let rendered = if name == "export-dot" {
                    output.dots.iter().map(|d| d.1.as_str()).collect()
                } else {
                    output.report.render()
                };
                let passed = output.report.passed();
                let text = CString::new(rendered.replace('\0', " ")).unwrap_or_default();
                *out = Box::into_raw(Box::new(HlReport { text, passed }));
                if passed {
                    HlStatus::Ok
                } else {
                    HlStatus::VerificationFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// The report text; valid while the report lives. Null for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_report_text(report: *const HlReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// Whether every clause passed; false for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_report_passed(report: *const HlReport) -> bool {
    report.as_ref().is_some_and(|r| r.passed)
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_report_free(report: *mut HlReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
