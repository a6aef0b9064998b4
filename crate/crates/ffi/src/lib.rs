//! C ABI over the `gluing` library.
//!
//! Families live behind the opaque [`GlFamily`] handle. Every fallible call
//! returns a [`GlStatus`]; on anything other than `GL_STATUS_OK` the message
//! is available from [`gl_last_error_message`] on the same thread. Strings
//! handed out by the library are released with [`gl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gluing::cli::check_family;
use gluing::finset::{dualize, fixture, Fixture};
use gluing::multipullback::{build_pullback, check_cocycle, repair, GluingFamily, RepairError};
use gluing::report::Status;
use gluing::specfile::{Spec, SpecFile, SpecOptions};

/// Result codes. The first four agree with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    CheckFailed = 1,
    InvalidInput = 2,
    HypothesisFailed = 3,
    NullPointer = 4,
    Internal = 5,
}

impl From<Status> for GlStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => GlStatus::Ok,
            Status::CheckFailed => GlStatus::CheckFailed,
            Status::InvalidInput => GlStatus::InvalidInput,
            Status::HypothesisFailed => GlStatus::HypothesisFailed,
        }
    }
}

/// A family of algebra surjections together with its check options.
pub struct GlFamily {
    family: GluingFamily,
    options: SpecOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Outcome = Result<GlStatus, (GlStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> GlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GlStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GlStatus, String)> {
    if p.is_null() {
        return Err((GlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (GlStatus::InvalidInput, format!("{what} is not valid UTF-8")))
}

unsafe fn family<'a>(f: *const GlFamily) -> Result<&'a GlFamily, (GlStatus, String)> {
    f.as_ref().ok_or((GlStatus::NullPointer, "family handle is null".to_string()))
}

fn check_out<T>(out: *mut T) -> Result<(), (GlStatus, String)> {
    if out.is_null() {
        Err((GlStatus::NullPointer, "output pointer is null".to_string()))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

fn invalid(e: impl ToString) -> (GlStatus, String) {
    (GlStatus::InvalidInput, e.to_string())
}

fn boxed(family: GluingFamily, options: SpecOptions) -> *mut GlFamily {
    Box::into_raw(Box::new(GlFamily { family, options }))
}

/// Parses a spec file held in `json`. Finite gluing data is dualized into
/// its family of function algebras.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_from_json(json: *const c_char, out: *mut *mut GlFamily) -> GlStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(json, "json")?;
        let file = SpecFile::from_json(text).map_err(invalid)?;
        let fam = match file.to_spec().map_err(invalid)? {
            Spec::Family(f) => f,
            Spec::Gluing(g) => dualize(&g).map_err(invalid)?,
        };
        *out = boxed(fam, file.options);
        Ok(GlStatus::Ok)
    })
}

/// Loads a built-in fixture by name, using chain length `chain_length` for
/// the finite gluings.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_from_fixture(
    name: *const c_char,
    chain_length: usize,
    out: *mut *mut GlFamily,
) -> GlStatus {
    guard(|| {
        check_out(out)?;
        let name = read_str(name, "name")?;
        if chain_length < 2 {
            return Err(invalid("chain length must be at least 2"));
        }
        let fam = match fixture(name, chain_length) {
            Some(Fixture::Family(f)) => f,
            Some(Fixture::Gluing(g)) => dualize(&g).map_err(invalid)?,
            None => return Err(invalid(format!("unknown fixture {name:?}"))),
        };
        let options = SpecOptions {
            chain_length: Some(chain_length),
            ..SpecOptions::default()
        };
        *out = boxed(fam, options);
        Ok(GlStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gl_family_free(f: *mut GlFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_piece_count(f: *const GlFamily, out: *mut usize) -> GlStatus {
    guard(|| {
        check_out(out)?;
        *out = family(f)?.family.len();
        Ok(GlStatus::Ok)
    })
}

/// Dimension of the multi-pullback over every piece.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_pullback_dim(f: *const GlFamily, out: *mut usize) -> GlStatus {
    guard(|| {
        check_out(out)?;
        let fam = &family(f)?.family;
        let all: Vec<usize> = (0..fam.len()).collect();
        let p = build_pullback(fam, &all).map_err(invalid)?;
        *out = p.dim();
        Ok(GlStatus::Ok)
    })
}

/// Evaluates the cocycle condition. Returns `GL_STATUS_OK` with the verdict
/// in `holds`; a family with non-surjective maps gives
/// `GL_STATUS_HYPOTHESIS_FAILED`.
///
/// # Safety
/// `f` must be a live handle and `holds` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_check_cocycle(f: *const GlFamily, holds: *mut bool) -> GlStatus {
    guard(|| {
        check_out(holds)?;
        let fam = &family(f)?.family;
        if !fam.is_surjective_family() {
            return Err((GlStatus::HypothesisFailed, "family has non-surjective maps".into()));
        }
        let report = check_cocycle(fam).map_err(invalid)?;
        *holds = report.overall;
        Ok(GlStatus::Ok)
    })
}

/// Runs every check and stores the JSON report in `report_json`. The return
/// value is the report's status.
///
/// # Safety
/// `f` must be a live handle and `report_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_check(f: *const GlFamily, report_json: *mut *mut c_char) -> GlStatus {
    guard(|| {
        check_out(report_json)?;
        let h = family(f)?;
        let report = check_family(&h.family, h.options.check_options(), "check", "ffi");
        *report_json = into_c_string(report.to_json());
        Ok(report.status.into())
    })
}

/// Enlarges the overlaps so that the cocycle condition holds without
/// changing the multi-pullback. The new family is written to `out`.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_repair(f: *const GlFamily, out: *mut *mut GlFamily) -> GlStatus {
    guard(|| {
        check_out(out)?;
        let h = family(f)?;
        match repair(&h.family, h.options.check_options().cap) {
            Ok(r) => {
                *out = boxed(r.family, h.options.clone());
                Ok(GlStatus::Ok)
            }
            Err(e @ (RepairError::ProjectionNotSurjective { .. } | RepairError::NotDistributive(_))) => {
                Err((GlStatus::HypothesisFailed, e.to_string()))
            }
            Err(e @ RepairError::Postcondition(_)) => Err((GlStatus::CheckFailed, e.to_string())),
            Err(e) => Err(invalid(e)),
        }
    })
}

/// Serializes the family as an algebra-family spec file.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_family_to_json(f: *const GlFamily, out: *mut *mut c_char) -> GlStatus {
    guard(|| {
        check_out(out)?;
        let h = family(f)?;
        *out = into_c_string(SpecFile::from_family(&h.family, h.options.clone()).to_json());
        Ok(GlStatus::Ok)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn gl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
