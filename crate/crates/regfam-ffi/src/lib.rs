//! C ABI over `regfam`.
//!
//! Every fallible call returns a [`RegfamStatus`]; on failure a message is
//! kept per thread and can be fetched with [`regfam_last_error`]. Strings
//! handed out by the library are released with [`regfam_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use regfam::cli::{self, CliError, Mode, Options};
use regfam::dsl::{self, ErrorKind, ParseError};
use regfam::index;
use regfam::normspace::{self, NormOptions, Space};
use regfam::{Family, FinSet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegfamStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Domain = 4,
    Inconclusive = 5,
    Panic = 6,
}

/// Parsed family; create with [`regfam_family_parse`].
pub struct RegfamFamily(Family);

/// Parsed normed space; create with [`regfam_space_parse`].
pub struct RegfamSpace(Space);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(RegfamStatus, String);

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Self {
        let status = match e.kind {
            ErrorKind::Syntax => RegfamStatus::Syntax,
            ErrorKind::Semantic => RegfamStatus::Domain,
        };
        Fail(status, e.to_string())
    }
}

fn domain(e: impl ToString) -> Fail {
    Fail(RegfamStatus::Domain, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RegfamStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RegfamStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RegfamStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(RegfamStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(RegfamStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn elems(p: *const u64, len: usize) -> Result<FinSet, Fail> {
    if len == 0 {
        return Ok(FinSet::empty());
    }
    if p.is_null() {
        return Err(Fail(RegfamStatus::NullPointer, "null element array".into()));
    }
    FinSet::new(slice::from_raw_parts(p, len).to_vec()).map_err(domain)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(RegfamStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(RegfamStatus::NullPointer, "null handle".into()))
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread, or NULL. The caller
/// owns the returned string.
#[no_mangle]
pub extern "C" fn regfam_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn regfam_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_family_parse(expr: *const c_char, out_family: *mut *mut RegfamFamily) -> RegfamStatus {
    guard(|| {
        let slot = out(out_family)?;
        let f = dsl::parse_family(text(expr)?)?;
        *slot = Box::into_raw(Box::new(RegfamFamily(f)));
        Ok(())
    })
}

/// # Safety
/// `family` must come from [`regfam_family_parse`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn regfam_family_free(family: *mut RegfamFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Membership of the strictly increasing array `elems_ptr[0..len]`.
///
/// # Safety
/// `family` must be a live handle, `elems_ptr` must point to `len` values and
/// `out_member` must be writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_family_member(
    family: *const RegfamFamily,
    elems_ptr: *const u64,
    len: usize,
    out_member: *mut bool,
) -> RegfamStatus {
    guard(|| {
        let f = handle(family)?;
        let e = elems(elems_ptr, len)?;
        *out(out_member)? = f.0.member(&e);
        Ok(())
    })
}

/// Least admissible successor of `E`; `*out_has` is false when `E` is maximal.
///
/// # Safety
/// As for [`regfam_family_member`].
#[no_mangle]
pub unsafe extern "C" fn regfam_family_min_extension(
    family: *const RegfamFamily,
    elems_ptr: *const u64,
    len: usize,
    out_has: *mut bool,
    out_next: *mut u64,
) -> RegfamStatus {
    guard(|| {
        let f = handle(family)?;
        let e = elems(elems_ptr, len)?;
        let next = f.0.min_extension(&e).map_err(domain)?;
        *out(out_has)? = next.is_some();
        *out(out_next)? = next.unwrap_or(0);
        Ok(())
    })
}

/// The index `ι(F)` in Cantor normal form, e.g. `w^2`.
///
/// # Safety
/// `family` must be a live handle and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_family_iota(family: *const RegfamFamily, out_text: *mut *mut c_char) -> RegfamStatus {
    guard(|| {
        let f = handle(family)?;
        *out(out_text)? = into_c(index::iota(&f.0).to_string());
        Ok(())
    })
}

/// The rank of `E` in the family, in Cantor normal form.
///
/// # Safety
/// As for [`regfam_family_member`], with `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_family_rank(
    family: *const RegfamFamily,
    elems_ptr: *const u64,
    len: usize,
    out_text: *mut *mut c_char,
) -> RegfamStatus {
    guard(|| {
        let f = handle(family)?;
        let e = elems(elems_ptr, len)?;
        let r = index::rank(&f.0, &e).map_err(domain)?;
        *out(out_text)? = into_c(r.to_string());
        Ok(())
    })
}

/// # Safety
/// `expr` must be a NUL-terminated string; `out_space` must be writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_space_parse(expr: *const c_char, out_space: *mut *mut RegfamSpace) -> RegfamStatus {
    guard(|| {
        let slot = out(out_space)?;
        let s = dsl::parse_space(text(expr)?)?;
        *slot = Box::into_raw(Box::new(RegfamSpace(s)));
        Ok(())
    })
}

/// # Safety
/// `space` must come from [`regfam_space_parse`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn regfam_space_free(space: *mut RegfamSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Exact norm of a vector written as `[pos:num/den,...]`, returned as `p/q`.
/// A `support_limit` of 0 selects the default.
///
/// # Safety
/// `space` must be a live handle, `vector` NUL-terminated, `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_space_norm(
    space: *const RegfamSpace,
    vector: *const c_char,
    support_limit: usize,
    out_text: *mut *mut c_char,
) -> RegfamStatus {
    guard(|| {
        let s = handle(space)?;
        let x = dsl::parse_vector(text(vector)?)?;
        let mut opts = NormOptions::default();
        if support_limit > 0 {
            opts.support_limit = support_limit;
        }
        let v = normspace::norm(&s.0, &x, opts).map_err(domain)?;
        *out(out_text)? = into_c(v.to_string());
        Ok(())
    })
}

/// Runs one command-line style command, e.g. `iota S[2]`. Output lines are
/// joined with newlines; `records` selects JSON lines. The status mirrors the
/// command line exit codes.
///
/// # Safety
/// `line` must be NUL-terminated and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn regfam_run(line: *const c_char, records: bool, out_text: *mut *mut c_char) -> RegfamStatus {
    guard(|| {
        let slot = out(out_text)?;
        let opts = Options { mode: if records { Mode::Records } else { Mode::Table }, ..Options::default() };
        let cmd = cli::parse_command(text(line)?, 1).map_err(cli_fail)?;
        let recs = cli::run(&cmd, &opts).map_err(cli_fail)?;
        let lines: Vec<String> = recs.iter().map(|r| r.render(opts.mode)).collect();
        *slot = into_c(lines.join("\n"));
        Ok(())
    })
}

fn cli_fail(e: CliError) -> Fail {
    let status = match e.exit_code() {
        2 => RegfamStatus::Syntax,
        3 => RegfamStatus::Inconclusive,
        _ => RegfamStatus::Domain,
    };
    Fail(status, e.to_string())
}
