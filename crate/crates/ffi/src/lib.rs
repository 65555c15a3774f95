//! C ABI over the equicat JSON entry points.
//!
//! Every call returns an [`EquicatStatus`]. On success the result is written
//! to an out-parameter as an opaque [`EquicatResult`] that owns the JSON text
//! and the verdict; release it with [`equicat_result_free`]. On failure the
//! message is available from [`equicat_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use equicat::api::{self, ApiError, Output};
use equicat::checks::{CheckError, SizeCaps};
use equicat::constructions::QfMode;
use equicat::simplicial::Verdict;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquicatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, or JSON describing an invalid object.
    InvalidInput = 3,
    /// Unknown check id, verb, subgroup or point.
    UnknownName = 4,
    SizeCap = 5,
    /// The computation itself failed, for example on a category with loops.
    Computation = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

/// The verdict carried by a result.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquicatVerdict {
    /// The command reports data rather than deciding anything.
    None = 0,
    Pass = 1,
    Fail = 2,
    Inconclusive = 3,
}

/// Owned JSON output of one call.
pub struct EquicatResult {
    json: CString,
    verdict: EquicatVerdict,
}

/// Size caps for instance generation and inputs.
pub struct EquicatCaps {
    caps: SizeCaps,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &ApiError) -> EquicatStatus {
    match e {
        ApiError::Io(_)
        | ApiError::Cat(_)
        | ApiError::Equivariant(_)
        | ApiError::GSet(_)
        | ApiError::Bounds(_) => EquicatStatus::InvalidInput,
        ApiError::UnknownVerb { .. }
        | ApiError::UnknownSubgroup(_)
        | ApiError::UnknownPoint(_)
        | ApiError::NoSuchTransformation(_) => EquicatStatus::UnknownName,
        ApiError::Check(CheckError::UnknownCheck(_)) => EquicatStatus::UnknownName,
        ApiError::Check(CheckError::SizeCap(_)) => EquicatStatus::SizeCap,
        ApiError::Check(CheckError::BadCaps(_)) => EquicatStatus::InvalidInput,
        ApiError::Fibrancy(_) | ApiError::Simplicial(_) | ApiError::Hom(_) => {
            EquicatStatus::Computation
        }
    }
}

/// Borrows a required C string.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, EquicatStatus> {
    if p.is_null() {
        set_error("required string argument is NULL".into());
        return Err(EquicatStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        EquicatStatus::InvalidUtf8
    })
}

unsafe fn optional_text<'a>(p: *const c_char) -> Result<Option<&'a str>, EquicatStatus> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p).map(Some)
    }
}

unsafe fn caps_of(caps: *const EquicatCaps) -> Result<SizeCaps, EquicatStatus> {
    if caps.is_null() {
        SizeCaps::from_env().map_err(|e| {
            set_error(e.to_string());
            EquicatStatus::InvalidInput
        })
    } else {
        Ok((*caps).caps)
    }
}

/// Runs `f` behind the panic boundary and stores its output in `*out`.
unsafe fn call(
    out: *mut *mut EquicatResult,
    f: impl FnOnce() -> Result<Output, EquicatStatus>,
) -> EquicatStatus {
    if out.is_null() {
        set_error("out pointer is NULL".into());
        return EquicatStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let result = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(_) => {
            set_error("internal panic".into());
            return EquicatStatus::Panic;
        }
    };
    match result {
        Ok(o) => {
            let verdict = match o.verdict {
                None => EquicatVerdict::None,
                Some(Verdict::Pass) => EquicatVerdict::Pass,
                Some(Verdict::Fail) => EquicatVerdict::Fail,
                Some(Verdict::Inconclusive) => EquicatVerdict::Inconclusive,
            };
            let json = CString::new(o.value.to_string()).expect("JSON text has no NUL bytes");
            *out = Box::into_raw(Box::new(EquicatResult { json, verdict }));
            EquicatStatus::Ok
        }
        Err(s) => s,
    }
}

fn api_err(e: ApiError) -> EquicatStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// The message of the last failed call on this thread, or NULL. Valid until
/// the next call on this thread.
#[no_mangle]
pub extern "C" fn equicat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn equicat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default caps, overridden by `EQUICAT_SIZE_CAPS` when set and valid.
#[no_mangle]
pub extern "C" fn equicat_caps_new() -> *mut EquicatCaps {
    Box::into_raw(Box::new(EquicatCaps {
        caps: SizeCaps::from_env().unwrap_or_default(),
    }))
}

/// Sets one cap: `key` is `group`, `index`, `vertex` or `j`.
///
/// # Safety
/// `caps` must come from [`equicat_caps_new`]; `key` must be a C string.
#[no_mangle]
pub unsafe extern "C" fn equicat_caps_set(
    caps: *mut EquicatCaps,
    key: *const c_char,
    value: usize,
) -> EquicatStatus {
    if caps.is_null() {
        set_error("caps is NULL".into());
        return EquicatStatus::NullPointer;
    }
    let key = match text(key) {
        Ok(k) => k,
        Err(s) => return s,
    };
    match SizeCaps::parse(&format!("{key}={value}")) {
        Ok(parsed) => {
            let c = &mut (*caps).caps;
            match key {
                "group" => c.group_order = parsed.group_order,
                "index" => c.index_objects = parsed.index_objects,
                "vertex" => c.vertex_objects = parsed.vertex_objects,
                _ => c.j_size = parsed.j_size,
            }
            EquicatStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            EquicatStatus::UnknownName
        }
    }
}

/// # Safety
/// `caps` must come from [`equicat_caps_new`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn equicat_caps_free(caps: *mut EquicatCaps) {
    if !caps.is_null() {
        drop(Box::from_raw(caps));
    }
}

/// Runs check `id` on `size` instances drawn from `seed`. `caps` may be NULL.
///
/// # Safety
/// `id` must be a C string, `caps` NULL or a live caps handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn equicat_run_check(
    id: *const c_char,
    seed: u64,
    size: usize,
    caps: *const EquicatCaps,
    out: *mut *mut EquicatResult,
) -> EquicatStatus {
    call(out, || {
        let (id, caps) = (text(id)?, caps_of(caps)?);
        api::check(id, seed, size, &caps).map_err(api_err)
    })
}

/// Evaluates a connectivity estimate (`bm`, `dual-bm`, `suspension`,
/// `submanifold`, `configuration`, `holim`, `restriction`, `mapspace`).
///
/// # Safety
/// `verb` and `input` must be C strings, `caps` NULL or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn equicat_bounds(
    verb: *const c_char,
    input: *const c_char,
    caps: *const EquicatCaps,
    out: *mut *mut EquicatResult,
) -> EquicatStatus {
    call(out, || {
        let (verb, input, caps) = (text(verb)?, text(input)?, caps_of(caps)?);
        api::bounds(verb, input, &caps).map_err(api_err)
    })
}

/// Builds a categorical model (`grothendieck`, `fixed-grothendieck`, `hom`,
/// `matching`). `subgroup` and `units` (comma-separated) may be NULL.
///
/// # Safety
/// String arguments must be C strings or NULL where allowed; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn equicat_build(
    verb: *const c_char,
    input: *const c_char,
    subgroup: *const c_char,
    units: *const c_char,
    caps: *const EquicatCaps,
    out: *mut *mut EquicatResult,
) -> EquicatStatus {
    call(out, || {
        let (verb, input, caps) = (text(verb)?, text(input)?, caps_of(caps)?);
        let subgroup = optional_text(subgroup)?;
        let units: Vec<String> = optional_text(units)?.map_or(Vec::new(), |u| {
            u.split(',').map(|s| s.trim().to_string()).collect()
        });
        api::build(verb, input, subgroup, &units, &caps).map_err(api_err)
    })
}

/// Reedy quasi-fibrancy through degree `max_dim`, checked for every
/// subgroup when `equivariant` is true.
///
/// # Safety
/// `input` must be a C string, `caps` NULL or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn equicat_quasi_fibrant(
    input: *const c_char,
    max_dim: usize,
    equivariant: bool,
    caps: *const EquicatCaps,
    out: *mut *mut EquicatResult,
) -> EquicatStatus {
    call(out, || {
        let (input, caps) = (text(input)?, caps_of(caps)?);
        let mode = if equivariant {
            QfMode::Equivariant
        } else {
            QfMode::Plain
        };
        api::quasi_fibrant(input, max_dim, mode, &caps).map_err(api_err)
    })
}

/// Total-fibre models; `phi < 0` reports every transformation up to the
/// library limit.
///
/// # Safety
/// `input` must be a C string, `caps` NULL or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn equicat_total_fiber(
    input: *const c_char,
    phi: i64,
    caps: *const EquicatCaps,
    out: *mut *mut EquicatResult,
) -> EquicatStatus {
    call(out, || {
        let (input, caps) = (text(input)?, caps_of(caps)?);
        let phi = usize::try_from(phi).ok();
        api::total_fiber(input, phi, &caps).map_err(api_err)
    })
}

/// Nerve homology (`nerve`, `equivalence`) through degree `max_dim`.
///
/// # Safety
/// `verb` and `input` must be C strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn equicat_homology(
    verb: *const c_char,
    input: *const c_char,
    max_dim: usize,
    out: *mut *mut EquicatResult,
) -> EquicatStatus {
    call(out, || {
        let (verb, input) = (text(verb)?, text(input)?);
        api::homology_cmd(verb, input, max_dim).map_err(api_err)
    })
}

/// The JSON text of a result, valid until the result is freed.
///
/// # Safety
/// `result` must be a live result or NULL.
#[no_mangle]
pub unsafe extern "C" fn equicat_result_json(result: *const EquicatResult) -> *const c_char {
    if result.is_null() {
        return ptr::null();
    }
    (*result).json.as_ptr()
}

/// # Safety
/// `result` must be a live result or NULL.
#[no_mangle]
pub unsafe extern "C" fn equicat_result_verdict(result: *const EquicatResult) -> EquicatVerdict {
    if result.is_null() {
        return EquicatVerdict::None;
    }
    (*result).verdict
}

/// # Safety
/// `result` must come from this library or be NULL, and is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn equicat_result_free(result: *mut EquicatResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
