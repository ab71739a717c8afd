//! C interface to the `zassenhaus` library.
//!
//! Groups are opaque handles created from a JSON group spec and released
//! with [`zs_group_free`]. Every fallible function returns a [`ZsStatus`];
//! the message of the last failure on the calling thread is available from
//! [`zs_last_error`]. Strings returned through out-parameters are owned by
//! the caller and must be released with [`zs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zassenhaus::group::{build_group, parse_word, zassenhaus_recursive, FiniteGroup, GroupLike, GroupSpec};
use zassenhaus::pairing::WitnessOptions;
use zassenhaus::rep::code_to_vector;
use zassenhaus::verifier::{run_on_group, HarnessConfig, Separation, Separator};
use zassenhaus::Error;

/// Result codes. Values 3 to 6 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    TooLarge = 4,
    UnknownId = 5,
    Io = 6,
    InvalidArgument = 7,
    InvariantViolation = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Opaque group handle.
pub struct ZsGroup {
    spec: GroupSpec,
    group: FiniteGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ZsStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => ZsStatus::Parse,
        Error::TooLarge(_) => ZsStatus::TooLarge,
        Error::UnknownId(_) => ZsStatus::UnknownId,
        Error::Io(_) => ZsStatus::Io,
        Error::InvariantViolation(_) => ZsStatus::InvariantViolation,
        _ => ZsStatus::InvalidArgument,
    }
}

/// Runs `f`, recording its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (ZsStatus, String)>) -> ZsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ZsStatus::Panic
        }
    }
}

fn lib(e: Error) -> (ZsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (ZsStatus, String) {
    (ZsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (ZsStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (ZsStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn group_ref<'a>(g: *const ZsGroup) -> Result<&'a ZsGroup, (ZsStatus, String)> {
    g.as_ref().ok_or_else(null)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (ZsStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn zs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a group from a JSON spec such as
/// `{"kind":"magnus","p":2,"d":2,"m":4}`.
///
/// # Safety
/// `spec_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_group_new(spec_json: *const c_char, out: *mut *mut ZsGroup) -> ZsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let text = read_str(spec_json)?;
        let spec: GroupSpec = serde_json::from_str(text).map_err(|e| (ZsStatus::Parse, e.to_string()))?;
        let group = build_group(&spec).map_err(lib)?;
        *out = Box::into_raw(Box::new(ZsGroup { spec, group }));
        Ok(())
    })
}

/// Releases a group handle. NULL is ignored.
///
/// # Safety
/// `g` must come from [`zs_group_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zs_group_free(g: *mut ZsGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_group_order(g: *const ZsGroup, out: *mut usize) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        *out.as_mut().ok_or_else(null)? = g.group.order();
        Ok(())
    })
}

/// Hex digest of the multiplication table, as a new string.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_group_digest(g: *const ZsGroup, out: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        write_string(out, g.group.digest().to_string())
    })
}

/// Orders of `G_(1), G_(2), …` down to the trivial term. Writes the number
/// of terms to `len`; if `cap` is too small nothing else is written and
/// `BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `g` must be a live handle, `orders` valid for `cap` writes, `len` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_filtration_orders(
    g: *const ZsGroup,
    orders: *mut usize,
    cap: usize,
    len: *mut usize,
) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        let o = zassenhaus_recursive(&g.group).orders();
        *len.as_mut().ok_or_else(null)? = o.len();
        if o.len() > cap {
            return Err((ZsStatus::BufferTooSmall, format!("{} terms", o.len())));
        }
        if orders.is_null() {
            return Err(null());
        }
        std::slice::from_raw_parts_mut(orders, o.len()).copy_from_slice(&o);
        Ok(())
    })
}

/// Element index of a word such as `[x1,x2]*x1^2`.
///
/// # Safety
/// `g` must be a live handle, `word` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_group_element(g: *const ZsGroup, word: *const c_char, out: *mut usize) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        let x = parse_word(&g.group, read_str(word)?).map_err(lib)?;
        *out.as_mut().ok_or_else(null)? = x;
        Ok(())
    })
}

/// Shortest word for an element, as a new string.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_group_label(g: *const ZsGroup, element: usize, out: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        if element >= g.group.order() {
            return Err((ZsStatus::InvalidArgument, format!("no element {element}")));
        }
        write_string(out, g.group.label(element))
    })
}

/// Looks for a rank-`n` representation nontrivial on `element` and writes
/// a JSON object with `outcome` (`found`, `impossible`, `inconclusive`)
/// and, when found, `depth`, `route`, `image` and `representation`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_separate(g: *const ZsGroup, element: usize, n: usize, out: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        let mut sep = Separator::new(&g.group, n, WitnessOptions::default()).map_err(lib)?;
        let value = match sep.separate(element).map_err(lib)? {
            Separation::Impossible => serde_json::json!({ "outcome": "impossible" }),
            Separation::Inconclusive { depth, catalog_dim } => {
                serde_json::json!({ "outcome": "inconclusive", "depth": depth, "catalog_dim": catalog_dim })
            }
            Separation::Found { rep, depth, route } => {
                let len = rep.system().total_dim();
                let image = code_to_vector(rep.system().field(), len, rep.image_code(element)).entries();
                serde_json::json!({
                    "outcome": "found",
                    "depth": depth,
                    "route": route,
                    "image": image,
                    "representation": rep.to_record(),
                })
            }
        };
        write_string(out, value.to_string())
    })
}

/// Runs the full verification at rank `n` with default catalog settings,
/// writes the report (without timings) as JSON and the report's exit code
/// (0 established, 2 inconclusive, 1 falsified) to `verdict`.
///
/// # Safety
/// `g` must be a live handle; `report` and `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_verify(
    g: *const ZsGroup,
    n: usize,
    report: *mut *mut c_char,
    verdict: *mut c_int,
) -> ZsStatus {
    guard(|| {
        let g = group_ref(g)?;
        let verdict = verdict.as_mut().ok_or_else(null)?;
        let config = HarnessConfig::new(g.spec.clone(), n);
        let r = run_on_group(&g.group, &g.spec.name(), Some(&g.spec), &config).map_err(lib)?;
        write_string(report, r.to_canonical_json())?;
        *verdict = r.exit_code();
        Ok(())
    })
}
