//! C ABI over `kunneth-core`.
//!
//! Surfaces are opaque handles created by [`kn_surface_new`] and released with
//! [`kn_surface_free`]. Every fallible call returns a [`KnStatus`]; on failure
//! the message is available from [`kn_last_error`] until the next call on the
//! same thread. Strings handed out by the library must be released with
//! [`kn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kunneth_core::cli::parse_class;
use kunneth_core::cohomology::SurfaceModel;
use kunneth_core::diagonal::{blowup_chain, verify_dual};
use kunneth_core::ktheory::{euler_chi, expected_dim, mukai_pair, universal_obstruction};
use kunneth_core::Error;
use num_traits::ToPrimitive;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    Parse = 4,
    Parity = 5,
    SurfaceMismatch = 6,
    NotUnimodular = 7,
    /// An internal consistency check failed.
    Invariant = 8,
    /// The exact result does not fit in an `int64_t`.
    Overflow = 9,
    Panic = 10,
}

/// Opaque surface model.
pub struct KnSurface {
    model: SurfaceModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KnStatus {
    match e {
        Error::Validation(_) => KnStatus::Validation,
        Error::SurfaceMismatch(..) => KnStatus::SurfaceMismatch,
        Error::Parity(_) => KnStatus::Parity,
        Error::NotUnimodular(_) => KnStatus::NotUnimodular,
        Error::Invariant(_) => KnStatus::Invariant,
        Error::Parse(_) => KnStatus::Parse,
    }
}

struct Fail(KnStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KnStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KnStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            KnStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(KnStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(KnStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn surface<'a>(p: *const KnSurface) -> Result<&'a SurfaceModel, Fail> {
    p.as_ref().map(|s| &s.model).ok_or(Fail(KnStatus::NullPointer, "surface is null".into()))
}

fn write_i64(out: *mut i64, v: &num_bigint::BigInt) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(KnStatus::NullPointer, "output pointer is null".into()));
    }
    let v = v.to_i64().ok_or_else(|| Fail(KnStatus::Overflow, format!("{v} does not fit in int64")))?;
    unsafe { *out = v };
    Ok(())
}

fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(KnStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(KnStatus::Invariant, "string contains NUL".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Builds a surface from a built-in name (`P2`, `K3`, `Bl3(P2)`, ...) or a
/// JSON surface spec.
///
/// # Safety
/// `name_or_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kn_surface_new(name_or_json: *const c_char, out: *mut *mut KnSurface) -> KnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(KnStatus::NullPointer, "output pointer is null".into()));
        }
        let t = text(name_or_json, "surface")?.trim();
        let model =
            if t.starts_with('{') { SurfaceModel::from_spec_json(t)? } else { SurfaceModel::builtin(t)? };
        *out = Box::into_raw(Box::new(KnSurface { model }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`kn_surface_new`] and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn kn_surface_free(s: *mut KnSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Surface spec as JSON (round-trips through [`kn_surface_new`]).
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kn_surface_json(s: *const KnSurface, out: *mut *mut c_char) -> KnStatus {
    guard(|| {
        let s = surface(s)?;
        let json = serde_json::to_string(&s.to_spec()).map_err(|e| Fail(KnStatus::Invariant, e.to_string()))?;
        write_string(out, json)
    })
}

/// `χ(v)`. Classes are `"r,c1_1,..,c1_n,ch2"`, `"r,0,ch2"` or a JSON record.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kn_euler_chi(s: *const KnSurface, v: *const c_char, out: *mut i64) -> KnStatus {
    guard(|| {
        let s = surface(s)?;
        let v = parse_class(s, text(v, "class")?)?;
        write_i64(out, &euler_chi(s, &v)?)
    })
}

/// Mukai pairing `(v, w)`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kn_mukai_pair(
    s: *const KnSurface,
    v: *const c_char,
    w: *const c_char,
    out: *mut i64,
) -> KnStatus {
    guard(|| {
        let s = surface(s)?;
        let v = parse_class(s, text(v, "v")?)?;
        let w = parse_class(s, text(w, "w")?)?;
        write_i64(out, &mukai_pair(s, &v, &w)?)
    })
}

/// Expected dimension of the moduli space for `v`; `epsilon` is 1 or 2.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kn_expected_dim(
    s: *const KnSurface,
    v: *const c_char,
    epsilon: u8,
    out: *mut i64,
) -> KnStatus {
    guard(|| {
        let s = surface(s)?;
        let v = parse_class(s, text(v, "class")?)?;
        write_i64(out, &expected_dim(s, &v, epsilon)?)
    })
}

/// `gcd{ χ(v ∪ w) }` over the standard even basis; 1 means no obstruction.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kn_obstruction(s: *const KnSurface, v: *const c_char, out: *mut i64) -> KnStatus {
    guard(|| {
        let s = surface(s)?;
        let v = parse_class(s, text(v, "class")?)?;
        write_i64(out, &universal_obstruction(s, &v)?)
    })
}

/// Diagonal decomposition after `steps` blow-ups of a rational surface, as
/// JSON. Every step is re-verified; a failed check reports `Invariant`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kn_blowup_decomposition(
    s: *const KnSurface,
    steps: u32,
    out: *mut *mut c_char,
) -> KnStatus {
    guard(|| {
        let s = surface(s)?;
        let chain = blowup_chain(s, steps)?;
        let last = chain.last().ok_or_else(|| Fail(KnStatus::Invariant, "empty blow-up chain".into()))?;
        if !verify_dual(last)?.ok {
            return Err(Fail(KnStatus::Invariant, "decomposition is not dual".into()));
        }
        let json = last.to_json()?;
        write_string(out, json.to_string())
    })
}

/// # Safety
/// `p` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn kn_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn kn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
