//! C ABI for the bgroup library.
//!
//! Handles are opaque pointers owned by this library; every `*_free` must be
//! called exactly once per handle. Strings returned through `char**` are
//! NUL-terminated UTF-8 owned by the library; release them with
//! [`bg_string_free`]. On any non-OK status, [`bg_last_error`] returns a
//! fresh copy of the error message.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::time::Duration;

use bgroup::decomp::{enumerate_decompositions, partition_spectrum, DecompLimits};
use bgroup::error::Error;
use bgroup::groups::{near_iso_equal, BGroup};
use bgroup::json;
use bgroup::partitions::{family_c, family_s, hook_report, PartitionFamily};
use bgroup::search::{search_realizer, SearchBudget, SearchMode};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BgStatus {
    BgOk = 0,
    BgErrInput = 1,
    BgErrValidation = 2,
    BgErrResource = 3,
    BgErrNull = 4,
    BgErrUtf8 = 5,
    BgErrInternal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BgStatus {
    match err {
        Error::Input(_) | Error::Parse { .. } | Error::Json(_) | Error::Io(_) => {
            BgStatus::BgErrInput
        }
        Error::Validation(_) => BgStatus::BgErrValidation,
        Error::Resource { .. } => BgStatus::BgErrResource,
    }
}

fn fail(err: Error) -> BgStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Opaque group handle.
pub struct BgGroup {
    inner: BGroup,
}

/// Opaque partition family handle.
pub struct BgFamily {
    inner: PartitionFamily,
}

unsafe fn group_ref<'a>(ptr: *const BgGroup) -> Option<&'a BGroup> {
    unsafe { ptr.as_ref().map(|g| &g.inner) }
}

unsafe fn family_ref<'a>(ptr: *const BgFamily) -> Option<&'a PartitionFamily> {
    unsafe { ptr.as_ref().map(|f| &f.inner) }
}

unsafe fn str_in<'a>(ptr: *const c_char) -> Result<&'a str, BgStatus> {
    if ptr.is_null() {
        set_error("null string argument".into());
        return Err(BgStatus::BgErrNull);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        BgStatus::BgErrUtf8
    })
}

fn string_out(s: String, out: *mut *mut c_char) -> BgStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained NUL".into());
            return BgStatus::BgErrInternal;
        }
    };
    unsafe { *out = c.into_raw() };
    BgStatus::BgOk
}

/// Last error message for this thread, or NULL. Free with [`bg_string_free`].
#[no_mangle]
pub extern "C" fn bg_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.clone().into_raw())
            .unwrap_or(ptr::null_mut())
    })
}

/// Frees a string returned by this library. NULL is a no-op.
#[no_mangle]
pub extern "C" fn bg_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Parses a group JSON document into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_group_parse_json(
    json_text: *const c_char,
    out: *mut *mut BgGroup,
) -> BgStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    let text = match unsafe { str_in(json_text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match json::group_from_json(text) {
        Ok(group) => {
            unsafe { *out = Box::into_raw(Box::new(BgGroup { inner: group })) };
            BgStatus::BgOk
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `group` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bg_group_free(group: *mut BgGroup) {
    if !group.is_null() {
        unsafe { drop(Box::from_raw(group)) };
    }
}

/// Rank of the group, or -1 on NULL.
///
/// # Safety
/// `group` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bg_group_rank(group: *const BgGroup) -> i32 {
    match unsafe { group_ref(group) } {
        Some(g) => g.rank() as i32,
        None => -1,
    }
}

/// Serializes the group back to its JSON document.
///
/// # Safety
/// `group` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_group_to_json(
    group: *const BgGroup,
    out: *mut *mut c_char,
) -> BgStatus {
    let Some(g) = (unsafe { group_ref(group) }) else {
        set_error("null group handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    string_out(json::group_to_json(g), out)
}

/// Invariants report: rank, regulator index, per-type ranks and mu values.
///
/// # Safety
/// `group` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_group_invariants_json(
    group: *const BgGroup,
    out: *mut *mut c_char,
) -> BgStatus {
    let Some(g) = (unsafe { group_ref(group) }) else {
        set_error("null group handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    let doc = json::invariants_doc(&g.invariant_data());
    string_out(serde_json::to_string_pretty(&doc).unwrap(), out)
}

/// Partition spectrum report, optionally with witness decompositions.
///
/// # Safety
/// `group` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_group_spectrum_json(
    group: *const BgGroup,
    include_decompositions: bool,
    out: *mut *mut c_char,
) -> BgStatus {
    let Some(g) = (unsafe { group_ref(group) }) else {
        set_error("null group handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    let limits = DecompLimits::default();
    let data = g.invariant_data();
    let spectrum = match partition_spectrum(&data, &limits) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let decs = if include_decompositions {
        match enumerate_decompositions(&data, &limits) {
            Ok(d) => Some(d),
            Err(e) => return fail(e),
        }
    } else {
        None
    };
    let doc = json::spectrum_doc(&spectrum, decs.as_deref());
    string_out(serde_json::to_string_pretty(&doc).unwrap(), out)
}

/// Near-isomorphism test: equal regulator shape and equal mu maps.
///
/// # Safety
/// Both handles must be live; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_group_near_iso(
    a: *const BgGroup,
    b: *const BgGroup,
    out: *mut bool,
) -> BgStatus {
    let (Some(a), Some(b)) = (unsafe { group_ref(a) }, unsafe { group_ref(b) }) else {
        set_error("null group handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    unsafe { *out = near_iso_equal(&a.invariant_data(), &b.invariant_data()) };
    BgStatus::BgOk
}

/// Parses family text: partitions like `4,2` or `2^3,1^2`, separated by
/// newlines or semicolons, or a JSON array of arrays.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_family_parse(
    text: *const c_char,
    out: *mut *mut BgFamily,
) -> BgStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    let text = match unsafe { str_in(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match json::family_from_str(text) {
        Ok(fam) => {
            unsafe { *out = Box::into_raw(Box::new(BgFamily { inner: fam })) };
            BgStatus::BgOk
        }
        Err(e) => fail(e),
    }
}

/// Builds S(n,k).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_family_s(n: u32, k: u32, out: *mut *mut BgFamily) -> BgStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    match family_s(n, k) {
        Ok(fam) => {
            unsafe { *out = Box::into_raw(Box::new(BgFamily { inner: fam })) };
            BgStatus::BgOk
        }
        Err(e) => fail(e),
    }
}

/// Builds C(n,k).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_family_c(n: u32, k: u32, out: *mut *mut BgFamily) -> BgStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    match family_c(n, k) {
        Ok(fam) => {
            unsafe { *out = Box::into_raw(Box::new(BgFamily { inner: fam })) };
            BgStatus::BgOk
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `family` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bg_family_free(family: *mut BgFamily) {
    if !family.is_null() {
        unsafe { drop(Box::from_raw(family)) };
    }
}

/// Family as a JSON array of arrays.
///
/// # Safety
/// `family` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_family_to_json(
    family: *const BgFamily,
    out: *mut *mut c_char,
) -> BgStatus {
    let Some(f) = (unsafe { family_ref(family) }) else {
        set_error("null family handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    let doc: Vec<&[u32]> = f.iter().map(|p| p.parts()).collect();
    string_out(serde_json::to_string(&doc).unwrap(), out)
}

/// Hook condition: max part + max length <= n + 1. Writes 1 or 0.
///
/// # Safety
/// `family` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_family_hooked(family: *const BgFamily, out: *mut bool) -> BgStatus {
    let Some(f) = (unsafe { family_ref(family) }) else {
        set_error("null family handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    match hook_report(f) {
        Ok(rep) => {
            unsafe { *out = rep.hooked };
            BgStatus::BgOk
        }
        Err(e) => fail(e),
    }
}

/// Bounded search for a group whose spectrum contains (`equals_mode` = false)
/// or equals (`equals_mode` = true) the family. Writes the verdict report as
/// JSON; the witness group document is inlined when realized.
///
/// # Safety
/// `family` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_search_json(
    family: *const BgFamily,
    equals_mode: bool,
    max_primes: u32,
    max_exponent: u32,
    max_types: u32,
    time_cap_secs: u64,
    out: *mut *mut c_char,
) -> BgStatus {
    let Some(f) = (unsafe { family_ref(family) }) else {
        set_error("null family handle".into());
        return BgStatus::BgErrNull;
    };
    if out.is_null() {
        set_error("null output pointer".into());
        return BgStatus::BgErrNull;
    }
    let budget = SearchBudget {
        max_primes: max_primes as usize,
        max_exponent,
        max_types: if max_types == 0 {
            f.n() as usize
        } else {
            max_types as usize
        },
        time_cap: Duration::from_secs(time_cap_secs),
    };
    let mode = if equals_mode {
        SearchMode::Equals
    } else {
        SearchMode::Contains
    };
    match search_realizer(f, mode, &budget) {
        Ok(verdict) => {
            let doc = json::verdict_doc(&verdict, None, true);
            string_out(serde_json::to_string_pretty(&doc).unwrap(), out)
        }
        Err(e) => fail(e),
    }
}
