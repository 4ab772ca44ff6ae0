//! C ABI over formring. Every object is an opaque handle freed by its own `fr_*_free`; every fallible call
//! returns an `FrStatus` and writes results through out-pointers. Strings returned to the caller are
//! NUL-terminated UTF-8 and must be released with `fr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use formring::error::Error;
use formring::gens::{eval, eval_on_vector, Word};
use formring::group::{parse_group, FGroup};
use formring::matrix::Mat;
use formring::reduce::{bfs_closure, reduce_isotropic_unimodular, Answer, BfsCaps, MembershipOracle};
use formring::ring::El;

/// Status of a call. Library errors are 100 + their kind.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    OutOfRange = 4,
    Ring = 101,
    Parse = 102,
    MultiplierInvalid = 103,
    InvalidFormParameter = 104,
    LocalizationZero = 105,
    InvalidIdeal = 106,
    Descriptor = 107,
    Singular = 108,
    Dimension = 109,
    Constraint = 110,
    Pairing = 111,
    Certification = 112,
    Precondition = 113,
    Unsupported = 114,
    ResourceLimit = 115,
    Io = 116,
}

/// Answer of an elementary-membership query.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrAnswer {
    No = 0,
    Yes = 1,
    Unknown = 2,
}

pub struct FrGroup(FGroup);
pub struct FrMatrix(Mat<El>);
pub struct FrWord(Word<El>);
pub struct FrOracle(MembershipOracle);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FrStatus {
    use FrStatus::*;
    match e {
        Error::Ring(_) => Ring,
        Error::Parse { .. } => Parse,
        Error::MultiplierInvalid(_) => MultiplierInvalid,
        Error::InvalidFormParameter(_) => InvalidFormParameter,
        Error::LocalizationZero(_) => LocalizationZero,
        Error::InvalidIdeal => InvalidIdeal,
        Error::Descriptor(_) => Descriptor,
        Error::Singular => Singular,
        Error::Dimension(_) => Dimension,
        Error::Constraint(_) => Constraint,
        Error::Pairing(_) => Pairing,
        Error::Certification(_) => Certification,
        Error::Precondition(_) => Precondition,
        Error::Unsupported(_) => Unsupported,
        Error::ResourceLimit(_) => ResourceLimit,
        Error::Io(_) => Io,
    }
}

enum Fail {
    Status(FrStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FrStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            FrStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(FrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(FrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

fn to_c(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| Fail::Status(FrStatus::InvalidUtf8, "string contains NUL".into()))
}

/// Message of the last failed call on this thread; empty after a success. Valid until the next call.
#[no_mangle]
pub extern "C" fn fr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a group spec such as `zmod:5:lambda=4/quad:3` or `zmod:4:lambda=3/herm:4:a=0`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fr_group_parse(spec: *const c_char, out: *mut *mut FrGroup) -> FrStatus {
    guard(|| {
        let g = parse_group(text(spec, "spec")?)?;
        put(out, FrGroup(g))
    })
}

/// # Safety
/// `g` must come from `fr_group_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn fr_group_free(g: *mut FrGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Matrix size 2n, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fr_group_dim(g: *const FrGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.dim())
}

/// Number of ring elements; elements are the indices 0..size.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fr_group_ring_size(g: *const FrGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.ring().size())
}

/// Canonical spec string of the group; free with `fr_string_free`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fr_group_spec(g: *const FrGroup, out: *mut *mut c_char) -> FrStatus {
    guard(|| {
        let g = get(g, "group")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = to_c(g.0.spec())?;
        Ok(())
    })
}

/// A 2n×2n matrix from `len` = (2n)² row-major element indices.
///
/// # Safety
/// `data` must point to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn fr_matrix_new(g: *const FrGroup, data: *const u32, len: usize, out: *mut *mut FrMatrix) -> FrStatus {
    guard(|| {
        let g = get(g, "group")?;
        if data.is_null() {
            return Err(null("data"));
        }
        let d = g.0.dim();
        if len != d * d {
            return Err(Error::Dimension(format!("expected {} entries, got {len}", d * d)).into());
        }
        let xs = std::slice::from_raw_parts(data, len);
        if let Some(x) = xs.iter().find(|&&x| x as usize >= g.0.ring().size()) {
            return Err(Fail::Status(FrStatus::OutOfRange, format!("element index {x} out of range")));
        }
        put(out, FrMatrix(Mat { rows: d, cols: d, data: xs.to_vec() }))
    })
}

/// # Safety
/// `m` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fr_matrix_free(m: *mut FrMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Copy the row-major entries into `buf` (capacity `len`); returns the entry count, or 0 if `buf` is
/// too small or a pointer is null.
///
/// # Safety
/// `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn fr_matrix_data(m: *const FrMatrix, buf: *mut u32, len: usize) -> usize {
    let Some(m) = m.as_ref() else { return 0 };
    if buf.is_null() || len < m.0.data.len() {
        return 0;
    }
    ptr::copy_nonoverlapping(m.0.data.as_ptr(), buf, m.0.data.len());
    m.0.data.len()
}

/// Whether the matrix preserves the group's form (and the quadratic condition, for quadratic groups).
///
/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_group_is_member(g: *const FrGroup, m: *const FrMatrix, out: *mut bool) -> FrStatus {
    guard(|| {
        let (g, m) = (get(g, "group")?, get(m, "matrix")?);
        if m.0.rows != g.0.dim() {
            return Err(Error::Dimension("matrix size does not match the group".into()).into());
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = g.0.is_member(&m.0);
        Ok(())
    })
}

/// Parse a JSON word (list of {family, i, j, payload[, inverse]} with 1-based indices).
///
/// # Safety
/// `json` must be a NUL-terminated string; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn fr_word_from_json(g: *const FrGroup, json: *const c_char, out: *mut *mut FrWord) -> FrStatus {
    guard(|| {
        let g = get(g, "group")?;
        let v: serde_json::Value = serde_json::from_str(text(json, "json")?).map_err(Error::from)?;
        put(out, FrWord(formring::io::word_from_json(&g.0, &v)?))
    })
}

/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_word_to_json(g: *const FrGroup, w: *const FrWord, out: *mut *mut c_char) -> FrStatus {
    guard(|| {
        let (g, w) = (get(g, "group")?, get(w, "word")?);
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = to_c(formring::io::word_to_json(&g.0, &w.0).to_string())?;
        Ok(())
    })
}

/// # Safety
/// `w` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fr_word_free(w: *mut FrWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of letters, or 0 for a null handle.
///
/// # Safety
/// `w` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn fr_word_len(w: *const FrWord) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_word_eval(g: *const FrGroup, w: *const FrWord, out: *mut *mut FrMatrix) -> FrStatus {
    guard(|| {
        let (g, w) = (get(g, "group")?, get(w, "word")?);
        put(out, FrMatrix(eval(&g.0, &w.0)?))
    })
}

/// A word carrying the isotropic unimodular vector `v` (length 2n) to e_2n.
///
/// # Safety
/// `v` must point to `len` readable values; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn fr_reduce_vector(g: *const FrGroup, v: *const u32, len: usize, out: *mut *mut FrWord) -> FrStatus {
    guard(|| {
        let g = get(g, "group")?;
        if v.is_null() {
            return Err(null("vector"));
        }
        if len != g.0.dim() {
            return Err(Error::Dimension(format!("expected {} entries, got {len}", g.0.dim())).into());
        }
        let v = std::slice::from_raw_parts(v, len);
        if let Some(x) = v.iter().find(|&&x| x as usize >= g.0.ring().size()) {
            return Err(Fail::Status(FrStatus::OutOfRange, format!("element index {x} out of range")));
        }
        let r = reduce_isotropic_unimodular(&g.0, v)?;
        if eval_on_vector(&g.0, &r.word, v)? != g.0.basis(g.0.dim() - 1) {
            return Err(Error::Certification("reduction word does not verify".into()).into());
        }
        put(out, FrWord(r.word))
    })
}

/// Enumerate the elementary group breadth-first, keeping at most `cap` elements.
///
/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_bfs(g: *const FrGroup, cap: usize, out: *mut *mut FrOracle) -> FrStatus {
    guard(|| {
        let g = get(g, "group")?;
        put(out, FrOracle(bfs_closure(&g.0, BfsCaps::elements(cap))))
    })
}

/// Greedy constructive oracle: answers yes with a witness, or unknown.
///
/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_constructive(g: *const FrGroup, max_steps: usize, out: *mut *mut FrOracle) -> FrStatus {
    guard(|| {
        let g = get(g, "group")?;
        put(out, FrOracle(MembershipOracle::constructive(&g.0, max_steps)))
    })
}

/// # Safety
/// `o` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_free(o: *mut FrOracle) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Enumerated elements (0 outside BFS mode).
///
/// # Safety
/// `o` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_size(o: *const FrOracle) -> usize {
    o.as_ref().map_or(0, |o| o.0.size())
}

/// Whether the enumeration finished within its cap.
///
/// # Safety
/// `o` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_complete(o: *const FrOracle) -> bool {
    o.as_ref().is_some_and(|o| o.0.complete())
}

/// Elementary membership of `m`. On yes, `witness` (if not null) receives a word evaluating to `m`, or
/// null when the mode gives none.
///
/// # Safety
/// Handles must be live; `answer` must be valid; `witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_contains(
    o: *const FrOracle,
    m: *const FrMatrix,
    answer: *mut FrAnswer,
    witness: *mut *mut FrWord,
) -> FrStatus {
    guard(|| {
        let (o, m) = (get(o, "oracle")?, get(m, "matrix")?);
        if answer.is_null() {
            return Err(null("answer"));
        }
        if !witness.is_null() {
            *witness = ptr::null_mut();
        }
        *answer = match o.0.contains(&m.0) {
            Answer::Yes(w) => {
                if let (Some(w), false) = (w, witness.is_null()) {
                    *witness = Box::into_raw(Box::new(FrWord(w)));
                }
                FrAnswer::Yes
            }
            Answer::No => FrAnswer::No,
            Answer::Unknown => FrAnswer::Unknown,
        };
        Ok(())
    })
}

/// Run a named property suite and return its JSON report; `verdict` gets 0 (pass), 1 (fail) or 2
/// (unknowns only).
///
/// # Safety
/// Strings must be NUL-terminated; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_run_suite(
    name: *const c_char,
    group: *const c_char,
    seed: u64,
    cases: usize,
    verdict: *mut i32,
    report: *mut *mut c_char,
) -> FrStatus {
    guard(|| {
        let cfg = formring::suites::SuiteConfig { seed, cases, ..Default::default() };
        let rep = formring::suites::run_suite(text(name, "name")?, text(group, "group")?, &cfg)?;
        if verdict.is_null() || report.is_null() {
            return Err(null("output pointer"));
        }
        *verdict = rep.exit_code();
        *report = to_c(serde_json::to_string(&rep).map_err(Error::from)?)?;
        Ok(())
    })
}
