//! C ABI for the counterpoint engine.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free` function. Every fallible call returns a [`CpStatus`];
//! on failure `cp_last_error_message` describes the error for the calling
//! thread. Strings returned through out-parameters are owned by the caller and
//! released with [`cp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use counterpoint::continuum::{self, CirclePoint, Rational};
use counterpoint::extension::{extended_symmetries, Embedding, LinkageMode};
use counterpoint::report::{self, ExpectedTable, ExtensionMode};
use counterpoint::symmetry::{symmetries_at, CountingKernel, SuccessorSet};
use counterpoint::{Dichotomy, Error, Modulus};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidModulus = 2,
    NotInvertible = 3,
    InvalidDichotomy = 4,
    NotStrong = 5,
    NotConsonant = 6,
    InvalidEmbedding = 7,
    ModulusTooLarge = 8,
    NoCandidates = 9,
    InvalidPoint = 10,
    Parse = 11,
    IndexOutOfRange = 12,
    Internal = 13,
}

/// Linkage rule between a symmetry and its extensions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpLinkage {
    Interval = 0,
    Fiber = 1,
    Full = 2,
}

impl From<CpLinkage> for LinkageMode {
    fn from(l: CpLinkage) -> Self {
        match l {
            CpLinkage::Interval => LinkageMode::Interval,
            CpLinkage::Fiber => LinkageMode::Fiber,
            CpLinkage::Full => LinkageMode::Full,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpExtensionMode {
    Chained = 0,
    Direct = 1,
}

/// A dichotomy of `Z_n`.
pub struct CpDichotomy {
    inner: Dichotomy,
}

/// Maximal symmetries of one interval with their admitted successors.
pub struct CpSuccessorSet {
    inner: SuccessorSet,
}

/// One counterpoint symmetry `e^(ε·t)(u + ε·u·v)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CpSymmetry {
    pub t: u32,
    pub u: u32,
    pub v: u32,
}

/// A dual number `cantus + ε·interval`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CpDualNumber {
    pub cantus: u32,
    pub interval: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::InvalidModulus(_) | Error::ModulusMismatch { .. } => CpStatus::InvalidModulus,
        Error::NotInvertible { .. } => CpStatus::NotInvertible,
        Error::InvalidDichotomy(_) => CpStatus::InvalidDichotomy,
        Error::NotStrong(_) => CpStatus::NotStrong,
        Error::NotConsonant { .. } => CpStatus::NotConsonant,
        Error::InvalidEmbedding(_) | Error::Tower { .. } => CpStatus::InvalidEmbedding,
        Error::ModulusTooLarge { .. } => CpStatus::ModulusTooLarge,
        Error::EmptyCandidates(_) => CpStatus::NoCandidates,
        Error::InvalidPoint(_) => CpStatus::InvalidPoint,
        Error::Parse(_) => CpStatus::Parse,
    }
}

enum Fail {
    Core(Error),
    Null(&'static str),
    Range(usize),
    Internal(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CpStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return CpStatus::Ok,
        Ok(Err(Fail::Core(e))) => (status_of(&e), e.to_string()),
        Ok(Err(Fail::Null(what))) => (CpStatus::NullPointer, format!("{what} is null")),
        Ok(Err(Fail::Range(i))) => (CpStatus::IndexOutOfRange, format!("index {i} out of range")),
        Ok(Err(Fail::Internal(m))) => (CpStatus::Internal, m),
        Err(_) => (CpStatus::Internal, "internal panic".to_string()),
    };
    set_error(msg);
    status
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail::Internal(e.to_string()))?;
    write(out, c.into_raw(), "out")
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Fail> {
    serde_json::to_string(value).map_err(|e| Fail::Internal(e.to_string()))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a dichotomy from `len` residues.
///
/// # Safety
/// `members` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_new(
    modulus: u32,
    members: *const u32,
    len: usize,
    out: *mut *mut CpDichotomy,
) -> CpStatus {
    guard(|| {
        if members.is_null() && len > 0 {
            return Err(Fail::Null("members"));
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(members, len)
        };
        let d = Dichotomy::new(Modulus::new(modulus)?, slice.iter().copied())?;
        write(out, Box::into_raw(Box::new(CpDichotomy { inner: d })), "out")
    })
}

/// Parses `"0,2,3"` or a preset name such as `"U0"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_parse(modulus: u32, text: *const c_char, out: *mut *mut CpDichotomy) -> CpStatus {
    guard(|| {
        let d = Dichotomy::parse(Modulus::new(modulus)?, c_str(text, "text")?)?;
        write(out, Box::into_raw(Box::new(CpDichotomy { inner: d })), "out")
    })
}

/// # Safety
/// `d` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_free(d: *mut CpDichotomy) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_modulus(d: *const CpDichotomy) -> u32 {
    d.as_ref().map_or(0, |d| d.inner.modulus().get())
}

/// Writes whether the dichotomy has exactly one quasipolarity.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_is_strong(d: *const CpDichotomy, out: *mut bool) -> CpStatus {
    guard(|| {
        let d = deref(d, "dichotomy")?;
        write(out, d.inner.find_quasipolarities().strong, "out")
    })
}

/// Writes the polarity `e^translation·linear`; fails with `NOT_STRONG`
/// otherwise.
///
/// # Safety
/// `d` must be a live handle; both out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_polarity(
    d: *const CpDichotomy,
    translation: *mut u32,
    linear: *mut u32,
) -> CpStatus {
    guard(|| {
        let p = deref(d, "dichotomy")?.inner.polarity()?;
        write(translation, p.translation(), "translation")?;
        write(linear, p.linear(), "linear")
    })
}

/// Quasipolarity scan as JSON.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_dichotomy_analyze_json(d: *const CpDichotomy, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        let d = deref(d, "dichotomy")?;
        write_string(out, to_json(&d.inner.find_quasipolarities())?)
    })
}

/// Counterpoint symmetries of `cantus + ε·interval`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_symmetries(
    d: *const CpDichotomy,
    cantus: u32,
    interval: u32,
    out: *mut *mut CpSuccessorSet,
) -> CpStatus {
    guard(|| {
        let d = deref(d, "dichotomy")?;
        let set = symmetries_at(&CountingKernel::new(&d.inner), cantus, interval)?;
        write(out, Box::into_raw(Box::new(CpSuccessorSet { inner: set })), "out")
    })
}

/// Extended symmetries of `0 + ε·interval` along `x ↦ factor·x` from
/// `source` into `target`.
///
/// # Safety
/// `source` and `target` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_extend(
    source: *const CpDichotomy,
    target: *const CpDichotomy,
    factor: u32,
    interval: u32,
    linkage: CpLinkage,
    out: *mut *mut CpSuccessorSet,
) -> CpStatus {
    guard(|| {
        let source = deref(source, "source")?.inner.clone();
        let target = deref(target, "target")?.inner.clone();
        let parents = counterpoint::counterpoint_symmetries(&source, interval)?;
        let embedding = Embedding::new(factor, source, target)?;
        let step = extended_symmetries(&parents.symmetries, &embedding, interval, linkage.into())?;
        write(
            out,
            Box::into_raw(Box::new(CpSuccessorSet { inner: step.extended })),
            "out",
        )
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_free(s: *mut CpSuccessorSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Maximal `|g(K[ε]) ∩ K[ε]|`, or 0 for a null handle.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_cardinality(s: *const CpSuccessorSet) -> u64 {
    s.as_ref().map_or(0, |s| s.inner.cardinality)
}

/// Interval the set was computed for (in the target ring for extensions).
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_interval(s: *const CpSuccessorSet) -> u32 {
    s.as_ref().map_or(0, |s| s.inner.interval)
}

/// Number of maximal symmetries.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_symmetry_count(s: *const CpSuccessorSet) -> usize {
    s.as_ref().map_or(0, |s| s.inner.symmetries.len())
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_symmetry(
    s: *const CpSuccessorSet,
    index: usize,
    out: *mut CpSymmetry,
) -> CpStatus {
    guard(|| {
        let g = deref(s, "successor set")?
            .inner
            .symmetries
            .get(index)
            .ok_or(Fail::Range(index))?;
        write(
            out,
            CpSymmetry {
                t: g.t(),
                u: g.u(),
                v: g.v(),
            },
            "out",
        )
    })
}

/// Number of admitted successors (union over the maximal symmetries).
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_successor_count(s: *const CpSuccessorSet) -> usize {
    s.as_ref().map_or(0, |s| s.inner.successors.len())
}

/// Copies up to `capacity` successors into `buf` and writes the number
/// copied to `written`.
///
/// # Safety
/// `s` must be a live handle; `buf` must hold `capacity` values; `written`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_successors(
    s: *const CpSuccessorSet,
    buf: *mut CpDualNumber,
    capacity: usize,
    written: *mut usize,
) -> CpStatus {
    guard(|| {
        let s = deref(s, "successor set")?;
        let n = s.inner.successors.len().min(capacity);
        if n > 0 && buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        for (i, x) in s.inner.successors.iter().take(n).enumerate() {
            buf.add(i).write(CpDualNumber {
                cantus: x.cantus(),
                interval: x.interval(),
            });
        }
        write(written, n, "written")
    })
}

/// The set as JSON: interval, symmetries in text notation, cardinality.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_successor_set_json(s: *const CpSuccessorSet, out: *mut *mut c_char) -> CpStatus {
    guard(|| write_string(out, to_json(&deref(s, "successor set")?.inner)?))
}

/// Reproduces the `U0` table against the bundled reference values, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_table1_json(mode: CpExtensionMode, linkage: CpLinkage, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        let mode = match mode {
            CpExtensionMode::Chained => ExtensionMode::Chained,
            CpExtensionMode::Direct => ExtensionMode::Direct,
        };
        let report = report::table1(&ExpectedTable::reference(), mode, linkage.into(), false)?;
        write_string(out, to_json(&report)?)
    })
}

fn circle_point(num: i64, den: i64) -> Result<CirclePoint, Fail> {
    if den == 0 {
        return Err(Fail::Core(Error::InvalidPoint("zero denominator".into())));
    }
    Ok(CirclePoint::new(Rational::new(num, den)))
}

/// Maximal intersection measure for the consonance `num/den` of the octave,
/// written as a reduced fraction.
///
/// # Safety
/// Both out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_continuum_measure(num: i64, den: i64, out_num: *mut i64, out_den: *mut i64) -> CpStatus {
    guard(|| {
        let m = continuum::maximizers(circle_point(num, den)?)?;
        write(out_num, *m.measure.numer(), "out_num")?;
        write(out_den, *m.measure.denom(), "out_den")
    })
}

/// Maximizers, measure and successor arcs for `num/den`, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_continuum_json(num: i64, den: i64, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        let k = circle_point(num, den)?;
        let m = continuum::maximizers(k)?;
        let successors = continuum::continuous_successors(k)?;
        let value = serde_json::json!({
            "k": k,
            "maximizers": m,
            "successors": successors.to_string(),
        });
        write_string(out, value.to_string())
    })
}
