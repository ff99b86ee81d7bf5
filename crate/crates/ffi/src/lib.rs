//! C interface to the `stlocus` substring locus index.
//!
//! Indexes are opaque [`StlIndex`] handles created by
//! [`stl_index_build`] or [`stl_index_load`] and released with
//! [`stl_index_free`]. Every fallible function returns an [`StlStatus`];
//! the message of the last failure on the calling thread is available
//! from [`stl_last_error`]. Positions are 1-based and inclusive.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use stlocus::apps::{locus_id, occurrences, SubstringHash};
use stlocus::suffix_tree::Locus;
use stlocus::wa_index::{Mode, WaIndex};
use stlocus::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StlStatus {
    /// Success.
    Ok = 0,
    /// An argument violated a precondition (bad positions, bad mode).
    InvalidArgument = 1,
    /// An internal consistency check failed.
    Invariant = 2,
    /// Reading or writing a file failed.
    Io = 3,
    /// A serialized index was malformed.
    Format = 4,
    /// A required pointer was null or a string was not UTF-8.
    NullPointer = 5,
    /// The output buffer was too small; the required size was reported.
    BufferTooSmall = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// Storage modes accepted by [`stl_index_build`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StlMode {
    /// Dense tables over all block documents.
    Standard = 0,
    /// Shortened documents with packed tables.
    Compact = 1,
}

/// Opaque index handle.
pub struct StlIndex {
    inner: WaIndex,
}

/// Locus of a substring in the suffix tree of the text.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StlLocus {
    /// 1 when the locus is an explicit node, 0 when it lies inside an edge.
    pub explicit_node: u8,
    /// The explicit node, or the lower end of the edge.
    pub node: u32,
    /// Upper end of the edge; equal to `node` for an explicit locus.
    pub parent: u32,
    /// String depth of the locus, the substring length.
    pub depth: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: StlStatus, msg: impl Into<String>) -> StlStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> StlStatus {
    let s = match e {
        Error::InvalidArgument(_) => StlStatus::InvalidArgument,
        Error::Invariant(_) => StlStatus::Invariant,
        Error::Io(_) => StlStatus::Io,
        Error::Format(_) => StlStatus::Format,
    };
    fail(s, e.to_string())
}

fn guard(f: impl FnOnce() -> StlStatus) -> StlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(StlStatus::Panic, "panic inside stlocus"),
    }
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, StlStatus> {
    if p.is_null() {
        return Err(fail(StlStatus::NullPointer, "path is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(StlStatus::NullPointer, "path is not UTF-8"))
}

unsafe fn index_arg<'a>(idx: *const StlIndex) -> Result<&'a WaIndex, StlStatus> {
    idx.as_ref().map(|x| &x.inner).ok_or_else(|| fail(StlStatus::NullPointer, "index is null"))
}

fn emit(out: *mut *mut StlIndex, r: stlocus::Result<WaIndex>) -> StlStatus {
    match r {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(StlIndex { inner })) };
            StlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Builds the index of `text[0..len]` and stores the handle in `*out`.
///
/// # Safety
/// `text` must point to `len` readable bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stl_index_build(text: *const u8, len: usize, mode: StlMode, out: *mut *mut StlIndex) -> StlStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(StlStatus::NullPointer, "text or out is null");
        }
        let w = std::slice::from_raw_parts(text, len);
        let m = match mode {
            StlMode::Standard => Mode::Standard,
            StlMode::Compact => Mode::Compact,
        };
        emit(out, WaIndex::build(w, m))
    })
}

/// Loads an index saved by [`stl_index_save`] and stores the handle in `*out`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stl_index_load(path: *const c_char, out: *mut *mut StlIndex) -> StlStatus {
    guard(|| {
        if out.is_null() {
            return fail(StlStatus::NullPointer, "out is null");
        }
        match path_arg(path) {
            Ok(p) => emit(out, WaIndex::load(p)),
            Err(s) => s,
        }
    })
}

/// Saves the index to `path`.
///
/// # Safety
/// `idx` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn stl_index_save(idx: *const StlIndex, path: *const c_char) -> StlStatus {
    guard(|| {
        let (x, p) = match (index_arg(idx), path_arg(path)) {
            (Ok(x), Ok(p)) => (x, p),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        x.save(p).map_or_else(from_error, |_| StlStatus::Ok)
    })
}

/// Releases a handle. A null handle is ignored.
///
/// # Safety
/// `idx` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stl_index_free(idx: *mut StlIndex) {
    if !idx.is_null() {
        drop(Box::from_raw(idx));
    }
}

/// Length of the indexed text, 0 for a null handle.
///
/// # Safety
/// `idx` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stl_index_len(idx: *const StlIndex) -> usize {
    idx.as_ref().map_or(0, |x| x.inner.len())
}

/// Total words used by the index, 0 for a null handle.
///
/// # Safety
/// `idx` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stl_index_words(idx: *const StlIndex) -> u64 {
    idx.as_ref().map_or(0, |x| x.inner.stats().total_words)
}

/// Locus of `text[i..j]` in the suffix tree of the text.
///
/// # Safety
/// `idx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stl_substring_locus(idx: *const StlIndex, i: usize, j: usize, out: *mut StlLocus) -> StlStatus {
    guard(|| {
        let x = match index_arg(idx) {
            Ok(x) => x,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(StlStatus::NullPointer, "out is null");
        }
        match x.substring_locus(i, j) {
            Ok(l) => {
                *out = match l {
                    Locus::Explicit(v) => StlLocus { explicit_node: 1, node: v, parent: v, depth: (j - i + 1) as u32 },
                    Locus::Implicit { parent, child, depth } => StlLocus { explicit_node: 0, node: child, parent, depth },
                };
                StlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Perfect hash of `text[i..j]` packed into one integer: equal exactly
/// for equal substrings of the same text.
///
/// # Safety
/// `idx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stl_substring_hash(idx: *const StlIndex, i: usize, j: usize, out: *mut u64) -> StlStatus {
    guard(|| {
        let x = match index_arg(idx) {
            Ok(x) => x,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(StlStatus::NullPointer, "out is null");
        }
        match x.substring_locus(i, j) {
            Ok(l) => {
                *out = SubstringHash { locus: locus_id(&l), len: (j - i + 1) as u32 }.packed(x.len());
                StlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Writes the sorted starting positions of `text[i..j]` into
/// `buf[0..cap]` and their number into `*count`. When `cap` is too small
/// nothing is written to `buf`, `*count` receives the required size and
/// the status is `BufferTooSmall`.
///
/// # Safety
/// `idx` must be a live handle, `count` writable and `buf` writable for
/// `cap` elements (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn stl_occurrences(
    idx: *const StlIndex,
    i: usize,
    j: usize,
    buf: *mut usize,
    cap: usize,
    count: *mut usize,
) -> StlStatus {
    guard(|| {
        let x = match index_arg(idx) {
            Ok(x) => x,
            Err(s) => return s,
        };
        if count.is_null() || (buf.is_null() && cap > 0) {
            return fail(StlStatus::NullPointer, "count or buf is null");
        }
        let l = match x.substring_locus(i, j) {
            Ok(l) => l,
            Err(e) => return from_error(e),
        };
        let occ = occurrences(x.tree(), &l);
        *count = occ.len();
        if occ.len() > cap {
            return fail(StlStatus::BufferTooSmall, format!("{} positions do not fit in {cap}", occ.len()));
        }
        if !occ.is_empty() {
            ptr::copy_nonoverlapping(occ.as_ptr(), buf, occ.len());
        }
        StlStatus::Ok
    })
}

/// Message of the last failure on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn stl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
