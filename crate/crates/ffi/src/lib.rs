//! C interface to `quadgolay`.
//!
//! Sequences cross the boundary as NUL-terminated text, one character per
//! entry (`0` = 1, `1` = i, `2` = -1, `3` = -i); pairs as `"<A> <B>"`.
//! Every fallible function returns a [`QgStatus`]; on failure a message is
//! available from [`qg_last_error`] on the same thread. Strings returned by
//! the library are released with [`qg_string_free`], handles with their own
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadgolay::pipeline::{self, CountsRow};
use quadgolay::{
    enumerate_partners, is_golay_pair, normalize, Error, FilterSchedule, PairRecord, Sequence,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Internal = 5,
}

/// Filter parameters; see [`qg_default_schedule`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QgSchedule {
    pub coarse_points: usize,
    pub refine_rounds: usize,
    pub epsilon: f64,
    pub final_points: usize,
}

impl From<QgSchedule> for FilterSchedule {
    fn from(s: QgSchedule) -> Self {
        FilterSchedule {
            coarse_points: s.coarse_points,
            refine_rounds: s.refine_rounds,
            epsilon: s.epsilon,
            final_points: s.final_points,
        }
    }
}

/// One row of the counts table. `l_odd` is -1 when the odd half is empty.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QgCounts {
    pub n: usize,
    pub l_even: u64,
    pub l_odd: i64,
    pub l_a: u64,
    pub seqs: u64,
    pub all: u64,
    pub inequiv: u64,
}

impl From<CountsRow> for QgCounts {
    fn from(r: CountsRow) -> Self {
        QgCounts {
            n: r.n,
            l_even: r.l_even,
            l_odd: r.l_odd.map_or(-1, |v| v as i64),
            l_a: r.l_a,
            seqs: r.seqs,
            all: r.all,
            inequiv: r.inequiv,
        }
    }
}

impl From<QgCounts> for CountsRow {
    fn from(c: QgCounts) -> Self {
        CountsRow {
            n: c.n,
            l_even: c.l_even,
            l_odd: u64::try_from(c.l_odd).ok(),
            l_a: c.l_a,
            seqs: c.seqs,
            all: c.all,
            inequiv: c.inequiv,
        }
    }
}

/// Owned list of strings (sequences or pairs).
pub struct QgStringList {
    items: Vec<CString>,
}

/// Result of a complete in-memory search.
pub struct QgSearch {
    counts: QgCounts,
    l_a: Vec<String>,
    pairs: Vec<String>,
    representatives: Vec<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(QgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) | Error::Precondition(_) | Error::MissingRow(_) => {
                QgStatus::InvalidArgument
            }
            Error::Parse(_) => QgStatus::Parse,
            Error::Io { .. } | Error::MissingShards { .. } => QgStatus::Io,
            Error::Json(_) => QgStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|cell| *cell.borrow_mut() = text);
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            QgStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QgStatus::Internal
        }
    }
}

fn null() -> Failure {
    Failure(QgStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QgStatus::Parse, "input is not valid UTF-8".into()))
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(Failure::from)
}

fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    // SAFETY: callers pass either null or a writable pointer.
    unsafe { p.as_mut() }.ok_or_else(null)
}

fn c_string(s: &str) -> CString {
    CString::new(s).expect("library text has no interior NUL")
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn qg_last_error() -> *const c_char {
    LAST_ERROR.with(|cell| cell.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn qg_default_schedule() -> QgSchedule {
    let d = FilterSchedule::default();
    QgSchedule {
        coarse_points: d.coarse_points,
        refine_rounds: d.refine_rounds,
        epsilon: d.epsilon,
        final_points: d.final_points,
    }
}

/// Writes whether `a` and `b` form a Golay pair.
///
/// # Safety
/// `a`, `b` must be valid strings and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_is_golay_pair(
    a: *const c_char,
    b: *const c_char,
    result: *mut bool,
) -> QgStatus {
    guard(|| {
        let a: Sequence = parse(text(a)?)?;
        let b: Sequence = parse(text(b)?)?;
        *out(result)? = is_golay_pair(&a, &b)?;
        Ok(())
    })
}

/// Nonperiodic autocorrelation of `seq` at shift `s`.
///
/// # Safety
/// `seq` must be a valid string, `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_autocorrelation(
    seq: *const c_char,
    s: usize,
    re: *mut i64,
    im: *mut i64,
) -> QgStatus {
    guard(|| {
        let a: Sequence = parse(text(seq)?)?;
        let value = a.autocorrelation(s)?;
        *out(re)? = value.re;
        *out(im)? = value.im;
        Ok(())
    })
}

/// Normal form of the pair `"<A> <B>"`; `*normalized` receives a new string.
///
/// # Safety
/// `pair` must be a valid string and `normalized` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_normalize(
    pair: *const c_char,
    normalized: *mut *mut c_char,
) -> QgStatus {
    guard(|| {
        let p: PairRecord = parse(text(pair)?)?;
        let slot = out(normalized)?;
        *slot = c_string(&normalize(&p).pair.to_string()).into_raw();
        Ok(())
    })
}

/// Every `B` with `b0 = 1` forming a Golay pair with `a`, sorted.
///
/// # Safety
/// `a` must be a valid string and `list` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_partners(a: *const c_char, list: *mut *mut QgStringList) -> QgStatus {
    guard(|| {
        let a: Sequence = parse(text(a)?)?;
        let slot = out(list)?;
        let (partners, _) = enumerate_partners(&a);
        let items = partners.iter().map(|b| c_string(&b.to_string())).collect();
        *slot = Box::into_raw(Box::new(QgStringList { items }));
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_string_list_len(list: *const QgStringList) -> usize {
    list.as_ref().map_or(0, |l| l.items.len())
}

/// Borrowed item `index`, or null when out of range. The pointer lives as
/// long as the list.
///
/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_string_list_get(
    list: *const QgStringList,
    index: usize,
) -> *const c_char {
    list.as_ref()
        .and_then(|l| l.items.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `list` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qg_string_list_free(list: *mut QgStringList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Runs every phase for length `n` in memory. `schedule` may be null for
/// the defaults.
///
/// # Safety
/// `schedule` must be null or readable, `search` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_search_run(
    n: usize,
    schedule: *const QgSchedule,
    search: *mut *mut QgSearch,
) -> QgStatus {
    guard(|| {
        let slot = out(search)?;
        let sched = schedule
            .as_ref()
            .map_or_else(FilterSchedule::default, |s| FilterSchedule::from(*s));
        let outcome = pipeline::search(n, &sched, 1, false)?;
        let mut reps = outcome.classes.omega_inequiv.clone();
        reps.sort();
        let handle = QgSearch {
            counts: outcome.counts_row().into(),
            l_a: outcome.l_a.iter().map(ToString::to_string).collect(),
            pairs: outcome.pairs.iter().map(ToString::to_string).collect(),
            representatives: reps.iter().map(ToString::to_string).collect(),
        };
        *slot = Box::into_raw(Box::new(handle));
        Ok(())
    })
}

/// # Safety
/// `search` must be a live handle and `counts` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_search_counts(
    search: *const QgSearch,
    counts: *mut QgCounts,
) -> QgStatus {
    guard(|| {
        let s = search.as_ref().ok_or_else(null)?;
        *out(counts)? = s.counts;
        Ok(())
    })
}

/// List selectors for [`qg_search_list`].
pub const QG_LIST_FIRST_SEQUENCES: u32 = 0;
pub const QG_LIST_PAIRS: u32 = 1;
pub const QG_LIST_REPRESENTATIVES: u32 = 2;

/// Copies one of the search's lists (a `QG_LIST_*` selector) into a new
/// string list.
///
/// # Safety
/// `search` must be a live handle and `list` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_search_list(
    search: *const QgSearch,
    which: u32,
    list: *mut *mut QgStringList,
) -> QgStatus {
    guard(|| {
        let s = search.as_ref().ok_or_else(null)?;
        let slot = out(list)?;
        let source = match which {
            QG_LIST_FIRST_SEQUENCES => &s.l_a,
            QG_LIST_PAIRS => &s.pairs,
            QG_LIST_REPRESENTATIVES => &s.representatives,
            w => {
                return Err(Failure(
                    QgStatus::InvalidArgument,
                    format!("unknown list {w}"),
                ))
            }
        };
        let items = source.iter().map(|t| c_string(t)).collect();
        *slot = Box::into_raw(Box::new(QgStringList { items }));
        Ok(())
    })
}

/// # Safety
/// `search` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qg_search_free(search: *mut QgSearch) {
    if !search.is_null() {
        drop(Box::from_raw(search));
    }
}

/// Compares `counts` with the published pair counts. `*passed` is false when
/// no reference row exists for `counts.n`.
///
/// # Safety
/// `counts` must be readable and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_verify_counts(counts: *const QgCounts, passed: *mut bool) -> QgStatus {
    guard(|| {
        let c = counts.as_ref().ok_or_else(null)?;
        *out(passed)? = pipeline::verify_row(&CountsRow::from(*c)).passed();
        Ok(())
    })
}
