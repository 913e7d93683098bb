//! C ABI for `shufsort`.
//!
//! Every fallible function returns a [`ShufsortStatus`]; on failure a
//! description is available from [`shufsort_last_error`] on the same thread.
//! Sequences are opaque handles created by [`shufsort_sequence_new`] and
//! released with [`shufsort_sequence_free`]. Strings returned through out
//! parameters are released with [`shufsort_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shufsort::combinatorics::{self, descent_permutation_count};
use shufsort::disorder::{part_disorders, partition_bounds, swap_disorder_delta};
use shufsort::shuffle::preprocess;
use shufsort::sorting::{adaptive_merge_sort, baseline_merge_sort};
use shufsort::{Error, KeySequence, Policy, ShuffleConfig, SortStats};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShufsortStatus {
    Ok = 0,
    NullPointer = 1,
    DuplicateKey = 2,
    InvalidArgument = 3,
    OutOfRange = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShufsortPolicy {
    Blind = 0,
    Guarded = 1,
    /// Exactly `fixed_swaps` swaps per flagged part.
    FixedCount = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ShufsortShuffleConfig {
    pub k: usize,
    pub z: usize,
    pub m: usize,
    pub policy: ShufsortPolicy,
    pub fixed_swaps: u64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ShufsortShuffleSummary {
    pub total_before: usize,
    pub total_after: usize,
    pub parts: usize,
    pub parts_flagged: usize,
    pub swaps_attempted: u64,
    pub swaps_applied: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ShufsortSortStats {
    pub comparisons: u64,
    pub moves: u64,
    pub runs_detected: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ShufsortImprovement {
    pub holds: bool,
    pub ratio: f64,
    pub threshold: f64,
}

/// Opaque sequence of distinct keys.
pub struct ShufsortSequence {
    inner: KeySequence,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> ShufsortStatus {
    match err {
        Error::DuplicateKey(_) => ShufsortStatus::DuplicateKey,
        Error::SwapIndex { .. }
        | Error::InvalidRange { .. }
        | Error::AboveCap { .. }
        | Error::ThresholdOutOfRange { .. }
        | Error::TailOutOfRange { .. }
        | Error::InfeasibleDisorder { .. } => ShufsortStatus::OutOfRange,
        Error::SortMismatch(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => ShufsortStatus::Internal,
        _ => ShufsortStatus::InvalidArgument,
    }
}

struct Failure(ShufsortStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ShufsortStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any error or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ShufsortStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ShufsortStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ShufsortStatus::Internal
        }
    }
}

unsafe fn seq_ref<'a>(seq: *const ShufsortSequence) -> Result<&'a KeySequence, Failure> {
    seq.as_ref().map(|s| &s.inner).ok_or_else(|| null("sequence"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_handle(inner: KeySequence) -> *mut ShufsortSequence {
    Box::into_raw(Box::new(ShufsortSequence { inner }))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn shufsort_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn shufsort_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Copies `len` keys into a new sequence. Keys must be distinct.
///
/// # Safety
/// `keys` must point to `len` readable values (it may be null when `len` is 0)
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_sequence_new(
    keys: *const i64,
    len: usize,
    out: *mut *mut ShufsortSequence,
) -> ShufsortStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let keys = match (keys.is_null(), len) {
            (_, 0) => Vec::new(),
            (true, _) => return Err(null("keys")),
            (false, _) => std::slice::from_raw_parts(keys, len).to_vec(),
        };
        out.write(into_handle(KeySequence::new(keys)?));
        Ok(())
    })
}

/// # Safety
/// `seq` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn shufsort_sequence_free(seq: *mut ShufsortSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Number of keys, or 0 for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shufsort_sequence_len(seq: *const ShufsortSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.inner.len())
}

/// Copies the keys into `out`, which must hold at least `capacity` values.
///
/// # Safety
/// `seq` must be a live handle and `out` writable for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn shufsort_sequence_copy_keys(
    seq: *const ShufsortSequence,
    out: *mut i64,
    capacity: usize,
) -> ShufsortStatus {
    guard(|| {
        let keys = seq_ref(seq)?.as_slice();
        if keys.is_empty() {
            return Ok(());
        }
        if capacity < keys.len() {
            return Err(Failure(
                ShufsortStatus::BufferTooSmall,
                format!("need room for {} keys, got {capacity}", keys.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(keys.as_ptr(), out, keys.len());
        Ok(())
    })
}

/// Number of adjacent descents.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_step_down_runs(seq: *const ShufsortSequence, out: *mut usize) -> ShufsortStatus {
    guard(|| write_out(out, seq_ref(seq)?.step_down_runs(), "out"))
}

/// Change in descents that swapping positions `i < j` would cause.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_swap_delta(
    seq: *const ShufsortSequence,
    i: usize,
    j: usize,
    out: *mut i64,
) -> ShufsortStatus {
    guard(|| {
        let delta = swap_disorder_delta(seq_ref(seq)?.as_slice(), i, j)?;
        write_out(out, delta, "out")
    })
}

/// Swaps positions `i < j` in place.
///
/// # Safety
/// `seq` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn shufsort_sequence_swap(seq: *mut ShufsortSequence, i: usize, j: usize) -> ShufsortStatus {
    guard(|| {
        let seq = seq.as_mut().ok_or_else(|| null("sequence"))?;
        swap_disorder_delta(seq.inner.as_slice(), i, j)?;
        seq.inner.swap(i, j);
        Ok(())
    })
}

/// Disorder of each of `k` balanced contiguous parts. The number of parts,
/// `min(k, len)`, is written to `out_count` even when `capacity` is too small.
///
/// # Safety
/// `seq` must be a live handle, `out` writable for `capacity` values and
/// `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_part_disorders(
    seq: *const ShufsortSequence,
    k: usize,
    out: *mut usize,
    capacity: usize,
    out_count: *mut usize,
) -> ShufsortStatus {
    guard(|| {
        let keys = seq_ref(seq)?.as_slice();
        let parts = partition_bounds(keys.len(), k)?;
        let per_part = part_disorders(keys, &parts)?.per_part.unwrap_or_default();
        write_out(out_count, per_part.len(), "out_count")?;
        if capacity < per_part.len() {
            return Err(Failure(
                ShufsortStatus::BufferTooSmall,
                format!("need room for {} parts, got {capacity}", per_part.len()),
            ));
        }
        if !per_part.is_empty() {
            if out.is_null() {
                return Err(null("out"));
            }
            ptr::copy_nonoverlapping(per_part.as_ptr(), out, per_part.len());
        }
        Ok(())
    })
}

/// Defaults: 16 parts, threshold 10, budget divisor 2, guarded, seed 0.
#[no_mangle]
pub extern "C" fn shufsort_shuffle_config_default() -> ShufsortShuffleConfig {
    let d = ShuffleConfig::default();
    ShufsortShuffleConfig {
        k: d.k,
        z: d.z,
        m: d.m,
        policy: ShufsortPolicy::Guarded,
        fixed_swaps: 0,
        seed: d.seed,
    }
}

fn config_from_c(c: &ShufsortShuffleConfig) -> ShuffleConfig {
    let policy = match c.policy {
        ShufsortPolicy::Blind => Policy::Blind,
        ShufsortPolicy::Guarded => Policy::Guarded,
        ShufsortPolicy::FixedCount => Policy::FixedCount(c.fixed_swaps),
    };
    ShuffleConfig {
        k: c.k,
        z: c.z,
        m: c.m,
        policy,
        seed: c.seed,
    }
}

/// Shuffles flagged parts of `seq` in place. `out` may be null.
///
/// # Safety
/// `seq` must be a live handle, `config` readable and `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_preprocess(
    seq: *mut ShufsortSequence,
    config: *const ShufsortShuffleConfig,
    out: *mut ShufsortShuffleSummary,
) -> ShufsortStatus {
    guard(|| {
        let seq = seq.as_mut().ok_or_else(|| null("sequence"))?;
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let config = config_from_c(c);
        let report = preprocess(&mut seq.inner, &config)?;
        if !out.is_null() {
            out.write(ShufsortShuffleSummary {
                total_before: report.total_before,
                total_after: report.total_after,
                parts: report.per_part.len(),
                parts_flagged: report.parts_flagged(config.z),
                swaps_attempted: report.swaps_attempted(),
                swaps_applied: report.swaps_applied(),
            });
        }
        Ok(())
    })
}

fn stats_to_c(s: &SortStats) -> ShufsortSortStats {
    ShufsortSortStats {
        comparisons: s.comparisons,
        moves: s.moves,
        runs_detected: s.runs_detected,
    }
}

/// Sorts a copy of `seq` with the run-adaptive merge sort. The sorted copy is
/// a new handle; `stats` may be null.
///
/// # Safety
/// `seq` must be a live handle, `out` writable and `stats` null or writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_adaptive_sort(
    seq: *const ShufsortSequence,
    out: *mut *mut ShufsortSequence,
    stats: *mut ShufsortSortStats,
) -> ShufsortStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (sorted, s) = adaptive_merge_sort(seq_ref(seq)?.as_slice())?;
        if !stats.is_null() {
            stats.write(stats_to_c(&s));
        }
        out.write(into_handle(KeySequence::from_distinct_unchecked(sorted)));
        Ok(())
    })
}

/// Sorts a copy of `seq` with the top-down merge sort baseline.
///
/// # Safety
/// As for [`shufsort_adaptive_sort`].
#[no_mangle]
pub unsafe extern "C" fn shufsort_baseline_sort(
    seq: *const ShufsortSequence,
    out: *mut *mut ShufsortSequence,
    stats: *mut ShufsortSortStats,
) -> ShufsortStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (sorted, s) = baseline_merge_sort(seq_ref(seq)?.as_slice());
        if !stats.is_null() {
            stats.write(stats_to_c(&s));
        }
        out.write(into_handle(KeySequence::from_distinct_unchecked(sorted)));
        Ok(())
    })
}

/// Number of permutations of `n` keys with exactly `d` descents, as a decimal
/// string to be released with [`shufsort_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_descent_count(n: u64, d: u64, out: *mut *mut c_char) -> ShufsortStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = i64::try_from(d).map_err(|_| Failure(ShufsortStatus::OutOfRange, format!("d = {d} too large")))?;
        out.write(to_c_string(descent_permutation_count(n, d).to_string()));
        Ok(())
    })
}

/// Probability that a uniform permutation of `n` keys has fewer than `z`
/// descents. `out_value`, `out_exceeds_half` and `out_fraction` may each be
/// null; the fraction string is exact and must be freed.
///
/// # Safety
/// Non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_p_less(
    n: usize,
    z: i64,
    out_value: *mut f64,
    out_exceeds_half: *mut bool,
    out_fraction: *mut *mut c_char,
) -> ShufsortStatus {
    guard(|| {
        let p = combinatorics::p_less(n, z)?;
        if !out_value.is_null() {
            out_value.write(p.to_f64());
        }
        if !out_exceeds_half.is_null() {
            out_exceeds_half.write(p.exceeds_half());
        }
        if !out_fraction.is_null() {
            out_fraction.write(to_c_string(p.to_string()));
        }
        Ok(())
    })
}

/// `floor(n / 2) + 1`.
#[no_mangle]
pub extern "C" fn shufsort_claim1_threshold(n: usize) -> usize {
    combinatorics::claim1_threshold(n)
}

/// Whether lowering the disorder from `before` to `after` pays for a budget
/// divisor of `m`, decided exactly.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shufsort_improvement_condition(
    before: u64,
    after: u64,
    m: u32,
    out: *mut ShufsortImprovement,
) -> ShufsortStatus {
    guard(|| {
        let v = combinatorics::improvement_condition(before, after, m)?;
        write_out(
            out,
            ShufsortImprovement {
                holds: v.holds,
                ratio: v.ratio,
                threshold: v.threshold,
            },
            "out",
        )
    })
}
