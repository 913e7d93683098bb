//! Natural merge sort (adaptive to the number of ascending runs), a top-down
//! merge sort baseline, and the shuffle-then-sort pipeline.
//!
//! All key comparisons go through [`Counter`], so `SortStats::comparisons` is
//! exact. Moves count element writes into the output or scratch buffers.

use std::cmp::Ordering;
use std::ops::Range;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::disorder::{step_down_runs, KeySequence};
use crate::error::{Error, Result};
use crate::shuffle::{preprocess, ShuffleConfig, ShuffleReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SortStats {
    pub comparisons: u64,
    pub moves: u64,
    pub runs_detected: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Default)]
struct Counter {
    comparisons: u64,
}

impl Counter {
    #[inline]
    fn cmp(&mut self, a: i64, b: i64) -> Ordering {
        self.comparisons += 1;
        a.cmp(&b)
    }

    /// `a < b`, failing on equal keys.
    #[inline]
    fn strictly_less(&mut self, a: i64, b: i64) -> Result<bool> {
        match self.cmp(a, b) {
            Ordering::Less => Ok(true),
            Ordering::Greater => Ok(false),
            Ordering::Equal => Err(Error::DuplicateKey(a)),
        }
    }
}

/// Maximal strictly ascending runs, as boundary offsets `0 = b_0 < b_1 < ... < b_r = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunList {
    bounds: Vec<usize>,
}

impl RunList {
    pub fn len(&self) -> usize {
        self.bounds.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn runs(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.bounds.windows(2).map(|w| w[0]..w[1])
    }
}

fn detect_runs(keys: &[i64], counter: &mut Counter) -> Result<Vec<usize>> {
    if keys.is_empty() {
        return Ok(Vec::new());
    }
    let mut bounds = vec![0];
    for i in 1..keys.len() {
        if !counter.strictly_less(keys[i - 1], keys[i])? {
            bounds.push(i);
        }
    }
    bounds.push(keys.len());
    Ok(bounds)
}

/// Splits `keys` into maximal strictly ascending runs. A sequence with `M`
/// descents has `M + 1` runs; an empty one has none.
pub fn run_decomposition(keys: &[i64]) -> RunList {
    let mut bounds = Vec::new();
    if !keys.is_empty() {
        bounds.push(0);
        bounds.extend((1..keys.len()).filter(|&i| keys[i - 1] > keys[i]));
        bounds.push(keys.len());
    }
    RunList { bounds }
}

/// Merges the adjacent sorted runs `src[lo..mid]` and `src[mid..hi]` into
/// `dst[lo..hi]`.
fn merge_runs(
    src: &[i64],
    dst: &mut [i64],
    lo: usize,
    mid: usize,
    hi: usize,
    counter: &mut Counter,
) -> Result<()> {
    // Already in order: a single comparison settles it.
    if counter.strictly_less(src[mid - 1], src[mid])? {
        dst[lo..hi].copy_from_slice(&src[lo..hi]);
        return Ok(());
    }
    let (mut i, mut j, mut out) = (lo, mid, lo);
    while i < mid && j < hi {
        if counter.strictly_less(src[i], src[j])? {
            dst[out] = src[i];
            i += 1;
        } else {
            dst[out] = src[j];
            j += 1;
        }
        out += 1;
    }
    dst[out..out + (mid - i)].copy_from_slice(&src[i..mid]);
    out += mid - i;
    dst[out..hi].copy_from_slice(&src[j..hi]);
    Ok(())
}

/// Natural merge sort: detect maximal ascending runs, then merge adjacent
/// pairs left to right, round after round, until one run remains.
///
/// With `r = M + 1` runs this uses at most `(n - 1) * (1 + ceil(log2 r))`
/// comparisons. Equal keys are reported as [`Error::DuplicateKey`].
pub fn adaptive_merge_sort(keys: &[i64]) -> Result<(Vec<i64>, SortStats)> {
    let start = Instant::now();
    let mut counter = Counter::default();
    let mut moves = 0u64;
    let mut bounds = detect_runs(keys, &mut counter)?;
    let runs_detected = bounds.len().saturating_sub(1) as u64;

    let mut src = keys.to_vec();
    let mut dst = vec![0i64; keys.len()];
    while bounds.len() > 2 {
        let mut merged = Vec::with_capacity(bounds.len() / 2 + 2);
        merged.push(0);
        let mut p = 0;
        while p + 2 < bounds.len() {
            let (lo, mid, hi) = (bounds[p], bounds[p + 1], bounds[p + 2]);
            merge_runs(&src, &mut dst, lo, mid, hi, &mut counter)?;
            moves += (hi - lo) as u64;
            merged.push(hi);
            p += 2;
        }
        if p + 1 < bounds.len() {
            // Odd run out: carried into the next round.
            let (lo, hi) = (bounds[p], bounds[p + 1]);
            dst[lo..hi].copy_from_slice(&src[lo..hi]);
            moves += (hi - lo) as u64;
            merged.push(hi);
        }
        std::mem::swap(&mut src, &mut dst);
        bounds = merged;
    }

    Ok((
        src,
        SortStats {
            comparisons: counter.comparisons,
            moves,
            runs_detected,
            elapsed: start.elapsed(),
        },
    ))
}

fn top_down(v: &mut [i64], scratch: &mut [i64], counter: &mut Counter, moves: &mut u64) {
    let n = v.len();
    if n <= 1 {
        return;
    }
    // Left half takes the extra element; on sorted input each merge then costs
    // ceil(len / 2) comparisons.
    let mid = n.div_ceil(2);
    top_down(&mut v[..mid], &mut scratch[..mid], counter, moves);
    top_down(&mut v[mid..], &mut scratch[mid..], counter, moves);

    let (mut i, mut j, mut out) = (0, mid, 0);
    while i < mid && j < n {
        // Stable: ties keep the left element first.
        if counter.cmp(v[j], v[i]) == Ordering::Less {
            scratch[out] = v[j];
            j += 1;
        } else {
            scratch[out] = v[i];
            i += 1;
        }
        out += 1;
    }
    scratch[out..out + (mid - i)].copy_from_slice(&v[i..mid]);
    out += mid - i;
    scratch[out..n].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    *moves += 2 * n as u64;
}

/// Plain top-down merge sort that ignores existing order.
///
/// `runs_detected` is filled in after timing, without counted comparisons, so
/// the stats stay comparable with [`adaptive_merge_sort`].
pub fn baseline_merge_sort(keys: &[i64]) -> (Vec<i64>, SortStats) {
    let start = Instant::now();
    let mut counter = Counter::default();
    let mut moves = 0u64;
    let mut out = keys.to_vec();
    let mut scratch = vec![0i64; keys.len()];
    top_down(&mut out, &mut scratch, &mut counter, &mut moves);
    let elapsed = start.elapsed();
    let runs_detected = if keys.is_empty() { 0 } else { step_down_runs(keys) as u64 + 1 };
    (
        out,
        SortStats {
            comparisons: counter.comparisons,
            moves,
            runs_detected,
            elapsed,
        },
    )
}

/// Preprocesses a copy of `seq` with `config`, then sorts it adaptively.
pub fn shuffled_adaptive_sort(
    seq: &KeySequence,
    config: &ShuffleConfig,
) -> Result<(KeySequence, ShuffleReport, SortStats)> {
    let mut work = seq.clone();
    let report = preprocess(&mut work, config)?;
    let (sorted, stats) = adaptive_merge_sort(work.as_slice())?;
    Ok((KeySequence::from_distinct_unchecked(sorted), report, stats))
}

/// Comparison budget `3 n (1 + log2(M + 1))` for the adaptive sort.
pub fn adaptive_comparison_bound(n: usize, disorder: usize) -> f64 {
    3.0 * n as f64 * (1.0 + ((disorder + 1) as f64).log2())
}
