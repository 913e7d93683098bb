//! Random-swap preprocessing of high-disorder parts.
//!
//! A sequence is split into `k` contiguous parts. Every part whose
//! step-down-runs count exceeds the threshold `z` receives a bounded number of
//! random two-element swaps; parts at or below `z` are left alone. Each part
//! draws from its own sub-stream (`derive_seed(seed, part_index)`), so the
//! sequential and parallel drivers produce bit-identical results.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::{partition_bounds, step_down_runs, swap_delta_unchecked, KeySequence};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, draw_pair, RngStream};

/// Swap-acceptance rule applied inside a flagged part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Policy {
    /// Every drawn pair is swapped.
    Blind,
    /// A drawn pair is swapped only if that strictly lowers the part's disorder.
    Guarded,
    /// Exactly `s` unconditional swaps per flagged part, ignoring `m`.
    FixedCount(u64),
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Blind => f.write_str("blind"),
            Policy::Guarded => f.write_str("guarded"),
            Policy::FixedCount(s) => write!(f, "fixed:{s}"),
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blind" => Ok(Policy::Blind),
            "guarded" => Ok(Policy::Guarded),
            other => other
                .strip_prefix("fixed:")
                .and_then(|n| n.parse().ok())
                .map(Policy::FixedCount)
                .ok_or_else(|| Error::InvalidPolicy(other.to_owned())),
        }
    }
}

/// Knobs of the preprocessing scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleConfig {
    /// Number of parts.
    pub k: usize,
    /// A part is shuffled only when its disorder is strictly greater than `z`.
    pub z: usize,
    /// Budget divisor: a flagged part of length `len` gets `len / m` swaps.
    pub m: usize,
    pub policy: Policy,
    pub seed: u64,
}

impl ShuffleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::ZeroParts);
        }
        if self.m == 0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(())
    }

    /// Swaps attempted in a flagged part of `part_len` keys.
    pub fn budget_for(&self, part_len: usize) -> Result<u64> {
        match self.policy {
            Policy::FixedCount(s) => Ok(s),
            Policy::Blind | Policy::Guarded => swap_budget(part_len, self.m),
        }
    }
}

impl Default for ShuffleConfig {
    fn default() -> Self {
        Self {
            k: 16,
            z: 10,
            m: 2,
            policy: Policy::Guarded,
            seed: 0,
        }
    }
}

/// Outcome for one part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartShuffle {
    pub disorder_before: usize,
    pub disorder_after: usize,
    pub swaps_attempted: u64,
    pub swaps_applied: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleReport {
    pub policy: Policy,
    pub per_part: Vec<PartShuffle>,
    /// Whole-sequence disorder, boundary descents included.
    pub total_before: usize,
    pub total_after: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ShuffleReport {
    pub fn swaps_attempted(&self) -> u64 {
        self.per_part.iter().map(|p| p.swaps_attempted).sum()
    }

    pub fn swaps_applied(&self) -> u64 {
        self.per_part.iter().map(|p| p.swaps_applied).sum()
    }

    pub fn parts_flagged(&self, z: usize) -> usize {
        self.per_part.iter().filter(|p| p.disorder_before > z).count()
    }
}

/// Swaps allotted to a flagged part: `floor(part_len / m)`.
pub fn swap_budget(part_len: usize, m: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroDivisor);
    }
    Ok((part_len / m) as u64)
}

/// Applies up to `budget` random swaps to `keys[part]` under `policy`.
///
/// Guarded acceptance looks only at adjacencies inside the part. A part with
/// fewer than two keys has no pairs, so nothing is attempted.
pub fn shuffle_part(
    keys: &mut [i64],
    part: Range<usize>,
    budget: u64,
    policy: Policy,
    rng: &mut RngStream,
) -> Result<PartShuffle> {
    if part.start > part.end || part.end > keys.len() {
        return Err(Error::InvalidRange {
            start: part.start,
            end: part.end,
            len: keys.len(),
        });
    }
    Ok(shuffle_slice(&mut keys[part], budget, policy, rng))
}

fn shuffle_slice(slice: &mut [i64], budget: u64, policy: Policy, rng: &mut RngStream) -> PartShuffle {
    let before = step_down_runs(slice);
    let mut outcome = PartShuffle {
        disorder_before: before,
        disorder_after: before,
        ..PartShuffle::default()
    };
    if slice.len() < 2 {
        return outcome;
    }
    let mut disorder = before as i64;
    for _ in 0..budget {
        let (i, j) = draw_pair(rng, slice.len()).expect("part has at least two keys");
        outcome.swaps_attempted += 1;
        let delta = swap_delta_unchecked(slice, i, j);
        if policy == Policy::Guarded && delta >= 0 {
            continue;
        }
        slice.swap(i, j);
        disorder += delta;
        outcome.swaps_applied += 1;
    }
    outcome.disorder_after = disorder as usize;
    outcome
}

fn shuffle_one_part(slice: &mut [i64], index: usize, config: &ShuffleConfig) -> Result<PartShuffle> {
    let disorder = step_down_runs(slice);
    if disorder <= config.z {
        return Ok(PartShuffle {
            disorder_before: disorder,
            disorder_after: disorder,
            ..PartShuffle::default()
        });
    }
    let budget = config.budget_for(slice.len())?;
    let mut rng = RngStream::new(derive_seed(config.seed, index as u64));
    Ok(shuffle_slice(slice, budget, config.policy, &mut rng))
}

/// Descents across part boundaries, i.e. `(end - 1, end)` for every part but
/// the last.
fn boundary_descents(keys: &[i64], parts: &[Range<usize>]) -> usize {
    parts
        .iter()
        .take(parts.len().saturating_sub(1))
        .filter(|r| keys[r.end - 1] > keys[r.end])
        .count()
}

fn finish(
    keys: &[i64],
    parts: &[Range<usize>],
    config: &ShuffleConfig,
    per_part: Vec<PartShuffle>,
    total_before: usize,
    start: Instant,
) -> ShuffleReport {
    let total_after = per_part.iter().map(|p| p.disorder_after).sum::<usize>() + boundary_descents(keys, parts);
    ShuffleReport {
        policy: config.policy,
        per_part,
        total_before,
        total_after,
        elapsed: start.elapsed(),
    }
}

/// Runs the scheme over `seq` in place.
pub fn preprocess(seq: &mut KeySequence, config: &ShuffleConfig) -> Result<ShuffleReport> {
    preprocess_slice(seq.as_mut_slice(), config)
}

/// [`preprocess`] on a raw slice of distinct keys.
pub fn preprocess_slice(keys: &mut [i64], config: &ShuffleConfig) -> Result<ShuffleReport> {
    config.validate()?;
    let start = Instant::now();
    let total_before = step_down_runs(keys);
    let view = partition_bounds(keys.len(), config.k)?;
    let parts = view.parts();
    let per_part = parts
        .iter()
        .enumerate()
        .map(|(index, r)| shuffle_one_part(&mut keys[r.clone()], index, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(keys, parts, config, per_part, total_before, start))
}

/// Parallel [`preprocess`]: parts are shuffled concurrently. Output is
/// identical to the sequential driver.
pub fn preprocess_parallel(seq: &mut KeySequence, config: &ShuffleConfig) -> Result<ShuffleReport> {
    config.validate()?;
    let keys = seq.as_mut_slice();
    let start = Instant::now();
    let total_before = step_down_runs(keys);
    let view = partition_bounds(keys.len(), config.k)?;
    let parts = view.parts();

    let mut slices = Vec::with_capacity(parts.len());
    let mut rest: &mut [i64] = keys;
    for r in parts {
        let (head, tail) = rest.split_at_mut(r.len());
        slices.push(head);
        rest = tail;
    }
    let per_part = slices
        .into_par_iter()
        .enumerate()
        .map(|(index, slice)| shuffle_one_part(slice, index, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(seq.as_slice(), parts, config, per_part, total_before, start))
}
