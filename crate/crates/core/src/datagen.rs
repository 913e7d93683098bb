//! Reproducible input generation over the keys `1..=n`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::disorder::{step_down_runs, KeySequence};
use crate::error::{Error, Result};
use crate::rng::{draw_pair, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenKind {
    /// Uniformly random permutation.
    Uniform,
    /// Exactly this many descents, at random positions.
    TargetDisorder(usize),
    /// The identity followed by `d` random transpositions.
    NearlySorted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub kind: GenKind,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<KeySequence> {
        match self.kind {
            GenKind::Uniform => Ok(uniform_permutation(self.n, self.seed)),
            GenKind::TargetDisorder(target) => with_target_disorder(self.n, target, self.seed),
            GenKind::NearlySorted(d) => nearly_sorted(self.n, d, self.seed),
        }
    }
}

fn identity(n: usize) -> Vec<i64> {
    (1..=n as i64).collect()
}

/// Fisher-Yates shuffle of `1..=n`.
pub fn uniform_permutation_keys(n: usize, seed: u64) -> Vec<i64> {
    let mut keys = identity(n);
    RngStream::new(seed).shuffle(&mut keys);
    keys
}

pub fn uniform_permutation(n: usize, seed: u64) -> KeySequence {
    KeySequence::from_distinct_unchecked(uniform_permutation_keys(n, seed))
}

/// A permutation of `1..=n` with exactly `target` descents.
///
/// The descent positions are a uniformly random `target`-subset of the `n - 1`
/// adjacencies. They cut the positions into `target + 1` blocks; blocks take
/// consecutive value ranges in decreasing order (first block highest) and
/// ascend internally, so every block boundary and nothing else descends.
pub fn with_target_disorder(n: usize, target: usize, seed: u64) -> Result<KeySequence> {
    if target > n.saturating_sub(1) {
        return Err(Error::InfeasibleDisorder { target, n });
    }
    let mut rng = RngStream::new(seed);
    // Partial Fisher-Yates over the adjacency indices picks the descent set.
    let mut adjacencies: Vec<usize> = (0..n.saturating_sub(1)).collect();
    for i in 0..target {
        let j = i + rng.index(adjacencies.len() - i);
        adjacencies.swap(i, j);
    }
    let mut cuts = adjacencies[..target].to_vec();
    cuts.sort_unstable();

    let mut keys = Vec::with_capacity(n);
    let mut block_start = 0;
    let mut high = n as i64;
    for end in cuts.iter().map(|&c| c + 1).chain(std::iter::once(n)) {
        let len = (end - block_start) as i64;
        keys.extend(high - len + 1..=high);
        high -= len;
        block_start = end;
    }

    let measured = step_down_runs(&keys);
    if measured != target {
        return Err(Error::InfeasibleDisorder { target, n });
    }
    Ok(KeySequence::from_distinct_unchecked(keys))
}

/// `1..=n` after `d` random transpositions.
pub fn nearly_sorted(n: usize, d: usize, seed: u64) -> Result<KeySequence> {
    if d > n.saturating_sub(1) {
        return Err(Error::InfeasibleDisorder { target: d, n });
    }
    let mut keys = identity(n);
    let mut rng = RngStream::new(seed);
    for _ in 0..d {
        let (i, j) = draw_pair(&mut rng, n)?;
        keys.swap(i, j);
    }
    Ok(KeySequence::from_distinct_unchecked(keys))
}

/// Reads newline-delimited decimal keys. Blank lines are skipped; line numbers
/// in errors are 1-based.
pub fn read_keys<R: BufRead>(reader: R) -> Result<Vec<i64>> {
    let mut keys = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let key = text.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            text: text.to_owned(),
        })?;
        keys.push(key);
    }
    Ok(keys)
}

/// Reads keys and checks distinctness.
pub fn read_sequence<R: BufRead>(reader: R) -> Result<KeySequence> {
    KeySequence::new(read_keys(reader)?)
}

pub fn write_keys<W: Write>(mut out: W, keys: &[i64]) -> Result<()> {
    for key in keys {
        writeln!(out, "{key}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn is_permutation_of_1_to_n(keys: &[i64]) -> bool {
        let mut v = keys.to_vec();
        v.sort_unstable();
        v == identity(keys.len())
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_permutation(1, 0).as_slice(), &[1]);
        assert!(uniform_permutation(0, 0).is_empty());
        assert_eq!(uniform_permutation_keys(100, 7), uniform_permutation_keys(100, 7));
        assert_ne!(uniform_permutation_keys(100, 7), uniform_permutation_keys(100, 8));
    }

    #[test]
    fn uniform_mean_disorder() {
        // E = (n-1)/2 = 2499.5, sigma = sqrt((n+1)/12) ~ 20.4 per draw.
        let seeds = 50;
        let total: usize = (0..seeds).map(|s| uniform_permutation(5000, s).step_down_runs()).sum();
        let mean = total as f64 / seeds as f64;
        assert!((mean - 2499.5).abs() <= 25.0, "mean {mean}");
    }

    #[test]
    fn uniform_over_all_720_orders() {
        let draws = 72_000u64;
        let mut counts: HashMap<Vec<i64>, u64> = HashMap::new();
        for seed in 0..draws {
            *counts.entry(uniform_permutation_keys(6, seed)).or_default() += 1;
        }
        assert_eq!(counts.len(), 720);
        let expected = draws as f64 / 720.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // df = 719; mean 719, sd ~ 37.9.
        assert!((chi2 - 719.0).abs() < 5.0 * (2.0f64 * 719.0).sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn target_examples() {
        let s = with_target_disorder(10, 0, 1).unwrap();
        assert_eq!(s.as_slice(), identity(10).as_slice());
        let s = with_target_disorder(10, 9, 1).unwrap();
        assert_eq!(s.as_slice(), &[10, 9, 8, 7, 6, 5, 4, 3, 2, 1]);
        assert_eq!(with_target_disorder(100, 37, 5).unwrap().step_down_runs(), 37);
        assert!(matches!(
            with_target_disorder(10, 10, 1),
            Err(Error::InfeasibleDisorder { target: 10, n: 10 })
        ));
        assert!(with_target_disorder(0, 0, 1).unwrap().is_empty());
        assert!(with_target_disorder(0, 1, 1).is_err());
    }

    #[test]
    fn nearly_sorted_bounds() {
        let s = nearly_sorted(50, 3, 2).unwrap();
        assert!(is_permutation_of_1_to_n(s.as_slice()));
        assert!(s.step_down_runs() <= 6);
        assert!(nearly_sorted(5, 5, 0).is_err());
    }

    #[test]
    fn key_io() {
        let keys = read_keys("3\n 1\n\n-2\n".as_bytes()).unwrap();
        assert_eq!(keys, [3, 1, -2]);
        let err = read_keys("1\n2\nx\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(read_sequence("1\n2\n1\n".as_bytes()), Err(Error::DuplicateKey(1))));
        let mut out = Vec::new();
        write_keys(&mut out, &[5, -1]).unwrap();
        assert_eq!(out, b"5\n-1\n");
    }

    proptest! {
        #[test]
        fn target_disorder_is_exact(n in 0usize..300, frac in 0.0f64..=1.0, seed in any::<u64>()) {
            let target = ((n.saturating_sub(1)) as f64 * frac).round() as usize;
            let s = GenSpec { n, kind: GenKind::TargetDisorder(target), seed }.generate().unwrap();
            prop_assert_eq!(s.step_down_runs(), target);
            prop_assert!(is_permutation_of_1_to_n(s.as_slice()));
        }

        #[test]
        fn generated_keys_are_1_to_n(n in 0usize..300, seed in any::<u64>()) {
            let s = GenSpec { n, kind: GenKind::Uniform, seed }.generate().unwrap();
            prop_assert!(is_permutation_of_1_to_n(s.as_slice()));
            let again = GenSpec { n, kind: GenKind::Uniform, seed }.generate().unwrap();
            prop_assert_eq!(s, again);
        }
    }
}
