//! Shuffle-then-sort experiments: one [`ExperimentRecord`] per input, with
//! the adaptive sort timed with and without preprocessing and the baseline
//! sort as a reference.
//!
//! Seeds: repetition `r` of size index `s` uses
//! `rep_seed = derive_seed(derive_seed(master, s), r)`. The input is
//! `uniform_permutation(n, rep_seed)` and the shuffle stream is seeded with
//! `derive_seed(rep_seed, 0)`. The record's `seed` column holds `rep_seed`.

use std::io::Write;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::uniform_permutation;
use crate::disorder::KeySequence;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::shuffle::ShuffleConfig;
use crate::sorting::{adaptive_merge_sort, baseline_merge_sort, shuffled_adaptive_sort};

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 15] = [
    "data_size",
    "disorder_before",
    "disorder_after",
    "shuffle_time",
    "adaptive_after_shuffle_time",
    "combined_time",
    "adaptive_without_shuffle_time",
    "non_adaptive_time",
    "pct_improvement_vs_adaptive",
    "pct_improvement_vs_nonadaptive",
    "comparisons_adaptive_after_shuffle",
    "comparisons_adaptive",
    "comparisons_baseline",
    "policy",
    "seed",
];

/// Columns that do not depend on wall-clock measurements.
pub const DETERMINISTIC_COLUMNS: [&str; 8] = [
    "data_size",
    "disorder_before",
    "disorder_after",
    "comparisons_adaptive_after_shuffle",
    "comparisons_adaptive",
    "comparisons_baseline",
    "policy",
    "seed",
];

/// One row of results. Times are in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub data_size: usize,
    pub disorder_before: usize,
    pub disorder_after: usize,
    pub shuffle_time: f64,
    pub adaptive_after_shuffle_time: f64,
    pub combined_time: f64,
    pub adaptive_without_shuffle_time: f64,
    pub non_adaptive_time: f64,
    pub pct_improvement_vs_adaptive: f64,
    pub pct_improvement_vs_nonadaptive: f64,
    pub comparisons_adaptive_after_shuffle: u64,
    pub comparisons_adaptive: u64,
    pub comparisons_baseline: u64,
    pub policy: String,
    pub seed: u64,
}

/// `100 (old - new) / old`, or 0 when `old` is 0.
pub fn pct_improvement(old: f64, new: f64) -> f64 {
    if old == 0.0 {
        0.0
    } else {
        100.0 * (old - new) / old
    }
}

impl ExperimentRecord {
    /// Checks the combined-time and percentage identities.
    pub fn is_consistent(&self) -> bool {
        self.combined_time == self.shuffle_time + self.adaptive_after_shuffle_time
            && self.pct_improvement_vs_adaptive
                == pct_improvement(self.adaptive_without_shuffle_time, self.combined_time)
            && self.pct_improvement_vs_nonadaptive
                == pct_improvement(self.non_adaptive_time, self.combined_time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?}: expected csv or json")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    /// `seed` here is the master seed.
    pub shuffle: ShuffleConfig,
    /// Fixed input used for every repetition instead of generated ones.
    pub input: Option<KeySequence>,
    /// Run repetitions concurrently. Perturbs the time columns.
    pub parallel: bool,
}

impl BenchConfig {
    fn tasks(&self) -> Result<Vec<(usize, u64)>> {
        if self.repetitions == 0 {
            return Err(Error::InvalidBenchConfig("repetitions must be at least 1"));
        }
        let sizes = match &self.input {
            Some(seq) => vec![seq.len()],
            None if self.sizes.is_empty() => {
                return Err(Error::InvalidBenchConfig("no sizes given"));
            }
            None => self.sizes.clone(),
        };
        let master = self.shuffle.seed;
        Ok(sizes
            .iter()
            .enumerate()
            .flat_map(|(s, &n)| {
                let size_seed = derive_seed(master, s as u64);
                (0..self.repetitions).map(move |r| (n, derive_seed(size_seed, r as u64)))
            })
            .collect())
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Runs one repetition on `seq`.
pub fn run_one(seq: &KeySequence, shuffle: &ShuffleConfig, rep_seed: u64) -> Result<ExperimentRecord> {
    let config = ShuffleConfig {
        seed: derive_seed(rep_seed, 0),
        ..*shuffle
    };
    let (shuffled_sorted, report, after_stats) = shuffled_adaptive_sort(seq, &config)?;
    let (adaptive_sorted, adaptive_stats) = adaptive_merge_sort(seq.as_slice())?;
    let (baseline_sorted, baseline_stats) = baseline_merge_sort(seq.as_slice());

    if shuffled_sorted.as_slice() != adaptive_sorted.as_slice() {
        return Err(Error::SortMismatch(format!(
            "shuffled adaptive sort differs from adaptive sort (n = {}, seed = {rep_seed})",
            seq.len()
        )));
    }
    if adaptive_sorted != baseline_sorted {
        return Err(Error::SortMismatch(format!(
            "adaptive sort differs from baseline (n = {}, seed = {rep_seed})",
            seq.len()
        )));
    }

    let shuffle_time = secs(report.elapsed);
    let adaptive_after_shuffle_time = secs(after_stats.elapsed);
    let combined_time = shuffle_time + adaptive_after_shuffle_time;
    let adaptive_without_shuffle_time = secs(adaptive_stats.elapsed);
    let non_adaptive_time = secs(baseline_stats.elapsed);
    Ok(ExperimentRecord {
        data_size: seq.len(),
        disorder_before: report.total_before,
        disorder_after: report.total_after,
        shuffle_time,
        adaptive_after_shuffle_time,
        combined_time,
        adaptive_without_shuffle_time,
        non_adaptive_time,
        pct_improvement_vs_adaptive: pct_improvement(adaptive_without_shuffle_time, combined_time),
        pct_improvement_vs_nonadaptive: pct_improvement(non_adaptive_time, combined_time),
        comparisons_adaptive_after_shuffle: after_stats.comparisons,
        comparisons_adaptive: adaptive_stats.comparisons,
        comparisons_baseline: baseline_stats.comparisons,
        policy: shuffle.policy.to_string(),
        seed: rep_seed,
    })
}

/// Runs every (size, repetition) pair. Records come back ordered by size
/// then repetition, whether or not `parallel` is set.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<ExperimentRecord>> {
    config.shuffle.validate()?;
    let tasks = config.tasks()?;
    let run = |&(n, rep_seed): &(usize, u64)| -> Result<ExperimentRecord> {
        match &config.input {
            Some(seq) => run_one(seq, &config.shuffle, rep_seed),
            None => run_one(&uniform_permutation(n, rep_seed), &config.shuffle, rep_seed),
        }
    };
    if config.parallel {
        tasks.par_iter().map(run).collect()
    } else {
        tasks.iter().map(run).collect()
    }
}

pub fn write_csv<W: Write>(out: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    if records.is_empty() {
        writer.write_record(CSV_COLUMNS)?;
    }
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, records: &[ExperimentRecord]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_records<W: Write>(out: W, records: &[ExperimentRecord], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(out, records),
        OutputFormat::Json => write_json(out, records),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::Policy;

    fn small_config() -> BenchConfig {
        BenchConfig {
            sizes: vec![500, 1000],
            repetitions: 3,
            shuffle: ShuffleConfig {
                seed: 42,
                ..ShuffleConfig::default()
            },
            input: None,
            parallel: false,
        }
    }

    #[test]
    fn pct_matches_table_row() {
        assert!((pct_improvement(0.05174, 0.05004) - 3.28566).abs() < 1e-4);
        assert!((pct_improvement(0.06546, 0.05004) - 23.55637).abs() < 1e-4);
        assert_eq!(pct_improvement(0.0, 1.0), 0.0);
    }

    #[test]
    fn records_are_ordered_and_consistent() {
        let records = run_bench(&small_config()).unwrap();
        assert_eq!(records.len(), 6);
        let sizes: Vec<usize> = records.iter().map(|r| r.data_size).collect();
        assert_eq!(sizes, [500, 500, 500, 1000, 1000, 1000]);
        for r in &records {
            assert!(r.is_consistent());
            assert!(r.disorder_after < r.disorder_before);
            assert_eq!(r.policy, "guarded");
        }
    }

    #[test]
    fn parallel_matches_sequential_counts() {
        let seq = run_bench(&small_config()).unwrap();
        let par = run_bench(&BenchConfig {
            parallel: true,
            ..small_config()
        })
        .unwrap();
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(
                (a.data_size, a.disorder_after, a.comparisons_adaptive_after_shuffle, a.seed),
                (b.data_size, b.disorder_after, b.comparisons_adaptive_after_shuffle, b.seed)
            );
        }
    }

    #[test]
    fn sorted_input_is_untouched() {
        let config = BenchConfig {
            input: Some(KeySequence::from_distinct_unchecked((1..=2000).collect())),
            sizes: vec![],
            repetitions: 2,
            shuffle: ShuffleConfig {
                policy: Policy::Blind,
                ..ShuffleConfig::default()
            },
            parallel: false,
        };
        let records = run_bench(&config).unwrap();
        assert_eq!(records.len(), 2);
        for r in records {
            assert_eq!((r.disorder_before, r.disorder_after), (0, 0));
            assert_eq!(r.comparisons_adaptive_after_shuffle, r.comparisons_adaptive);
            assert_eq!(r.comparisons_adaptive, 1999);
        }
    }

    #[test]
    fn csv_header_and_empty_output() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_COLUMNS.join(","));

        let records = run_bench(&BenchConfig {
            sizes: vec![100],
            repetitions: 1,
            ..small_config()
        })
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(text.lines().count(), 2);

        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let parsed: Vec<ExperimentRecord> = reader.deserialize().collect::<std::result::Result<_, _>>().unwrap();
        assert_eq!(parsed, records);
        assert!(parsed[0].is_consistent());
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(run_bench(&BenchConfig { repetitions: 0, ..small_config() }).is_err());
        assert!(run_bench(&BenchConfig { sizes: vec![], ..small_config() }).is_err());
        let mut bad = small_config();
        bad.shuffle.k = 0;
        assert!(run_bench(&bad).is_err());
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
