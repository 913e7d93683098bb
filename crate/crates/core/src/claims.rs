//! Checks of the descent-count model against enumeration and simulation.
//!
//! * exhaustive: histogram of descents over all `n!` permutations versus the
//!   Eulerian row;
//! * model: `p_less(n, z) > 1/2` for every `z` above `floor(n/2) + 1`;
//! * kernel: the real effect of one blind swap on a permutation with exactly
//!   `z` descents, next to the model's `p_less(n, z)`;
//! * claim 2: simulated count of improved parts versus the exact binomial tail.

use serde::Serialize;

use crate::combinatorics::{
    claim1_threshold, claim2_at_least, descent_distribution, p_less, Probability,
};
use crate::datagen::{uniform_permutation_keys, with_target_disorder};
use crate::disorder::{step_down_runs, swap_delta_unchecked};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, draw_pair, RngStream};

/// Largest `n` enumerated exhaustively.
pub const MAX_EXHAUSTIVE_N: usize = 9;

/// Largest `n` for the swap-kernel estimate (its model probability needs the
/// full Eulerian row).
pub const MAX_KERNEL_N: usize = 1000;

/// Descent-count histogram over all permutations of `0..n`, by Heap's algorithm.
pub fn exhaustive_histogram(n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::ExhaustiveTooLarge { n, max: MAX_EXHAUSTIVE_N });
    }
    let mut perm: Vec<i64> = (0..n as i64).collect();
    let mut hist = vec![0u64; n];
    let mut stack = vec![0usize; n];
    hist[step_down_runs(&perm)] += 1;
    let mut i = 1;
    while i < n {
        if stack[i] < i {
            let swap_with = if i % 2 == 0 { 0 } else { stack[i] };
            perm.swap(swap_with, i);
            hist[step_down_runs(&perm)] += 1;
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(hist)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExhaustiveCheck {
    pub n: usize,
    pub histogram: Vec<u64>,
    pub expected: Vec<String>,
    pub pass: bool,
}

pub fn check_exhaustive(n: usize) -> Result<ExhaustiveCheck> {
    let histogram = exhaustive_histogram(n)?;
    let dist = descent_distribution(n)?;
    let pass = dist.counts().iter().zip(&histogram).all(|(c, &h)| *c == h);
    Ok(ExhaustiveCheck {
        n,
        histogram,
        expected: dist.counts().iter().map(|c| c.to_string()).collect(),
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelCheck {
    pub n: usize,
    pub threshold: usize,
    /// Smallest `z > threshold` with `p_less(n, z) <= 1/2`, if any.
    pub first_failure: Option<usize>,
    /// `p_less(n, n - 1)` as an exact fraction.
    pub p_top: String,
    pub p_top_f64: f64,
    pub pass: bool,
}

/// Verifies `p_less(n, z) > 1/2` for all `threshold < z <= n - 1`.
pub fn check_model(n: usize) -> Result<ModelCheck> {
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    let threshold = claim1_threshold(n);
    let dist = crate::combinatorics::descent_distribution_capped(n, usize::MAX)?;
    let all = dist.p_less_all();
    let first_failure = (threshold + 1..n).find(|&z| !all[z].exceeds_half());
    let top = &all[n - 1];
    Ok(ModelCheck {
        n,
        threshold,
        first_failure,
        p_top: top.compact(),
        p_top_f64: top.to_f64(),
        pass: first_failure.is_none(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSampler {
    /// Uniform permutations conditioned on `M = z` by rejection.
    Rejection,
    /// The descent-set constructor of [`with_target_disorder`]; not uniform
    /// among permutations with `z` descents.
    Constructed,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelEstimate {
    pub n: usize,
    pub z: usize,
    pub trials: u64,
    pub sampler: KernelSampler,
    /// Trials where one blind swap left fewer than `z` descents.
    pub improved: u64,
    pub empirical: f64,
    /// Model value `p_less(n, z)`.
    pub model: f64,
    pub mean_change: f64,
}

/// Minimum acceptance rate for rejection sampling in [`estimate_kernel`].
const MIN_REJECTION_RATE: f64 = 1e-3;

/// Monte Carlo estimate of `P(z' < z)` after one blind swap applied to a
/// permutation with exactly `z` descents.
pub fn estimate_kernel(n: usize, z: usize, trials: u64, seed: u64) -> Result<KernelEstimate> {
    if n < 2 {
        return Err(Error::PairFromShortRange(n));
    }
    if n > MAX_KERNEL_N {
        return Err(Error::AboveCap { n, cap: MAX_KERNEL_N });
    }
    let model = p_less(n, z as i64)?;
    let dist = crate::combinatorics::descent_distribution_capped(n, usize::MAX)?;
    let acceptance = Probability::new(dist.count(z).0, dist.total())?.to_f64();
    let sampler = if acceptance >= MIN_REJECTION_RATE {
        KernelSampler::Rejection
    } else {
        KernelSampler::Constructed
    };

    let mut rng = RngStream::new(seed);
    let mut improved = 0u64;
    let mut change = 0i64;
    for t in 0..trials {
        let sample_seed = derive_seed(seed, t);
        let keys = match sampler {
            KernelSampler::Rejection => {
                let mut attempt = 0u64;
                loop {
                    let keys = uniform_permutation_keys(n, derive_seed(sample_seed, attempt));
                    if step_down_runs(&keys) == z {
                        break keys;
                    }
                    attempt += 1;
                }
            }
            KernelSampler::Constructed => with_target_disorder(n, z, sample_seed)?.into_vec(),
        };
        let (i, j) = draw_pair(&mut rng, n)?;
        let delta = swap_delta_unchecked(&keys, i, j);
        change += delta;
        if delta < 0 {
            improved += 1;
        }
    }
    Ok(KernelEstimate {
        n,
        z,
        trials,
        sampler,
        improved,
        empirical: improved as f64 / trials.max(1) as f64,
        model: model.to_f64(),
        mean_change: change as f64 / trials.max(1) as f64,
    })
}

/// Mean change in disorder from one blind swap on fresh uniform permutations.
pub fn blind_swap_mean_change(n: usize, trials: u64, seed: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::PairFromShortRange(n));
    }
    let mut rng = RngStream::new(seed);
    let mut total = 0i64;
    for t in 0..trials {
        let keys = uniform_permutation_keys(n, derive_seed(seed, t));
        let (i, j) = draw_pair(&mut rng, n)?;
        total += swap_delta_unchecked(&keys, i, j);
    }
    Ok(total as f64 / trials.max(1) as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim2Check {
    pub l: u64,
    pub c: u64,
    /// Exact tail `P(at least c of l parts improve)`.
    pub exact: String,
    pub exact_f64: f64,
    pub empirical: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Simulates `l` independent parts per trial, each a uniform permutation of
/// `part_n` keys counted as improved when its disorder is below `z`, and
/// compares the frequency of "at least `c` improved" with
/// `claim2_at_least(l, c, p_less(part_n, z))`.
///
/// With `part_n = 8, z = 4` the per-part probability is exactly 1/2.
pub fn simulate_claim2(
    l: u64,
    cs: &[u64],
    part_n: usize,
    z: usize,
    trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<Vec<Claim2Check>> {
    let p = p_less(part_n, z as i64)?;
    if let Some(&c) = cs.iter().find(|&&c| c > l) {
        return Err(Error::TailOutOfRange { c, l });
    }
    let mut improved_hist = vec![0u64; l as usize + 1];
    let mut rng = RngStream::new(seed);
    let mut keys: Vec<i64> = (1..=part_n as i64).collect();
    for _ in 0..trials {
        let mut improved = 0usize;
        for _ in 0..l {
            rng.shuffle(&mut keys);
            if step_down_runs(&keys) < z {
                improved += 1;
            }
        }
        improved_hist[improved] += 1;
    }
    cs.iter()
        .map(|&c| {
            let exact = claim2_at_least(l, c, &p)?;
            let hits: u64 = improved_hist[c as usize..].iter().sum();
            let empirical = hits as f64 / trials.max(1) as f64;
            let exact_f64 = exact.to_f64();
            Ok(Claim2Check {
                l,
                c,
                exact: exact.compact(),
                exact_f64,
                empirical,
                tolerance,
                pass: (empirical - exact_f64).abs() <= tolerance,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_small_cases() {
        assert_eq!(exhaustive_histogram(1).unwrap(), [1]);
        assert_eq!(exhaustive_histogram(3).unwrap(), [1, 4, 1]);
        assert_eq!(
            exhaustive_histogram(8).unwrap(),
            [1, 247, 4293, 15619, 15619, 4293, 247, 1]
        );
        assert!(matches!(exhaustive_histogram(10), Err(Error::ExhaustiveTooLarge { n: 10, max: 9 })));
        assert!(exhaustive_histogram(0).is_err());
    }

    #[test]
    fn exhaustive_checks_pass() {
        for n in 1..=8 {
            assert!(check_exhaustive(n).unwrap().pass, "n={n}");
        }
    }

    #[test]
    fn model_check_small_and_part_size() {
        let c = check_model(4).unwrap();
        assert_eq!(c.p_top, "23/24");
        assert!(c.pass);
        let c = check_model(312).unwrap();
        assert_eq!(c.threshold, 157);
        assert!(c.pass && c.p_top_f64 > 0.999);
    }

    #[test]
    fn kernel_runs_both_samplers() {
        let near_mean = estimate_kernel(20, 10, 500, 1).unwrap();
        assert_eq!(near_mean.sampler, KernelSampler::Rejection);
        assert_eq!(near_mean.trials, 500);
        let extreme = estimate_kernel(200, 190, 200, 1).unwrap();
        assert_eq!(extreme.sampler, KernelSampler::Constructed);
        // From 190 of 199 possible descents almost any swap helps.
        assert!(extreme.empirical > 0.5);
        assert!(estimate_kernel(1, 0, 10, 0).is_err());
        assert!(estimate_kernel(2000, 10, 10, 0).is_err());
    }

    #[test]
    fn claim2_half_probability() {
        let checks = simulate_claim2(16, &[0, 1, 8, 16], 8, 4, 20_000, 3, 0.02).unwrap();
        assert_eq!(checks[0].exact, "1/1");
        assert_eq!(checks[2].exact, "39203/65536");
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert!(simulate_claim2(4, &[5], 8, 4, 10, 0, 0.1).is_err());
    }
}
