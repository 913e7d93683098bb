//! Exact counting behind the descent statistics of random permutations.
//!
//! Terminology: `eulerian_runs(n, k)` counts permutations of `n` elements with
//! exactly `k` ascending runs; a permutation with `d` descents has `d + 1`
//! runs, so `descent_permutation_count(n, d) = eulerian_runs(n, d + 1)`.
//! Every count and probability is exact. Floating point appears only in
//! [`Probability::to_f64`] and [`ImprovementVerdict::ratio`].

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `n` for which [`descent_distribution`] builds a row by default.
pub const DEFAULT_DISTRIBUTION_CAP: usize = 200;

/// Arbitrary-precision nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        Self(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact probability in `[0, 1]`, stored as a reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(Ratio<BigUint>);

impl Probability {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() || numerator > denominator {
            return Err(Error::InvalidProbability);
        }
        Ok(Self(Ratio::new(numerator, denominator)))
    }

    pub fn from_u64(numerator: u64, denominator: u64) -> Result<Self> {
        Self::new(numerator.into(), denominator.into())
    }

    pub fn zero() -> Self {
        Self(Ratio::zero())
    }

    pub fn one() -> Self {
        Self(Ratio::one())
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn complement(&self) -> Self {
        Self(Ratio::one() - &self.0)
    }

    /// `self > num / den`, decided exactly.
    pub fn exceeds(&self, num: u64, den: u64) -> bool {
        self.numerator() * den > self.denominator() * num
    }

    pub fn exceeds_half(&self) -> bool {
        self.exceeds(1, 2)
    }

    /// Nearest-ish `f64`. Accurate to a couple of ulps even when numerator and
    /// denominator are far beyond `f64` range.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.numerator(), self.denominator())
    }

    /// The exact fraction when it is short, otherwise a decimal approximation
    /// tagged with the size of the exact denominator. Values within 1e-6 of 0
    /// or 1 are written as `d.dddddde-N` or `1 - d.dddddde-N` so they do not
    /// round to an endpoint.
    pub fn compact(&self) -> String {
        let exact = self.to_string();
        if exact.len() <= 48 {
            return exact;
        }
        let value = self.to_f64();
        let approx = if value < 1e-6 {
            scientific(self.numerator(), self.denominator())
        } else if value > 1.0 - 1e-6 {
            let rest = self.complement();
            format!("1 - {}", scientific(rest.numerator(), rest.denominator()))
        } else {
            format!("{value:.12}")
        };
        format!(
            "{approx} (exact fraction with a {}-digit denominator)",
            self.denominator().to_string().len()
        )
    }

    fn ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

/// `num / den` as `d.dddddde-N`, truncated, valid far below `f64` range.
fn scientific(num: &BigUint, den: &BigUint) -> String {
    const DIGITS: u32 = 7;
    if num.is_zero() {
        return "0".into();
    }
    let ten = BigUint::from(10u32);
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled = |exp: i64| {
        let shift = i64::from(DIGITS) - 1 - exp;
        if shift >= 0 {
            (num * ten.pow(shift as u32)) / den
        } else {
            num / (den * ten.pow((-shift) as u32))
        }
    };
    let mut mantissa = scaled(exp);
    if mantissa < ten.pow(DIGITS - 1) {
        exp -= 1;
        mantissa = scaled(exp);
    }
    let digits = mantissa.to_string();
    format!("{}.{}e{exp}", &digits[..1], &digits[1..])
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries ~64 significant bits.
    let shift = (den.bits() as i64 - num.bits() as i64 + 64).max(0);
    let q = (num << shift as usize) / den;
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    mantissa * 2f64.powi(-(shift as i32))
}

/// Exact binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigCount::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    // Each prefix product C(n-k+i, i) is an integer, so the division is exact.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    BigCount(acc)
}

/// Number of permutations of `n` elements with exactly `k` ascending runs,
/// from the alternating sum `sum_{j=0}^{k} (-1)^j (k-j)^n C(n+1, j)`.
/// Returns zero for `k` outside `[1, n]`.
pub fn eulerian_runs(n: u64, k: i64) -> BigCount {
    if n == 0 || k < 1 || k as u64 > n {
        return BigCount::zero();
    }
    let k = k as u64;
    let mut sum = BigInt::zero();
    for j in 0..=k {
        let term = BigInt::from(k - j).pow(n as u32) * BigInt::from(binomial(n + 1, j as i64).0);
        if j.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
    }
    // The recurrence cross-check in the tests pins the sum as nonnegative.
    match sum.into_parts() {
        (Sign::Minus, _) => unreachable!("alternating Eulerian sum went negative"),
        (_, magnitude) => BigCount(magnitude),
    }
}

/// Number of permutations of `n` elements with exactly `d` descents.
pub fn descent_permutation_count(n: u64, d: i64) -> BigCount {
    eulerian_runs(n, d + 1)
}

/// Row `n` of the descent triangle via
/// `A(n, k) = (k + 1) A(n-1, k) + (n - k) A(n-1, k-1)` (indexed by descents).
fn descent_row_by_recurrence(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for len in 2..=n {
        let mut next = vec![BigUint::zero(); len];
        for (d, slot) in next.iter_mut().enumerate() {
            if d < row.len() {
                *slot += &row[d] * (d as u64 + 1);
            }
            if d >= 1 {
                *slot += &row[d - 1] * (len - d) as u64;
            }
        }
        row = next;
    }
    row
}

/// Eulerian runs row from the recurrence `A(n,k) = k A(n-1,k) + (n-k+1) A(n-1,k-1)`,
/// entry `k - 1` holding `A(n, k)`. Independent of [`eulerian_runs`].
pub fn eulerian_runs_by_recurrence(n: usize) -> Vec<BigCount> {
    if n == 0 {
        return Vec::new();
    }
    descent_row_by_recurrence(n).into_iter().map(BigCount).collect()
}

/// How many of the `n!` permutations have each possible descent count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentDistribution {
    n: usize,
    counts: Vec<BigCount>,
}

impl DescentDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `counts()[d]` permutations have exactly `d` descents, `0 <= d <= n - 1`.
    pub fn counts(&self) -> &[BigCount] {
        &self.counts
    }

    pub fn count(&self, d: usize) -> BigCount {
        self.counts.get(d).cloned().unwrap_or_default()
    }

    /// Sum of all counts (equals `n!`).
    pub fn total(&self) -> BigUint {
        self.counts.iter().map(|c| &c.0).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().eq(self.counts.iter().rev())
    }

    /// Probability that a uniformly random permutation has fewer than `z`
    /// descents.
    pub fn p_less(&self, z: i64) -> Result<Probability> {
        let max = self.n - 1;
        if z < 0 || z as usize > max {
            return Err(Error::ThresholdOutOfRange { z, max });
        }
        let below: BigUint = self.counts[..z as usize].iter().map(|c| &c.0).sum();
        Probability::new(below, self.total())
    }

    /// `p_less(z)` for every `z` in `0..=n-1`, with shared prefix sums.
    pub fn p_less_all(&self) -> Vec<Probability> {
        let total = self.total();
        let mut below = BigUint::zero();
        let mut out = Vec::with_capacity(self.n);
        for count in &self.counts {
            out.push(Probability(Ratio::new(below.clone(), total.clone())));
            below += &count.0;
        }
        out
    }
}

/// Descent distribution for `n` with the default cap.
pub fn descent_distribution(n: usize) -> Result<DescentDistribution> {
    descent_distribution_capped(n, DEFAULT_DISTRIBUTION_CAP)
}

pub fn descent_distribution_capped(n: usize, cap: usize) -> Result<DescentDistribution> {
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    if n > cap {
        return Err(Error::AboveCap { n, cap });
    }
    Ok(uncapped_distribution(n))
}

fn uncapped_distribution(n: usize) -> DescentDistribution {
    DescentDistribution {
        n,
        counts: descent_row_by_recurrence(n).into_iter().map(BigCount).collect(),
    }
}

/// Probability that a uniformly random permutation of `n` elements has fewer
/// than `z` descents. Not subject to the distribution cap: part sizes of a few
/// hundred are routine here.
pub fn p_less(n: usize, z: i64) -> Result<Probability> {
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    uncapped_distribution(n).p_less(z)
}

/// Disorder level above which `p_less(n, z) > 1/2` is asserted:
/// `floor(n / 2) + 1`.
pub fn claim1_threshold(n: usize) -> usize {
    n / 2 + 1
}

fn binomial_term(l: u64, x: u64, p: &Probability) -> Ratio<BigUint> {
    let q = p.complement();
    let coeff = Ratio::from_integer(binomial(l, x as i64).0);
    coeff * num_traits::pow(p.ratio().clone(), x as usize) * num_traits::pow(q.ratio().clone(), (l - x) as usize)
}

/// Probability that at least `c` of `l` independent parts improve, each with
/// probability `p`.
pub fn claim2_at_least(l: u64, c: u64, p: &Probability) -> Result<Probability> {
    if c > l {
        return Err(Error::TailOutOfRange { c, l });
    }
    let sum = (c..=l).fold(Ratio::zero(), |acc, x| acc + binomial_term(l, x, p));
    Ok(Probability(sum))
}

/// Probability that fewer than `c` of `l` parts improve (the complement of
/// [`claim2_at_least`], summed independently).
pub fn binomial_lower_tail(l: u64, c: u64, p: &Probability) -> Result<Probability> {
    if c > l {
        return Err(Error::TailOutOfRange { c, l });
    }
    let sum = (0..c).fold(Ratio::zero(), |acc, x| acc + binomial_term(l, x, p));
    Ok(Probability(sum))
}

/// Outcome of checking `(before + 1) / (after + 1) > 2^(1/m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprovementVerdict {
    pub holds: bool,
    /// `(before + 1) / (after + 1)`, for reporting only.
    pub ratio: f64,
    /// `2^(1/m)`, for reporting only.
    pub threshold: f64,
}

/// Whether shrinking the disorder from `m_before` to `m_after` pays for a
/// shuffle budget of `n / m` swaps. Decided as
/// `(m_before + 1)^m > 2 (m_after + 1)^m` in exact integers.
pub fn improvement_condition(m_before: u64, m_after: u64, m: u32) -> Result<ImprovementVerdict> {
    if m == 0 {
        return Err(Error::ZeroDivisor);
    }
    let lhs = BigUint::from(m_before + 1).pow(m);
    let rhs = BigUint::from(m_after + 1).pow(m) * 2u32;
    Ok(ImprovementVerdict {
        holds: lhs > rhs,
        ratio: (m_before + 1) as f64 / (m_after + 1) as f64,
        threshold: 2f64.powf(1.0 / m as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pascal's triangle by additions only.
    fn pascal_row(n: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    fn prob(num: u64, den: u64) -> Probability {
        Probability::from_u64(num, den).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(9, 0), 1);
        assert_eq!(binomial(52, 26), 495_918_532_948_104);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..=80 {
            let row = pascal_row(n);
            for (k, expected) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u64, k as i64).0, expected, "C({n},{k})");
            }
        }
        assert_eq!(pascal_row(52)[26], BigUint::from(495_918_532_948_104u64));
    }

    #[test]
    fn eulerian_examples() {
        assert_eq!(eulerian_runs(4, 2), 11);
        assert_eq!(eulerian_runs(6, 3), 302);
        for n in 1..30 {
            assert_eq!(eulerian_runs(n, 1), 1);
        }
        assert_eq!(eulerian_runs(4, 0), 0);
        assert_eq!(eulerian_runs(4, 5), 0);
        assert_eq!(descent_permutation_count(8, 3), 15619);
        assert_eq!(descent_permutation_count(7, 4), 1191);
        assert_eq!(descent_permutation_count(5, 0), 1);
        assert_eq!(descent_permutation_count(5, -1), 0);
        assert_eq!(descent_permutation_count(5, 5), 0);
    }

    #[test]
    fn distribution_examples() {
        let row = |n| -> Vec<u64> {
            descent_distribution(n).unwrap().counts().iter().map(|c| c.to_u64().unwrap()).collect()
        };
        assert_eq!(row(5), [1, 26, 66, 26, 1]);
        assert_eq!(row(2), [1, 1]);
        assert_eq!(row(1), [1]);
        assert_eq!(descent_distribution(8).unwrap().total(), BigUint::from(40320u32));
        assert!(matches!(descent_distribution(0), Err(Error::EmptyLength)));
        assert!(matches!(descent_distribution(201), Err(Error::AboveCap { n: 201, cap: 200 })));
        assert!(descent_distribution_capped(250, 300).is_ok());
    }

    #[test]
    fn formula_matches_recurrence() {
        for n in 1..=40usize {
            let rec = eulerian_runs_by_recurrence(n);
            for k in 1..=n {
                assert_eq!(eulerian_runs(n as u64, k as i64), rec[k - 1], "A({n},{k})");
            }
        }
    }

    #[test]
    fn distribution_shape() {
        let mut factorial = BigUint::one();
        for n in 1..=40usize {
            factorial *= n;
            let dist = descent_distribution(n).unwrap();
            assert_eq!(dist.total(), factorial);
            assert!(dist.is_symmetric());
            assert_eq!(dist.count(0), 1);
            assert_eq!(dist.count(n - 1), 1);
            for m in 1..=(n - 1) / 2 {
                assert!(dist.count(m - 1) < dist.count(m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn p_less_examples() {
        assert_eq!(p_less(4, 3).unwrap(), prob(23, 24));
        assert_eq!(p_less(4, 0).unwrap(), Probability::zero());
        assert_eq!(p_less(3, 2).unwrap(), prob(5, 6));
        assert!(matches!(p_less(4, 4), Err(Error::ThresholdOutOfRange { .. })));
        assert!(matches!(p_less(4, -1), Err(Error::ThresholdOutOfRange { .. })));
        assert!(p_less(0, 0).is_err());
    }

    #[test]
    fn p_less_properties() {
        for n in 1..=40usize {
            let dist = descent_distribution(n).unwrap();
            let all = dist.p_less_all();
            assert!(all.windows(2).all(|w| w[0] <= w[1]));
            for (z, p) in all.iter().enumerate().skip(claim1_threshold(n) + 1) {
                assert!(p.exceeds_half(), "n={n} z={z}");
            }
            let total = dist.total();
            assert_eq!(all[n - 1], Probability::new(&total - 1u32, total).unwrap());
            assert_eq!(all[n - 1], dist.p_less(n as i64 - 1).unwrap());
        }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(claim1_threshold(8), 5);
        assert_eq!(claim1_threshold(7), 4);
        assert_eq!(claim1_threshold(312), 157);
    }

    #[test]
    fn claim2_examples() {
        let p = prob(3, 7);
        for l in 0..6 {
            assert_eq!(claim2_at_least(l, 0, &p).unwrap(), Probability::one());
        }
        assert_eq!(claim2_at_least(1, 1, &p).unwrap(), p);
        assert_eq!(claim2_at_least(2, 1, &prob(1, 2)).unwrap(), prob(3, 4));
        assert!(matches!(claim2_at_least(2, 3, &p), Err(Error::TailOutOfRange { c: 3, l: 2 })));
    }

    #[test]
    fn claim2_tails_partition_unity() {
        for p in [prob(0, 1), prob(1, 3), prob(1, 2), prob(23, 24), prob(1, 1)] {
            for l in 0..=16 {
                for c in 0..=l {
                    let upper = claim2_at_least(l, c, &p).unwrap();
                    let lower = binomial_lower_tail(l, c, &p).unwrap();
                    assert_eq!(upper.ratio() + lower.ratio(), Ratio::one());
                }
            }
        }
    }

    #[test]
    fn improvement_examples() {
        let v = improvement_condition(2503, 2245, 2).unwrap();
        assert!(!v.holds);
        assert!((v.ratio - 2504.0 / 2246.0).abs() < 1e-12);
        for (mb, m) in [(0, 1), (17, 2), (2503, 7)] {
            assert!(!improvement_condition(mb, mb, m).unwrap().holds);
        }
        assert!(improvement_condition(3, 1, 2).unwrap().holds);
        assert!(matches!(improvement_condition(3, 1, 0), Err(Error::ZeroDivisor)));
        // 2^(1/1) boundary: ratio exactly 2 is not strictly greater.
        assert!(!improvement_condition(3, 1, 1).unwrap().holds);
        assert!(improvement_condition(4, 1, 1).unwrap().holds);
    }

    #[test]
    fn probability_rendering() {
        assert_eq!(prob(23, 24).to_string(), "23/24");
        assert!((prob(23, 24).to_f64() - 23.0 / 24.0).abs() < 1e-15);
        assert_eq!(Probability::zero().to_f64(), 0.0);
        let tiny = Probability::new(BigUint::one(), BigUint::one() << 2000usize).unwrap();
        assert_eq!(tiny.to_f64(), 0.0);
        let p = p_less(312, 311).unwrap();
        assert!(p.to_f64() > 0.999 && p.to_f64() <= 1.0);
        assert!(p.exceeds(999, 1000) && !p.exceeds(1, 1));
        assert!(Probability::from_u64(3, 2).is_err());
        assert_eq!(prob(5, 6).compact(), "5/6");
        // 1 - 1/312!
        assert!(p.compact().starts_with("1 - 4.757313e-645 ("), "{}", p.compact());
        assert!(p.compact().ends_with("-digit denominator)"));
        assert_eq!(scientific(&BigUint::from(1u32), &BigUint::from(3u32)), "3.333333e-1");
        assert_eq!(scientific(&BigUint::from(7u32), &BigUint::from(7u32)), "1.000000e0");
        assert_eq!(scientific(&BigUint::from(123456789u32), &BigUint::from(1000u32)), "1.234567e5");
        let mid = p_less(312, 158).unwrap().compact();
        assert!(mid.starts_with("0.652"), "{mid}");
        assert!(Probability::from_u64(0, 0).is_err());
    }
}
