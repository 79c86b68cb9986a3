//! Exact counting of the truncated subspace and the inequalities built on it.
//!
//! Every count is an arbitrary-precision integer; logarithms are taken from
//! the big integer directly (leading 64 bits plus exponent), never from
//! floating-point factorials.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::truncation::TruncationSpec;

/// Dimension of the span of `{|n₁,…,n_m⟩ : Σnᵢ ≤ a}`, which is `C(a+m, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankCount {
    pub modes: usize,
    pub cutoff: u64,
    pub rank: BigUint,
    pub log2_rank: f64,
}

/// `C(n, k)` as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `log₂ x` for a big integer, accurate to about one ulp of `f64`.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits");
    (top as f64).log2() + shift as f64
}

/// Nearest `f64` (infinite beyond the `f64` range).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Number of occupation tuples over `modes` modes with total photons `≤ cutoff`.
pub fn count_rank(modes: usize, cutoff: u64) -> RankCount {
    assert!(modes >= 1, "count_rank needs at least one mode");
    let rank = binomial(cutoff + modes as u64, modes as u64);
    let log2_rank = log2_big(&rank);
    RankCount {
        modes,
        cutoff,
        rank,
        log2_rank,
    }
}

/// Both sides of `C(n+m, m) ≤ min{(1+m)ⁿ, (1+n)ᵐ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialPowerBound {
    pub lhs: BigUint,
    pub rhs: BigUint,
}

impl BinomialPowerBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn binomial_power_bound(n: u32, m: u32) -> Result<BinomialPowerBound> {
    if n == 0 || m == 0 {
        return Err(Error::param("n, m", "both must be at least 1"));
    }
    let lhs = binomial(u64::from(n) + u64::from(m), u64::from(m));
    let by_modes = num_traits::pow(BigUint::from(1 + m), n as usize);
    let by_photons = num_traits::pow(BigUint::from(1 + n), m as usize);
    Ok(BinomialPowerBound {
        lhs,
        rhs: by_modes.min(by_photons),
    })
}

/// The two logarithmic rank bounds of a truncation together with the exact
/// value they bound. All logarithms are base 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogRankBounds {
    /// `(µ/δ) · log₂(1+m)`
    pub bound_photon: f64,
    /// `m · log₂(1 + µ/δ)`
    pub bound_mode: f64,
    /// `log₂ C(a+m, m)`
    pub actual: f64,
}

impl LogRankBounds {
    pub fn min_bound(&self) -> f64 {
        self.bound_photon.min(self.bound_mode)
    }

    /// `min bound − actual`; non-negative when the inequality holds.
    pub fn slack(&self) -> f64 {
        self.min_bound() - self.actual
    }
}

pub fn log_rank_bounds(spec: &TruncationSpec) -> LogRankBounds {
    let ratio = spec.mu / spec.delta;
    let m = spec.modes as f64;
    LogRankBounds {
        bound_photon: ratio * (1.0 + m).log2(),
        bound_mode: m * (1.0 + ratio).log2(),
        actual: count_rank(spec.modes, spec.cutoff).log2_rank,
    }
}

/// `h(p) = −p log₂ p − (1−p) log₂(1−p)` with `0 · log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} is outside [0, 1]")));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(1.0 - p))
}

/// `log₂ C(a+m, m)` and its entropy bound `(a+m) · h(m/(a+m))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyBound {
    pub log2_rank: f64,
    pub bound: f64,
}

pub fn entropy_bound(cutoff: u64, modes: usize) -> Result<EntropyBound> {
    if modes == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    let total = cutoff as f64 + modes as f64;
    let bound = total * binary_entropy(modes as f64 / total)?;
    Ok(EntropyBound {
        log2_rank: count_rank(modes, cutoff).log2_rank,
        bound,
    })
}

/// One row of the `a = m = ⌈√n⌉` tightness profile.
#[derive(Clone, Debug, PartialEq)]
pub struct TightnessRow {
    pub n: u64,
    pub k: u64,
    pub log2_rank: f64,
    pub entropy_bound: f64,
    /// `log₂(4ᵏ / (2k+1))`, a lower bound on `log₂ C(2k, k)`.
    pub central_lower: f64,
    /// Whether `C(2k,k)·(2k+1) ≥ 4ᵏ` holds as an exact integer comparison.
    pub central_lower_exact: bool,
    /// `log₂ C(2k, k) / √n`
    pub ratio: f64,
}

pub const TIGHTNESS_HEADER: &str = "n,k,log2_rank,entropy_bound,central_lower,ratio";

impl TightnessRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.k, self.log2_rank, self.entropy_bound, self.central_lower, self.ratio
        )
    }
}

/// Ceiling of the square root, exact for all `u64`.
pub fn ceil_sqrt(n: u64) -> u64 {
    let mut k = (n as f64).sqrt() as u64;
    while k * k < n {
        k += 1;
    }
    while k > 0 && (k - 1) * (k - 1) >= n {
        k -= 1;
    }
    k
}

/// Profile of `log₂ C(2k, k)` for `k = ⌈√n⌉`, `n = 1..=n_max`: the counting
/// side of a classical optical protocol with `m = Θ(√n)` modes and `O(√n)`
/// photons.
pub fn tightness_sweep(n_max: u64) -> Result<Vec<TightnessRow>> {
    if n_max == 0 {
        return Err(Error::param("n_max", "must be at least 1"));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut cached: Option<(u64, TightnessRow)> = None;
    for n in 1..=n_max {
        let k = ceil_sqrt(n);
        let base = match &cached {
            Some((ck, row)) if *ck == k => row.clone(),
            _ => {
                let e = entropy_bound(k, k as usize)?;
                let central = binomial(2 * k, k);
                let four_k = BigUint::one() << (2 * k);
                let row = TightnessRow {
                    n,
                    k,
                    log2_rank: e.log2_rank,
                    entropy_bound: e.bound,
                    central_lower: 2.0 * k as f64 - ((2 * k + 1) as f64).log2(),
                    central_lower_exact: &central * (2 * k + 1) >= four_k,
                    ratio: 0.0,
                };
                cached = Some((k, row.clone()));
                row
            }
        };
        rows.push(TightnessRow {
            n,
            ratio: base.log2_rank / (n as f64).sqrt(),
            ..base
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truncation::markov_cutoff;

    #[test]
    fn count_rank_examples() {
        assert_eq!(count_rank(2, 3).rank, BigUint::from(10u32));
        for k in 0..20 {
            assert_eq!(count_rank(1, k).rank, BigUint::from(k + 1));
        }
        assert_eq!(count_rank(3, 0).rank, BigUint::one());
    }

    #[test]
    fn log2_of_big_counts() {
        let r = count_rank(100, 100);
        assert!((r.log2_rank - 195.85052047908917).abs() < 1e-9);
        let huge = count_rank(64, 80_000);
        let direct: f64 = (1..=64u64)
            .map(|i| ((80_000 + i) as f64).log2() - (i as f64).log2())
            .sum();
        assert!((huge.log2_rank - direct).abs() / direct < 1e-12);
    }

    #[test]
    fn binomial_power_bound_examples() {
        let b = binomial_power_bound(3, 2).unwrap();
        assert_eq!(b.lhs, BigUint::from(10u32));
        assert_eq!(b.rhs, BigUint::from(16u32));
        let b = binomial_power_bound(1, 1).unwrap();
        assert_eq!((b.lhs.clone(), b.rhs.clone()), (BigUint::from(2u32), BigUint::from(2u32)));
        assert!(b.holds());
        assert!(binomial_power_bound(0, 3).is_err());
    }

    #[test]
    fn log_rank_bounds_examples() {
        let b = log_rank_bounds(&markov_cutoff(1.0, 0.5, 2).unwrap());
        assert!((b.actual - 6f64.log2()).abs() < 1e-12);
        assert!((b.bound_photon - 2.0 * 3f64.log2()).abs() < 1e-12);
        assert!((b.bound_mode - 2.0 * 3f64.log2()).abs() < 1e-12);
        assert!(b.slack() > 0.0);

        let b = log_rank_bounds(&markov_cutoff(0.0, 0.3, 1).unwrap());
        assert_eq!(b.actual, 0.0);
        assert!(b.bound_photon >= 0.0 && b.bound_mode >= 0.0);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.11).unwrap() - 0.4999).abs() < 1e-3);
        assert!(binary_entropy(1.2).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn entropy_bound_examples() {
        let e = entropy_bound(4, 4).unwrap();
        assert!((e.log2_rank - 70f64.log2()).abs() < 1e-12);
        assert_eq!(e.bound, 8.0);
        let e = entropy_bound(0, 1).unwrap();
        assert_eq!((e.log2_rank, e.bound), (0.0, 0.0));
    }

    #[test]
    fn ceil_sqrt_exact() {
        for n in 1..5000u64 {
            let k = ceil_sqrt(n);
            assert!(k * k >= n && (k - 1) * (k - 1) < n, "n={n}");
        }
    }
}
