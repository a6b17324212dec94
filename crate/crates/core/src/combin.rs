//! Exact combinatorics: binomials, colex subset ranking, and base-2
//! logarithms of big integers to a configurable number of fractional bits.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::seq::{DataSet, Sequence};

/// Environment variable overriding the number of fractional bits computed
/// by [`log2_big`].
pub const PRECISION_ENV: &str = "SETCODE_PRECISION_BITS";
pub const DEFAULT_PRECISION_BITS: u32 = 32;

/// Fractional bits for logarithms: `SETCODE_PRECISION_BITS` if set and
/// valid, else 32. Read once per process.
pub fn precision_bits() -> u32 {
    static BITS: OnceLock<u32> = OnceLock::new();
    *BITS.get_or_init(|| {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&b| (10..=52).contains(&b))
            .unwrap_or(DEFAULT_PRECISION_BITS)
    })
}

/// `C(n, k)` for machine-sized arguments.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` for a big `n`; zero when `k > n`.
pub fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= i + 1;
    }
    acc
}

/// `2^bits` as a big integer.
pub fn pow2(bits: u64) -> BigUint {
    BigUint::one() << bits
}

/// `floor(log2 n) + fractional part` to `frac_bits` fractional bits,
/// truncated. `n` must be nonzero.
///
/// The fraction is produced one bit at a time by squaring the normalized
/// mantissa held as a fixed-point integer with guard bits.
pub fn log2_big_with(n: &BigUint, frac_bits: u32) -> f64 {
    assert!(!n.is_zero(), "log2 of zero");
    let int_part = n.bits() - 1;
    let prec = u64::from(frac_bits) + 24;
    // mantissa in [2^prec, 2^(prec+1))
    let mut mant = if int_part >= prec {
        n >> (int_part - prec)
    } else {
        n << (prec - int_part)
    };
    let two = BigUint::one() << (prec + 1);
    let mut frac = 0.0f64;
    let mut weight = 0.5f64;
    for _ in 0..frac_bits {
        mant = (&mant * &mant) >> prec;
        if mant >= two {
            frac += weight;
            mant >>= 1u32;
        }
        weight *= 0.5;
    }
    int_part as f64 + frac
}

/// [`log2_big_with`] at the process precision.
pub fn log2_big(n: &BigUint) -> f64 {
    log2_big_with(n, precision_bits())
}

/// `log2` of a positive rational.
pub fn log2_rational(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "log2 of a non-positive rational");
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    log2_big(num) - log2_big(den)
}

/// `log2 C(n, k)`, from the exact binomial.
pub fn log2_binomial(n: &BigUint, k: &BigUint) -> Result<f64> {
    if k > n {
        return Err(Error::KExceedsN {
            n: n.to_string(),
            k: k.to_string(),
        });
    }
    let k = k
        .to_u64()
        .filter(|&k| k <= 1 << 24)
        .ok_or_else(|| Error::Infeasible("binomial lower index too large".into()))?;
    let k = k.min((n - BigUint::from(k)).to_u64().unwrap_or(k));
    Ok(log2_big(&binomial_big(n, k)))
}

/// `log2 C(2^L, M)`: the log of the number of data sets.
pub fn log2_data_sets(seq_len: usize, count: usize) -> f64 {
    let n = pow2(seq_len as u64);
    let c = binomial_big(&n, count as u64);
    if c.is_zero() {
        f64::NEG_INFINITY
    } else {
        log2_big(&c)
    }
}

/// Colex rank of a strictly increasing list of naturals:
/// `sum_i C(c_i, i + 1)`.
pub fn rank_subset(sorted: &[u64]) -> BigUint {
    debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
    sorted
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i as u64 + 1))
        .sum()
}

/// Inverse of [`rank_subset`]: the `k`-subset of `{0, …, n-1}` with the
/// given colex rank, ascending.
pub fn unrank_subset(rank: &BigUint, k: u64, n: u64) -> Result<Vec<u64>> {
    if *rank >= binomial(n, k) {
        return Err(Error::RankOutOfRange);
    }
    let mut r = rank.clone();
    let mut out = vec![0u64; k as usize];
    let mut hi = n; // exclusive bound for the next element
    for i in (1..=k).rev() {
        // largest c < hi with C(c, i) <= r
        let (mut lo, mut up) = (i - 1, hi - 1);
        while lo < up {
            let mid = lo + (up - lo).div_ceil(2);
            if binomial(mid, i) <= r {
                lo = mid;
            } else {
                up = mid - 1;
            }
        }
        r -= binomial(lo, i);
        out[(i - 1) as usize] = lo;
        hi = lo;
    }
    Ok(out)
}

/// Colex rank of a data set, viewing each sequence as its integer value.
pub fn data_set_rank(ds: &DataSet) -> Result<BigUint> {
    let values = sequence_values(ds)?;
    Ok(rank_subset(&values))
}

/// The data set of `count` length-`seq_len` sequences with the given colex rank.
pub fn data_set_unrank(rank: &BigUint, count: usize, seq_len: usize) -> Result<DataSet> {
    if seq_len > 63 {
        return Err(Error::Infeasible("ranking needs L <= 63".into()));
    }
    let values = unrank_subset(rank, count as u64, 1u64 << seq_len)?;
    DataSet::new(
        values
            .into_iter()
            .map(|v| Sequence::from_u64(v, seq_len))
            .collect(),
        seq_len,
    )
}

fn sequence_values(ds: &DataSet) -> Result<Vec<u64>> {
    ds.iter()
        .map(|s| {
            s.to_u64()
                .filter(|_| s.len() <= 63)
                .ok_or_else(|| Error::Infeasible("ranking needs L <= 63".into()))
        })
        .collect()
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1);
    64 - (n - 1).leading_zeros()
}

/// `floor(log2 n)` for a nonzero big integer.
pub fn floor_log2_big(n: &BigUint) -> u64 {
    n.bits() - 1
}
