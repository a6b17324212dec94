//! Varshamov–Tenengolts checksums and single insertion/deletion correction.
//!
//! The checksum of a length-`L` word is `sum_i i·x_i mod (L+1)` with
//! positions numbered from 1. Words sharing a checksum form a code that
//! corrects one insertion or one deletion.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::seq::{space_size, Sequence};

/// Checksum of `x` modulo `x.len() + 1`.
pub fn checksum(x: &Sequence) -> u64 {
    weighted_sum(x) % (x.len() as u64 + 1)
}

/// Checksum of a word that must have length `seq_len`.
pub fn checksum_of_len(x: &Sequence, seq_len: usize) -> Result<u64> {
    if x.len() != seq_len {
        return Err(Error::LengthMismatch {
            expected: seq_len,
            got: x.len(),
        });
    }
    Ok(checksum(x))
}

fn weighted_sum(x: &Sequence) -> u64 {
    x.ones().map(|i| i as u64 + 1).sum()
}

fn check_residue(seq_len: usize, target: u64) -> Result<()> {
    if target > seq_len as u64 {
        return Err(Error::InvalidParameters(format!(
            "checksum residue {target} out of range 0..={seq_len}"
        )));
    }
    Ok(())
}

/// All length-`seq_len` words with checksum `target`, ascending.
pub fn codebook(seq_len: usize, target: u64) -> Result<Vec<Sequence>> {
    check_residue(seq_len, target)?;
    if seq_len > 24 {
        return Err(Error::Infeasible(format!("enumerating 2^{seq_len} words")));
    }
    let n = space_size(seq_len)?;
    Ok((0..n as u64)
        .map(|v| Sequence::from_u64(v, seq_len))
        .filter(|x| checksum(x) == target)
        .collect())
}

/// Number of length-`seq_len` words in each checksum class `0..=seq_len`,
/// by dynamic programming over positions.
pub fn class_sizes(seq_len: usize) -> Vec<BigUint> {
    let modulus = seq_len + 1;
    let mut counts = vec![BigUint::zero(); modulus];
    counts[0] = BigUint::from(1u32);
    for pos in 1..=seq_len {
        let mut next = counts.clone();
        for (r, c) in counts.iter().enumerate() {
            if !c.is_zero() {
                next[(r + pos) % modulus] += c;
            }
        }
        counts = next;
    }
    counts
}

/// Corrects at most one insertion or deletion, given the checksum the
/// original length-`seq_len` word had.
///
/// A read of the right length is returned as is when its checksum matches.
pub fn decode_indel(y: &Sequence, target: u64, seq_len: usize) -> Result<Sequence> {
    check_residue(seq_len, target)?;
    let modulus = seq_len as u64 + 1;
    let weight = y.count_ones() as u64;
    let sum = weighted_sum(y) % modulus;
    let out = if y.len() == seq_len {
        if sum == target {
            return Ok(y.clone());
        }
        return Err(Error::NoCandidate);
    } else if y.len() + 1 == seq_len {
        correct_deletion(y, (target + modulus - sum) % modulus, weight)
    } else if y.len() == seq_len + 1 {
        correct_insertion(y, (sum + modulus - target) % modulus, weight)
    } else {
        return Err(Error::LengthMismatch {
            expected: seq_len,
            got: y.len(),
        });
    };
    match out {
        Some(x) if checksum(&x) == target => Ok(x),
        _ => Err(Error::NoCandidate),
    }
}

/// `deficiency <= weight`: a 0 was lost with that many ones to its right.
/// Otherwise a 1 was lost with `deficiency - weight - 1` zeros to its left.
fn correct_deletion(y: &Sequence, deficiency: u64, weight: u64) -> Option<Sequence> {
    if deficiency <= weight {
        let mut ones_right = 0u64;
        let mut pos = y.len();
        while ones_right < deficiency {
            pos -= 1;
            if y.get(pos) {
                ones_right += 1;
            }
        }
        Some(y.inserted(pos, false))
    } else {
        let zeros_left = deficiency - weight - 1;
        let mut zeros = 0u64;
        let mut pos = 0usize;
        while zeros < zeros_left {
            if pos == y.len() {
                return None;
            }
            if !y.get(pos) {
                zeros += 1;
            }
            pos += 1;
        }
        Some(y.inserted(pos, true))
    }
}

/// Excess `e` of the read's weighted sum over the target:
/// `e == 0` drops the last bit, `e == weight` drops the first, `e < weight`
/// drops a 0 with `e` ones to its right, `e > weight` drops a 1 with
/// `e - weight` zeros to its left.
fn correct_insertion(y: &Sequence, excess: u64, weight: u64) -> Option<Sequence> {
    let n = y.len();
    if excess == 0 {
        return Some(y.deleted(n - 1));
    }
    if excess == weight {
        return Some(y.deleted(0));
    }
    if excess < weight {
        let mut ones_right = 0u64;
        for pos in (0..n).rev() {
            if y.get(pos) {
                ones_right += 1;
            } else if ones_right == excess {
                return Some(y.deleted(pos));
            }
        }
        None
    } else {
        let want = excess - weight;
        let mut zeros = 0u64;
        for pos in 0..n {
            if y.get(pos) {
                if zeros == want {
                    return Some(y.deleted(pos));
                }
            } else {
                zeros += 1;
            }
        }
        None
    }
}

/// Systematic map into a VT class: information on positions that are not
/// powers of two, the power-of-two positions set to reach the target.
#[derive(Clone, Debug)]
pub struct Systematic {
    seq_len: usize,
    parity: Vec<usize>, // 0-based positions p with p + 1 a power of two
    info: Vec<usize>,
}

impl Systematic {
    pub fn new(seq_len: usize) -> Result<Self> {
        if seq_len == 0 {
            return Err(Error::InvalidParameters("VT length must be >= 1".into()));
        }
        let (parity, info) = (0..seq_len).partition(|&p| (p + 1).is_power_of_two());
        Ok(Systematic {
            seq_len,
            parity,
            info,
        })
    }

    pub fn seq_len(&self) -> usize {
        self.seq_len
    }

    pub fn info_len(&self) -> usize {
        self.info.len()
    }

    /// Redundancy in bits, `ceil(log2(L + 1))`.
    pub fn parity_len(&self) -> usize {
        self.parity.len()
    }

    pub fn encode(&self, info: &Sequence, target: u64) -> Result<Sequence> {
        check_residue(self.seq_len, target)?;
        if info.len() != self.info.len() {
            return Err(Error::LengthMismatch {
                expected: self.info.len(),
                got: info.len(),
            });
        }
        let mut x = Sequence::zeros(self.seq_len);
        for (b, &p) in info.bits().zip(&self.info) {
            x.set(p, b);
        }
        let modulus = self.seq_len as u64 + 1;
        let deficiency = (target + modulus - checksum(&x)) % modulus;
        for &p in &self.parity {
            if deficiency & (p as u64 + 1) != 0 {
                x.set(p, true);
            }
        }
        debug_assert_eq!(checksum(&x), target);
        Ok(x)
    }

    pub fn extract(&self, x: &Sequence) -> Result<Sequence> {
        if x.len() != self.seq_len {
            return Err(Error::LengthMismatch {
                expected: self.seq_len,
                got: x.len(),
            });
        }
        Ok(Sequence::from_bits(self.info.iter().map(|&p| x.get(p))))
    }
}
