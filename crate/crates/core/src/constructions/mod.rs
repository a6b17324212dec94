//! Encoders and decoders for the six set-code constructions.
//!
//! | type | codebook | corrects |
//! |------|----------|----------|
//! | [`IndexMds`] | index prefix, payloads form an MDS codeword | `s + 2t <= delta`, any point errors |
//! | [`ConstantWeight`] | `v(S)` in a constant-weight coset slice | `s` losses, `t` corrupted sequences |
//! | [`GroupedIndex`] | groups of sequences share a short index, each group is one MDS symbol | `s + 2t <= delta` |
//! | [`ChecksumSum`] | checksums of all sequences sum to `a` | one indel in one sequence |
//! | [`ChecksumEach`] | every sequence has checksum `a` | one indel in every sequence |
//! | [`ComponentCode`] | every sequence is a codeword of a binary code | `eps` substitutions in every sequence |
//!
//! Codes whose codebook is only a subset of all data sets are encoded
//! enumeratively: an integer rank selects a codeword.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::channel::ChannelSpec;
use crate::combin::{floor_log2_big, log2_big, log2_data_sets};
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet, Sequence};

mod c1;
mod c2;
mod c3;
mod c4;
mod c5;
mod c6;

pub use c1::IndexMds;
pub use c2::ConstantWeight;
pub use c3::GroupedIndex;
pub use c4::{c4_codebook_size, ChecksumSum, ChecksumSumSystematic};
pub use c5::ChecksumEach;
pub use c6::ComponentCode;

/// A set code with a bit-level encoder.
pub trait SetCode: Send + Sync {
    fn name(&self) -> &'static str;

    /// `L`.
    fn seq_len(&self) -> usize;

    /// `M`.
    fn set_size(&self) -> usize;

    /// Bits carried by one codeword through [`SetCode::encode_bits`].
    fn info_bits(&self) -> usize;

    /// Number of codewords of the code as defined, which may exceed
    /// `2^info_bits`.
    fn codebook_size(&self) -> BigUint;

    /// Channel the code is guaranteed to correct.
    fn channel(&self) -> ChannelSpec;

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet>;

    /// Recovers the stored data set.
    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet>;

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence>;

    /// `log2 C(2^L, M) - log2 |C|`.
    fn redundancy(&self) -> f64 {
        log2_data_sets(self.seq_len(), self.set_size()) - log2_big(&self.codebook_size())
    }

    /// Redundancy of the bit-level encoder, `log2 C(2^L, M) - info_bits`.
    fn encoder_redundancy(&self) -> f64 {
        log2_data_sets(self.seq_len(), self.set_size()) - self.info_bits() as f64
    }
}

/// Codes that can list every codeword, for exhaustive verification.
pub trait Enumerable {
    fn codewords(&self) -> Result<Vec<DataSet>>;
}

/// A set code that can also list its codebook.
pub trait ListedCode: SetCode + Enumerable {}

impl<T: SetCode + Enumerable> ListedCode for T {}

/// Parameters selecting one construction.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "construction", rename_all = "lowercase")]
#[allow(non_snake_case)]
pub enum ConstructionParams {
    C1 {
        M: usize,
        L: usize,
        delta: usize,
    },
    C2 {
        M: usize,
        L: usize,
        s: usize,
        t: usize,
    },
    C3 {
        M: usize,
        L: usize,
        c_bits: usize,
        delta: usize,
    },
    /// Enumerative encoder.
    C4 {
        M: usize,
        L: usize,
        a: u64,
    },
    /// Systematic encoder for the same codebook.
    C4s {
        M: usize,
        L: usize,
        a: u64,
    },
    C5 {
        M: usize,
        L: usize,
        a: u64,
    },
    C6 {
        M: usize,
        L: usize,
        eps: usize,
    },
}

impl ConstructionParams {
    pub fn build(&self) -> Result<Box<dyn ListedCode>> {
        Ok(match *self {
            ConstructionParams::C1 { M, L, delta } => Box::new(IndexMds::new(M, L, delta)?),
            ConstructionParams::C2 { M, L, s, t } => Box::new(ConstantWeight::new(M, L, s, t)?),
            ConstructionParams::C3 {
                M,
                L,
                c_bits,
                delta,
            } => Box::new(GroupedIndex::new(M, L, c_bits, delta)?),
            ConstructionParams::C4 { M, L, a } => Box::new(ChecksumSum::new(M, L, a)?),
            ConstructionParams::C4s { M, L, a } => Box::new(ChecksumSumSystematic::new(M, L, a)?),
            ConstructionParams::C5 { M, L, a } => Box::new(ChecksumEach::new(M, L, a)?),
            ConstructionParams::C6 { M, L, eps } => Box::new(ComponentCode::new(M, L, eps)?),
        })
    }

    /// `(M, L)`.
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            ConstructionParams::C1 { M, L, .. }
            | ConstructionParams::C2 { M, L, .. }
            | ConstructionParams::C3 { M, L, .. }
            | ConstructionParams::C4 { M, L, .. }
            | ConstructionParams::C4s { M, L, .. }
            | ConstructionParams::C5 { M, L, .. }
            | ConstructionParams::C6 { M, L, .. } => (M, L),
        }
    }
}

/// Largest codebook listed by [`Enumerable::codewords`].
pub const MAX_LISTED: u64 = 1 << 20;

pub(crate) fn check_listable(count: &BigUint) -> Result<u64> {
    count
        .to_u64()
        .filter(|&c| c <= MAX_LISTED)
        .ok_or_else(|| Error::Infeasible(format!("listing {count} codewords")))
}

/// `floor(log2 n)` bits, zero for `n <= 1`.
pub(crate) fn rank_bits(n: &BigUint) -> usize {
    if n.is_zero() {
        0
    } else {
        floor_log2_big(n) as usize
    }
}

pub(crate) fn check_info_len(info: &Sequence, want: usize) -> Result<()> {
    if info.len() != want {
        return Err(Error::LengthMismatch {
            expected: want,
            got: info.len(),
        });
    }
    Ok(())
}

/// Integer value of an info word, big-endian.
pub(crate) fn info_rank(info: &Sequence) -> BigUint {
    info.to_int()
}

pub(crate) fn rank_to_info(rank: &BigUint, bits: usize) -> Result<Sequence> {
    if rank.bits() as usize > bits {
        return Err(Error::DecodeFailure(format!(
            "decoded rank needs more than {bits} bits"
        )));
    }
    Ok(Sequence::from_biguint(rank, bits))
}

/// Collects decoded sequences into a data set of exactly `count` elements.
pub(crate) fn collect_set(words: Vec<Sequence>, count: usize, seq_len: usize) -> Result<DataSet> {
    let mut words = words;
    words.sort_unstable();
    words.dedup();
    if words.len() != count {
        return Err(Error::DecodeFailure(format!(
            "recovered {} distinct sequences, expected {count}",
            words.len()
        )));
    }
    DataSet::new(words, seq_len)
}

/// Bits `[start, end)` of `x` as an integer.
pub(crate) fn field_value(x: &Sequence, start: usize, end: usize) -> u64 {
    (start..end).fold(0u64, |acc, i| acc << 1 | u64::from(x.get(i)))
}
