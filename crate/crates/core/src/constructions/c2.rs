use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{check_info_len, info_rank, rank_bits, rank_to_info, Enumerable, SetCode};
use crate::blockcode::{coset_select, BlockCode, CosetChoice};
use crate::channel::{ChannelSpec, Metric};
use crate::error::{Error, Result};
use crate::seq::{CharacteristicVector, DataSet, ReceivedSet, Sequence};

/// Data sets whose characteristic vector is a weight-`M` word of one coset
/// of a `(s + 2t)`-error-correcting code of length `2^L`.
///
/// The coset is the one holding the most weight-`M` words. Codewords are
/// ranked in lexicographic order of their characteristic vectors.
#[derive(Clone, Debug)]
pub struct ConstantWeight {
    count: usize,
    seq_len: usize,
    s: usize,
    t: usize,
    code: BlockCode,
    coset: CosetChoice,
    codebook: Vec<Sequence>,
}

impl ConstantWeight {
    pub fn new(count: usize, seq_len: usize, s: usize, t: usize) -> Result<Self> {
        if seq_len == 0 || seq_len > 5 {
            return Err(Error::Infeasible(format!(
                "constant-weight codebooks are listed for 1 <= L <= 5, got {seq_len}"
            )));
        }
        if count == 0 || count > 1 << seq_len {
            return Err(Error::InvalidParameters(format!(
                "M={count} out of range for L={seq_len}"
            )));
        }
        let code = BlockCode::full_support(seq_len as u32, s + 2 * t)?;
        let coset = coset_select(&code, count)?;
        let codebook = code.coset_words_of_weight(coset.syndrome, count)?;
        Ok(ConstantWeight {
            count,
            seq_len,
            s,
            t,
            code,
            coset,
            codebook,
        })
    }

    pub fn block_code(&self) -> &BlockCode {
        &self.code
    }

    pub fn coset(&self) -> &CosetChoice {
        &self.coset
    }

    pub fn len(&self) -> usize {
        self.codebook.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codebook.is_empty()
    }

    pub fn encode(&self, rank: &BigUint) -> Result<DataSet> {
        let i = rank
            .to_usize()
            .filter(|&i| i < self.codebook.len())
            .ok_or(Error::RankOutOfRange)?;
        let cv = CharacteristicVector::new(self.codebook[i].clone(), self.seq_len)?;
        Ok(DataSet::from_characteristic(&cv))
    }

    pub fn rank(&self, ds: &DataSet) -> Result<BigUint> {
        let v = ds.to_characteristic()?;
        self.codebook
            .binary_search(v.bits())
            .map(BigUint::from)
            .map_err(|_| Error::DecodeFailure("not a codeword".into()))
    }

    /// `v(S')` with `M - wt - s` ones added at the lowest zero positions when
    /// more than `s` ones are missing.
    fn padded_vector(&self, recv: &ReceivedSet) -> Result<Sequence> {
        let mut v = Sequence::zeros(1 << self.seq_len);
        for x in recv.nominal_reads() {
            v.set(x.to_u64().expect("L <= 5") as usize, true);
        }
        let w = v.count_ones();
        if w > self.count {
            return Err(Error::DecodeFailure(format!(
                "received {w} sequences, more than M={}",
                self.count
            )));
        }
        let mut missing = (self.count - w).saturating_sub(self.s);
        let mut pos = 0;
        while missing > 0 {
            if !v.get(pos) {
                v.set(pos, true);
                missing -= 1;
            }
            pos += 1;
        }
        Ok(v)
    }
}

impl SetCode for ConstantWeight {
    fn name(&self) -> &'static str {
        "c2"
    }

    fn seq_len(&self) -> usize {
        self.seq_len
    }

    fn set_size(&self) -> usize {
        self.count
    }

    fn info_bits(&self) -> usize {
        rank_bits(&BigUint::from(self.codebook.len()))
    }

    fn codebook_size(&self) -> BigUint {
        BigUint::from(self.codebook.len())
    }

    fn channel(&self) -> ChannelSpec {
        ChannelSpec::new(self.s, self.t, self.seq_len, Metric::Hamming)
    }

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet> {
        check_info_len(info, self.info_bits())?;
        self.encode(&info_rank(info))
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        let y = self.padded_vector(recv)?;
        let x = self
            .code
            .decode_constant_weight(&y, self.coset.syndrome, self.count)?;
        if self.codebook.binary_search(&x).is_err() {
            return Err(Error::DecodeFailure(
                "decoded word is not a codeword".into(),
            ));
        }
        Ok(DataSet::from_characteristic(&CharacteristicVector::new(
            x,
            self.seq_len,
        )?))
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        rank_to_info(&self.rank(&self.decode_set(recv)?)?, self.info_bits())
    }
}

impl Enumerable for ConstantWeight {
    fn codewords(&self) -> Result<Vec<DataSet>> {
        (0..self.codebook.len())
            .map(|i| self.encode(&BigUint::from(i)))
            .collect()
    }
}
