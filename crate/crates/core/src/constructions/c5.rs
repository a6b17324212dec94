use num_bigint::BigUint;

use super::{check_info_len, collect_set, info_rank, rank_bits, rank_to_info, Enumerable, SetCode};
use crate::channel::{ChannelSpec, Metric};
use crate::combin::{binomial, rank_subset, unrank_subset};
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet, Sequence};
use crate::vt::{codebook, decode_indel};

/// `M`-subsets of one checksum class: each sequence corrects its own
/// insertion or deletion. Subsets are ranked in colex order of their
/// positions in the ascending class list.
#[derive(Clone, Debug)]
pub struct ChecksumEach {
    count: usize,
    seq_len: usize,
    a: u64,
    words: Vec<Sequence>,
}

impl ChecksumEach {
    pub fn new(count: usize, seq_len: usize, a: u64) -> Result<Self> {
        let words = codebook(seq_len, a)?;
        if count == 0 || count > words.len() {
            return Err(Error::InvalidParameters(format!(
                "M={count} but the checksum class holds {} words",
                words.len()
            )));
        }
        Ok(ChecksumEach {
            count,
            seq_len,
            a,
            words,
        })
    }

    pub fn residue(&self) -> u64 {
        self.a
    }

    /// The checksum class, ascending.
    pub fn class_words(&self) -> &[Sequence] {
        &self.words
    }

    pub fn encode(&self, rank: &BigUint) -> Result<DataSet> {
        let picks = unrank_subset(rank, self.count as u64, self.words.len() as u64)?;
        DataSet::new(
            picks
                .into_iter()
                .map(|i| self.words[i as usize].clone())
                .collect(),
            self.seq_len,
        )
    }

    pub fn rank(&self, ds: &DataSet) -> Result<BigUint> {
        let picks = ds
            .iter()
            .map(|x| {
                self.words
                    .binary_search(x)
                    .map(|i| i as u64)
                    .map_err(|_| Error::DecodeFailure(format!("{x} is outside the class")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(rank_subset(&picks))
    }
}

impl SetCode for ChecksumEach {
    fn name(&self) -> &'static str {
        "c5"
    }

    fn seq_len(&self) -> usize {
        self.seq_len
    }

    fn set_size(&self) -> usize {
        self.count
    }

    fn info_bits(&self) -> usize {
        rank_bits(&self.codebook_size())
    }

    fn codebook_size(&self) -> BigUint {
        binomial(self.words.len() as u64, self.count as u64)
    }

    fn channel(&self) -> ChannelSpec {
        ChannelSpec::new(0, self.count, 1, Metric::Levenshtein)
    }

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet> {
        check_info_len(info, self.info_bits())?;
        self.encode(&info_rank(info))
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        let words = recv
            .iter()
            .map(|y| decode_indel(y, self.a, self.seq_len))
            .collect::<Result<Vec<_>>>()?;
        collect_set(words, self.count, self.seq_len)
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        rank_to_info(&self.rank(&self.decode_set(recv)?)?, self.info_bits())
    }
}

impl Enumerable for ChecksumEach {
    fn codewords(&self) -> Result<Vec<DataSet>> {
        let n = super::check_listable(&self.codebook_size())?;
        (0..n).map(|r| self.encode(&BigUint::from(r))).collect()
    }
}
