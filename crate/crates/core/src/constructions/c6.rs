use num_bigint::BigUint;

use super::{
    check_info_len, check_listable, collect_set, info_rank, rank_bits, rank_to_info, Enumerable,
    SetCode,
};
use crate::blockcode::BlockCode;
use crate::channel::{ChannelSpec, Metric};
use crate::combin::{binomial_big, pow2, rank_subset, unrank_subset};
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet, Sequence};

/// `M`-subsets of an `eps`-error-correcting code of length `L`. Codewords
/// are identified with their information words and subsets are ranked in
/// colex order of those values.
#[derive(Clone, Debug)]
pub struct ComponentCode {
    count: usize,
    seq_len: usize,
    eps: usize,
    code: BlockCode,
}

impl ComponentCode {
    pub fn new(count: usize, seq_len: usize, eps: usize) -> Result<Self> {
        let code = BlockCode::bch(seq_len, eps)?;
        Self::with_code(count, eps, code)
    }

    pub fn with_code(count: usize, eps: usize, code: BlockCode) -> Result<Self> {
        if code.info_len() > 63 {
            return Err(Error::Infeasible(format!(
                "{} information bits per sequence",
                code.info_len()
            )));
        }
        if count == 0 || count as u128 > 1u128 << code.info_len() {
            return Err(Error::InvalidParameters(format!(
                "M={count} exceeds the {} component codewords",
                1u128 << code.info_len()
            )));
        }
        Ok(ComponentCode {
            count,
            seq_len: code.len(),
            eps,
            code,
        })
    }

    pub fn component(&self) -> &BlockCode {
        &self.code
    }

    fn component_size(&self) -> BigUint {
        pow2(self.code.info_len() as u64)
    }

    pub fn encode(&self, rank: &BigUint) -> Result<DataSet> {
        let k = self.code.info_len();
        let values = unrank_subset(rank, self.count as u64, 1u64 << k)?;
        let words = values
            .into_iter()
            .map(|v| self.code.encode(&Sequence::from_u64(v, k)))
            .collect::<Result<Vec<_>>>()?;
        DataSet::new(words, self.seq_len)
    }

    pub fn rank(&self, ds: &DataSet) -> Result<BigUint> {
        let mut values = ds
            .iter()
            .map(|x| {
                if self.code.syndrome(x) != 0 {
                    return Err(Error::DecodeFailure(format!(
                        "{x} is not a component codeword"
                    )));
                }
                Ok(self.code.extract_info(x).to_u64().expect("k <= 63"))
            })
            .collect::<Result<Vec<u64>>>()?;
        values.sort_unstable();
        Ok(rank_subset(&values))
    }
}

impl SetCode for ComponentCode {
    fn name(&self) -> &'static str {
        "c6"
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
        binomial_big(&self.component_size(), self.count as u64)
    }

    fn channel(&self) -> ChannelSpec {
        ChannelSpec::new(0, self.count, self.eps, Metric::Hamming)
    }

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet> {
        check_info_len(info, self.info_bits())?;
        self.encode(&info_rank(info))
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        let words = recv
            .iter()
            .map(|y| {
                if y.len() != self.seq_len {
                    return Err(Error::DecodeFailure(format!(
                        "read {y} has the wrong length"
                    )));
                }
                self.code.decode(y)
            })
            .collect::<Result<Vec<_>>>()?;
        collect_set(words, self.count, self.seq_len)
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        rank_to_info(&self.rank(&self.decode_set(recv)?)?, self.info_bits())
    }
}

impl Enumerable for ComponentCode {
    fn codewords(&self) -> Result<Vec<DataSet>> {
        let n = check_listable(&self.codebook_size())?;
        (0..n).map(|r| self.encode(&BigUint::from(r))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::{binomial, data_set_rank};
    use itertools::Itertools;

    #[test]
    fn no_correction_is_plain_ranking() {
        let c = ComponentCode::new(2, 3, 0).unwrap();
        assert_eq!(c.codebook_size(), binomial(8, 2));
        for (r, ds) in c.codewords().unwrap().iter().enumerate() {
            assert_eq!(data_set_rank(ds).unwrap(), BigUint::from(r));
        }
    }

    #[test]
    fn hamming_component_l7() {
        let c = ComponentCode::new(3, 7, 1).unwrap();
        assert_eq!(c.component().info_len(), 4);
        assert_eq!(c.codebook_size(), binomial(16, 3));
        for ds in c.codewords().unwrap() {
            assert_eq!(
                c.rank(&ds).unwrap(),
                c.rank(&c.decode_set(&ds.to_received()).unwrap()).unwrap()
            );
            for flips in (0..3).map(|_| 0..7).multi_cartesian_product() {
                let reads: Vec<Sequence> =
                    ds.iter().zip(&flips).map(|(x, &p)| x.flipped(p)).collect();
                let recv = ReceivedSet::new(reads, 7);
                assert_eq!(c.decode_set(&recv).unwrap(), ds);
            }
        }
    }

    #[test]
    fn bits_roundtrip() {
        let c = ComponentCode::new(4, 15, 2).unwrap();
        for v in [0u64, 1, 12345, (1 << c.info_bits()) - 1] {
            let info = Sequence::from_u64(v, c.info_bits());
            let ds = c.encode_bits(&info).unwrap();
            assert_eq!(c.decode_bits(&ds.to_received()).unwrap(), info);
        }
    }
}
