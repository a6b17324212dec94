use std::sync::Arc;

use num_bigint::BigUint;

use super::{check_info_len, check_listable, field_value, Enumerable, SetCode};
use crate::channel::{ChannelSpec, Metric};
use crate::combin::{ceil_log2, pow2};
use crate::error::{Error, Result};
use crate::gf2m::{Field, Gf};
use crate::mds::{MdsCode, Symbol};
use crate::seq::{DataSet, ReceivedSet, Sequence};

/// Sequence `i` is the `ceil(log2 M)`-bit index `i` followed by symbol `u_i`
/// of GF(2^(L - ceil(log2 M))); `(u_0, …, u_{M-1})` is a codeword of an
/// MDS `[M, M - delta]` code.
#[derive(Clone, Debug)]
pub struct IndexMds {
    count: usize,
    seq_len: usize,
    delta: usize,
    index_bits: usize,
    mds: MdsCode,
}

impl IndexMds {
    pub fn new(count: usize, seq_len: usize, delta: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameters("M must be >= 1".into()));
        }
        let index_bits = ceil_log2(count as u64) as usize;
        if seq_len <= index_bits {
            return Err(Error::InvalidParameters(format!(
                "L={seq_len} leaves no payload after {index_bits} index bits"
            )));
        }
        let symbol_bits = seq_len - index_bits;
        if symbol_bits > 63 {
            return Err(Error::Infeasible(format!("GF(2^{symbol_bits}) symbols")));
        }
        if delta >= count {
            return Err(Error::InvalidParameters(format!(
                "delta={delta} must be < M={count}"
            )));
        }
        let field = Arc::new(Field::new(symbol_bits as u32)?);
        let mds = MdsCode::new(count, count - delta, field)?;
        Ok(IndexMds {
            count,
            seq_len,
            delta,
            index_bits,
            mds,
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn index_bits(&self) -> usize {
        self.index_bits
    }

    pub fn symbol_bits(&self) -> usize {
        self.seq_len - self.index_bits
    }

    pub fn mds(&self) -> &MdsCode {
        &self.mds
    }

    pub fn encode_symbols(&self, info: &[Gf]) -> Result<DataSet> {
        let word = self.mds.encode(info)?;
        let sb = self.symbol_bits();
        let seqs = word
            .iter()
            .enumerate()
            .map(|(i, u)| {
                Sequence::from_u64(i as u64, self.index_bits).concat(&Sequence::from_u64(u.0, sb))
            })
            .collect();
        DataSet::new(seqs, self.seq_len)
    }

    /// The received symbol word: position `j` is erased unless exactly one
    /// read of length `L` carries index `j`. Reads of other lengths and
    /// out-of-range indices are ignored.
    pub fn symbol_word(&self, recv: &ReceivedSet) -> Vec<Symbol> {
        let mut hits: Vec<(usize, Option<Gf>)> = vec![(0, None); self.count];
        for x in recv.iter().filter(|x| x.len() == self.seq_len) {
            let idx = field_value(x, 0, self.index_bits) as usize;
            if idx < self.count {
                hits[idx].0 += 1;
                hits[idx].1 = Some(Gf(field_value(x, self.index_bits, self.seq_len)));
            }
        }
        hits.into_iter()
            .map(|(n, u)| if n == 1 { u } else { None })
            .collect()
    }

    pub fn decode_symbols(&self, recv: &ReceivedSet) -> Result<Vec<Gf>> {
        self.mds.decode(&self.symbol_word(recv))
    }

    fn info_symbols(&self, info: &Sequence) -> Vec<Gf> {
        let sb = self.symbol_bits();
        (0..self.mds.k())
            .map(|i| Gf(field_value(info, i * sb, (i + 1) * sb)))
            .collect()
    }

    fn symbols_to_bits(&self, symbols: &[Gf]) -> Sequence {
        let sb = self.symbol_bits();
        symbols.iter().fold(Sequence::zeros(0), |acc, u| {
            acc.concat(&Sequence::from_u64(u.0, sb))
        })
    }
}

impl SetCode for IndexMds {
    fn name(&self) -> &'static str {
        "c1"
    }

    fn seq_len(&self) -> usize {
        self.seq_len
    }

    fn set_size(&self) -> usize {
        self.count
    }

    fn info_bits(&self) -> usize {
        self.mds.k() * self.symbol_bits()
    }

    fn codebook_size(&self) -> BigUint {
        pow2(self.info_bits() as u64)
    }

    fn channel(&self) -> ChannelSpec {
        ChannelSpec::new(
            self.delta % 2,
            self.delta / 2,
            self.seq_len,
            Metric::Hamming,
        )
    }

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet> {
        check_info_len(info, self.info_bits())?;
        self.encode_symbols(&self.info_symbols(info))
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        self.encode_symbols(&self.decode_symbols(recv)?)
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        Ok(self.symbols_to_bits(&self.decode_symbols(recv)?))
    }
}

impl Enumerable for IndexMds {
    fn codewords(&self) -> Result<Vec<DataSet>> {
        let n = check_listable(&self.codebook_size())?;
        (0..n)
            .map(|v| self.encode_bits(&Sequence::from_u64(v, self.info_bits())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn repetition_example() {
        let c = IndexMds::new(2, 4, 1).unwrap();
        let ds = c.encode_bits(&"101".parse().unwrap()).unwrap();
        assert_eq!(ds, DataSet::parse_list("0101 1101").unwrap());
        let recv = ReceivedSet::new(["1101".parse().unwrap()], 4);
        assert_eq!(c.decode_set(&recv).unwrap(), ds);
    }

    #[test]
    fn no_parity_is_index_then_raw_info() {
        let c = IndexMds::new(4, 6, 0).unwrap();
        let ds = c.encode_bits(&"0001101111100000".parse().unwrap()).unwrap();
        assert_eq!(
            ds,
            DataSet::parse_list("000001 011011 101110 110000").unwrap()
        );
    }

    #[test]
    fn codewords_have_m_elements() {
        let c = IndexMds::new(4, 8, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let info = Sequence::from_bits((0..c.info_bits()).map(|_| rng.gen_bool(0.5)));
            let ds = c.encode_bits(&info).unwrap();
            assert_eq!(ds.size(), 4);
            assert_eq!(c.decode_bits(&ds.to_received()).unwrap(), info);
        }
    }

    #[test]
    fn duplicate_index_is_an_erasure() {
        let c = IndexMds::new(4, 8, 2).unwrap();
        let ds = c.encode_bits(&Sequence::from_u64(0xabc, 12)).unwrap();
        let mut reads: Vec<Sequence> = ds.elements().to_vec();
        // corrupt the payload of index 1 into a second copy of index 0
        reads[1] = reads[0].flipped(7);
        let recv = ReceivedSet::new(reads, 8);
        let word = c.symbol_word(&recv);
        assert_eq!(word.iter().filter(|s| s.is_none()).count(), 2);
        assert_eq!(c.decode_set(&recv).unwrap(), ds);
    }

    #[test]
    fn random_channel_within_capability() {
        let c = IndexMds::new(8, 10, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..300 {
            let info = Sequence::from_bits((0..c.info_bits()).map(|_| rng.gen_bool(0.5)));
            let ds = c.encode_bits(&info).unwrap();
            for spec in [
                ChannelSpec::new(4, 0, 10, Metric::Hamming),
                ChannelSpec::new(2, 1, 10, Metric::Hamming),
                ChannelSpec::new(0, 2, 3, Metric::Levenshtein),
            ] {
                let (recv, _) = apply(&ds, &spec, seed);
                assert_eq!(c.decode_bits(&recv).unwrap(), info, "{spec} seed {seed}");
            }
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(IndexMds::new(4, 2, 0).is_err());
        assert!(IndexMds::new(4, 8, 4).is_err());
        // 2 payload bits give a field of 4 elements, too small for M=8
        assert!(IndexMds::new(8, 5, 1).is_err());
    }
}
