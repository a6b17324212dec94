use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{check_info_len, check_listable, field_value, Enumerable, SetCode};
use crate::channel::{ChannelSpec, Metric};
use crate::combin::{binomial_big, floor_log2_big, pow2, rank_subset, unrank_subset};
use crate::error::{Error, Result};
use crate::gf2m::{Field, Gf};
use crate::mds::{MdsCode, Symbol};
use crate::seq::{DataSet, ReceivedSet, Sequence};

/// `M = 2^z` sequences in `M^(1-c)` groups of `M^c`. A group shares the
/// `(1-c)·z`-bit index prefix and its set of payloads is one symbol of an
/// MDS `[M^(1-c), M^(1-c) - delta]` code over GF(2^g), where
/// `g = floor(log2 C(2^(L - (1-c) z), M^c))`.
///
/// `c` is given as `c_bits = c·z`.
#[derive(Clone, Debug)]
pub struct GroupedIndex {
    seq_len: usize,
    log_count: usize,
    c_bits: usize,
    delta: usize,
    symbol_bits: usize,
    mds: MdsCode,
}

impl GroupedIndex {
    pub fn new(count: usize, seq_len: usize, c_bits: usize, delta: usize) -> Result<Self> {
        if !count.is_power_of_two() {
            return Err(Error::InvalidParameters(format!(
                "M={count} is not a power of two"
            )));
        }
        let log_count = count.trailing_zeros() as usize;
        if c_bits > 0 && c_bits >= log_count {
            return Err(Error::InvalidParameters(format!(
                "c·log M = {c_bits} must be below log M = {log_count}"
            )));
        }
        let index_bits = log_count - c_bits;
        if seq_len <= index_bits || seq_len - index_bits > 63 {
            return Err(Error::InvalidParameters(format!(
                "payload of {} bits unsupported",
                seq_len as isize - index_bits as isize
            )));
        }
        let payload_bits = seq_len - index_bits;
        let alphabet = binomial_big(&pow2(payload_bits as u64), 1 << c_bits);
        if alphabet < BigUint::from(2u32) {
            return Err(Error::InvalidParameters(
                "group alphabet has < 2 symbols".into(),
            ));
        }
        let symbol_bits = floor_log2_big(&alphabet) as usize;
        if symbol_bits > 63 {
            return Err(Error::Infeasible(format!("GF(2^{symbol_bits}) symbols")));
        }
        let groups = 1usize << index_bits;
        if delta >= groups {
            return Err(Error::InvalidParameters(format!(
                "delta={delta} must be < group count {groups}"
            )));
        }
        let field = Arc::new(Field::new(symbol_bits as u32)?);
        let mds = MdsCode::new(groups, groups - delta, field)?;
        Ok(GroupedIndex {
            seq_len,
            log_count,
            c_bits,
            delta,
            symbol_bits,
            mds,
        })
    }

    pub fn group_size(&self) -> usize {
        1 << self.c_bits
    }

    pub fn group_count(&self) -> usize {
        1 << self.index_bits()
    }

    pub fn index_bits(&self) -> usize {
        self.log_count - self.c_bits
    }

    pub fn payload_bits(&self) -> usize {
        self.seq_len - self.index_bits()
    }

    /// Bits per group symbol, `g`.
    pub fn symbol_bits(&self) -> usize {
        self.symbol_bits
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn c(&self) -> f64 {
        if self.log_count == 0 {
            0.0
        } else {
            self.c_bits as f64 / self.log_count as f64
        }
    }

    pub fn encode_symbols(&self, info: &[Gf]) -> Result<DataSet> {
        let word = self.mds.encode(info)?;
        let (ib, pb) = (self.index_bits(), self.payload_bits());
        let mut seqs = Vec::with_capacity(1 << self.log_count);
        for (i, u) in word.iter().enumerate() {
            let payloads = unrank_subset(&BigUint::from(u.0), self.group_size() as u64, 1 << pb)?;
            let prefix = Sequence::from_u64(i as u64, ib);
            seqs.extend(
                payloads
                    .into_iter()
                    .map(|p| prefix.concat(&Sequence::from_u64(p, pb))),
            );
        }
        DataSet::new(seqs, self.seq_len)
    }

    /// Group `i` is erased unless exactly `M^c` reads of length `L` carry its
    /// index and their payload set ranks below `2^g`.
    pub fn symbol_word(&self, recv: &ReceivedSet) -> Vec<Symbol> {
        let ib = self.index_bits();
        let mut groups: Vec<Vec<u64>> = vec![Vec::new(); self.group_count()];
        for x in recv.nominal_reads() {
            let idx = field_value(x, 0, ib) as usize;
            groups[idx].push(field_value(x, ib, self.seq_len));
        }
        groups
            .into_iter()
            .map(|mut payloads| {
                if payloads.len() != self.group_size() {
                    return None;
                }
                payloads.sort_unstable();
                rank_subset(&payloads)
                    .to_u64()
                    .filter(|&r| r >> self.symbol_bits == 0)
                    .map(Gf)
            })
            .collect()
    }

    pub fn decode_symbols(&self, recv: &ReceivedSet) -> Result<Vec<Gf>> {
        self.mds.decode(&self.symbol_word(recv))
    }
}

impl SetCode for GroupedIndex {
    fn name(&self) -> &'static str {
        "c3"
    }

    fn seq_len(&self) -> usize {
        self.seq_len
    }

    fn set_size(&self) -> usize {
        1 << self.log_count
    }

    fn info_bits(&self) -> usize {
        self.mds.k() * self.symbol_bits
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
        let g = self.symbol_bits;
        let symbols: Vec<Gf> = (0..self.mds.k())
            .map(|i| Gf(field_value(info, i * g, (i + 1) * g)))
            .collect();
        self.encode_symbols(&symbols)
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        self.encode_symbols(&self.decode_symbols(recv)?)
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        let g = self.symbol_bits;
        Ok(self
            .decode_symbols(recv)?
            .iter()
            .fold(Sequence::zeros(0), |acc, u| {
                acc.concat(&Sequence::from_u64(u.0, g))
            }))
    }
}

impl Enumerable for GroupedIndex {
    fn codewords(&self) -> Result<Vec<DataSet>> {
        let n = check_listable(&self.codebook_size())?;
        (0..n)
            .map(|v| self.encode_bits(&Sequence::from_u64(v, self.info_bits())))
            .collect()
    }
}
