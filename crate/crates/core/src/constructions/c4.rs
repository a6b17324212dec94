use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{
    check_info_len, collect_set, field_value, info_rank, rank_bits, rank_to_info, Enumerable,
    SetCode,
};
use crate::channel::{ChannelSpec, Metric};
use crate::combin::{binomial, binomial_big, ceil_log2};
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet, Sequence};
use crate::vt::{checksum, class_sizes, decode_indel};

/// Number of `M`-sets of length-`L` words whose checksums sum to `a`
/// modulo `L + 1`.
pub fn c4_codebook_size(count: usize, seq_len: usize, a: u64) -> BigUint {
    let modulus = seq_len + 1;
    let classes = class_sizes(seq_len);
    // ways[k][r]: k words chosen from the classes seen so far, checksum sum r
    let mut ways = vec![vec![BigUint::zero(); modulus]; count + 1];
    ways[0][0] = BigUint::from(1u32);
    for (r, size) in classes.iter().enumerate() {
        let mut next = ways.clone();
        for j in 1..=count {
            let pick = binomial_big(size, j as u64);
            if pick.is_zero() {
                break;
            }
            for k in 0..=count - j {
                for (sum, w) in ways[k].iter().enumerate() {
                    if !w.is_zero() {
                        next[k + j][(sum + j * r) % modulus] += w * &pick;
                    }
                }
            }
        }
        ways = next;
    }
    ways[count][a as usize % modulus].clone()
}

fn check_residue(seq_len: usize, a: u64) -> Result<()> {
    if a > seq_len as u64 {
        return Err(Error::InvalidParameters(format!(
            "residue a={a} out of range 0..={seq_len}"
        )));
    }
    Ok(())
}

/// Corrects one insertion or deletion in one sequence: the only read of the
/// wrong length is decoded into the checksum class left over by the others.
fn decode_checksum_sum(
    recv: &ReceivedSet,
    count: usize,
    seq_len: usize,
    a: u64,
) -> Result<DataSet> {
    let modulus = seq_len as u64 + 1;
    let (good, bad): (Vec<&Sequence>, Vec<&Sequence>) =
        recv.iter().partition(|x| x.len() == seq_len);
    let sum = good.iter().map(|x| checksum(x)).sum::<u64>() % modulus;
    match bad.len() {
        0 => {
            if good.len() != count {
                return Err(Error::DecodeFailure(format!(
                    "received {} sequences, expected {count}",
                    good.len()
                )));
            }
            if sum != a {
                return Err(Error::DecodeFailure("checksum sum mismatch".into()));
            }
            collect_set(good.into_iter().cloned().collect(), count, seq_len)
        }
        1 => {
            if good.len() + 1 != count {
                return Err(Error::DecodeFailure(format!(
                    "received {} sequences, expected {count}",
                    good.len() + 1
                )));
            }
            let deficiency = (a + modulus - sum) % modulus;
            let x = decode_indel(bad[0], deficiency, seq_len)?;
            let mut words: Vec<Sequence> = good.into_iter().cloned().collect();
            words.push(x);
            collect_set(words, count, seq_len)
        }
        n => Err(Error::Ambiguous(format!("{n} reads of the wrong length"))),
    }
}

/// Largest number of candidate sets scanned to list the codebook.
const LIST_LIMIT: u64 = 1 << 24;

/// All `M`-sets whose checksums sum to `a` modulo `L + 1`, ranked in
/// lexicographic order of their sorted element lists.
#[derive(Clone, Debug)]
pub struct ChecksumSum {
    count: usize,
    seq_len: usize,
    a: u64,
    codebook: Vec<Vec<u64>>,
}

impl ChecksumSum {
    pub fn new(count: usize, seq_len: usize, a: u64) -> Result<Self> {
        check_residue(seq_len, a)?;
        if count == 0 || seq_len == 0 || seq_len > 24 {
            return Err(Error::InvalidParameters(format!("M={count}, L={seq_len}")));
        }
        let space = 1u64 << seq_len;
        if binomial(space, count as u64) > BigUint::from(LIST_LIMIT) {
            return Err(Error::Infeasible(format!(
                "listing C(2^{seq_len}, {count}) sets; use the systematic encoder"
            )));
        }
        let modulus = seq_len as u64 + 1;
        let sums: Vec<u64> = (0..space)
            .map(|v| checksum(&Sequence::from_u64(v, seq_len)))
            .collect();
        let codebook = (0..space)
            .combinations(count)
            .filter(|c| c.iter().map(|&v| sums[v as usize]).sum::<u64>() % modulus == a)
            .collect();
        Ok(ChecksumSum {
            count,
            seq_len,
            a,
            codebook,
        })
    }

    pub fn residue(&self) -> u64 {
        self.a
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
        DataSet::new(
            self.codebook[i]
                .iter()
                .map(|&v| Sequence::from_u64(v, self.seq_len))
                .collect(),
            self.seq_len,
        )
    }

    pub fn rank(&self, ds: &DataSet) -> Result<BigUint> {
        let values: Vec<u64> = ds.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect();
        self.codebook
            .binary_search(&values)
            .map(BigUint::from)
            .map_err(|_| Error::DecodeFailure("not a codeword".into()))
    }
}

impl SetCode for ChecksumSum {
    fn name(&self) -> &'static str {
        "c4"
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
        ChannelSpec::new(0, 1, 1, Metric::Levenshtein)
    }

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet> {
        check_info_len(info, self.info_bits())?;
        self.encode(&info_rank(info))
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        decode_checksum_sum(recv, self.count, self.seq_len, self.a)
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        rank_to_info(&self.rank(&self.decode_set(recv)?)?, self.info_bits())
    }
}

impl Enumerable for ChecksumSum {
    fn codewords(&self) -> Result<Vec<DataSet>> {
        (0..self.codebook.len())
            .map(|i| self.encode(&BigUint::from(i)))
            .collect()
    }
}

/// Systematic encoder into the same code. Sequence `i` starts with the
/// `ceil(log2 M)`-bit index `i`; the rest carries information except for a
/// few parity positions of sequence 0, which are set so that the checksum
/// sum hits `a`.
///
/// Parity positions are `L + 1 - 2^j` (1-based) while they lie past the
/// index, then further positions from the right until every residue is
/// reachable.
#[derive(Clone, Debug)]
pub struct ChecksumSumSystematic {
    count: usize,
    seq_len: usize,
    a: u64,
    index_bits: usize,
    parity: Vec<usize>,
    /// `solution[r]`: mask over `parity` whose weights sum to `r`.
    solution: Vec<u64>,
}

impl ChecksumSumSystematic {
    pub fn new(count: usize, seq_len: usize, a: u64) -> Result<Self> {
        check_residue(seq_len, a)?;
        if count == 0 {
            return Err(Error::InvalidParameters("M must be >= 1".into()));
        }
        let index_bits = ceil_log2(count as u64) as usize;
        if seq_len <= index_bits {
            return Err(Error::InvalidParameters(format!(
                "L={seq_len} leaves no payload after {index_bits} index bits"
            )));
        }
        let modulus = seq_len + 1;
        let mirrored = (0..usize::BITS)
            .map(|j| 1usize << j)
            .take_while(|&p| p <= seq_len)
            .map(|p| seq_len - p);
        let candidates = mirrored.chain((index_bits..seq_len).rev());

        let mut solution: Vec<Option<u64>> = vec![None; modulus];
        solution[0] = Some(0);
        let mut reached = 1;
        let mut parity = Vec::new();
        for pos in candidates {
            if reached == modulus {
                break;
            }
            if pos < index_bits || parity.contains(&pos) || parity.len() == 64 {
                continue;
            }
            let w = (pos + 1) % modulus;
            let bit = 1u64 << parity.len();
            let mut grew = false;
            let mut next = solution.clone();
            for (r, slot) in solution.iter().enumerate() {
                if let Some(mask) = *slot {
                    let t = (r + w) % modulus;
                    if next[t].is_none() {
                        next[t] = Some(mask | bit);
                        grew = true;
                    }
                }
            }
            if grew {
                parity.push(pos);
                reached = next.iter().filter(|m| m.is_some()).count();
                solution = next;
            }
        }
        if reached != modulus {
            return Err(Error::InvalidParameters(format!(
                "payload of sequence 0 cannot reach every residue at L={seq_len}"
            )));
        }
        Ok(ChecksumSumSystematic {
            count,
            seq_len,
            a,
            index_bits,
            parity,
            solution: solution
                .into_iter()
                .map(|m| m.expect("all reached"))
                .collect(),
        })
    }

    /// 0-based parity positions within sequence 0.
    pub fn parity_positions(&self) -> &[usize] {
        &self.parity
    }

    fn info_positions(&self, seq: usize) -> impl Iterator<Item = usize> + '_ {
        (self.index_bits..self.seq_len).filter(move |p| seq != 0 || !self.parity.contains(p))
    }
}

impl SetCode for ChecksumSumSystematic {
    fn name(&self) -> &'static str {
        "c4"
    }

    fn seq_len(&self) -> usize {
        self.seq_len
    }

    fn set_size(&self) -> usize {
        self.count
    }

    fn info_bits(&self) -> usize {
        self.count * (self.seq_len - self.index_bits) - self.parity.len()
    }

    fn codebook_size(&self) -> BigUint {
        c4_codebook_size(self.count, self.seq_len, self.a)
    }

    fn channel(&self) -> ChannelSpec {
        ChannelSpec::new(0, 1, 1, Metric::Levenshtein)
    }

    fn encode_bits(&self, info: &Sequence) -> Result<DataSet> {
        check_info_len(info, self.info_bits())?;
        let mut bits = info.bits();
        let mut seqs = Vec::with_capacity(self.count);
        for i in 0..self.count {
            let mut x = Sequence::from_u64(i as u64, self.index_bits)
                .concat(&Sequence::zeros(self.seq_len - self.index_bits));
            for p in self.info_positions(i) {
                x.set(p, bits.next().expect("length checked"));
            }
            seqs.push(x);
        }
        let modulus = self.seq_len as u64 + 1;
        let sum = seqs.iter().map(checksum).sum::<u64>() % modulus;
        let mask = self.solution[((self.a + modulus - sum) % modulus) as usize];
        for (j, &p) in self.parity.iter().enumerate() {
            if mask >> j & 1 == 1 {
                seqs[0].set(p, true);
            }
        }
        DataSet::new(seqs, self.seq_len)
    }

    fn decode_set(&self, recv: &ReceivedSet) -> Result<DataSet> {
        decode_checksum_sum(recv, self.count, self.seq_len, self.a)
    }

    fn decode_bits(&self, recv: &ReceivedSet) -> Result<Sequence> {
        let ds = self.decode_set(recv)?;
        let mut by_index: Vec<Option<&Sequence>> = vec![None; self.count];
        for x in ds.iter() {
            let i = field_value(x, 0, self.index_bits) as usize;
            match by_index.get_mut(i) {
                Some(slot @ None) => *slot = Some(x),
                _ => return Err(Error::DecodeFailure("index missing or repeated".into())),
            }
        }
        let mut out = Vec::with_capacity(self.info_bits());
        for (i, x) in by_index.into_iter().enumerate() {
            let x = x.expect("M distinct indices below M");
            out.extend(self.info_positions(i).map(|p| x.get(p)));
        }
        Ok(Sequence::from_bits(out))
    }
}

impl Enumerable for ChecksumSumSystematic {
    /// The whole residue class, in the order of [`ChecksumSum`].
    fn codewords(&self) -> Result<Vec<DataSet>> {
        ChecksumSum::new(self.count, self.seq_len, self.a)?.codewords()
    }
}
