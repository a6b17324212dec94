//! Bit sequences, data sets and received sets.
//!
//! A [`Sequence`] is a packed binary word. Its derived ordering is the
//! lexicographic order on bit strings, which for equal lengths coincides with
//! integer order on the big-endian value. [`DataSet`] and [`ReceivedSet`] keep
//! their elements sorted in that order, so two sets are equal iff their
//! element vectors are equal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A binary word, stored MSB-first in 64-bit words. Unused trailing bits of
/// the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    // field order matters for the derived `Ord`: words first, then length
    words: Vec<u64>,
    len: usize,
}

impl Sequence {
    pub fn zeros(len: usize) -> Self {
        Sequence {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = Sequence::zeros(0);
        for b in bits {
            s.push(b);
        }
        s
    }

    /// Big-endian value `value` on `len` bits. Panics if `len > 64`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut s = Sequence::zeros(len);
        if len > 0 {
            let masked = if len == WORD {
                value
            } else {
                value & ((1u64 << len) - 1)
            };
            s.words[0] = masked << (WORD - len);
        }
        s
    }

    pub fn from_biguint(value: &BigUint, len: usize) -> Self {
        let mut s = Sequence::zeros(len);
        for i in 0..len {
            if value.bit((len - 1 - i) as u64) {
                s.set(i, true);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (WORD - 1 - i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (WORD - 1 - i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Big-endian integer value, if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.len > WORD {
            return None;
        }
        if self.len == 0 {
            return Some(0);
        }
        Some(self.words[0] >> (WORD - self.len))
    }

    /// Big-endian integer value. Order-isomorphic to the lexicographic
    /// order among sequences of one fixed length.
    pub fn to_int(&self) -> BigUint {
        let mut v = BigUint::zero();
        for b in self.bits() {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    pub fn flipped(&self, i: usize) -> Sequence {
        let mut s = self.clone();
        s.set(i, !s.get(i));
        s
    }

    /// Copy with the bit at position `i` removed.
    pub fn deleted(&self, i: usize) -> Sequence {
        Sequence::from_bits(
            self.bits()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| b),
        )
    }

    /// Copy with `bit` inserted so that it ends up at position `i`.
    pub fn inserted(&self, i: usize, bit: bool) -> Sequence {
        let mut s = Sequence::zeros(0);
        for (j, b) in self.bits().enumerate() {
            if j == i {
                s.push(bit);
            }
            s.push(b);
        }
        if i == self.len {
            s.push(bit);
        }
        s
    }

    pub fn slice(&self, start: usize, end: usize) -> Sequence {
        Sequence::from_bits((start..end).map(|i| self.get(i)))
    }

    pub fn concat(&self, other: &Sequence) -> Sequence {
        let mut s = self.clone();
        for b in other.bits() {
            s.push(b);
        }
        s
    }

    /// Number of differing positions. Panics on length mismatch.
    pub fn hamming_distance(&self, other: &Sequence) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Bitwise XOR. Panics on length mismatch.
    pub fn xor(&self, other: &Sequence) -> Sequence {
        assert_eq!(self.len, other.len);
        Sequence {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
            len: self.len,
        }
    }

    /// Positions of the ones, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({self})")
    }
}

impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut seq = Sequence::zeros(0);
        for c in s.chars() {
            match c {
                '0' => seq.push(false),
                '1' => seq.push(true),
                _ => return Err(Error::InvalidSequence(s.to_string())),
            }
        }
        Ok(seq)
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of `M` distinct sequences, all of length `L`: one codeword of a set code.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DataSet {
    elements: Vec<Sequence>,
    #[serde(rename = "L")]
    len: usize,
}

impl DataSet {
    pub fn new(mut elements: Vec<Sequence>, len: usize) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|s| s.len() != len) {
            return Err(Error::LengthMismatch {
                expected: len,
                got: bad.len(),
            });
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSequence(w[0].to_string()));
        }
        Ok(DataSet { elements, len })
    }

    /// Parses whitespace-separated 0/1 strings; the common length is taken
    /// from the first one.
    pub fn parse_list(text: &str) -> Result<Self> {
        let elements = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Sequence>>>()?;
        let len = elements.first().map_or(0, Sequence::len);
        DataSet::new(elements, len)
    }

    /// Sequence length `L`.
    pub fn seq_len(&self) -> usize {
        self.len
    }

    /// Number of sequences `M`.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> &[Sequence] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sequence> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &Sequence) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn to_received(&self) -> ReceivedSet {
        ReceivedSet {
            elements: self.elements.clone(),
            nominal_len: self.len,
        }
    }

    pub fn to_characteristic(&self) -> Result<CharacteristicVector> {
        let n = space_size(self.len)?;
        let mut bits = Sequence::zeros(n);
        for x in &self.elements {
            bits.set(x.to_u64().expect("checked by space_size") as usize, true);
        }
        Ok(CharacteristicVector {
            bits,
            seq_len: self.len,
        })
    }

    pub fn from_characteristic(v: &CharacteristicVector) -> DataSet {
        let elements = v
            .bits
            .ones()
            .map(|i| Sequence::from_u64(i as u64, v.seq_len))
            .collect();
        DataSet {
            elements,
            len: v.seq_len,
        }
    }

    pub fn to_text(&self) -> String {
        format_set(self.len, &self.elements)
    }
}

impl fmt::Debug for DataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.elements.iter().map(|s| s.to_string()))
            .finish()
    }
}

impl<'a> IntoIterator for &'a DataSet {
    type Item = &'a Sequence;
    type IntoIter = std::slice::Iter<'a, Sequence>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Output of the channel: a set of distinct reads whose lengths may differ
/// from the nominal `L` after insertions or deletions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReceivedSet {
    elements: Vec<Sequence>,
    nominal_len: usize,
}

impl ReceivedSet {
    /// Builds the set; equal reads merge.
    pub fn new<I: IntoIterator<Item = Sequence>>(reads: I, nominal_len: usize) -> Self {
        let mut elements: Vec<Sequence> = reads.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        ReceivedSet {
            elements,
            nominal_len,
        }
    }

    pub fn nominal_len(&self) -> usize {
        self.nominal_len
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Sequence] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sequence> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &Sequence) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Reads of exactly the nominal length.
    pub fn nominal_reads(&self) -> impl Iterator<Item = &Sequence> {
        self.elements
            .iter()
            .filter(move |s| s.len() == self.nominal_len)
    }

    pub fn to_text(&self) -> String {
        format_set(self.nominal_len, &self.elements)
    }
}

impl fmt::Debug for ReceivedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.elements.iter().map(|s| s.to_string()))
            .finish()
    }
}

impl From<&DataSet> for ReceivedSet {
    fn from(ds: &DataSet) -> Self {
        ds.to_received()
    }
}

/// Indicator vector `v(S)` of length `2^L`: bit `i` is set iff the sequence
/// with big-endian value `i` belongs to the set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CharacteristicVector {
    bits: Sequence,
    seq_len: usize,
}

impl CharacteristicVector {
    pub fn new(bits: Sequence, seq_len: usize) -> Result<Self> {
        let n = space_size(seq_len)?;
        if bits.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bits.len(),
            });
        }
        Ok(CharacteristicVector { bits, seq_len })
    }

    pub fn bits(&self) -> &Sequence {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn seq_len(&self) -> usize {
        self.seq_len
    }
}

/// Largest `L` for which `2^L`-sized workspaces (characteristic vectors,
/// exhaustive scans) are attempted.
pub const MAX_SPACE_BITS: usize = 30;

/// `2^L` as a `usize`, refusing sizes past [`MAX_SPACE_BITS`].
pub fn space_size(seq_len: usize) -> Result<usize> {
    if seq_len > MAX_SPACE_BITS {
        return Err(Error::Infeasible(format!(
            "2^{seq_len} is too large to enumerate"
        )));
    }
    Ok(1usize << seq_len)
}

/// The header line used by the text format.
pub fn header(seq_len: usize, count: usize) -> String {
    format!("# setcode v1 L={seq_len} M={count}")
}

/// Serializes a set: header line, then one sequence per line in
/// lexicographic order.
pub fn format_set(seq_len: usize, elements: &[Sequence]) -> String {
    let mut sorted: Vec<&Sequence> = elements.iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = header(seq_len, sorted.len());
    out.push('\n');
    for s in sorted {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// One set read back from the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetBlock {
    pub seq_len: usize,
    pub elements: Vec<Sequence>,
}

impl SetBlock {
    pub fn into_data_set(self) -> Result<DataSet> {
        DataSet::new(self.elements, self.seq_len)
    }

    pub fn into_received(self) -> ReceivedSet {
        ReceivedSet::new(self.elements, self.seq_len)
    }
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let rest = line
        .strip_prefix("# setcode v1")
        .ok_or_else(|| Error::Parse(format!("bad header {line:?}")))?;
    let mut seq_len = None;
    let mut count = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value {field:?}")))?;
        match key {
            "L" => seq_len = Some(value),
            "M" => count = Some(value),
            _ => return Err(Error::Parse(format!("unknown header field {key:?}"))),
        }
    }
    match (seq_len, count) {
        (Some(l), Some(m)) => Ok((l, m)),
        _ => Err(Error::Parse(format!("header missing L or M: {line:?}"))),
    }
}

/// Parses a file holding any number of sets, each introduced by a header.
/// Blank lines are ignored; each block must hold exactly `M` distinct lines.
pub fn parse_sets(text: &str) -> Result<Vec<SetBlock>> {
    let mut blocks = Vec::new();
    let mut current: Option<(usize, usize, Vec<Sequence>)> = None;

    let mut finish = |cur: Option<(usize, usize, Vec<Sequence>)>| -> Result<()> {
        if let Some((seq_len, count, mut elements)) = cur {
            elements.sort_unstable();
            elements.dedup();
            if elements.len() != count {
                return Err(Error::Parse(format!(
                    "header announced M={count} but block has {} distinct lines",
                    elements.len()
                )));
            }
            blocks.push(SetBlock { seq_len, elements });
        }
        Ok(())
    };

    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            finish(current.take())?;
            let (l, m) = parse_header(line)?;
            current = Some((l, m, Vec::new()));
        } else {
            let seq: Sequence = line.parse()?;
            match current.as_mut() {
                Some((_, _, els)) => els.push(seq),
                None => return Err(Error::Parse("sequence before header".into())),
            }
        }
    }
    finish(current.take())?;
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Sequence {
        text.parse().unwrap()
    }

    #[test]
    fn seq_to_int_examples() {
        assert_eq!(s("0000").to_int(), BigUint::from(0u32));
        assert_eq!(s("1111").to_int(), BigUint::from(15u32));
        assert_eq!(s("0101").to_int(), BigUint::from(5u32));
        assert_eq!(s("0101").to_u64(), Some(5));
    }

    #[test]
    fn order_is_lexicographic() {
        let mut v = [s("1"), s("01"), s("0"), s("00"), s("10"), s("")];
        v.sort();
        let text: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(text, ["", "0", "00", "01", "1", "10"]);
        // crosses a word boundary
        let a = Sequence::zeros(64);
        let b = Sequence::zeros(65);
        assert!(a < b);
        assert!(b < Sequence::from_u64(1, 64));
    }

    #[test]
    fn edits() {
        let x = s("1010");
        assert_eq!(x.deleted(0), s("010"));
        assert_eq!(x.deleted(3), s("101"));
        assert_eq!(x.inserted(0, true), s("11010"));
        assert_eq!(x.inserted(4, true), s("10101"));
        assert_eq!(x.flipped(1), s("1110"));
        assert_eq!(x.slice(1, 3), s("01"));
        assert_eq!(s("10").concat(&s("01")), s("1001"));
        assert_eq!(s("1100").hamming_distance(&s("1010")), 2);
    }

    #[test]
    fn characteristic_examples() {
        let ds = DataSet::parse_list("00 11").unwrap();
        assert_eq!(ds.to_characteristic().unwrap().bits(), &s("1001"));
        let ds = DataSet::parse_list("0 1").unwrap();
        assert_eq!(ds.to_characteristic().unwrap().bits(), &s("11"));
        let ds = DataSet::parse_list("01").unwrap();
        let v = ds.to_characteristic().unwrap();
        assert_eq!(v.bits(), &s("0100"));
        assert_eq!(v.weight(), 1);
    }

    #[test]
    fn characteristic_roundtrip_exhaustive() {
        for l in 1..=4usize {
            let n = 1usize << l;
            for mask in 0u64..(1u64 << n) {
                let m = mask.count_ones() as usize;
                if m == 0 || m > 4 {
                    continue;
                }
                let bits = Sequence::from_u64(mask, n);
                let v = CharacteristicVector::new(bits, l).unwrap();
                let ds = DataSet::from_characteristic(&v);
                assert_eq!(ds.size(), m);
                assert_eq!(ds.to_characteristic().unwrap(), v);
            }
        }
    }

    #[test]
    fn data_set_rejects_duplicates_and_mixed_lengths() {
        assert!(matches!(
            DataSet::parse_list("01 01"),
            Err(Error::DuplicateSequence(_))
        ));
        assert!(matches!(
            DataSet::new(vec![s("01"), s("011")], 2),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn received_set_merges() {
        let r = ReceivedSet::new(vec![s("01"), s("111"), s("01")], 2);
        assert_eq!(r.size(), 2);
        assert_eq!(r.nominal_reads().count(), 1);
    }

    #[test]
    fn text_format() {
        let ds = DataSet::parse_list("11 00 10").unwrap();
        let text = ds.to_text();
        assert_eq!(text, "# setcode v1 L=2 M=3\n00\n10\n11\n");
        let blocks = parse_sets(&format!("{text}\n{}", header(2, 0))).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].clone().into_data_set().unwrap(), ds);
        assert!(blocks[1].elements.is_empty());
        assert!(parse_sets("# setcode v1 L=2 M=2\n00\n").is_err());
        assert!(parse_sets("00\n").is_err());
        assert!(parse_sets("# setcode v2 L=2 M=0\n").is_err());
    }

    proptest! {
        #[test]
        fn serialization_is_stable(words in proptest::collection::btree_set(0u64..256, 0..12)) {
            let elements: Vec<Sequence> = words.iter().map(|&w| Sequence::from_u64(w, 8)).collect();
            let once = format_set(8, &elements);
            let parsed = parse_sets(&once).unwrap().remove(0);
            prop_assert_eq!(format_set(parsed.seq_len, &parsed.elements), once);
        }

        #[test]
        fn int_roundtrip(value in any::<u64>(), len in 0usize..=64) {
            let x = Sequence::from_u64(value, len);
            let masked = if len == 64 { value } else if len == 0 { 0 } else { value & ((1 << len) - 1) };
            prop_assert_eq!(x.to_u64(), Some(masked));
            prop_assert_eq!(Sequence::from_biguint(&x.to_int(), len), x);
        }
    }
}
