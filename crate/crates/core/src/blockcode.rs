//! Binary `tau`-error-correcting block codes with syndrome decoding.
//!
//! A code of length `n` is fixed by distinct support points `β_0 … β_{n-1}` in
//! GF(2^m). Word `y` has syndromes `S_i = Σ_{y_j = 1} β_j^i`; the code is
//! the set of words whose odd syndromes `S_1, S_3, …, S_{2τ-1}` all vanish.
//! With nonzero support points this is a (shortened) narrow-sense BCH code
//! with minimum distance at least `2τ + 1`; `τ = 1` over all of GF(2^m)* is the
//! Hamming code. Redundancy is at most `τ·m`.
//!
//! [`BlockCode::full_support`] also uses the point 0 and so has length exactly
//! `2^m` and redundancy at most `τ·m`. Its zero column makes one coordinate
//! invisible to the syndromes. On words of known weight it can still be
//! recovered, so the weight-`w` words of any coset are pairwise at distance
//! at least `2τ + 2`. [`BlockCode::decode_constant_weight`] relies on this.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combin::{binomial, ceil_log2};
use crate::error::{Error, Result};
use crate::gf2m::{Field, Gf};
use crate::seq::Sequence;

/// Packed odd syndromes, `m` bits each, `S_1` in the low bits.
pub type Syndrome = u128;

#[derive(Clone, Debug)]
pub struct BlockCode {
    n: usize,
    tau: usize,
    field: Option<Arc<Field>>,
    support: Vec<Gf>,
    columns: Vec<Syndrome>,
    zero_position: Option<usize>,
    pivots: Vec<usize>,
    info_positions: Vec<usize>,
    /// XOR basis of the column space: (vector, mask over `pivots`), indexed
    /// by leading bit.
    basis: Vec<Option<(Syndrome, u128)>>,
}

impl BlockCode {
    /// The whole space (no redundancy, corrects nothing).
    pub fn trivial(n: usize) -> Self {
        BlockCode {
            n,
            tau: 0,
            field: None,
            support: Vec::new(),
            columns: vec![0; n],
            zero_position: None,
            pivots: Vec::new(),
            info_positions: (0..n).collect(),
            basis: Vec::new(),
        }
    }

    /// Shortened BCH code over GF(2^m), `m = ceil(log2(n + 1))`, with support
    /// `1, 2, …, n`. `tau = 1` gives a Hamming code.
    pub fn bch(n: usize, tau: usize) -> Result<Self> {
        if tau == 0 {
            return Ok(BlockCode::trivial(n));
        }
        if n == 0 {
            return Err(Error::InvalidParameters("code length must be >= 1".into()));
        }
        let m = ceil_log2(n as u64 + 1).max(1);
        let field = Arc::new(Field::new(m)?);
        let support = (1..=n as u64).map(Gf).collect();
        BlockCode::with_support(field, support, tau)
    }

    pub fn hamming(n: usize) -> Result<Self> {
        BlockCode::bch(n, 1)
    }

    /// Length-`2^m` code with every element of GF(2^m) as a support point.
    pub fn full_support(m: u32, tau: usize) -> Result<Self> {
        let n = 1usize
            .checked_shl(m)
            .filter(|_| m <= 24)
            .ok_or_else(|| Error::Infeasible(format!("length 2^{m}")))?;
        if tau == 0 {
            return Ok(BlockCode::trivial(n));
        }
        let field = Arc::new(Field::new(m)?);
        let support = (0..n as u64).map(Gf).collect();
        BlockCode::with_support(field, support, tau)
    }

    fn with_support(field: Arc<Field>, support: Vec<Gf>, tau: usize) -> Result<Self> {
        let m = field.degree() as usize;
        if m * tau > 128 {
            return Err(Error::Infeasible(format!(
                "syndrome of {} bits exceeds 128",
                m * tau
            )));
        }
        let n = support.len();
        let columns: Vec<Syndrome> = support
            .iter()
            .map(|&b| {
                (0..tau).fold(0u128, |acc, i| {
                    acc | (u128::from(field.pow(b, 2 * i as u64 + 1).0) << (i * m))
                })
            })
            .collect();
        let zero_position = support.iter().position(|b| b.is_zero());

        let width = m * tau;
        let mut basis: Vec<Option<(Syndrome, u128)>> = vec![None; width];
        let mut pivots = Vec::new();
        for j in (0..n).rev() {
            if pivots.len() == width {
                break;
            }
            let mut v = columns[j];
            let mut mask = 1u128 << pivots.len();
            for bit in (0..width).rev() {
                if v >> bit & 1 == 0 {
                    continue;
                }
                match basis[bit] {
                    Some((bv, bm)) => {
                        v ^= bv;
                        mask ^= bm;
                    }
                    None => {
                        basis[bit] = Some((v, mask));
                        pivots.push(j);
                        break;
                    }
                }
            }
        }
        let mut info_positions: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        info_positions.sort_unstable();
        Ok(BlockCode {
            n,
            tau,
            field: Some(field),
            support,
            columns,
            zero_position,
            pivots,
            info_positions,
            basis,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Guaranteed correction radius.
    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Number of parity bits: the rank of the binary parity-check matrix.
    pub fn redundancy_bits(&self) -> usize {
        self.pivots.len()
    }

    pub fn info_len(&self) -> usize {
        self.n - self.pivots.len()
    }

    /// Degree of the syndrome field (0 for the trivial code).
    pub fn field_degree(&self) -> u32 {
        self.field.as_ref().map_or(0, |f| f.degree())
    }

    /// Coordinate whose parity-check column is zero (full-support codes).
    pub fn zero_position(&self) -> Option<usize> {
        self.zero_position
    }

    pub fn syndrome(&self, y: &Sequence) -> Syndrome {
        y.ones().fold(0, |acc, j| acc ^ self.columns[j])
    }

    fn syndrome_of_positions(&self, positions: &[usize]) -> Syndrome {
        positions.iter().fold(0, |acc, &j| acc ^ self.columns[j])
    }

    /// Whether some word has this syndrome.
    pub fn is_attainable(&self, target: Syndrome) -> bool {
        self.express(target).is_some()
    }

    /// Mask over `pivots` whose columns sum to `target`.
    fn express(&self, mut target: Syndrome) -> Option<u128> {
        let mut mask = 0u128;
        for bit in (0..self.basis.len()).rev() {
            if target >> bit & 1 == 1 {
                let (v, m) = self.basis[bit]?;
                target ^= v;
                mask ^= m;
            }
        }
        (target == 0).then_some(mask)
    }

    /// Systematic codeword: `info` on the information positions (ascending),
    /// parity positions solved for syndrome zero.
    pub fn encode(&self, info: &Sequence) -> Result<Sequence> {
        self.encode_in_coset(info, 0)
    }

    /// Like [`BlockCode::encode`] but lands in the coset with syndrome `target`.
    pub fn encode_in_coset(&self, info: &Sequence, target: Syndrome) -> Result<Sequence> {
        if info.len() != self.info_len() {
            return Err(Error::LengthMismatch {
                expected: self.info_len(),
                got: info.len(),
            });
        }
        let mut x = Sequence::zeros(self.n);
        for (b, &p) in info.bits().zip(&self.info_positions) {
            x.set(p, b);
        }
        let need = self.syndrome(&x) ^ target;
        let mask = self
            .express(need)
            .ok_or_else(|| Error::InvalidParameters("syndrome not attainable".into()))?;
        for (i, &p) in self.pivots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x.set(p, true);
            }
        }
        debug_assert_eq!(self.syndrome(&x), target);
        Ok(x)
    }

    pub fn extract_info(&self, codeword: &Sequence) -> Sequence {
        Sequence::from_bits(self.info_positions.iter().map(|&p| codeword.get(p)))
    }

    /// A fixed representative of the coset with syndrome `target`.
    pub fn coset_shift(&self, target: Syndrome) -> Result<Sequence> {
        self.encode_in_coset(&Sequence::zeros(self.info_len()), target)
    }

    /// All codewords, ascending. Limited to `2^24` of them.
    pub fn codewords(&self) -> Result<Vec<Sequence>> {
        let k = self.info_len();
        if k > 24 {
            return Err(Error::Infeasible(format!("2^{k} codewords")));
        }
        let mut out = (0..1u64 << k)
            .map(|v| self.encode(&Sequence::from_u64(v, k)))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    /// Returns the codeword within distance `tau` of `y`.
    pub fn decode(&self, y: &Sequence) -> Result<Sequence> {
        self.decode_in_coset(y, 0)
    }

    /// Returns the word of the coset `target` within distance `tau` of `y`
    /// (over the coordinates with nonzero support point).
    pub fn decode_in_coset(&self, y: &Sequence, target: Syndrome) -> Result<Sequence> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let err_syndrome = self.syndrome(y) ^ target;
        if err_syndrome == 0 {
            return Ok(y.clone());
        }
        let field = self
            .field
            .as_deref()
            .ok_or_else(|| Error::DecodeFailure("nonzero syndrome".into()))?;
        let m = field.degree() as usize;
        let mask = (1u128 << m) - 1;
        // S_1 … S_2τ from the odd ones, using S_2i = S_i^2
        let mut synd = vec![Gf::ZERO; 2 * self.tau + 1];
        for i in 0..self.tau {
            synd[2 * i + 1] = Gf(((err_syndrome >> (i * m)) & mask) as u64);
        }
        for i in 1..=self.tau {
            synd[2 * i] = field.square(synd[i]);
        }
        let locator = berlekamp_massey(field, &synd[1..]);
        let degree = locator.len() - 1;
        if degree > self.tau {
            return Err(Error::DecodeFailure(format!(
                "locator degree {degree} exceeds {}",
                self.tau
            )));
        }
        let mut x = y.clone();
        let mut roots = 0;
        for (j, &b) in self.support.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let b_inv = field.inv(b)?;
            if field.eval_poly(&locator, b_inv).is_zero() {
                x.set(j, !x.get(j));
                roots += 1;
            }
        }
        if roots != degree || self.syndrome(&x) != target {
            return Err(Error::DecodeFailure(
                "error locator roots inconsistent".into(),
            ));
        }
        Ok(x)
    }

    /// Decodes a word known to lie within distance `tau` of a weight-`weight`
    /// word of coset `target`. The coordinate with the zero column is set by
    /// the weight.
    pub fn decode_constant_weight(
        &self,
        y: &Sequence,
        target: Syndrome,
        weight: usize,
    ) -> Result<Sequence> {
        let mut x = self.decode_in_coset(y, target)?;
        let w = x.count_ones();
        if w != weight {
            match self.zero_position {
                Some(z) if (x.get(z) && w == weight + 1) || (!x.get(z) && w + 1 == weight) => {
                    x.set(z, !x.get(z));
                }
                _ => {
                    return Err(Error::DecodeFailure(format!(
                        "decoded weight {w}, expected {weight}"
                    )))
                }
            }
        }
        if x.hamming_distance(y) > self.tau {
            return Err(Error::DecodeFailure("decoded word outside radius".into()));
        }
        Ok(x)
    }

    /// Reference decoder: tries every error pattern of weight `<= tau`.
    /// Fails when no pattern fits or the lightest fit is not unique.
    pub fn decode_brute(&self, y: &Sequence, target: Syndrome) -> Result<Sequence> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let base = self.syndrome(y) ^ target;
        for w in 0..=self.tau {
            let mut hits = (0..self.n)
                .combinations(w)
                .filter(|pos| self.syndrome_of_positions(pos) == base);
            if let Some(pos) = hits.next() {
                if hits.next().is_some() {
                    return Err(Error::DecodeFailure("ambiguous nearest codeword".into()));
                }
                let mut x = y.clone();
                for p in pos {
                    x.set(p, !x.get(p));
                }
                return Ok(x);
            }
        }
        Err(Error::DecodeFailure("no codeword within radius".into()))
    }

    /// All weight-`weight` words in the coset `target`, ascending.
    pub fn coset_words_of_weight(&self, target: Syndrome, weight: usize) -> Result<Vec<Sequence>> {
        check_enumerable(self.n, weight)?;
        let mut out: Vec<Sequence> = (0..self.n)
            .combinations(weight)
            .filter(|pos| self.syndrome_of_positions(pos) == target)
            .map(|pos| {
                let mut x = Sequence::zeros(self.n);
                for p in pos {
                    x.set(p, true);
                }
                x
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// Minimal connection polynomial (ascending coefficients, constant 1) of
/// the syndrome sequence `s[0] = S_1, s[1] = S_2, …`.
fn berlekamp_massey(field: &Field, s: &[Gf]) -> Vec<Gf> {
    let mut c = vec![Gf::ONE];
    let mut b = vec![Gf::ONE];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last = Gf::ONE;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=len.min(c.len() - 1) {
            d += field.mul(c[i], s[n - i]);
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = field.div(d, last).expect("last discrepancy is nonzero");
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, Gf::ZERO);
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + shift] += field.mul(coef, bi);
        }
        if 2 * len <= n {
            len = n + 1 - len;
            b = c;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    c.truncate(len + 1);
    c.resize(len + 1, Gf::ZERO);
    c
}

const ENUMERATION_LIMIT: u64 = 1 << 24;
const SAMPLE_SIZE: usize = 1 << 18;

fn check_enumerable(n: usize, weight: usize) -> Result<()> {
    let count = binomial(n as u64, weight as u64);
    if count > ENUMERATION_LIMIT.into() {
        return Err(Error::Infeasible(format!("C({n}, {weight}) words")));
    }
    Ok(())
}

/// Coset chosen to hold many weight-`weight` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetChoice {
    pub syndrome: Syndrome,
    /// A representative: the coset is `code + shift`.
    pub shift: Sequence,
    /// Weight-`weight` words in the coset (exact), or sample hits.
    pub count: u64,
    pub exhaustive: bool,
}

/// Picks the coset with the most words of the given weight, ties broken by
/// smallest syndrome. Exhaustive when `C(n, weight) <= 2^24`; otherwise a
/// seeded sample of weight-`weight` words votes and `count` is the number of
/// sample hits.
pub fn coset_select(code: &BlockCode, weight: usize) -> Result<CosetChoice> {
    let n = code.len();
    if weight > n {
        return Err(Error::InvalidParameters(format!(
            "weight {weight} > length {n}"
        )));
    }
    let mut hist: HashMap<Syndrome, u64> = HashMap::new();
    let exhaustive = check_enumerable(n, weight).is_ok();
    if exhaustive {
        for pos in (0..n).combinations(weight) {
            *hist.entry(code.syndrome_of_positions(&pos)).or_default() += 1;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLE_SIZE {
            let pos = sample(&mut rng, n, weight).into_vec();
            *hist.entry(code.syndrome_of_positions(&pos)).or_default() += 1;
        }
    }
    let (&syndrome, &count) = hist
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .ok_or_else(|| Error::InvalidParameters("empty word space".into()))?;
    Ok(CosetChoice {
        syndrome,
        shift: code.coset_shift(syndrome)?,
        count,
        exhaustive,
    })
}
