//! The storage channel: whole-sequence losses plus point errors inside a
//! bounded number of sequences.
//!
//! [`apply`] samples one channel realisation from a seed. [`point_ball`] and
//! [`set_ball`] enumerate everything the channel can produce and are the
//! oracles behind exhaustive verification.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet, Sequence};

/// Point error model inside one sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Substitutions.
    Hamming,
    /// Insertions and deletions in any mix.
    Levenshtein,
    InsertionOnly,
    DeletionOnly,
}

impl Metric {
    pub fn code(self) -> char {
        match self {
            Metric::Hamming => 'H',
            Metric::Levenshtein => 'L',
            Metric::InsertionOnly => 'I',
            Metric::DeletionOnly => 'D',
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "hamming" => Ok(Metric::Hamming),
            "l" | "levenshtein" => Ok(Metric::Levenshtein),
            "i" | "insertion" | "insertion-only" => Ok(Metric::InsertionOnly),
            "d" | "deletion" | "deletion-only" => Ok(Metric::DeletionOnly),
            other => Err(Error::Parse(format!("unknown metric {other:?}"))),
        }
    }
}

/// Channel parameters: at most `s` losses, at most `t` erroneous sequences,
/// at most `eps` point errors in each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub s: usize,
    pub t: usize,
    pub eps: usize,
    pub metric: Metric,
}

impl ChannelSpec {
    pub fn new(s: usize, t: usize, eps: usize, metric: Metric) -> Self {
        ChannelSpec { s, t, eps, metric }
    }

    pub fn clean() -> Self {
        ChannelSpec::new(0, 0, 0, Metric::Hamming)
    }

    /// The single error group this spec describes.
    pub fn groups(&self) -> Vec<ErrorGroup> {
        vec![ErrorGroup {
            t: self.t,
            eps: self.eps,
            metric: self.metric,
        }]
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={},t={},eps={},metric={}",
            self.s, self.t, self.eps, self.metric
        )
    }
}

/// Parses `s=1,t=1,eps=1,metric=H`. Missing fields default to `s=0`,
/// `t=0`, `eps=1`, `metric=H`.
impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut spec = ChannelSpec::new(0, 0, 1, Metric::Hamming);
        for field in text.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad channel field {field:?}")))?;
            let number = || {
                value
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad value in {field:?}")))
            };
            match key.trim() {
                "s" => spec.s = number()?,
                "t" => spec.t = number()?,
                "eps" | "e" => spec.eps = number()?,
                "metric" | "m" => spec.metric = value.parse()?,
                other => return Err(Error::Parse(format!("unknown channel field {other:?}"))),
            }
        }
        Ok(spec)
    }
}

/// Up to `t` sequences, each hit by up to `eps` errors of one metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ErrorGroup {
    pub t: usize,
    pub eps: usize,
    pub metric: Metric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptedRead {
    pub original: Sequence,
    pub read: Sequence,
}

/// What one channel use did to a data set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorTranscript {
    pub lost: Vec<Sequence>,
    pub corrupted: Vec<CorruptedRead>,
    pub survivors: Vec<Sequence>,
}

impl ErrorTranscript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

/// Samples a channel output. The number of losses, the number of corrupted
/// sequences and the number of point errors in each are drawn uniformly
/// from their ranges, then the affected sequences and error positions.
pub fn apply(ds: &DataSet, spec: &ChannelSpec, seed: u64) -> (ReceivedSet, ErrorTranscript) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = ds.size();
    let elements = ds.elements();

    let s_used = rng.gen_range(0..=spec.s.min(m));
    let mut order: Vec<usize> = sample(&mut rng, m, m).into_vec();
    let lost_idx: Vec<usize> = order.drain(..s_used).collect();
    let t_used = rng.gen_range(0..=spec.t.min(order.len()));
    let corrupt_idx: Vec<usize> = order.drain(..t_used).collect();

    let mut transcript = ErrorTranscript::default();
    let mut reads = Vec::with_capacity(m);
    for &i in &lost_idx {
        transcript.lost.push(elements[i].clone());
    }
    for &i in &corrupt_idx {
        let x = &elements[i];
        let read = if spec.eps == 0 {
            x.clone()
        } else {
            let k = rng.gen_range(1..=spec.eps);
            corrupt(x, k, spec.metric, &mut rng)
        };
        reads.push(read.clone());
        transcript.corrupted.push(CorruptedRead {
            original: x.clone(),
            read,
        });
    }
    for &i in &order {
        reads.push(elements[i].clone());
        transcript.survivors.push(elements[i].clone());
    }
    transcript.lost.sort();
    transcript.survivors.sort();
    transcript
        .corrupted
        .sort_by(|a, b| a.original.cmp(&b.original));
    (ReceivedSet::new(reads, ds.seq_len()), transcript)
}

fn corrupt<R: Rng>(x: &Sequence, k: usize, metric: Metric, rng: &mut R) -> Sequence {
    let mut y = x.clone();
    match metric {
        Metric::Hamming => {
            let k = k.min(x.len());
            for p in sample(rng, x.len(), k) {
                y = y.flipped(p);
            }
        }
        _ => {
            for _ in 0..k {
                let insert = match metric {
                    Metric::InsertionOnly => true,
                    Metric::DeletionOnly => false,
                    _ => rng.gen_bool(0.5),
                };
                if insert || y.is_empty() {
                    let pos = rng.gen_range(0..=y.len());
                    y = y.inserted(pos, rng.gen_bool(0.5));
                } else {
                    let pos = rng.gen_range(0..y.len());
                    y = y.deleted(pos);
                }
            }
        }
    }
    y
}

fn edits(x: &Sequence, metric: Metric, out: &mut BTreeSet<Sequence>) {
    match metric {
        Metric::Hamming => {
            for i in 0..x.len() {
                out.insert(x.flipped(i));
            }
        }
        Metric::Levenshtein | Metric::InsertionOnly | Metric::DeletionOnly => {
            if metric != Metric::DeletionOnly {
                for i in 0..=x.len() {
                    out.insert(x.inserted(i, false));
                    out.insert(x.inserted(i, true));
                }
            }
            if metric != Metric::InsertionOnly {
                for i in 0..x.len() {
                    out.insert(x.deleted(i));
                }
            }
        }
    }
}

/// All words reachable from `x` by at most `eps` errors, `x` excluded.
pub fn point_ball(x: &Sequence, eps: usize, metric: Metric) -> BTreeSet<Sequence> {
    let mut seen = BTreeSet::new();
    seen.insert(x.clone());
    let mut frontier = seen.clone();
    for _ in 0..eps {
        let mut next = BTreeSet::new();
        for y in &frontier {
            edits(y, metric, &mut next);
        }
        frontier = next.difference(&seen).cloned().collect();
        seen.extend(frontier.iter().cloned());
    }
    seen.remove(x);
    seen
}

/// Words obtained from `x` by exactly `eps` insertions.
pub fn insertion_sphere(x: &Sequence, eps: usize) -> BTreeSet<Sequence> {
    let mut cur = BTreeSet::new();
    cur.insert(x.clone());
    for _ in 0..eps {
        let mut next = BTreeSet::new();
        for y in &cur {
            edits(y, Metric::InsertionOnly, &mut next);
        }
        cur = next;
    }
    cur
}

/// Largest number of channel realisations [`for_each_received`] will walk.
pub const MAX_BALL_WALK: u128 = 1 << 26;

struct Walk<'a> {
    elements: &'a [Sequence],
    balls: Vec<Vec<Vec<Sequence>>>, // [element][group]
    groups: &'a [ErrorGroup],
    s: usize,
    nominal_len: usize,
}

/// Number of (loss, corruption, read) assignments a walk over `ds` visits.
pub fn ball_walk_size(ds: &DataSet, s: usize, groups: &[ErrorGroup]) -> u128 {
    let balls = group_balls(ds.elements(), groups);
    walk_size(&balls, s, groups)
}

fn group_balls(elements: &[Sequence], groups: &[ErrorGroup]) -> Vec<Vec<Vec<Sequence>>> {
    elements
        .iter()
        .map(|x| {
            groups
                .iter()
                .map(|g| {
                    if g.t == 0 || g.eps == 0 {
                        Vec::new()
                    } else {
                        point_ball(x, g.eps, g.metric).into_iter().collect()
                    }
                })
                .collect()
        })
        .collect()
}

fn walk_size(balls: &[Vec<Vec<Sequence>>], s: usize, groups: &[ErrorGroup]) -> u128 {
    // state: losses used, then per-group corruptions used
    let mut states: HashMap<Vec<usize>, u128> = HashMap::new();
    states.insert(vec![0; groups.len() + 1], 1);
    for per_group in balls {
        let mut next: HashMap<Vec<usize>, u128> = HashMap::new();
        for (state, count) in states {
            *next.entry(state.clone()).or_default() += count;
            if state[0] < s {
                let mut st = state.clone();
                st[0] += 1;
                *next.entry(st).or_default() += count;
            }
            for (g, ball) in per_group.iter().enumerate() {
                if state[g + 1] < groups[g].t && !ball.is_empty() {
                    let mut st = state.clone();
                    st[g + 1] += 1;
                    *next.entry(st).or_default() += count.saturating_mul(ball.len() as u128);
                }
            }
        }
        states = next;
    }
    states.values().fold(0u128, |a, &b| a.saturating_add(b))
}

impl Walk<'_> {
    fn run<F: FnMut(ReceivedSet)>(
        &self,
        i: usize,
        lost: usize,
        used: &mut [usize],
        reads: &mut Vec<Sequence>,
        f: &mut F,
    ) {
        if i == self.elements.len() {
            f(ReceivedSet::new(reads.iter().cloned(), self.nominal_len));
            return;
        }
        reads.push(self.elements[i].clone());
        self.run(i + 1, lost, used, reads, f);
        reads.pop();
        if lost < self.s {
            self.run(i + 1, lost + 1, used, reads, f);
        }
        for g in 0..self.groups.len() {
            if used[g] < self.groups[g].t {
                used[g] += 1;
                for y in &self.balls[i][g] {
                    reads.push(y.clone());
                    self.run(i + 1, lost, used, reads, f);
                    reads.pop();
                }
                used[g] -= 1;
            }
        }
    }
}

/// Calls `f` on every received set reachable from `ds` by at most `s`
/// losses and, for each group, at most `group.t` further sequences with at
/// most `group.eps` errors. Groups hit disjoint sequences. The same set may
/// be reported more than once.
pub fn for_each_received<F: FnMut(ReceivedSet)>(
    ds: &DataSet,
    s: usize,
    groups: &[ErrorGroup],
    mut f: F,
) -> Result<()> {
    let balls = group_balls(ds.elements(), groups);
    let size = walk_size(&balls, s, groups);
    if size > MAX_BALL_WALK {
        return Err(Error::Infeasible(format!(
            "error ball walk of {size} realisations exceeds {MAX_BALL_WALK}"
        )));
    }
    let walk = Walk {
        elements: ds.elements(),
        balls,
        groups,
        s,
        nominal_len: ds.seq_len(),
    };
    let mut used = vec![0; groups.len()];
    walk.run(0, 0, &mut used, &mut Vec::new(), &mut f);
    Ok(())
}

/// Every received set the channel can produce from `ds`, clean output included.
pub fn set_ball(ds: &DataSet, spec: &ChannelSpec) -> Result<BTreeSet<ReceivedSet>> {
    set_ball_with(ds, spec.s, &spec.groups())
}

pub fn set_ball_with(
    ds: &DataSet,
    s: usize,
    groups: &[ErrorGroup],
) -> Result<BTreeSet<ReceivedSet>> {
    let mut out = BTreeSet::new();
    for_each_received(ds, s, groups, |r| {
        out.insert(r);
    })?;
    Ok(out)
}

/// Closed-form ball quantities for words of length `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSizes {
    /// Substitution ball size, centre excluded.
    pub b_h: BigUint,
    /// Largest intersection of two substitution balls.
    pub n_h: BigUint,
    /// Insertion sphere size.
    pub s_i: BigUint,
    /// Largest intersection of two insertion spheres.
    pub n_i: BigUint,
}

/// `B_H = sum_{i=1..eps} C(L,i)`, `N_H = sum_{i<eps} C(L-1,i)`,
/// `S_I = sum_{i=0..eps} C(L+eps,i)`,
/// `N_I = sum_{i<eps} C(L+eps,i)(1-(-1)^(eps-i))`.
pub fn ball_size_formulas(seq_len: usize, eps: usize) -> Result<BallSizes> {
    if eps == 0 || seq_len == 0 {
        return Err(Error::InvalidParameters(
            "ball formulas need L >= 1 and eps >= 1".into(),
        ));
    }
    let (l, e) = (seq_len as u64, eps as u64);
    let b_h = (1..=e).map(|i| binomial(l, i)).sum();
    let n_h = (0..e).map(|i| binomial(l - 1, i)).sum();
    let s_i = (0..=e).map(|i| binomial(l + e, i)).sum();
    let mut n_i = BigUint::zero();
    for i in 0..e {
        // 1 - (-1)^(eps-i) is 2 for odd eps-i and 0 otherwise
        if (e - i) % 2 == 1 {
            n_i += binomial(l + e, i) * 2u32;
        }
    }
    Ok(BallSizes { b_h, n_h, s_i, n_i })
}
