//! Exhaustive checks that a codebook is a code for a channel and that a
//! decoder inverts the channel on it.
//!
//! Work is split across codewords; results are merged in codebook order so
//! the reported counterexample does not depend on the number of workers.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{set_ball_with, ChannelSpec, ErrorGroup};
use crate::constructions::SetCode;
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet};

/// Codewords walked per parallel batch of [`is_code_with`].
const BATCH: usize = 256;

/// Two codewords whose error balls meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first_index: usize,
    pub second_index: usize,
    pub first: String,
    pub second: String,
    pub received: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeVerdict {
    Yes,
    Counterexample(Collision),
}

impl CodeVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, CodeVerdict::Yes)
    }
}

/// A received set the decoder gets wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeFailure {
    pub index: usize,
    pub codeword: String,
    pub received: String,
    /// Decoded set, or the decoder's error.
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Soundness {
    pub codewords: usize,
    /// Distinct (codeword, received set) pairs decoded.
    pub checked: u64,
    pub failures: u64,
    /// Earliest failure in codebook order.
    pub first_failure: Option<DecodeFailure>,
}

impl Soundness {
    pub fn is_yes(&self) -> bool {
        self.failures == 0
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))
}

fn check_shape(codebook: &[DataSet]) -> Result<()> {
    if let Some(first) = codebook.first() {
        if let Some(bad) = codebook
            .iter()
            .find(|c| c.seq_len() != first.seq_len() || c.size() != first.size())
        {
            return Err(Error::InvalidParameters(format!(
                "codeword {} does not match the shape of the first",
                bad.to_text().trim_end()
            )));
        }
    }
    Ok(())
}

pub fn is_code(codebook: &[DataSet], spec: &ChannelSpec, jobs: usize) -> Result<CodeVerdict> {
    is_code_with(codebook, spec.s, &spec.groups(), jobs)
}

/// YES iff the error balls of the codewords are pairwise disjoint.
pub fn is_code_with(
    codebook: &[DataSet],
    s: usize,
    groups: &[ErrorGroup],
    jobs: usize,
) -> Result<CodeVerdict> {
    check_shape(codebook)?;
    let pool = pool(jobs)?;
    let mut owner: HashMap<ReceivedSet, usize> = HashMap::new();
    for (b, batch) in codebook.chunks(BATCH).enumerate() {
        let balls: Vec<BTreeSet<ReceivedSet>> = pool.install(|| {
            batch
                .par_iter()
                .map(|c| set_ball_with(c, s, groups))
                .collect::<Result<_>>()
        })?;
        for (k, ball) in balls.into_iter().enumerate() {
            let idx = b * BATCH + k;
            for r in ball {
                if let Some(&prev) = owner.get(&r) {
                    return Ok(CodeVerdict::Counterexample(Collision {
                        first_index: prev,
                        second_index: idx,
                        first: codebook[prev].to_text(),
                        second: codebook[idx].to_text(),
                        received: r.to_text(),
                    }));
                }
                owner.insert(r, idx);
            }
        }
    }
    Ok(CodeVerdict::Yes)
}

pub fn decoder_sound<F>(
    codebook: &[DataSet],
    decoder: F,
    spec: &ChannelSpec,
    jobs: usize,
) -> Result<Soundness>
where
    F: Fn(&ReceivedSet) -> Result<DataSet> + Sync,
{
    decoder_sound_with(codebook, decoder, spec.s, &spec.groups(), jobs)
}

/// YES iff `decoder` returns the codeword for every set in its error ball.
pub fn decoder_sound_with<F>(
    codebook: &[DataSet],
    decoder: F,
    s: usize,
    groups: &[ErrorGroup],
    jobs: usize,
) -> Result<Soundness>
where
    F: Fn(&ReceivedSet) -> Result<DataSet> + Sync,
{
    check_shape(codebook)?;
    let per_codeword: Vec<(u64, u64, Option<DecodeFailure>)> = pool(jobs)?.install(|| {
        codebook
            .par_iter()
            .enumerate()
            .map(|(idx, c)| {
                let ball = set_ball_with(c, s, groups)?;
                let mut failures = 0;
                let mut first = None;
                for r in &ball {
                    let outcome = match decoder(r) {
                        Ok(d) if d == *c => continue,
                        Ok(d) => d.to_text(),
                        Err(e) => e.to_string(),
                    };
                    failures += 1;
                    first.get_or_insert_with(|| DecodeFailure {
                        index: idx,
                        codeword: c.to_text(),
                        received: r.to_text(),
                        outcome,
                    });
                }
                Ok((ball.len() as u64, failures, first))
            })
            .collect::<Result<_>>()
    })?;
    let mut out = Soundness {
        codewords: codebook.len(),
        checked: 0,
        failures: 0,
        first_failure: None,
    };
    for (checked, failures, first) in per_codeword {
        out.checked += checked;
        out.failures += failures;
        if out.first_failure.is_none() {
            out.first_failure = first;
        }
    }
    Ok(out)
}

/// [`decoder_sound`] for a construction's own decoder.
pub fn code_sound(
    code: &dyn SetCode,
    codebook: &[DataSet],
    spec: &ChannelSpec,
    jobs: usize,
) -> Result<Soundness> {
    decoder_sound(codebook, |r| code.decode_set(r), spec, jobs)
}

pub fn verdict_json(v: &CodeVerdict) -> serde_json::Value {
    match v {
        CodeVerdict::Yes => serde_json::json!({ "code": true }),
        CodeVerdict::Counterexample(c) => serde_json::json!({ "code": false, "counterexample": c }),
    }
}

pub fn soundness_json(s: &Soundness) -> serde_json::Value {
    serde_json::json!({
        "sound": s.is_yes(),
        "codewords": s.codewords,
        "checked": s.checked,
        "failures": s.failures,
        "first_failure": s.first_failure,
    })
}
