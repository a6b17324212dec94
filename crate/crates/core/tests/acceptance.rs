//! Acceptance criteria. Every criterion runs and prints one line; the
//! process exits non-zero if any fails.
//!
//! Reference values are recomputed here by brute force, independent of the
//! library code under test.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setcode::bounds::{index_overhead, insertion_packing, loss_and_error, substitution_packing};
use setcode::channel::{apply, ball_size_formulas, set_ball, ChannelSpec, ErrorGroup, Metric};
use setcode::constructions::{
    ChecksumEach, ChecksumSum, ComponentCode, ConstantWeight, ConstructionParams, Enumerable,
    GroupedIndex, IndexMds, SetCode,
};
use setcode::payload::{decode_stream, encode_stream};
use setcode::verify::{code_sound, decoder_sound_with, is_code, CodeVerdict, Soundness};
use setcode::vt::{codebook, decode_indel};
use setcode::{DataSet, ReceivedSet, Sequence};

/// Absolute tolerance on logarithmic quantities, in bits.
const LOG_TOL: f64 = 1.0 / 1024.0;
const JOBS: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

// ---- oracles ----

/// `log2 C(n, k)` by a running product.
fn lg_binom(n: f64, k: u64) -> f64 {
    (0..k)
        .map(|i| ((n - i as f64) / (i + 1) as f64).log2())
        .sum()
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn bits(v: u64, len: usize) -> Vec<u8> {
    (0..len).map(|i| (v >> (len - 1 - i) & 1) as u8).collect()
}

fn word(b: &[u8]) -> Sequence {
    b.iter()
        .map(|&x| char::from(b'0' + x))
        .collect::<String>()
        .parse()
        .unwrap()
}

/// `sum i x_i mod (n+1)`, positions counted from 1.
fn vt_sum(b: &[u8]) -> u64 {
    b.iter()
        .enumerate()
        .map(|(i, &x)| (i as u64 + 1) * u64::from(x))
        .sum::<u64>()
        % (b.len() as u64 + 1)
}

/// Words at Hamming distance `1..=eps` from `x`.
fn hamming_ball(x: u64, len: usize, eps: usize) -> Vec<u64> {
    (0..1u64 << len)
        .filter(|y| (1..=eps as u32).contains(&(x ^ y).count_ones()))
        .collect()
}

/// Results of exactly `eps` insertions into `x`.
fn insertion_sphere(x: &[u8], eps: usize) -> HashSet<Vec<u8>> {
    let mut cur: HashSet<Vec<u8>> = HashSet::from([x.to_vec()]);
    for _ in 0..eps {
        let mut next = HashSet::new();
        for y in &cur {
            for i in 0..=y.len() {
                for b in 0..2 {
                    let mut z = y.clone();
                    z.insert(i, b);
                    next.insert(z);
                }
            }
        }
        cur = next;
    }
    cur
}

fn random_set(rng: &mut ChaCha8Rng, count: usize, len: usize) -> Vec<u64> {
    let mut picks = rand::seq::index::sample(rng, 1 << len, count)
        .into_iter()
        .map(|v| v as u64)
        .collect_vec();
    picks.sort_unstable();
    picks
}

fn data_set(values: &[u64], len: usize) -> DataSet {
    DataSet::new(
        values.iter().map(|&v| Sequence::from_u64(v, len)).collect(),
        len,
    )
    .unwrap()
}

fn sound(code: &dyn SetCode, book: &[DataSet], spec: ChannelSpec) -> Result<Soundness, String> {
    let s = code_sound(code, book, &spec, JOBS).map_err(e)?;
    ensure(s.is_yes(), || {
        format!(
            "{spec}: {} failures, first {:?}",
            s.failures, s.first_failure
        )
    })?;
    Ok(s)
}

// ---- criteria ----

fn single_indel_correction() -> Outcome {
    let start = Instant::now();
    let mut cases = 0u64;
    for len in 1..=10usize {
        for a in 0..=len as u64 {
            let want: Vec<Sequence> = (0..1u64 << len)
                .map(|v| bits(v, len))
                .filter(|b| vt_sum(b) == a)
                .map(|b| word(&b))
                .collect();
            let got = codebook(len, a).map_err(e)?;
            ensure(got == want, || {
                format!("class L={len} a={a} differs from brute force")
            })?;
            for x in &want {
                let mut variants: Vec<Sequence> = (0..len).map(|i| x.deleted(i)).collect();
                for i in 0..=len {
                    variants.push(x.inserted(i, false));
                    variants.push(x.inserted(i, true));
                }
                for y in variants {
                    cases += 1;
                    let d = decode_indel(&y, a, len).map_err(e)?;
                    ensure(d == *x, || {
                        format!("L={len} a={a}: {y} decoded to {d}, want {x}")
                    })?;
                }
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!(
        "{cases} corrupted words decoded in {:.2}s",
        took.as_secs_f64()
    ))
}

fn checksum_sum_code() -> Outcome {
    let mut notes = Vec::new();
    for (m, len) in [(3usize, 5usize), (2, 6)] {
        let code = ChecksumSum::new(m, len, 0).map_err(e)?;
        let book = code.codewords().map_err(e)?;
        let s = sound(&code, &book, ChannelSpec::new(0, 1, 1, Metric::Levenshtein))?;

        let mut counts = vec![0u64; len + 1];
        for combo in (0..1u64 << len).combinations(m) {
            let total: u64 = combo.iter().map(|&v| vt_sum(&bits(v, len))).sum();
            counts[(total % (len as u64 + 1)) as usize] += 1;
        }
        ensure(book.len() as u64 == counts[0], || {
            format!(
                "M={m} L={len}: {} codewords, brute force {}",
                book.len(),
                counts[0]
            )
        })?;
        let full = lg_binom((1u64 << len) as f64, m as u64);
        let best = counts
            .iter()
            .map(|&c| full - (c as f64).log2())
            .fold(f64::INFINITY, f64::min);
        let cap = ((len + 1) as f64).log2();
        ensure(best <= cap + LOG_TOL, || {
            format!("M={m} L={len}: best redundancy {best} > {cap}")
        })?;
        ensure(
            (code.redundancy() - (full - (counts[0] as f64).log2())).abs() < LOG_TOL,
            || "redundancy mismatch".into(),
        )?;
        notes.push(format!(
            "M={m},L={len}: {} sets, best r={best:.3} <= {cap:.3}",
            s.checked
        ));
    }
    Ok(notes.join("; "))
}

fn checksum_each_code() -> Outcome {
    let code = ChecksumEach::new(2, 4, 0).map_err(e)?;
    let book = code.codewords().map_err(e)?;
    ensure(book.len() == 6, || format!("{} codewords", book.len()))?;
    let spec = ChannelSpec::new(0, 2, 1, Metric::Levenshtein);
    sound(&code, &book, spec)?;
    ensure(is_code(&book, &spec, JOBS).map_err(e)?.is_yes(), || {
        "balls overlap".into()
    })?;
    let want = 120f64.log2() - 6f64.log2();
    let band = 2.0 * 5f64.log2();
    let r = code.redundancy();
    ensure((r - want).abs() < LOG_TOL, || {
        format!("redundancy {r}, want {want}")
    })?;
    ensure(r <= band, || format!("redundancy {r} above {band}"))?;
    Ok(format!("6 codewords, r={r:.3} <= {band:.3}"))
}

fn index_mds_code() -> Outcome {
    let code = IndexMds::new(4, 8, 3).map_err(e)?;
    let book = code.codewords().map_err(e)?;
    let group = |t, metric| ErrorGroup { t, eps: 1, metric };
    let mut patterns = 0;
    for s in 0..=3usize {
        for t in 0..=(3 - s) / 2 {
            for metric in [Metric::Hamming, Metric::Levenshtein] {
                let r = code_sound(&code, &book, &ChannelSpec::new(s, t, 1, metric), JOBS)
                    .map_err(e)?;
                ensure(r.is_yes(), || {
                    format!("s={s} t={t} {metric}: {:?}", r.first_failure)
                })?;
                patterns += 1;
            }
        }
        for th in 0..=(3 - s) / 2 {
            let td = 3 - s - 2 * th;
            let groups = [group(th, Metric::Hamming), group(td, Metric::DeletionOnly)];
            let r =
                decoder_sound_with(&book, |x| code.decode_set(x), s, &groups, JOBS).map_err(e)?;
            ensure(r.is_yes(), || {
                format!("s={s} tH={th} tD={td}: {:?}", r.first_failure)
            })?;
            patterns += 1;
        }
    }
    let want = lg_binom(256.0, 4) - 6.0;
    ensure((code.redundancy() - want).abs() < LOG_TOL, || {
        format!("redundancy {} want {want}", code.redundancy())
    })?;
    let via_overhead = index_overhead(4, 8) + 3.0 * 6.0;
    ensure((via_overhead - want).abs() < LOG_TOL, || {
        format!("overhead form {via_overhead} want {want}")
    })?;
    Ok(format!(
        "{} codewords, {patterns} error patterns, r={want:.3}",
        book.len()
    ))
}

fn constant_weight_code() -> Outcome {
    let mut notes = Vec::new();
    for (s, t) in [(1usize, 0usize), (0, 1)] {
        let code = ConstantWeight::new(3, 4, s, t).map_err(e)?;
        let book = code.codewords().map_err(e)?;
        sound(&code, &book, code.channel())?;
        let tau = (s + 2 * t) as u32;
        let floor = 560u64.div_ceil(1 << (4 * tau));
        ensure(book.len() as u64 >= floor, || {
            format!("s={s} t={t}: {} < {floor}", book.len())
        })?;
        notes.push(format!("s={s},t={t}: {} codewords >= {floor}", book.len()));
    }
    Ok(notes.join("; "))
}

fn grouped_index_code() -> Outcome {
    let code = GroupedIndex::new(4, 4, 1, 1).map_err(e)?;
    let book = code.codewords().map_err(e)?;
    let mut checked = 0;
    for spec in [
        ChannelSpec::clean(),
        ChannelSpec::new(1, 0, 1, Metric::Hamming),
        // a length-changing corruption reads as a loss
        ChannelSpec::new(0, 1, 1, Metric::Levenshtein),
    ] {
        checked += sound(&code, &book, spec)?.checked;
    }
    Ok(format!("{} codewords, {checked} received sets", book.len()))
}

fn component_code() -> Outcome {
    let code = ComponentCode::new(3, 7, 1).map_err(e)?;
    let book = code.codewords().map_err(e)?;
    let s = sound(&code, &book, ChannelSpec::new(0, 3, 1, Metric::Hamming))?;
    ensure(s.checked == 560 * 512, || {
        format!("{} received sets", s.checked)
    })?;
    let want = lg_binom(128.0, 3) - lg_binom(16.0, 3);
    let (m, parity) = (3.0, 3.0);
    let band = m * (parity + m * std::f64::consts::LOG2_E / (16.0 - m));
    let r = code.redundancy();
    ensure((r - want).abs() < LOG_TOL, || {
        format!("redundancy {r} want {want}")
    })?;
    ensure(r <= band, || format!("redundancy {r} above {band}"))?;
    Ok(format!(
        "{} codewords x 512 flip patterns, r={r:.3} <= {band:.3}",
        book.len()
    ))
}

fn bounds_and_ball_formulas() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();

    let b = substitution_packing(2, 4, 1, 1).map_err(e)?;
    let want = num_rational::BigRational::new(136.into(), 4.into());
    if b.cardinality_upper.as_ref() != Some(&want) || b.cap() != Some(BigUint::from(34u32)) {
        failures.push(format!("substitution cap {:?}", b.cardinality_upper));
    }

    // per-codeword coverage of received sets with one sequence hit by one
    // insertion, against the packing denominator
    let ins = insertion_packing(2, 4, 1, 1).map_err(e)?;
    let cap = ins.cap().unwrap();
    let per_set = 2 * 6u64;
    for pair in (0..16u64).combinations(2) {
        let mut covered = HashSet::new();
        for (i, &v) in pair.iter().enumerate() {
            for y in insertion_sphere(&bits(v, 4), 1) {
                covered.insert((pair[1 - i], y));
            }
        }
        if (covered.len() as u64) < per_set {
            failures.push(format!("set {pair:?} covers {} < {per_set}", covered.len()));
        }
    }
    let mut greedy: Vec<DataSet> = Vec::new();
    let mut used = BTreeSet::new();
    for pair in (0..16u64).combinations(2) {
        let ds = data_set(&pair, 4);
        let ball = set_ball(&ds, &ChannelSpec::new(0, 1, 1, Metric::Levenshtein)).map_err(e)?;
        if ball.iter().all(|r| !used.contains(r)) {
            used.extend(ball);
            greedy.push(ds);
        }
    }
    if BigUint::from(greedy.len()) > cap {
        failures.push(format!(
            "greedy code of {} beats insertion cap {cap}",
            greedy.len()
        ));
    }
    notes.push(format!(
        "insertion cap {cap} (space 512, >= {per_set} per codeword), greedy code {}",
        greedy.len()
    ));

    let mut grid = 0;
    'grid: for len in [4usize, 5, 6, 8, 10] {
        for m in [2usize, 3, 4, 8, 16] {
            for s in 0..=2usize {
                for t in 0..=2usize {
                    if s + t >= m || m + t >= 1 << len {
                        continue;
                    }
                    let b = loss_and_error(m, len, s, t).map_err(e)?;
                    if b.log_form > b.exact.redundancy_lower + LOG_TOL {
                        failures.push(format!(
                            "log form {} > exact {} at M={m} L={len} s={s} t={t}",
                            b.log_form, b.exact.redundancy_lower
                        ));
                    }
                    grid += 1;
                    if grid == 50 {
                        break 'grid;
                    }
                }
            }
        }
    }
    if grid < 50 {
        failures.push(format!("only {grid} grid points"));
    }

    let mut nh = Vec::new();
    for len in 2..=8usize {
        for eps in 1..=2usize.min(len) {
            let balls: Vec<Vec<bool>> = (0..1u64 << len)
                .map(|x| {
                    let mut v = vec![false; 1 << len];
                    for y in hamming_ball(x, len, eps) {
                        v[y as usize] = true;
                    }
                    v
                })
                .collect();
            let size = balls[0].iter().filter(|&&b| b).count();
            let mut best = 0;
            let mut best_with_centres = 0;
            for (x, y) in (0..balls.len()).tuple_combinations() {
                let common = balls[x]
                    .iter()
                    .zip(&balls[y])
                    .filter(|(a, b)| **a && **b)
                    .count();
                best = best.max(common);
                let centres = usize::from(balls[y][x]) * 2;
                best_with_centres = best_with_centres.max(common + centres);
            }
            let f = ball_size_formulas(len, eps).map_err(e)?;
            if BigUint::from(size) != f.b_h {
                failures.push(format!("B_H L={len} eps={eps}: {} vs {size}", f.b_h));
            }
            if BigUint::from(best) != f.n_h {
                nh.push(format!(
                    "L={len},eps={eps}: {}/{best}/{best_with_centres}",
                    f.n_h
                ));
            }
        }
    }
    if !nh.is_empty() {
        failures.push(format!(
            "N_H formula vs brute-force max intersection (formula/punctured/closed balls): {}",
            nh.join(" ")
        ));
    }

    for len in 1..=6usize {
        for eps in 1..=2usize {
            let spheres: Vec<HashSet<Vec<u8>>> = (0..1u64 << len)
                .map(|x| insertion_sphere(&bits(x, len), eps))
                .collect();
            let f = ball_size_formulas(len, eps).map_err(e)?;
            if BigUint::from(spheres[0].len()) != f.s_i {
                failures.push(format!(
                    "S_I L={len} eps={eps}: {} vs {}",
                    f.s_i,
                    spheres[0].len()
                ));
            }
            let best = (0..spheres.len())
                .tuple_combinations()
                .map(|(x, y)| spheres[x].intersection(&spheres[y]).count())
                .max()
                .unwrap_or(0);
            if BigUint::from(best) != f.n_i {
                failures.push(format!("N_I L={len} eps={eps}: {} vs {best}", f.n_i));
            }
        }
    }
    notes.push(format!("{grid} loss/error grid points"));
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn insertion_deletion_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e55);
    let mut yes = 0;
    for trial in 0..200 {
        let len = rng.gen_range(2..=4usize);
        let m = rng.gen_range(1..=3usize);
        let eps = rng.gen_range(1..=2usize);
        let t = rng.gen_range(1..=m);
        let n = rng.gen_range(2..=4usize);
        let mut book: Vec<Vec<u64>> = Vec::new();
        while book.len() < n {
            let s = random_set(&mut rng, m, len);
            if !book.contains(&s) {
                book.push(s);
            }
        }
        let book: Vec<DataSet> = book.iter().map(|s| data_set(s, len)).collect();
        let ins = is_code(
            &book,
            &ChannelSpec::new(0, t, eps, Metric::InsertionOnly),
            JOBS,
        )
        .map_err(e)?;
        let del = is_code(
            &book,
            &ChannelSpec::new(0, t, eps, Metric::DeletionOnly),
            JOBS,
        )
        .map_err(e)?;
        ensure(ins.is_yes() == del.is_yes(), || {
            format!("trial {trial}: insertion {ins:?} deletion {del:?}")
        })?;
        yes += usize::from(ins.is_yes());
    }
    let book = [
        DataSet::parse_list("0000 1111 1000").unwrap(),
        DataSet::parse_list("0000 1111 0111").unwrap(),
    ];
    let del = is_code(
        &book,
        &ChannelSpec::new(0, 1, 2, Metric::DeletionOnly),
        JOBS,
    )
    .map_err(e)?;
    let lev = is_code(&book, &ChannelSpec::new(0, 1, 2, Metric::Levenshtein), JOBS).map_err(e)?;
    ensure(del.is_yes(), || {
        "counterexample code not deletion-correcting".into()
    })?;
    let CodeVerdict::Counterexample(c) = lev else {
        return Err("counterexample code corrects insertions and deletions".into());
    };
    Ok(format!(
        "200 codes agree ({yes} codes, {} not); mixed collision at {}",
        200 - yes,
        c.received.trim().replace('\n', " ")
    ))
}

fn separated_subset_ball_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3);
    let (len, eps, b_h) = (5usize, 1usize, 5u64);
    let mut tight = 0;
    for _ in 0..100 {
        let s = random_set(&mut rng, 3, len);
        let y = (1..=3)
            .rev()
            .find(|&k| {
                s.iter().combinations(k).any(|c| {
                    c.iter()
                        .tuple_combinations()
                        .all(|(a, b)| (*a ^ *b).count_ones() as usize > 2 * eps)
                })
            })
            .unwrap();
        for t in 1..=2usize {
            // each element kept or replaced by a ball word, at most t replaced
            let mut received = HashSet::new();
            let options: Vec<Vec<Option<u64>>> = s
                .iter()
                .map(|&x| {
                    std::iter::once(None)
                        .chain(hamming_ball(x, len, eps).into_iter().map(Some))
                        .collect()
                })
                .collect();
            for pick in options.iter().multi_cartesian_product() {
                if pick.iter().filter(|p| p.is_some()).count() > t {
                    continue;
                }
                let r: BTreeSet<u64> = pick.iter().zip(&s).map(|(p, &x)| p.unwrap_or(x)).collect();
                received.insert(r);
            }
            let lib = set_ball(
                &data_set(&s, len),
                &ChannelSpec::new(0, t, eps, Metric::Hamming),
            )
            .map_err(e)?;
            ensure(lib.len() == received.len(), || {
                format!(
                    "{s:?} t={t}: library ball {} vs {}",
                    lib.len(),
                    received.len()
                )
            })?;
            let lower = if y <= t {
                b_h.pow(y as u32)
            } else {
                binom(y as u64, t as u64) * b_h.pow(t as u32)
            };
            ensure(received.len() as u64 >= lower, || {
                format!("{s:?} t={t}: |ball| {} < {lower}", received.len())
            })?;
            tight += usize::from(received.len() as u64 == lower);
        }
    }
    Ok(format!("100 sets x t in {{1,2}}, {tight} tight"))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let h = |s, t, eps| ChannelSpec::new(s, t, eps, Metric::Hamming);
    let l = |s, t| ChannelSpec::new(s, t, 1, Metric::Levenshtein);
    let cases: Vec<(ConstructionParams, Vec<ChannelSpec>)> = vec![
        (
            ConstructionParams::C1 {
                M: 4,
                L: 8,
                delta: 3,
            },
            vec![h(3, 0, 1), h(1, 1, 1), h(1, 1, 8), l(2, 0), l(1, 1)],
        ),
        (
            ConstructionParams::C2 {
                M: 3,
                L: 4,
                s: 1,
                t: 0,
            },
            vec![h(1, 0, 4)],
        ),
        (
            ConstructionParams::C2 {
                M: 3,
                L: 4,
                s: 0,
                t: 1,
            },
            vec![h(0, 1, 4)],
        ),
        (
            ConstructionParams::C3 {
                M: 4,
                L: 4,
                c_bits: 1,
                delta: 1,
            },
            vec![h(1, 0, 1), l(0, 1)],
        ),
        (ConstructionParams::C4 { M: 3, L: 5, a: 0 }, vec![l(0, 1)]),
        (ConstructionParams::C4 { M: 2, L: 6, a: 0 }, vec![l(0, 1)]),
        (ConstructionParams::C4s { M: 3, L: 5, a: 0 }, vec![l(0, 1)]),
        (ConstructionParams::C5 { M: 2, L: 4, a: 0 }, vec![l(0, 2)]),
        (
            ConstructionParams::C6 { M: 3, L: 7, eps: 1 },
            vec![h(0, 3, 1)],
        ),
    ];
    let mut notes = Vec::new();
    for (params, specs) in cases {
        let code = params.build().map_err(e)?;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut codewords = 0;
        for trial in 0..1000u64 {
            let mut data = vec![0u8; rng.gen_range(0..=16)];
            rng.fill_bytes(&mut data);
            let spec = specs[trial as usize % specs.len()];
            let sets = encode_stream(code.as_ref(), &data).map_err(e)?;
            codewords += sets.len();
            let recv: Vec<ReceivedSet> = sets
                .iter()
                .enumerate()
                .map(|(i, ds)| apply(ds, &spec, trial << 16 | i as u64).0)
                .collect();
            let back = decode_stream(code.as_ref(), &recv)
                .map_err(|err| format!("{params:?} trial {trial} {spec}: {err}"))?;
            ensure(back == data, || {
                format!("{params:?} trial {trial} {spec}: output differs")
            })?;
        }
        notes.push(format!("{}:{codewords}", code.name()));
    }
    let took = start.elapsed();
    Ok(format!(
        "1000 trials each, codewords {}, {:.1}s",
        notes.join(" "),
        took.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "single-indel checksum decoding, exhaustive L<=10",
            single_indel_correction,
        ),
        (
            "checksum-sum code corrects one indel; redundancy <= log(L+1)",
            checksum_sum_code,
        ),
        (
            "per-sequence checksum code corrects one indel per sequence",
            checksum_each_code,
        ),
        (
            "index+MDS code at M=4 L=8 delta=3, all error mixes",
            index_mds_code,
        ),
        (
            "constant-weight coset code at L=4 M=3",
            constant_weight_code,
        ),
        (
            "grouped index code at M=4 L=4 c=1/2 delta=1",
            grouped_index_code,
        ),
        ("component-code sets at L=7 eps=1 M=3", component_code),
        (
            "cardinality bounds and ball-size formulas",
            bounds_and_ball_formulas,
        ),
        (
            "insertion-only vs deletion-only correctability",
            insertion_deletion_equivalence,
        ),
        (
            "separated-subset lower bound on substitution set balls",
            separated_subset_ball_bound,
        ),
        ("encode -> channel -> decode byte streams", end_to_end),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    let total = start.elapsed();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        total.as_secs_f64()
    );
    if failed > 0 || total > Duration::from_secs(600) {
        std::process::exit(1);
    }
}
