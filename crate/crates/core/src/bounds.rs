//! Sphere-packing upper bounds on set-code cardinality, the redundancy
//! lower bounds they imply, and redundancy of the constructions.
//!
//! Cardinality bounds are exact big rationals; logarithms are taken last.

use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::channel::{ball_size_formulas, Metric};
use crate::combin::{
    binomial, binomial_big, ceil_log2, log2_big, log2_data_sets, log2_rational, pow2,
};
use crate::constructions::c4_codebook_size;
pub use crate::constructions::ConstructionParams;
use crate::error::{Error, Result};
use crate::seq::{DataSet, Sequence};
use crate::vt::class_sizes;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Which bound a report evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `(0,t,eps)_H` codes, substitution balls.
    SubstitutionPacking,
    /// `(0,t,eps)_L` codes, insertion spheres.
    InsertionPacking,
    /// `(0,M,eps)_H`, asymptotic in `L`.
    SubstitutionAsymptotic,
    /// `(0,M,eps)_L`, asymptotic in `L`.
    InsertionAsymptotic,
    /// `(s,t,L)` codes in either metric.
    LossAndError,
}

impl BoundKind {
    /// Numbering used by the command line, `1..=5`.
    pub fn number(self) -> u8 {
        match self {
            BoundKind::SubstitutionPacking => 1,
            BoundKind::InsertionPacking => 2,
            BoundKind::SubstitutionAsymptotic => 3,
            BoundKind::InsertionAsymptotic => 4,
            BoundKind::LossAndError => 5,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Some(match n {
            1 => BoundKind::SubstitutionPacking,
            2 => BoundKind::InsertionPacking,
            3 => BoundKind::SubstitutionAsymptotic,
            4 => BoundKind::InsertionAsymptotic,
            5 => BoundKind::LossAndError,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct BoundParams {
    pub M: usize,
    pub L: usize,
    pub s: usize,
    pub t: usize,
    pub eps: usize,
    pub metric: Metric,
}

/// An evaluated bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub params: BoundParams,
    /// Exact upper bound on `|C|`; `None` for asymptotic formulas.
    pub cardinality_upper: Option<BigRational>,
    /// Implied `r(C) >=` in bits.
    pub redundancy_lower: f64,
    pub asymptotic: bool,
}

impl BoundReport {
    /// `floor` of the cardinality bound.
    pub fn cap(&self) -> Option<BigUint> {
        self.cardinality_upper
            .as_ref()
            .map(|q| q.floor().to_integer().magnitude().clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bound": self.kind,
            "number": self.kind.number(),
            "params": self.params,
            "cardinality_upper": self.cardinality_upper.as_ref().map(|q| q.to_string()),
            "cap": self.cap().map(|c| c.to_string()),
            "redundancy_lower_bits": self.redundancy_lower,
            "asymptotic": self.asymptotic,
        })
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(
            f,
            "bound {} (M={}, L={}, s={}, t={}, eps={}): ",
            self.kind.number(),
            p.M,
            p.L,
            p.s,
            p.t,
            p.eps
        )?;
        if let (Some(q), Some(cap)) = (&self.cardinality_upper, self.cap()) {
            write!(f, "|C| <= {q} (cap {cap}), ")?;
        }
        write!(f, "r(C) >= {:.4} bits", self.redundancy_lower)?;
        if self.asymptotic {
            write!(f, " [asymptotic]")?;
        }
        Ok(())
    }
}

fn big(n: BigUint) -> BigInt {
    BigInt::from(n)
}

fn space(seq_len: usize) -> BigUint {
    pow2(seq_len as u64)
}

fn exact_report(
    kind: BoundKind,
    params: BoundParams,
    num: BigInt,
    den: BigInt,
) -> Result<BoundReport> {
    if !den.is_positive() {
        return Err(Error::InvalidParameters(format!(
            "bound denominator {den} is not positive"
        )));
    }
    if !num.is_positive() {
        return Err(Error::InvalidParameters("bound numerator is zero".into()));
    }
    let q = BigRational::new(num, den);
    let redundancy_lower = log2_data_sets(params.L, params.M) - log2_rational(&q);
    Ok(BoundReport {
        kind,
        params,
        cardinality_upper: Some(q),
        redundancy_lower,
        asymptotic: false,
    })
}

fn check_counts(count: usize, seq_len: usize) -> Result<()> {
    if count == 0 || seq_len == 0 || seq_len > 1 << 16 {
        return Err(Error::InvalidParameters(format!("M={count}, L={seq_len}")));
    }
    if seq_len < 64 && count as u64 > 1u64 << seq_len {
        return Err(Error::InvalidParameters(format!("M={count} > 2^{seq_len}")));
    }
    Ok(())
}

/// `|C| <= sum_{i=M-t..M} C(2^L, i) / (B_H - (t-1) N_H)^t` for
/// `(0,t,eps)_H` codes.
pub fn substitution_packing(
    count: usize,
    seq_len: usize,
    t: usize,
    eps: usize,
) -> Result<BoundReport> {
    check_counts(count, seq_len)?;
    if t > count || eps == 0 {
        return Err(Error::InvalidParameters(format!("t={t}, eps={eps}")));
    }
    let n = space(seq_len);
    let num: BigUint = (count - t..=count)
        .map(|i| binomial_big(&n, i as u64))
        .sum();
    let balls = ball_size_formulas(seq_len, eps)?;
    let base = big(balls.b_h) - BigInt::from(t.saturating_sub(1)) * big(balls.n_h);
    let den = if t == 0 {
        BigInt::one()
    } else {
        base.pow(t as u32)
    };
    if t > 0 && !base.is_positive() {
        return Err(Error::InvalidParameters(format!(
            "degenerate denominator B - (t-1)N = {base}"
        )));
    }
    exact_report(
        BoundKind::SubstitutionPacking,
        BoundParams {
            M: count,
            L: seq_len,
            s: 0,
            t,
            eps,
            metric: Metric::Hamming,
        },
        big(num),
        den,
    )
}

/// `|C| <= C(2^L, M-t) C(2^(L+eps), t) / (C(M,t) (S_I - (t-1) N_I)^t)` for
/// `(0,t,eps)_L` codes.
pub fn insertion_packing(
    count: usize,
    seq_len: usize,
    t: usize,
    eps: usize,
) -> Result<BoundReport> {
    check_counts(count, seq_len)?;
    if t > count || eps == 0 {
        return Err(Error::InvalidParameters(format!("t={t}, eps={eps}")));
    }
    let num = binomial_big(&space(seq_len), (count - t) as u64)
        * binomial_big(&space(seq_len + eps), t as u64);
    let balls = ball_size_formulas(seq_len, eps)?;
    let base = big(balls.s_i) - BigInt::from(t.saturating_sub(1)) * big(balls.n_i);
    if t > 0 && !base.is_positive() {
        return Err(Error::InvalidParameters(format!(
            "degenerate denominator S - (t-1)N = {base}"
        )));
    }
    let den = big(binomial(count as u64, t as u64))
        * if t == 0 {
            BigInt::one()
        } else {
            base.pow(t as u32)
        };
    exact_report(
        BoundKind::InsertionPacking,
        BoundParams {
            M: count,
            L: seq_len,
            s: 0,
            t,
            eps,
            metric: Metric::Levenshtein,
        },
        big(num),
        den,
    )
}

fn check_fraction(c: f64) -> Result<()> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::InvalidParameters(format!(
            "c={c} must lie in [0, 1)"
        )));
    }
    Ok(())
}

/// `r(C) >~ c M log2(B_H)` for `(0,M,eps)_H` codes as `L` grows with
/// `M = 2^(beta L)`. Not a finite-length bound.
pub fn substitution_asymptotic(
    count: usize,
    seq_len: usize,
    eps: usize,
    c: f64,
) -> Result<BoundReport> {
    check_fraction(c)?;
    let b_h = ball_size_formulas(seq_len, eps)?.b_h;
    Ok(BoundReport {
        kind: BoundKind::SubstitutionAsymptotic,
        params: BoundParams {
            M: count,
            L: seq_len,
            s: 0,
            t: count,
            eps,
            metric: Metric::Hamming,
        },
        cardinality_upper: None,
        redundancy_lower: c * count as f64 * log2_big(&b_h),
        asymptotic: true,
    })
}

/// `r(C) >~ c M (log2(S_I) - eps)` for `(0,M,eps)_L` codes, asymptotic.
pub fn insertion_asymptotic(
    count: usize,
    seq_len: usize,
    eps: usize,
    c: f64,
) -> Result<BoundReport> {
    check_fraction(c)?;
    let s_i = ball_size_formulas(seq_len, eps)?.s_i;
    Ok(BoundReport {
        kind: BoundKind::InsertionAsymptotic,
        params: BoundParams {
            M: count,
            L: seq_len,
            s: 0,
            t: count,
            eps,
            metric: Metric::Levenshtein,
        },
        cardinality_upper: None,
        redundancy_lower: c * count as f64 * (log2_big(&s_i) - eps as f64),
        asymptotic: true,
    })
}

/// Both forms of the loss-and-error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct LossErrorBound {
    /// From `|C| <= C(2^L, M-s) / (C(M, t+s) C(2^L - M, t))`.
    pub exact: BoundReport,
    /// `(s+t) log(2^L - M - t) + t log(M - s - t) - log(t! (s+t)!)`.
    pub log_form: f64,
}

pub fn loss_and_error(count: usize, seq_len: usize, s: usize, t: usize) -> Result<LossErrorBound> {
    check_counts(count, seq_len)?;
    let n = space(seq_len);
    if count < s + t + 1 {
        return Err(Error::InvalidParameters(format!(
            "needs M - s - t >= 1, got M={count}, s={s}, t={t}"
        )));
    }
    if n < BigUint::from(count + t + 1) {
        return Err(Error::InvalidParameters("needs 2^L - M - t >= 1".into()));
    }
    let num = binomial_big(&n, (count - s) as u64);
    let den = binomial(count as u64, (t + s) as u64) * binomial_big(&(&n - count), t as u64);
    let exact = exact_report(
        BoundKind::LossAndError,
        BoundParams {
            M: count,
            L: seq_len,
            s,
            t,
            eps: seq_len,
            metric: Metric::Hamming,
        },
        big(num),
        big(den),
    )?;
    let factorials = |k: usize| (1..=k as u64).fold(BigUint::one(), |acc, i| acc * i);
    let log_form = (s + t) as f64 * log2_big(&(&n - (count + t)))
        + t as f64 * log2_big(&BigUint::from(count - s - t))
        - log2_big(&(factorials(t) * factorials(s + t)));
    Ok(LossErrorBound { exact, log_form })
}

/// Hamming distance of two equal-length words at least `2 eps + 1`.
fn separated(a: &Sequence, b: &Sequence, eps: usize) -> bool {
    a.hamming_distance(b) > 2 * eps
}

/// A largest subset of `ds` whose elements are pairwise more than `2 eps`
/// apart. Exhaustive; meant for small `M`.
pub fn largest_separated_subset(ds: &DataSet, eps: usize) -> Result<Vec<Sequence>> {
    if ds.size() > 24 {
        return Err(Error::Infeasible("subset search needs M <= 24".into()));
    }
    let els = ds.elements();
    for size in (1..=els.len()).rev() {
        if let Some(pick) = els.iter().combinations(size).find(|c| {
            c.iter()
                .tuple_combinations()
                .all(|(a, b)| separated(a, b, eps))
        }) {
            return Ok(pick.into_iter().cloned().collect());
        }
    }
    Ok(Vec::new())
}

/// Lower bound on the substitution set-ball size from a separated subset of
/// size `y`: `B_H^y` if `y <= t`, else `C(y, t) B_H^t`.
pub fn separated_ball_lower(y: usize, t: usize, seq_len: usize, eps: usize) -> Result<BigUint> {
    let b_h = ball_size_formulas(seq_len, eps)?.b_h;
    Ok(if y <= t {
        b_h.pow(y as u32)
    } else {
        binomial(y as u64, t as u64) * b_h.pow(t as u32)
    })
}

/// Index overhead `log2 C(2^L, M) - M (L - ceil(log2 M))`, the `c_M M` term.
pub fn index_overhead(count: usize, seq_len: usize) -> f64 {
    let payload = seq_len as f64 - f64::from(ceil_log2(count as u64));
    log2_data_sets(seq_len, count) - count as f64 * payload
}

/// How the reference formula relates to the exact redundancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaRelation {
    Equal,
    UpperBound,
    Approximate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionRedundancy {
    pub params: ConstructionParams,
    /// `log2 C(2^L, M) - log2 |C|` for the code as realized here.
    pub exact_bits: f64,
    pub formula_bits: f64,
    pub relation: FormulaRelation,
}

/// Exact redundancy of a construction next to its closed-form value.
pub fn construction_redundancy(p: ConstructionParams) -> Result<ConstructionRedundancy> {
    use crate::constructions::{ConstantWeight, GroupedIndex, IndexMds, SetCode};
    let (exact_bits, formula_bits, relation) = match p {
        ConstructionParams::C1 { M, L, delta } => {
            let code = IndexMds::new(M, L, delta)?;
            let payload = code.symbol_bits() as f64;
            (
                code.redundancy(),
                index_overhead(M, L) + delta as f64 * payload,
                FormulaRelation::Equal,
            )
        }
        ConstructionParams::C2 { M, L, s, t } => {
            let code = ConstantWeight::new(M, L, s, t)?;
            (
                code.redundancy(),
                ((s + 2 * t) * L) as f64,
                FormulaRelation::UpperBound,
            )
        }
        ConstructionParams::C3 {
            M,
            L,
            c_bits,
            delta,
        } => {
            let code = GroupedIndex::new(M, L, c_bits, delta)?;
            let (m, c, d) = (M as f64, code.c(), delta as f64);
            let approx = m.powf(c) * d * (L as f64 - m.log2() + LOG2_E)
                + m.powf(1.0 - c) * (LOG2_E + c / 2.0 * m.log2())
                - d * LOG2_E;
            (code.redundancy(), approx, FormulaRelation::Approximate)
        }
        ConstructionParams::C4 { M, L, a } | ConstructionParams::C4s { M, L, a } => {
            check_counts(M, L)?;
            let size = c4_codebook_size(M, L, a);
            if size.is_zero() {
                return Err(Error::InvalidParameters("empty codebook".into()));
            }
            (
                log2_data_sets(L, M) - log2_big(&size),
                ((L + 1) as f64).log2(),
                FormulaRelation::UpperBound,
            )
        }
        ConstructionParams::C5 { M, L, a } => {
            check_counts(M, L)?;
            let class = class_sizes(L)
                .get(a as usize)
                .cloned()
                .ok_or_else(|| Error::InvalidParameters(format!("residue {a}")))?;
            let size = binomial_big(&class, M as u64);
            if size.is_zero() {
                return Err(Error::InvalidParameters("class smaller than M".into()));
            }
            let m = M as f64;
            let guaranteed = space(L).to_f64().unwrap_or(f64::INFINITY) / (L + 1) as f64;
            (
                log2_data_sets(L, M) - log2_big(&size),
                m * (((L + 1) as f64).log2() + m * LOG2_E / (guaranteed - m)),
                FormulaRelation::UpperBound,
            )
        }
        ConstructionParams::C6 { M, L, eps } => {
            check_counts(M, L)?;
            let parity = eps * ceil_log2(L as u64) as usize;
            let component = crate::blockcode::BlockCode::bch(L, eps)?;
            let size = binomial_big(&pow2(component.info_len() as u64), M as u64);
            if size.is_zero() {
                return Err(Error::InvalidParameters("component smaller than M".into()));
            }
            let m = M as f64;
            let free = 2f64.powi(L as i32 - parity as i32);
            (
                log2_data_sets(L, M) - log2_big(&size),
                m * (parity as f64 + m * LOG2_E / (free - m)),
                FormulaRelation::UpperBound,
            )
        }
    };
    Ok(ConstructionRedundancy {
        params: p,
        exact_bits,
        formula_bits,
        relation,
    })
}

/// One grid point of the redundancy summary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[allow(non_snake_case)]
pub struct GridPoint {
    pub M: usize,
    pub L: usize,
    pub s: usize,
    pub t: usize,
    pub eps: usize,
    /// Group fraction for the grouped-index row.
    pub c: f64,
}

/// One summary row: a construction's redundancy next to the matching
/// lower bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Table1Row {
    pub row: String,
    pub construction: String,
    pub M: usize,
    pub L: usize,
    pub s: usize,
    pub t: usize,
    pub eps: usize,
    pub construction_bits: f64,
    pub bound_bits: f64,
    /// Exact finite-length bound where one applies.
    pub exact_bound_bits: Option<f64>,
}

/// The seven summary rows at one grid point. Formula columns are the
/// closed forms; `exact_bound_bits` evaluates the matching exact bound.
pub fn table1(p: &GridPoint) -> Result<Vec<Table1Row>> {
    check_counts(p.M, p.L)?;
    let (m, l, s, t, eps) = (p.M as f64, p.L as f64, p.s as f64, p.t as f64, p.eps as f64);
    let tau = s + 2.0 * t;
    let log_m = m.log2();
    let ceil_log_m = f64::from(ceil_log2(p.M as u64));
    let ceil_log_l = f64::from(ceil_log2(p.L as u64));
    let loss_bound = (s + t) * l + t * log_m;
    let exact_loss = loss_and_error(p.M, p.L, p.s, p.t)
        .ok()
        .map(|b| b.exact.redundancy_lower);
    let c3 = {
        let c = p.c;
        m.powf(c) * tau * (l - log_m + LOG2_E) + m.powf(1.0 - c) * (LOG2_E + c / 2.0 * log_m)
            - tau * LOG2_E
    };
    let row = |name: &str,
               construction: &str,
               s: usize,
               t: usize,
               eps: usize,
               cb: f64,
               bb: f64,
               exact: Option<f64>| Table1Row {
        row: name.to_string(),
        construction: construction.to_string(),
        M: p.M,
        L: p.L,
        s,
        t,
        eps,
        construction_bits: cb,
        bound_bits: bb,
        exact_bound_bits: exact,
    };
    let single_ins = insertion_packing(p.M, p.L, 1, 1)
        .ok()
        .map(|b| b.redundancy_lower);
    let single_sub = substitution_packing(p.M, p.L, 1, 1)
        .ok()
        .map(|b| b.redundancy_lower);
    let all_sub = substitution_packing(p.M, p.L, p.M, p.eps)
        .ok()
        .map(|b| b.redundancy_lower);
    Ok(vec![
        row(
            "(s,t,L)",
            "c1",
            p.s,
            p.t,
            p.L,
            index_overhead(p.M, p.L) + tau * (l - ceil_log_m),
            loss_bound,
            exact_loss,
        ),
        row(
            "(s,t,L)",
            "c2",
            p.s,
            p.t,
            p.L,
            tau * l,
            loss_bound,
            exact_loss,
        ),
        row("(s,t,L)", "c3", p.s, p.t, p.L, c3, loss_bound, exact_loss),
        row(
            "(0,1,1)_L",
            "c4",
            0,
            1,
            1,
            (l + 1.0).log2(),
            l.log2() - 1.0,
            single_ins,
        ),
        row("(0,1,1)_H", "c2", 0, 1, 1, 2.0 * l, l.log2(), single_sub),
        row(
            "(0,M,1)_L",
            "c5",
            0,
            p.M,
            1,
            m * (l + 1.0).log2(),
            m * (l.log2() - 1.0),
            None,
        ),
        row(
            "(0,M,eps)_H",
            "c6",
            0,
            p.M,
            p.eps,
            m * eps * ceil_log_l,
            m * eps * (l / eps).log2(),
            all_sub,
        ),
    ])
}

pub fn table1_csv(rows: &[Table1Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn table1_json(rows: &[Table1Row]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::set_ball;
    use crate::channel::ChannelSpec;
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1.0 / 1024.0;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn substitution_packing_small() {
        let b = substitution_packing(2, 4, 1, 1).unwrap();
        // C(16,1) + C(16,2) = 136 over B_H = 4
        assert_eq!(b.cardinality_upper, Some(q(34, 1)));
        assert_eq!(b.cap(), Some(34u32.into()));
        let clean = substitution_packing(2, 4, 0, 1).unwrap();
        assert_eq!(clean.cardinality_upper, Some(q(120, 1)));
        assert!(clean.redundancy_lower.abs() < TOL);
    }

    #[test]
    fn substitution_packing_matches_t_log_l() {
        let b = substitution_packing(16, 256, 2, 1).unwrap();
        assert!((b.redundancy_lower - 2.0 * 256f64.log2()).abs() < 1.0);
    }

    #[test]
    fn insertion_packing_small() {
        let b = insertion_packing(2, 4, 1, 1).unwrap();
        // C(16,1) C(32,1) / (C(2,1) 6) = 512 / 12
        assert_eq!(b.cardinality_upper, Some(q(128, 3)));
        assert_eq!(b.cap(), Some(42u32.into()));
        let clean = insertion_packing(3, 4, 0, 1).unwrap();
        assert_eq!(clean.cardinality_upper, Some(q(560, 1)));
    }

    #[test]
    fn insertion_packing_single_error_redundancy() {
        for l in [16usize, 64, 256] {
            for m in [2usize, 16] {
                let r = insertion_packing(m, l, 1, 1).unwrap().redundancy_lower;
                assert!(r >= ((l + 2) as f64).log2() - 1.0 - TOL, "L={l} M={m}: {r}");
            }
        }
    }

    #[test]
    fn asymptotic_formulas() {
        let b = substitution_asymptotic(8, 64, 1, 0.5).unwrap();
        assert!(b.asymptotic && b.cardinality_upper.is_none());
        assert!((b.redundancy_lower - 0.5 * 8.0 * 6.0).abs() < TOL);
        let b = insertion_asymptotic(8, 62, 1, 0.5).unwrap();
        assert!((b.redundancy_lower - 0.5 * 8.0 * (64f64.log2() - 1.0)).abs() < TOL);
        assert!(substitution_asymptotic(8, 64, 1, 1.0).is_err());
    }

    #[test]
    fn loss_and_error_examples() {
        let b = loss_and_error(2, 4, 1, 0).unwrap();
        assert!((b.log_form - 14f64.log2()).abs() < TOL);
        assert!(b.exact.redundancy_lower >= b.log_form);
        let b = loss_and_error(2, 4, 0, 0).unwrap();
        assert!(b.log_form.abs() < TOL && b.exact.redundancy_lower.abs() < TOL);
        let b = loss_and_error(16, 8, 0, 1).unwrap();
        assert!((b.log_form - (239f64.log2() + 15f64.log2())).abs() < TOL);
        assert!(loss_and_error(2, 4, 1, 1).is_err());
    }

    #[test]
    fn substitution_bound_monotone() {
        for l in [6usize, 8, 12] {
            for m in [2usize, 4, 8] {
                let mut prev_t = f64::NEG_INFINITY;
                for t in 0..=m.min(3) {
                    let mut prev_e = f64::NEG_INFINITY;
                    for eps in 1..=3 {
                        let Ok(b) = substitution_packing(m, l, t, eps) else {
                            continue;
                        };
                        assert!(b.redundancy_lower >= prev_e - TOL, "eps M={m} L={l} t={t}");
                        prev_e = b.redundancy_lower;
                    }
                    let r = substitution_packing(m, l, t, 1).unwrap().redundancy_lower;
                    assert!(r >= prev_t - TOL, "t M={m} L={l} t={t}");
                    prev_t = r;
                }
            }
        }
    }

    #[test]
    fn index_overhead_range() {
        for l in 4..=20usize {
            for m in (1..=l / 2).map(|k| 1usize << k) {
                if m * m > 1 << l {
                    continue;
                }
                let o = index_overhead(m, l);
                assert!(o > 0.0 && o < m as f64 * LOG2_E, "M={m} L={l}: {o}");
            }
        }
    }

    #[test]
    fn construction_redundancy_examples() {
        let r = construction_redundancy(ConstructionParams::C1 {
            M: 4,
            L: 8,
            delta: 0,
        })
        .unwrap();
        assert!((r.exact_bits - (174_792_640f64.log2() - 24.0)).abs() < TOL);
        assert!((r.exact_bits - r.formula_bits).abs() < TOL);
        let r = construction_redundancy(ConstructionParams::C5 { M: 2, L: 4, a: 0 }).unwrap();
        assert!((r.exact_bits - (120f64.log2() - 6f64.log2())).abs() < TOL);
        assert!(r.exact_bits <= 2.0 * 5f64.log2());
        let best = (0..=4)
            .map(|a| {
                construction_redundancy(ConstructionParams::C4 { M: 2, L: 4, a })
                    .unwrap()
                    .exact_bits
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 5f64.log2() + TOL);
        let r = construction_redundancy(ConstructionParams::C6 { M: 3, L: 7, eps: 1 }).unwrap();
        let exact = log2_big(&binomial(128, 3)) - log2_big(&binomial(16, 3));
        assert!((r.exact_bits - exact).abs() < TOL);
        assert!(r.exact_bits <= r.formula_bits);
    }

    #[test]
    fn grouped_index_near_approximation() {
        let r = construction_redundancy(ConstructionParams::C3 {
            M: 16,
            L: 12,
            c_bits: 2,
            delta: 2,
        })
        .unwrap();
        assert_eq!(r.relation, FormulaRelation::Approximate);
        let rel = (r.exact_bits - r.formula_bits).abs() / r.formula_bits;
        assert!(
            rel < 0.15,
            "exact {} approx {}",
            r.exact_bits,
            r.formula_bits
        );
    }

    #[test]
    fn codes_respect_bounds() {
        // single indel: checksum-sum codes against the insertion bound
        for (m, l) in [(2usize, 4usize), (3, 5), (2, 6)] {
            let bound = insertion_packing(m, l, 1, 1).unwrap().redundancy_lower;
            for a in 0..=l as u64 {
                let r = construction_redundancy(ConstructionParams::C4 { M: m, L: l, a }).unwrap();
                assert!(r.exact_bits >= bound - TOL);
            }
        }
        let r = construction_redundancy(ConstructionParams::C6 { M: 3, L: 7, eps: 1 }).unwrap();
        assert!(r.exact_bits >= substitution_packing(3, 7, 3, 1).unwrap().redundancy_lower - TOL);
        let r = construction_redundancy(ConstructionParams::C5 { M: 2, L: 6, a: 0 }).unwrap();
        assert!(r.exact_bits >= insertion_packing(2, 6, 2, 1).unwrap().redundancy_lower - TOL);
        for (m, l, delta) in [(4usize, 8usize, 1usize), (4, 8, 3), (8, 10, 2)] {
            let r = construction_redundancy(ConstructionParams::C1 { M: m, L: l, delta }).unwrap();
            for s in 0..=delta {
                let t = (delta - s) / 2;
                let b = loss_and_error(m, l, s, t).unwrap();
                assert!(r.exact_bits >= b.exact.redundancy_lower - TOL);
            }
        }
        let r = construction_redundancy(ConstructionParams::C2 {
            M: 3,
            L: 4,
            s: 1,
            t: 0,
        })
        .unwrap();
        assert!(r.exact_bits >= loss_and_error(3, 4, 1, 0).unwrap().exact.redundancy_lower - TOL);
        assert!(r.exact_bits <= r.formula_bits);
    }

    #[test]
    fn table_rows() {
        let rows = table1(&GridPoint {
            M: 8,
            L: 64,
            s: 1,
            t: 1,
            eps: 2,
            c: 0.5,
        })
        .unwrap();
        assert_eq!(rows.len(), 7);
        let r = &rows[3];
        assert!((r.construction_bits - 65f64.log2()).abs() < TOL);
        assert!((r.bound_bits - 5.0).abs() < TOL);
        let r = &rows[6];
        assert!((r.construction_bits - 96.0).abs() < TOL);
        assert!((r.bound_bits - 80.0).abs() < TOL);
        assert!((rows[5].construction_bits - 8.0 * 65f64.log2()).abs() < TOL);
        let csv = table1_csv(&rows).unwrap();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.starts_with(
            "row,construction,M,L,s,t,eps,construction_bits,bound_bits,exact_bound_bits"
        ));
        let json: serde_json::Value = serde_json::from_str(&table1_json(&rows)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 7);
    }

    #[test]
    fn separated_subset_lower_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let picks = sample(&mut rng, 32, 3).into_vec();
            let ds = DataSet::new(
                picks
                    .iter()
                    .map(|&v| Sequence::from_u64(v as u64, 5))
                    .collect(),
                5,
            )
            .unwrap();
            let y = largest_separated_subset(&ds, 1).unwrap().len();
            for t in 1..=2 {
                let ball = set_ball(&ds, &ChannelSpec::new(0, t, 1, Metric::Hamming)).unwrap();
                assert!(BigUint::from(ball.len()) >= separated_ball_lower(y, t, 5, 1).unwrap());
            }
        }
    }
}
