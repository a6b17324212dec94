//! MDS `[n, k]` codes over GF(2^m), realized as Reed–Solomon evaluation
//! codes at the points `0, 1, …, n-1` (field elements in value order).
//!
//! Encoding is systematic: the first `k` symbols are the information and the
//! codeword is the evaluation of its interpolating polynomial. Decoding
//! handles erasures and errors jointly: erased coordinates are punctured and
//! the remaining `N` symbols are decoded with the Berlekamp–Welch key
//! equation `Q(x) = y·E(x)`, correcting up to `(N - k) / 2` errors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2m::{Field, Gf};

/// A received symbol: a field element, or an erasure.
pub type Symbol = Option<Gf>;

#[derive(Clone, Debug)]
pub struct MdsCode {
    n: usize,
    k: usize,
    field: Arc<Field>,
    points: Vec<Gf>,
    /// `parity[j][i]`: weight of info symbol `i` in codeword symbol `k + j`.
    parity: Vec<Vec<Gf>>,
}

impl MdsCode {
    pub fn new(n: usize, k: usize, field: Arc<Field>) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!(
                "MDS code needs 1 <= k <= n, got n={n}, k={k}"
            )));
        }
        if n as u64 > field.size() {
            return Err(Error::InvalidParameters(format!(
                "MDS length {n} exceeds field size {}",
                field.size()
            )));
        }
        let points: Vec<Gf> = (0..n as u64).map(Gf).collect();
        let mut parity = Vec::with_capacity(n - k);
        for &x in &points[k..] {
            let row = (0..k)
                .map(|i| lagrange_weight(&field, &points[..k], i, x))
                .collect();
            parity.push(row);
        }
        Ok(MdsCode {
            n,
            k,
            field,
            points,
            parity,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn min_distance(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn encode(&self, info: &[Gf]) -> Result<Vec<Gf>> {
        if info.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: info.len(),
            });
        }
        if let Some(bad) = info.iter().find(|s| s.0 >= self.field.size()) {
            return Err(Error::InvalidParameters(format!(
                "{bad:?} is not a field element"
            )));
        }
        let mut out = info.to_vec();
        for row in &self.parity {
            let sym = row
                .iter()
                .zip(info)
                .fold(Gf::ZERO, |acc, (&w, &u)| acc + self.field.mul(w, u));
            out.push(sym);
        }
        Ok(out)
    }

    /// Recovers the information symbols whenever
    /// `#erasures + 2·#errors <= n - k`.
    pub fn decode(&self, recv: &[Symbol]) -> Result<Vec<Gf>> {
        if recv.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: recv.len(),
            });
        }
        let known: Vec<(Gf, Gf)> = recv
            .iter()
            .zip(&self.points)
            .filter_map(|(s, &x)| s.map(|y| (x, y)))
            .collect();
        if known.len() < self.k {
            return Err(Error::DecodeFailure(format!(
                "{} erasures leave fewer than k={} symbols",
                self.n - known.len(),
                self.k
            )));
        }
        let max_errors = (known.len() - self.k) / 2;
        let f = self.berlekamp_welch(&known, max_errors)?;
        let errors = known
            .iter()
            .filter(|&&(x, y)| self.field.eval_poly(&f, x) != y)
            .count();
        if errors > max_errors {
            return Err(Error::DecodeFailure(format!(
                "{errors} symbol errors exceed capability {max_errors}"
            )));
        }
        Ok(self.points[..self.k]
            .iter()
            .map(|&x| self.field.eval_poly(&f, x))
            .collect())
    }

    /// Finds the message polynomial (ascending coefficients, degree < k).
    fn berlekamp_welch(&self, known: &[(Gf, Gf)], e: usize) -> Result<Vec<Gf>> {
        let f = &*self.field;
        let k = self.k;
        // unknowns: E_0..E_{e-1}, then Q_0..Q_{e+k-1}
        let cols = e + (e + k);
        let mut rows: Vec<Vec<Gf>> = Vec::with_capacity(known.len());
        for &(x, y) in known {
            let mut row = Vec::with_capacity(cols + 1);
            let mut xp = Gf::ONE;
            let mut powers = Vec::with_capacity(e + k + 1);
            for _ in 0..=(e + k) {
                powers.push(xp);
                xp = f.mul(xp, x);
            }
            for p in powers.iter().take(e) {
                row.push(f.mul(y, *p)); // characteristic 2: -y = y
            }
            row.extend(powers.iter().take(e + k).copied());
            row.push(f.mul(y, powers[e]));
            rows.push(row);
        }
        let sol = solve_linear(f, rows, cols)
            .ok_or_else(|| Error::DecodeFailure("key equation has no solution".into()))?;
        let mut locator: Vec<Gf> = sol[..e].to_vec();
        locator.push(Gf::ONE);
        let q = &sol[e..];
        let (quot, rem) = poly_divmod(f, q, &locator)?;
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::DecodeFailure(
                "error locator does not divide Q".into(),
            ));
        }
        let mut quot = quot;
        quot.resize(k.max(quot.len()), Gf::ZERO);
        if quot[k..].iter().any(|c| !c.is_zero()) {
            return Err(Error::DecodeFailure(
                "message polynomial degree >= k".into(),
            ));
        }
        quot.truncate(k);
        Ok(quot)
    }

    /// Reference decoder: nearest codeword by enumerating all `q^k` messages.
    /// Accepts the result only within capability, so it agrees with
    /// [`MdsCode::decode`] on every input. Limited to `q^k <= 2^24`.
    pub fn decode_exhaustive(&self, recv: &[Symbol]) -> Result<Vec<Gf>> {
        if recv.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: recv.len(),
            });
        }
        let bits = self.field.degree() as usize * self.k;
        if bits > 24 {
            return Err(Error::Infeasible(format!("q^k = 2^{bits} messages")));
        }
        let erasures = recv.iter().filter(|s| s.is_none()).count();
        let q = self.field.size();
        let mut best: Option<(usize, Vec<Gf>)> = None;
        let mut tie = false;
        let mut info = vec![Gf::ZERO; self.k];
        for idx in 0..(1u64 << bits) {
            let mut v = idx;
            for s in info.iter_mut() {
                *s = Gf(v % q);
                v /= q;
            }
            let cw = self.encode(&info)?;
            let dist = cw
                .iter()
                .zip(recv)
                .filter(|(c, r)| matches!(r, Some(r) if r != *c))
                .count();
            match &best {
                Some((d, _)) if dist > *d => {}
                Some((d, _)) if dist == *d => tie = true,
                _ => {
                    best = Some((dist, info.clone()));
                    tie = false;
                }
            }
        }
        let (dist, info) = best.expect("at least one message");
        if tie || erasures + 2 * dist > self.n - self.k {
            return Err(Error::DecodeFailure("no codeword within capability".into()));
        }
        Ok(info)
    }
}

/// Lagrange basis polynomial `l_i` over `xs`, evaluated at `x`.
fn lagrange_weight(f: &Field, xs: &[Gf], i: usize, x: Gf) -> Gf {
    let mut num = Gf::ONE;
    let mut den = Gf::ONE;
    for (j, &xj) in xs.iter().enumerate() {
        if j != i {
            num = f.mul(num, x + xj);
            den = f.mul(den, xs[i] + xj);
        }
    }
    f.div(num, den).expect("interpolation points are distinct")
}

/// Solves an augmented system (each row has `cols` coefficients and the
/// right-hand side). Free variables are set to zero. `None` if inconsistent.
fn solve_linear(f: &Field, mut rows: Vec<Vec<Gf>>, cols: usize) -> Option<Vec<Gf>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).ok()?;
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c];
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v += f.mul(factor, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Gf::ZERO; cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][cols];
    }
    Some(sol)
}

/// Polynomial long division (ascending coefficients); divisor must be
/// monic-or-invertible in its leading term.
fn poly_divmod(f: &Field, num: &[Gf], den: &[Gf]) -> Result<(Vec<Gf>, Vec<Gf>)> {
    let dd = den.len() - 1;
    let lead_inv = f.inv(den[dd])?;
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return Ok((vec![], rem));
    }
    let mut quot = vec![Gf::ZERO; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = f.mul(rem[i], lead_inv);
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i - dd + j] += f.mul(c, d);
        }
    }
    rem.truncate(dd);
    Ok((quot, rem))
}
