//! Arithmetic in GF(2^m), 1 <= m <= 63, in polynomial basis.
//!
//! Elements are `m`-bit polynomials over GF(2). Multiplication is
//! carry-less shift-and-reduce; fields with `m <= 16` also carry log/antilog
//! tables, which give identical results.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 63;
const TABLE_MAX_DEGREE: u32 = 16;

/// A field element: polynomial of degree < m, bit i = coefficient of x^i.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf(pub u64);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({:#x})", self.0)
    }
}

impl std::ops::Add for Gf {
    type Output = Gf;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Gf {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

#[derive(Clone)]
struct Tables {
    exp: Vec<u64>, // length 2 * (q - 1)
    log: Vec<u32>,
}

/// Parameters of GF(2^m): degree and irreducible modulus (with the x^m term).
#[derive(Clone)]
pub struct Field {
    m: u32,
    modulus: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// GF(2^m) with the lexicographically least irreducible modulus.
    pub fn new(m: u32) -> Result<Self> {
        check_degree(m)?;
        Field::with_modulus(m, least_irreducible(m))
    }

    /// GF(2^m) with an explicit modulus, which must have degree `m` and be
    /// irreducible.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        check_degree(m)?;
        if 63 - modulus.leading_zeros() != m {
            return Err(Error::InvalidParameters(format!(
                "modulus {modulus:#x} does not have degree {m}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::InvalidParameters(format!(
                "modulus {modulus:#x} is reducible"
            )));
        }
        let mut field = Field {
            m,
            modulus,
            tables: None,
        };
        if m <= TABLE_MAX_DEGREE {
            field.tables = field.build_tables();
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> u64 {
        1u64 << self.m
    }

    /// The element with integer representation `v`; panics if `v >= 2^m`.
    pub fn elem(&self, v: u64) -> Gf {
        assert!(v < self.size(), "{v} is not an element of GF(2^{})", self.m);
        Gf(v)
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        a + b
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let idx = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                Gf(t.exp[idx])
            }
            None => Gf(self.mul_slow(a.0, b.0)),
        }
    }

    /// Shift-and-reduce product, independent of the tables.
    pub fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let mut prod: u128 = 0;
        let mut x = a as u128;
        let mut y = b;
        while y != 0 {
            if y & 1 == 1 {
                prod ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        reduce(prod, self.modulus, self.m)
    }

    pub fn square(&self, a: Gf) -> Gf {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Gf, mut e: u64) -> Gf {
        let mut base = a;
        let mut acc = Gf::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            let order = (self.size() - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return Ok(Gf(t.exp[(order - l) % order]));
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Gf) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let group = self.size() - 1;
        let mut order = group;
        for p in prime_factors(group) {
            while order.is_multiple_of(p) && self.pow(a, order / p) == Gf::ONE {
                order /= p;
            }
        }
        Some(order)
    }

    /// Smallest element (by value) generating the multiplicative group.
    /// Only attempted for `m <= 32`, where the group order is easy to factor.
    pub fn generator(&self) -> Option<Gf> {
        if self.m > 32 {
            return None;
        }
        let group = self.size() - 1;
        (1..self.size())
            .map(Gf)
            .find(|&g| self.order(g) == Some(group))
    }

    fn build_tables(&self) -> Option<Tables> {
        let g = self.generator()?;
        let order = (self.size() - 1) as usize;
        let mut exp = vec![0u64; 2 * order];
        let mut log = vec![0u32; self.size() as usize];
        let mut x = 1u64;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g.0);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Some(Tables { exp, log })
    }

    /// Evaluates a polynomial with coefficients in ascending degree order.
    pub fn eval_poly(&self, coeffs: &[Gf], x: Gf) -> Gf {
        coeffs
            .iter()
            .rev()
            .fold(Gf::ZERO, |acc, &c| self.mul(acc, x) + c)
    }
}

fn check_degree(m: u32) -> Result<()> {
    if m == 0 || m > MAX_DEGREE {
        return Err(Error::InvalidParameters(format!(
            "field degree must be in 1..={MAX_DEGREE}, got {m}"
        )));
    }
    Ok(())
}

fn reduce(mut prod: u128, modulus: u64, m: u32) -> u64 {
    let modulus = modulus as u128;
    let mut top = 127 - prod.leading_zeros().min(127) as i64;
    while prod != 0 && top >= m as i64 {
        if (prod >> top) & 1 == 1 {
            prod ^= modulus << (top as u32 - m);
        }
        top -= 1;
    }
    prod as u64
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of binary polynomial division.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over GF(2): trial division by every polynomial of degree
/// up to m/2 when m <= 16, Ben-Or's gcd test otherwise.
pub fn is_irreducible(f: u64) -> bool {
    let m = poly_degree(f);
    if m <= 0 {
        return false;
    }
    if m as u32 <= TABLE_MAX_DEGREE {
        is_irreducible_trial(f)
    } else {
        is_irreducible_ben_or(f)
    }
}

pub fn is_irreducible_trial(f: u64) -> bool {
    let m = poly_degree(f);
    if m <= 0 {
        return false;
    }
    for d in 1..=(m / 2) {
        for low in 0..(1u64 << d) {
            let g = (1u64 << d) | low;
            if poly_rem(f, g) == 0 {
                return false;
            }
        }
    }
    true
}

pub fn is_irreducible_ben_or(f: u64) -> bool {
    let m = poly_degree(f) as u32;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    // x^(2^i) mod f by repeated squaring in GF(2)[x]/(f)
    let sq = |a: u64| -> u64 {
        let mut prod: u128 = 0;
        let mut x = a as u128;
        let mut y = a;
        while y != 0 {
            if y & 1 == 1 {
                prod ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        reduce(prod, f, m)
    };
    let mut r = 2u64; // x
    for _ in 1..=(m / 2) {
        r = sq(r);
        if poly_gcd(f, r ^ 2) != 1 {
            return false;
        }
    }
    true
}

/// The numerically least irreducible polynomial of degree `m`.
pub fn least_irreducible(m: u32) -> u64 {
    let top = 1u64 << m;
    (0..top)
        .map(|low| top | low)
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
