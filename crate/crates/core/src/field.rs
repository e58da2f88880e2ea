//! Small finite fields `F_{p^a}`.
//!
//! An element is stored as its index `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`,
//! where `c_0 + c_1 x + ... + c_{a-1} x^{a-1}` is its canonical residue modulo
//! the field's modulus. The modulus is the smallest monic irreducible
//! polynomial of degree `a` when its lower coefficients are read as such an
//! index, which makes every field (and every output built on one)
//! reproducible.

use std::fmt;

use crate::arith::factor_u64;
use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Upper bound on `p^a` for any constructed field.
pub const MAX_FIELD_ORDER: u64 = 10_000_000;

/// Largest field that gets discrete-log tables.
const TABLE_LIMIT: u64 = 1 << 20;

const MAX_DEGREE: u32 = 8;

/// Element of some [`FiniteField`], identified by its index.
///
/// Elements carry no reference to their field; mixing fields is a logic
/// error that the field methods catch with debug assertions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(u64);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
struct LogTables {
    /// `exp[k] = g^k` for `k < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, or `NO_LOG` when `1 + g^d = 0`.
    zech: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    degree: u32,
    order: u64,
    /// `c_0, ..., c_{a-1}, 1`.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// Builds `F_{p^a}` with the deterministic modulus described in the module docs.
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::domain(format!("extension degree {degree} outside 1..={MAX_DEGREE}")));
        }
        let order = p
            .checked_pow(degree)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::size(format!("{p}^{degree} exceeds the field size cap {MAX_FIELD_ORDER}")))?;
        let a = degree as usize;
        let modulus = (0..p.pow(degree))
            .map(|n| {
                let mut f = digits(n, p, a);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .ok_or_else(|| Error::internal(format!("no irreducible of degree {a} over F_{p}")))?;
        Self::with_modulus(p, modulus, order)
    }

    fn with_modulus(p: u64, modulus: Vec<u64>, order: u64) -> Result<Self> {
        let degree = (modulus.len() - 1) as u32;
        let mut field = FiniteField { p, degree, order, modulus, tables: None };
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables()?);
        }
        Ok(field)
    }

    fn build_tables(&self) -> Result<LogTables> {
        let q = self.order;
        let g = self
            .elements()
            .skip(1)
            .find(|&x| self.order_slow(x) == q - 1)
            .ok_or_else(|| Error::internal("multiplicative group has no generator"))?;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; q as usize];
        let mut x = Fq::ONE;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x.0 as u32;
            log[x.0 as usize] = k as u32;
            x = self.mul_poly(x, g);
        }
        let zech = (0..n)
            .map(|d| {
                let s = self.add_digits(Fq::ONE, Fq(exp[d] as u64));
                if s.is_zero() {
                    NO_LOG
                } else {
                    log[s.0 as usize]
                }
            })
            .collect();
        Ok(LogTables { exp, log, zech })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `q = p^a`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients `c_0, ..., c_a` of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.order).map(Fq)
    }

    pub fn element(&self, index: u64) -> Result<Fq> {
        if index < self.order {
            Ok(Fq(index))
        } else {
            Err(Error::domain(format!("index {index} is not below q = {}", self.order)))
        }
    }

    /// Image of an integer under `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq> {
        if coeffs.len() > self.degree as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::domain(format!("{coeffs:?} is not a reduced coefficient vector")));
        }
        Ok(Fq(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)))
    }

    /// Canonical coefficient vector of length `a`.
    pub fn coeffs(&self, x: Fq) -> Vec<u64> {
        digits(x.0, self.p, self.degree as usize)
    }

    /// True when `x` lies in the prime field.
    pub fn is_prime_field_element(&self, x: Fq) -> bool {
        x.0 < self.p
    }

    #[inline]
    fn check(&self, x: Fq) {
        debug_assert!(x.0 < self.order, "element {} not in F_{}", x.0, self.order);
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        self.check(x);
        self.check(y);
        if self.degree == 1 {
            let s = x.0 + y.0;
            return Fq(if s >= self.p { s - self.p } else { s });
        }
        match &self.tables {
            Some(t) => {
                if x.is_zero() {
                    return y;
                }
                if y.is_zero() {
                    return x;
                }
                let n = t.exp.len() as u32;
                let lx = t.log[x.0 as usize];
                let ly = t.log[y.0 as usize];
                let d = if ly >= lx { ly - lx } else { ly + n - lx };
                let z = t.zech[d as usize];
                if z == NO_LOG {
                    return Fq::ZERO;
                }
                let e = lx + z;
                Fq(t.exp[(if e >= n { e - n } else { e }) as usize] as u64)
            }
            None => self.add_digits(x, y),
        }
    }

    fn add_digits(&self, x: Fq, y: Fq) -> Fq {
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        Fq(out)
    }

    pub fn neg(&self, x: Fq) -> Fq {
        self.check(x);
        if self.degree == 1 {
            return Fq(if x.0 == 0 { 0 } else { self.p - x.0 });
        }
        let c: Vec<u64> = self.coeffs(x).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.from_coeffs(&c).expect("reduced")
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        self.check(x);
        self.check(y);
        if x.is_zero() || y.is_zero() {
            return Fq::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u32;
                let e = t.log[x.0 as usize] + t.log[y.0 as usize];
                Fq(t.exp[(if e >= n { e - n } else { e }) as usize] as u64)
            }
            None => self.mul_poly(x, y),
        }
    }

    fn mul_poly(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p as u128;
        let a = self.degree as usize;
        let xs = self.coeffs(x);
        let ys = self.coeffs(y);
        let mut prod = vec![0u128; 2 * a - 1];
        for (i, &xi) in xs.iter().enumerate() {
            for (j, &yj) in ys.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u128 * yj as u128) % p;
            }
        }
        for top in (a..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (k, &m) in self.modulus[..a].iter().enumerate() {
                let idx = top - a + k;
                prod[idx] = (prod[idx] + (p - c) * m as u128) % p;
            }
            prod[top] = 0;
        }
        let c: Vec<u64> = prod[..a].iter().map(|&c| c as u64).collect();
        self.from_coeffs(&c).expect("reduced")
    }

    pub fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut base = x;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fq) -> Result<Fq> {
        if x.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u32;
                let l = t.log[x.0 as usize];
                Fq(t.exp[((n - l) % n) as usize] as u64)
            }
            None => self.pow(x, self.order - 2),
        })
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Quadratic character for odd `q`: 0, 1 or -1.
    #[inline]
    pub fn quadratic_character(&self, x: Fq) -> i8 {
        debug_assert!(self.p != 2);
        if x.is_zero() {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                if t.log[x.0 as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if self.pow(x, (self.order - 1) / 2) == Fq::ONE {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Absolute trace `F_q -> F_p`, returned as an integer below `p`.
    pub fn absolute_trace(&self, x: Fq) -> u64 {
        let mut acc = Fq::ZERO;
        let mut y = x;
        for _ in 0..self.degree {
            acc = self.add(acc, y);
            y = self.pow(y, self.p);
        }
        debug_assert!(self.is_prime_field_element(acc));
        acc.0
    }

    /// Least `n >= 1` with `x^n = 1`.
    pub fn element_order(&self, x: Fq) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::domain("zero has no multiplicative order"));
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u64;
                n / gcd(n, t.log[x.0 as usize] as u64)
            }
            None => self.order_slow(x),
        })
    }

    fn order_slow(&self, x: Fq) -> u64 {
        let mut n = self.order - 1;
        for (prime, _) in factor_u64(n) {
            while n % prime == 0 && self.pow_poly(x, n / prime) == Fq::ONE {
                n /= prime;
            }
        }
        n
    }

    fn pow_poly(&self, x: Fq, mut e: u64) -> Fq {
        let mut base = x;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> Fq {
        match &self.tables {
            Some(t) => Fq(t.exp[1 % t.exp.len()] as u64),
            None => self.elements().skip(1).find(|&x| self.order_slow(x) == self.order - 1).expect("F_q^x is cyclic"),
        }
    }

    /// Elements fixed by `x -> x^(p^d)`, i.e. the subfield `F_{p^d}` when `d | a`.
    pub fn subfield_elements(&self, d: u32) -> Vec<Fq> {
        let e = self.p.pow(d);
        self.elements().filter(|&x| self.pow(x, e) == x).collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Remainder of `f` modulo the monic `g`, coefficients low to high.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (k, &gk) in g.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - c) * gk % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree at most `deg f / 2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let a = f.len() - 1;
    if a == 1 {
        return true;
    }
    // roots
    let has_root = (0..p).any(|r| f.iter().rev().fold(0u64, |acc, &c| (acc * r + c) % p) == 0);
    if has_root {
        return false;
    }
    for d in 2..=a / 2 {
        for n in 0..p.pow(d as u32) {
            let mut g = digits(n, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
