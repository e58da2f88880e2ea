use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::arith::{
    int, is_prime, legendre_symbol, prime_divisors, rat_int, rational_string, split_valuation, Integer, Rational,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// The quaternion algebra `(a, b / Q)` with basis `1, i, j, k`,
/// `i^2 = a`, `j^2 = b`, `ij = -ji = k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuaternionAlgebra {
    a: Rational,
    b: Rational,
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl QuaternionAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Arc<Self>> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::domain("quaternion algebra parameters must be nonzero"));
        }
        Ok(Arc::new(QuaternionAlgebra { a, b }))
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Arc<Self>> {
        Self::new(rat_int(a), rat_int(b))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Ramified at infinity, i.e. `nrd` is positive definite.
    pub fn is_definite(&self) -> bool {
        self.a.is_negative() && self.b.is_negative()
    }

    pub fn element(self: &Arc<Self>, coeffs: [Rational; 4]) -> Quaternion {
        Quaternion { alg: Arc::clone(self), c: coeffs }
    }

    pub fn element_from_slice(self: &Arc<Self>, coeffs: &[Rational]) -> Quaternion {
        assert_eq!(coeffs.len(), 4);
        self.element([coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone(), coeffs[3].clone()])
    }

    /// Element with integer numerators over a common denominator.
    pub fn element_ints(self: &Arc<Self>, nums: [i64; 4], den: i64) -> Quaternion {
        self.element(nums.map(|n| Rational::new(int(n), int(den))))
    }

    pub fn scalar(self: &Arc<Self>, r: Rational) -> Quaternion {
        self.element([r, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn one(self: &Arc<Self>) -> Quaternion {
        self.scalar(Rational::one())
    }

    pub fn basis(self: &Arc<Self>) -> [Quaternion; 4] {
        [0, 1, 2, 3].map(|r| {
            let mut c = [0i64; 4];
            c[r] = 1;
            self.element_ints(c, 1)
        })
    }
}

/// `x0 + x1 i + x2 j + x3 k` in a fixed parent algebra.
///
/// Arithmetic between elements of different algebras panics.
#[derive(Clone)]
pub struct Quaternion {
    alg: Arc<QuaternionAlgebra>,
    c: [Rational; 4],
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut wrote = false;
        for (c, name) in self.c.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if wrote {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            let body = match (mag.is_one(), name.is_empty()) {
                (true, false) => name.to_string(),
                (_, true) => mag.to_string(),
                (false, false) => format!("{mag}{name}"),
            };
            write!(f, "{sign}{body}")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for Quaternion {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg)
    }
}

impl Eq for Quaternion {}

impl Hash for Quaternion {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

/// Lexicographic on the coordinate tuple; the deterministic ordering used
/// for unit groups and cocycle representatives.
impl Ord for Quaternion {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl PartialOrd for Quaternion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        for c in &self.c {
            seq.serialize_element(&rational_string(c))?;
        }
        seq.end()
    }
}

impl Quaternion {
    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    fn same_parent(&self, other: &Quaternion) {
        assert!(Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg, "quaternions from different algebras");
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_scalar(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_scalar() && self.c[0].is_one()
    }

    /// `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn nrd(&self) -> Rational {
        let QuaternionAlgebra { a, b } = &*self.alg;
        let [x0, x1, x2, x3] = &self.c;
        x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3
    }

    pub fn trd(&self) -> Rational {
        &self.c[0] * rat_int(2)
    }

    pub fn conjugate(&self) -> Quaternion {
        let [x0, x1, x2, x3] = &self.c;
        self.alg.element([x0.clone(), -x1, -x2, -x3])
    }

    pub fn inverse(&self) -> Result<Quaternion> {
        let n = self.nrd();
        if n.is_zero() {
            return Err(Error::domain(format!("{self} has reduced norm 0 and no inverse")));
        }
        Ok(self.conjugate().scale(&n.recip()))
    }

    pub fn scale(&self, r: &Rational) -> Quaternion {
        self.alg.element(self.c.clone().map(|x| x * r))
    }

    pub fn pow(&self, e: u32) -> Quaternion {
        (0..e).fold(self.alg.one(), |acc, _| &acc * self)
    }

    /// Multiplicative order, searching up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let one = self.alg.one();
        let mut x = self.clone();
        for n in 1..=bound {
            if x == one {
                return Some(n);
            }
            x = &x * self;
        }
        None
    }

    /// `x^2 - trd(x) x + nrd(x)`'s discriminant, `trd^2 - 4 nrd`.
    pub fn discriminant(&self) -> Rational {
        let t = self.trd();
        &t * &t - self.nrd() * rat_int(4)
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        self.same_parent(rhs);
        let mut c = self.c.clone();
        for (x, y) in c.iter_mut().zip(&rhs.c) {
            *x += y;
        }
        self.alg.element(c)
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        self + &(-rhs)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.alg.element(self.c.clone().map(|x| -x))
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: &Quaternion) -> Quaternion {
        self.same_parent(rhs);
        let QuaternionAlgebra { a, b } = &*self.alg;
        let [x0, x1, x2, x3] = &self.c;
        let [y0, y1, y2, y3] = &rhs.c;
        let ab = a * b;
        self.alg.element([
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - &ab * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Quaternion {
            type Output = Quaternion;
            fn $m(self, rhs: Quaternion) -> Quaternion {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Matrix of `x -> s x` on coordinates (columns are images of `1, i, j, k`).
pub fn left_mul_matrix(s: &Quaternion) -> Matrix {
    let cols = s.alg.basis().iter().map(|e| (s * e).c.to_vec()).collect();
    Matrix::from_columns(cols)
}

/// Matrix of `x -> x s` on coordinates.
pub fn right_mul_matrix(s: &Quaternion) -> Matrix {
    let cols = s.alg.basis().iter().map(|e| (e * s).c.to_vec()).collect();
    Matrix::from_columns(cols)
}

/// Applies a coordinate matrix to a quaternion.
pub fn apply_matrix(m: &Matrix, x: &Quaternion) -> Quaternion {
    x.alg.element_from_slice(&m.mul_vec(&x.c))
}

/// Local Hilbert symbol `(a, b)_v`: +1 iff `z^2 = a x^2 + b y^2` has a
/// nontrivial solution over `Q_v`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("Hilbert symbol of zero"));
    }
    // a and a * den^2 are in the same square class.
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    match v {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(2) => Ok(hilbert_at_two(&a, &b)),
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not a prime place")));
            }
            let pi = Integer::from(p);
            let (alpha, u) = split_valuation(&a, &pi);
            let (beta, v) = split_valuation(&b, &pi);
            let mut s: i8 = 1;
            if alpha * beta % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre_symbol(&u, p)?;
            }
            if alpha % 2 == 1 {
                s *= legendre_symbol(&v, p)?;
            }
            Ok(s)
        }
    }
}

fn hilbert_at_two(a: &Integer, b: &Integer) -> i8 {
    let two = int(2);
    let (alpha, u) = split_valuation(a, &two);
    let (beta, v) = split_valuation(b, &two);
    let m8 = |x: &Integer| x.mod_floor(&int(8)).to_u64().expect("small");
    let (u, v) = (m8(&u), m8(&v));
    let eps = |x: u64| (x - 1) / 2 % 2;
    let omega = |x: u64| (x * x - 1) / 8 % 2;
    let e = eps(u) * eps(v) + alpha as u64 * omega(v) + beta as u64 * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Places where `(a, b / Q)` ramifies, finite primes ascending, then infinity.
pub fn ramified_places(alg: &QuaternionAlgebra) -> Result<Vec<Place>> {
    let mut candidates = vec![int(2)];
    for r in [&alg.a, &alg.b] {
        candidates.extend(prime_divisors(r.numer()));
        candidates.extend(prime_divisors(r.denom()));
    }
    candidates.sort();
    candidates.dedup();
    let mut out = Vec::new();
    for p in candidates {
        let p = p.to_u64().ok_or_else(|| Error::size(format!("prime {p} does not fit a machine word")))?;
        if hilbert_symbol(&alg.a, &alg.b, Place::Prime(p))? == -1 {
            out.push(Place::Prime(p));
        }
    }
    if hilbert_symbol(&alg.a, &alg.b, Place::Infinity)? == -1 {
        out.push(Place::Infinity);
    }
    Ok(out)
}

/// Auxiliary prime for `p = 1 mod 8`: least `q = 3 mod 4` with `(p/q) = -1`.
pub(crate) fn auxiliary_prime(p: u64) -> u64 {
    (3..)
        .step_by(4)
        .find(|&q| is_prime(q) && legendre_symbol(&Integer::from(p), q) == Ok(-1))
        .expect("infinitely many such primes")
}

/// A presentation of the definite algebra ramified exactly at `{p, inf}`.
pub fn build_bp_infinity(p: u64) -> Result<Arc<QuaternionAlgebra>> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let p_i = p as i64;
    let alg = if p == 2 {
        QuaternionAlgebra::from_ints(-1, -1)?
    } else if p % 4 == 3 {
        QuaternionAlgebra::from_ints(-1, -p_i)?
    } else if p % 8 == 5 {
        QuaternionAlgebra::from_ints(-2, -p_i)?
    } else {
        QuaternionAlgebra::from_ints(-p_i, -(auxiliary_prime(p) as i64))?
    };
    let places = ramified_places(&alg)?;
    if places != [Place::Prime(p), Place::Infinity] {
        return Err(Error::internal(format!(
            "presentation ({}, {}) of B_{{{p},inf}} ramifies at {places:?}",
            alg.a, alg.b
        )));
    }
    Ok(alg)
}

/// The prime `p` when `alg` ramifies exactly at `{p, inf}`.
pub fn definite_ramified_prime(alg: &QuaternionAlgebra) -> Result<u64> {
    match ramified_places(alg)?.as_slice() {
        [Place::Prime(p), Place::Infinity] => Ok(*p),
        other => Err(Error::domain(format!(
            "algebra ({}, {}) ramifies at {other:?}, not at one prime and infinity",
            alg.a, alg.b
        ))),
    }
}
