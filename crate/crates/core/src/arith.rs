//! Exact scalars and elementary number theory on them.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer. Canonical by construction.
pub type Integer = BigInt;

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

/// Renders as `num/den`, the canonical text form used in every output.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::domain(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of a nonzero integer, by trial division.
///
/// Only meant for the small numerators and denominators that appear in
/// quaternion algebra parameters.
pub fn prime_divisors(n: &Integer) -> Vec<Integer> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = int(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            while (&n % &d).is_zero() {
                n /= &d;
            }
            out.push(d.clone());
        }
        d += 1;
    }
    if n > Integer::one() {
        out.push(n);
    }
    out
}

/// Splits a nonzero integer as `p^v * u` with `p ∤ u`.
pub fn split_valuation(n: &Integer, p: &Integer) -> (u32, Integer) {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut u = n.clone();
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(n/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre_symbol(n: &Integer, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let r = n.mod_floor(&Integer::from(p)).to_u64().expect("reduced below p");
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// The squarefree `d` with `n = d * m^2`, keeping the sign of `n`.
pub fn squarefree_part(n: &Integer) -> Result<Integer> {
    if n.is_zero() {
        return Err(Error::domain("squarefree part of zero"));
    }
    let mut rest = n.abs();
    let mut d = Integer::one();
    let mut f = int(2);
    while &f * &f <= rest {
        let mut e = 0u32;
        while (&rest % &f).is_zero() {
            rest /= &f;
            e += 1;
        }
        if e % 2 == 1 {
            d *= &f;
        }
        f += 1;
    }
    d *= rest;
    Ok(if n.is_negative() { -d } else { d })
}

/// Squarefree representative of the square class of a nonzero rational.
pub fn squarefree_part_rational(r: &Rational) -> Result<Integer> {
    squarefree_part(&(r.numer() * r.denom()))
}

/// `floor(sqrt(r))` for a nonnegative rational.
pub fn floor_sqrt(r: &Rational) -> Integer {
    assert!(!r.is_negative());
    r.floor().to_integer().sqrt()
}

/// Writes `q = p^a` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factor_u64(q).as_slice() {
        [(p, a)] => Some((*p, *a)),
        _ => None,
    }
}

pub fn is_square_integer(n: &Integer) -> bool {
    !n.is_negative() && {
        let s = n.sqrt();
        &s * &s == *n
    }
}

pub fn is_square_rational(r: &Rational) -> bool {
    is_square_integer(r.numer()) && is_square_integer(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_legendre(n: i64, p: u64) -> i8 {
        let r = n.rem_euclid(p as i64) as u64;
        if r == 0 {
            0
        } else if (0..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(&int(1), 7).unwrap(), 1);
        assert_eq!(legendre_symbol(&int(0), 7).unwrap(), 0);
        assert_eq!(legendre_symbol(&int(3), 7).unwrap(), -1);
        assert!(legendre_symbol(&int(3), 2).is_err());
        assert!(legendre_symbol(&int(3), 9).is_err());
    }

    #[test]
    fn legendre_matches_square_search() {
        for p in (3..100).filter(|&p| is_prime(p)) {
            for n in -3..p as i64 {
                assert_eq!(legendre_symbol(&int(n), p).unwrap(), brute_legendre(n, p), "({n}/{p})");
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&int(-4)).unwrap(), int(-1));
        assert_eq!(squarefree_part(&int(-12)).unwrap(), int(-3));
        assert_eq!(squarefree_part(&int(-52)).unwrap(), int(-13));
        assert_eq!(squarefree_part(&int(72)).unwrap(), int(2));
        assert!(squarefree_part(&int(0)).is_err());
        assert_eq!(squarefree_part_rational(&rat(-3, 4)).unwrap(), int(-3));
        assert_eq!(squarefree_part_rational(&rat(-1, 3)).unwrap(), int(-3));
    }

    #[test]
    fn primes_and_powers() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_divisors(&int(-90)), vec![int(2), int(3), int(5)]);
    }

    #[test]
    fn rational_text() {
        assert_eq!(rational_string(&rat(6, -4)), "-3/2");
        assert_eq!(parse_rational(" -3/6 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("5").unwrap(), rat_int(5));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(floor_sqrt(&rat(17, 2)), int(2));
    }
}
