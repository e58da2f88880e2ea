//! Weierstrass curves over small finite fields: invariants, naive point
//! counting, supersingularity and the census of supersingular `j`-invariants.

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{is_prime, rat, rational_string, Integer, Rational};
use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};

/// Largest `q` accepted by [`WeierstrassCurve::point_count`].
pub const MAX_COUNT_FIELD: u64 = 1_000_000;

/// Largest prime accepted by [`supersingular_census`].
pub const MAX_CENSUS_PRIME: u64 = 200;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: Arc<FiniteField>,
    a: [Fq; 5],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BInvariants {
    pub b2: Fq,
    pub b4: Fq,
    pub b6: Fq,
    pub b8: Fq,
}

fn serialize_int<S: Serializer>(n: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn serialize_fq<S: Serializer>(x: &Fq, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.index().to_string())
}

fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

/// Point count and Frobenius data of a curve over its field of definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveStats {
    #[serde(serialize_with = "serialize_int")]
    pub q: Integer,
    /// `#E(F_q)`, including the point at infinity.
    #[serde(serialize_with = "serialize_int")]
    pub count: Integer,
    /// `t = q + 1 - count`.
    #[serde(serialize_with = "serialize_int")]
    pub trace: Integer,
    pub supersingular: bool,
    /// Field index of the `j`-invariant.
    #[serde(serialize_with = "serialize_fq")]
    pub j: Fq,
}

impl WeierstrassCurve {
    /// Builds the curve, rejecting singular coefficient choices.
    pub fn new(field: Arc<FiniteField>, a: [Fq; 5]) -> Result<Self> {
        for &x in &a {
            field.element(x.index())?;
        }
        let curve = WeierstrassCurve { field, a };
        if curve.discriminant().is_zero() {
            return Err(Error::domain("singular curve: discriminant is zero"));
        }
        Ok(curve)
    }

    /// Curve with coefficients given as integers, read in the prime field.
    pub fn from_ints(field: Arc<FiniteField>, a: [i64; 5]) -> Result<Self> {
        let coeffs = a.map(|n| field.from_int(n));
        Self::new(field, coeffs)
    }

    /// `y^2 = x^3 + a4 x + a6`.
    pub fn short(field: Arc<FiniteField>, a4: Fq, a6: Fq) -> Result<Self> {
        Self::new(field, [Fq::ZERO, Fq::ZERO, Fq::ZERO, a4, a6])
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coefficients(&self) -> [Fq; 5] {
        self.a
    }

    pub fn b_invariants(&self) -> BInvariants {
        let f = &*self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |n| f.from_int(n);
        let b2 = f.add(f.mul(a1, a1), f.mul(k(4), a2));
        let b4 = f.add(f.mul(k(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(k(4), a6));
        // a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        let b8 = [
            f.mul(f.mul(a1, a1), a6),
            f.mul(k(4), f.mul(a2, a6)),
            f.neg(f.mul(a1, f.mul(a3, a4))),
            f.mul(a2, f.mul(a3, a3)),
            f.neg(f.mul(a4, a4)),
        ]
        .into_iter()
        .fold(Fq::ZERO, |acc, x| f.add(acc, x));
        BInvariants { b2, b4, b6, b8 }
    }

    pub fn c4(&self) -> Fq {
        let f = &*self.field;
        let BInvariants { b2, b4, .. } = self.b_invariants();
        f.sub(f.mul(b2, b2), f.mul(f.from_int(24), b4))
    }

    /// `-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`.
    pub fn discriminant(&self) -> Fq {
        let f = &*self.field;
        let BInvariants { b2, b4, b6, b8 } = self.b_invariants();
        let k = |n| f.from_int(n);
        [
            f.neg(f.mul(f.mul(b2, b2), b8)),
            f.mul(k(-8), f.pow(b4, 3)),
            f.mul(k(-27), f.mul(b6, b6)),
            f.mul(k(9), f.mul(b2, f.mul(b4, b6))),
        ]
        .into_iter()
        .fold(Fq::ZERO, |acc, x| f.add(acc, x))
    }

    /// `c4^3 / discriminant`.
    pub fn j_invariant(&self) -> Result<Fq> {
        let f = &*self.field;
        let c4 = self.c4();
        f.div(f.pow(c4, 3), self.discriminant())
    }

    /// `#E(F_q)` by enumerating `x` and solving the quadratic in `y`.
    pub fn point_count(&self) -> Result<u64> {
        let f = &*self.field;
        if f.order() > MAX_COUNT_FIELD {
            return Err(Error::size(format!("point counting over F_{} exceeds the cap {MAX_COUNT_FIELD}", f.order())));
        }
        let [a1, a2, a3, a4, a6] = self.a;
        let four = f.from_int(4);
        let mut count = 1u64;
        for x in f.elements() {
            let h = f.add(f.mul(a1, x), a3);
            // x^3 + a2 x^2 + a4 x + a6, Horner
            let r = f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6);
            if f.characteristic() == 2 {
                if h.is_zero() {
                    count += 1;
                } else {
                    // y = h z turns the equation into z^2 + z = r / h^2
                    let c = f.div(r, f.mul(h, h))?;
                    if f.absolute_trace(c) == 0 {
                        count += 2;
                    }
                }
            } else {
                let disc = f.add(f.mul(h, h), f.mul(four, r));
                count = (count as i64 + 1 + f.quadratic_character(disc) as i64) as u64;
            }
        }
        Ok(count)
    }

    pub fn stats(&self) -> Result<CurveStats> {
        let q = self.field.order();
        let count = self.point_count()?;
        let trace = q as i64 + 1 - count as i64;
        let p = self.field.characteristic() as i64;
        let stats = CurveStats {
            q: Integer::from(q),
            count: Integer::from(count),
            trace: Integer::from(trace),
            supersingular: trace % p == 0,
            j: self.j_invariant()?,
        };
        if (trace as i128).pow(2) > 4 * q as i128 {
            return Err(Error::internal(format!("Hasse bound violated: t = {trace}, q = {q}")));
        }
        Ok(stats)
    }

    /// `p | t` for the trace over the field of definition.
    pub fn is_supersingular(&self) -> Result<bool> {
        Ok(self.stats()?.supersingular)
    }

    /// The same equation over an extension; coefficients must lie in the prime field.
    pub fn base_change(&self, ext: Arc<FiniteField>) -> Result<Self> {
        if ext.characteristic() != self.field.characteristic() {
            return Err(Error::domain("base change to a field of another characteristic"));
        }
        if !self.a.iter().all(|&c| self.field.is_prime_field_element(c)) {
            return Err(Error::domain("base change supported only for prime-field coefficients"));
        }
        Self::new(ext, self.a)
    }

    /// Quadratic twist `y^2 = x^3 + d^2 a4 x + d^3 a6` of a short model.
    pub fn quadratic_twist(&self, d: Fq) -> Result<Self> {
        let f = &*self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        if !(a1.is_zero() && a2.is_zero() && a3.is_zero()) {
            return Err(Error::domain("quadratic twist implemented for short models only"));
        }
        let d2 = f.mul(d, d);
        Self::short(Arc::clone(&self.field), f.mul(d2, a4), f.mul(f.mul(d2, d), a6))
    }
}

/// Short model with the given `j`; characteristic 2 and 3 only for `j = 0`.
pub fn curve_from_j(field: &Arc<FiniteField>, j: Fq) -> Result<WeierstrassCurve> {
    let f = &**field;
    let field = Arc::clone(field);
    let curve = match f.characteristic() {
        2 | 3 if !j.is_zero() => {
            return Err(Error::domain(format!(
                "curve_from_j in characteristic {} supports only j = 0",
                f.characteristic()
            )))
        }
        // y^2 + y = x^3
        2 => WeierstrassCurve::from_ints(field, [0, 0, 1, 0, 0])?,
        // y^2 = x^3 - x
        3 => WeierstrassCurve::from_ints(field, [0, 0, 0, -1, 0])?,
        _ => {
            let (a4, a6) = short_coefficients_for_j(f, j);
            WeierstrassCurve::short(field, a4, a6)?
        }
    };
    if curve.j_invariant()? != j {
        return Err(Error::internal(format!("model for j = {j} has a different j-invariant")));
    }
    Ok(curve)
}

/// `(a4, a6)` with `y^2 = x^3 + a4 x + a6` of invariant `j`, for `p > 3`.
fn short_coefficients_for_j(f: &FiniteField, j: Fq) -> (Fq, Fq) {
    let j1728 = f.from_int(1728);
    if j.is_zero() {
        (Fq::ZERO, Fq::ONE)
    } else if j == j1728 {
        (f.from_int(-1), Fq::ZERO)
    } else {
        let k = f.sub(j1728, j);
        let jk = f.mul(j, k);
        (f.mul(f.from_int(3), jk), f.mul(f.from_int(2), f.mul(jk, k)))
    }
}

/// Models for `j != 0` in characteristic 2 and 3, used only by the census.
fn small_characteristic_model(field: &Arc<FiniteField>, j: Fq) -> Result<WeierstrassCurve> {
    let f = &**field;
    let inv = f.inv(j)?;
    let curve = match f.characteristic() {
        // y^2 + xy = x^3 + 1/j
        2 => WeierstrassCurve::new(Arc::clone(field), [Fq::ONE, Fq::ZERO, Fq::ZERO, Fq::ZERO, inv])?,
        // y^2 = x^3 + x^2 - 1/j
        3 => WeierstrassCurve::new(Arc::clone(field), [Fq::ZERO, Fq::ONE, Fq::ZERO, Fq::ZERO, f.neg(inv)])?,
        p => return Err(Error::domain(format!("characteristic {p} is not small"))),
    };
    debug_assert_eq!(curve.j_invariant()?, j);
    Ok(curve)
}

/// Order of the geometric automorphism group of a curve with invariant `j`.
pub fn aut_order_geometric(field: &FiniteField, j: Fq) -> u64 {
    let zero = j.is_zero();
    match field.characteristic() {
        2 if zero => 24,
        3 if zero => 12,
        2 | 3 => 2,
        _ if zero => 6,
        _ if j == field.from_int(1728) => 4,
        _ => 2,
    }
}

/// Trace of `Frob^n` from the trace `t1` over `F_q`: `t_n = t1 t_{n-1} - q t_{n-2}`.
pub fn trace_lift(t1: &Integer, q: u64, n: u32) -> Result<Integer> {
    let q = Integer::from(q);
    if t1 * t1 > &q * 4 {
        return Err(Error::domain(format!("trace {t1} violates the Hasse bound for q = {q}")));
    }
    if n == 0 {
        return Ok(Integer::from(2));
    }
    let (mut prev, mut cur) = (Integer::from(2), t1.clone());
    for _ in 1..n {
        let next = t1 * &cur - &q * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    #[serde(serialize_with = "serialize_fq")]
    pub j: Fq,
    /// Coefficients of `j` in the field's polynomial basis.
    pub j_coeffs: Vec<u64>,
    pub aut_order: u64,
    /// Frobenius trace over `F_{p^2}` of the census model.
    pub trace: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub p: u64,
    pub supersingular: Vec<CensusEntry>,
    /// `sum 1 / |Aut|` over the supersingular invariants.
    #[serde(serialize_with = "serialize_rational")]
    pub mass: Rational,
    /// `(p - 1) / 24`.
    #[serde(serialize_with = "serialize_rational")]
    pub expected_mass: Rational,
    pub mass_ok: bool,
}

/// Frobenius trace of `y^2 = x^3 + a4 x + a6` over odd `F_q`, given the table of cubes.
fn short_trace(f: &FiniteField, cubes: &[Fq], a4: Fq, a6: Fq) -> i64 {
    let sum: i64 =
        f.elements().zip(cubes).map(|(x, &x3)| f.quadratic_character(f.add(f.add(x3, f.mul(a4, x)), a6)) as i64).sum();
    -sum
}

/// All supersingular `j` in `F_{p^2}`, found by counting points on one
/// model per `j`, with the mass check `sum 1/|Aut| = (p - 1)/24`.
pub fn supersingular_census(p: u64) -> Result<CensusReport> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if p > MAX_CENSUS_PRIME {
        return Err(Error::size(format!("census limited to p <= {MAX_CENSUS_PRIME}")));
    }
    let field = Arc::new(FiniteField::new(p, 2)?);
    let f = &*field;
    let traces: Vec<(Fq, i64)> = if p > 3 {
        let cubes: Vec<Fq> = f.elements().map(|x| f.pow(x, 3)).collect();
        f.elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|j| {
                let (a4, a6) = short_coefficients_for_j(f, j);
                (j, short_trace(f, &cubes, a4, a6))
            })
            .collect()
    } else {
        f.elements()
            .map(|j| {
                let curve = if j.is_zero() { curve_from_j(&field, j)? } else { small_characteristic_model(&field, j)? };
                Ok((j, f.order() as i64 + 1 - curve.point_count()? as i64))
            })
            .collect::<Result<_>>()?
    };
    let supersingular: Vec<CensusEntry> = traces
        .into_iter()
        .filter(|&(_, t)| t % p as i64 == 0)
        .map(|(j, trace)| CensusEntry { j, j_coeffs: f.coeffs(j), aut_order: aut_order_geometric(f, j), trace })
        .collect();
    let mass: Rational = supersingular.iter().map(|e| Rational::new(BigInt::from(1), BigInt::from(e.aut_order))).sum();
    let expected_mass = rat(p as i64 - 1, 24);
    Ok(CensusReport { p, mass_ok: mass == expected_mass, supersingular, mass, expected_mass })
}

/// True when `t^2 <= 4q`.
pub fn within_hasse_bound(q: u64, t: &Integer) -> bool {
    t * t <= Integer::from(4 * q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, 1).unwrap())
    }

    /// Counts affine solutions of the Weierstrass equation over a prime field directly.
    fn brute_count(p: u64, a: [i64; 5]) -> u64 {
        let p = p as i64;
        let [a1, a2, a3, a4, a6] = a;
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn j_invariant_examples() {
        let f7 = fp(7);
        let e = WeierstrassCurve::from_ints(f7.clone(), [0, 0, 0, -1, 0]).unwrap();
        assert_eq!(e.j_invariant().unwrap(), f7.from_int(6));
        let e = WeierstrassCurve::from_ints(fp(5), [0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e.j_invariant().unwrap(), Fq::ZERO);
        let e = WeierstrassCurve::from_ints(fp(2), [0, 0, 1, 0, 0]).unwrap();
        assert_eq!(e.j_invariant().unwrap(), Fq::ZERO);
        assert!(WeierstrassCurve::from_ints(fp(5), [0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn point_count_examples() {
        let stats = |p, a| WeierstrassCurve::from_ints(fp(p), a).unwrap().stats().unwrap();
        let s = stats(5, [0, 0, 0, 0, 1]);
        assert_eq!((s.count.clone(), s.trace.clone()), (Integer::from(6), Integer::from(0)));
        assert!(s.supersingular);
        let s = stats(7, [0, 0, 0, -1, 0]);
        assert_eq!((s.count.clone(), s.trace.clone()), (Integer::from(8), Integer::from(0)));
        let s = stats(5, [0, 0, 0, 1, 1]);
        assert_eq!((s.count.clone(), s.trace.clone()), (Integer::from(9), Integer::from(-3)));
        assert!(!s.supersingular);
        assert!(!stats(7, [0, 0, 0, 0, 1]).supersingular);
        assert!(!stats(13, [0, 0, 0, -1, 0]).supersingular);
    }

    #[test]
    fn long_form_counts_match_brute_force() {
        for p in [2u64, 3, 5, 7, 11] {
            let mut checked = 0;
            for seed in 0..200i64 {
                let a = [seed % 3, seed / 3 % 2, seed / 6 % 3, seed / 18 % 5, seed / 90 % 7];
                let Ok(e) = WeierstrassCurve::from_ints(fp(p), a) else { continue };
                assert_eq!(e.point_count().unwrap(), brute_count(p, a), "p={p} a={a:?}");
                checked += 1;
            }
            assert!(checked > 10);
        }
    }

    #[test]
    fn size_cap() {
        let f = Arc::new(FiniteField::new(1009, 2).unwrap());
        let e = WeierstrassCurve::from_ints(f, [0, 0, 0, 1, 1]).unwrap();
        assert!(matches!(e.point_count(), Err(Error::Size(_))));
    }

    #[test]
    fn curve_from_j_examples() {
        let f7 = fp(7);
        assert_eq!(curve_from_j(&f7, f7.from_int(6)).unwrap().j_invariant().unwrap(), f7.from_int(6));
        let f13 = fp(13);
        assert!(curve_from_j(&f13, f13.from_int(5)).is_ok());
        let f25 = Arc::new(FiniteField::new(5, 2).unwrap());
        let e = curve_from_j(&f25, Fq::ZERO).unwrap();
        assert_eq!(e.coefficients(), [Fq::ZERO, Fq::ZERO, Fq::ZERO, Fq::ZERO, Fq::ONE]);
        let f4 = Arc::new(FiniteField::new(2, 2).unwrap());
        assert!(matches!(curve_from_j(&f4, Fq::ONE), Err(Error::Domain(_))));
    }

    #[test]
    fn curve_from_j_round_trips() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let f = Arc::new(FiniteField::new(p, 2).unwrap());
            for j in f.elements() {
                assert_eq!(curve_from_j(&f, j).unwrap().j_invariant().unwrap(), j);
            }
        }
    }

    #[test]
    fn aut_orders() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(aut_order_geometric(&f4, Fq::ZERO), 24);
        let f49 = FiniteField::new(7, 2).unwrap();
        assert_eq!(aut_order_geometric(&f49, f49.from_int(6)), 4);
        let f169 = FiniteField::new(13, 2).unwrap();
        assert_eq!(aut_order_geometric(&f169, f169.from_int(5)), 2);
        assert_eq!(aut_order_geometric(&f169, Fq::ZERO), 6);
    }

    #[test]
    fn trace_lift_examples() {
        assert_eq!(trace_lift(&Integer::from(0), 5, 2).unwrap(), Integer::from(-10));
        assert_eq!(trace_lift(&Integer::from(3), 7, 1).unwrap(), Integer::from(3));
        assert_eq!(trace_lift(&Integer::from(2), 2, 2).unwrap(), Integer::from(0));
        assert!(trace_lift(&Integer::from(5), 5, 2).is_err());
    }

    #[test]
    fn census_examples() {
        let c = supersingular_census(13).unwrap();
        let f = FiniteField::new(13, 2).unwrap();
        assert_eq!(c.supersingular.iter().map(|e| e.j).collect::<Vec<_>>(), vec![f.from_int(5)]);
        assert_eq!(c.mass, rat(1, 2));
        assert!(c.mass_ok);

        let c = supersingular_census(11).unwrap();
        let f = FiniteField::new(11, 2).unwrap();
        let got: Vec<_> = c.supersingular.iter().map(|e| (e.j, e.aut_order)).collect();
        assert_eq!(got, vec![(Fq::ZERO, 6), (f.from_int(1), 4)]);
        assert_eq!(c.mass, rat(5, 12));

        let c = supersingular_census(2).unwrap();
        assert_eq!(c.supersingular.len(), 1);
        assert_eq!(c.mass, rat(1, 24));
        assert!(supersingular_census(3).unwrap().mass_ok);
        assert!(matches!(supersingular_census(211), Err(Error::Size(_))));
        assert!(matches!(supersingular_census(15), Err(Error::Domain(_))));
    }

    #[test]
    fn fast_census_trace_matches_point_count() {
        let field = Arc::new(FiniteField::new(7, 2).unwrap());
        let f = &*field;
        let cubes: Vec<Fq> = f.elements().map(|x| f.pow(x, 3)).collect();
        for j in f.elements() {
            let (a4, a6) = short_coefficients_for_j(f, j);
            let e = WeierstrassCurve::short(field.clone(), a4, a6).unwrap();
            assert_eq!(short_trace(f, &cubes, a4, a6), 50 - e.point_count().unwrap() as i64);
        }
    }

    #[test]
    fn supersingularity_is_twist_invariant() {
        for p in [5u64, 7, 11, 13] {
            let field = Arc::new(FiniteField::new(p, 2).unwrap());
            let nonsquare = field.elements().find(|&d| field.quadratic_character(d) == -1).unwrap();
            for j in field.elements() {
                let e = curve_from_j(&field, j).unwrap();
                let twist = e.quadratic_twist(nonsquare).unwrap();
                assert_eq!(e.is_supersingular().unwrap(), twist.is_supersingular().unwrap());
            }
        }
    }
}
