use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::report::{serialize_int, ScenarioReport};
use crate::arith::{is_prime, legendre_symbol, prime_power, squarefree_part, Integer};
use crate::ellcurve::{curve_from_j, within_hasse_bound, WeierstrassCurve, MAX_COUNT_FIELD};
use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::quat::EndLabel;

/// Shape of the Frobenius Weil number for each row of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PiForm {
    /// `+-p^(a/2)`, `a` even.
    #[serde(rename = "+-p^(a/2)")]
    RationalSqrtQ,
    /// `p^(a/2) zeta_4`, `a` even.
    #[serde(rename = "p^(a/2)*zeta4")]
    EvenZeta4,
    /// `+-p^(a/2) zeta_3`, `a` even.
    #[serde(rename = "+-p^(a/2)*zeta3")]
    EvenZeta3,
    /// `sqrt(q) zeta_4`, `a` odd.
    #[serde(rename = "sqrt(q)*zeta4")]
    OddZeta4,
    /// `+-sqrt(2^a) zeta_8`, `a` odd.
    #[serde(rename = "+-sqrt(q)*zeta8")]
    OddZeta8,
    /// `+-sqrt(3^a) zeta_12`, `a` odd.
    #[serde(rename = "+-sqrt(q)*zeta12")]
    OddZeta12,
}

/// A supersingular isogeny class over `F_q` and its endomorphism algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilClass {
    pub q: u64,
    pub p: u64,
    pub a: u32,
    #[serde(serialize_with = "serialize_int")]
    pub t: Integer,
    pub pi_form: PiForm,
    pub end_label: EndLabel,
}

/// Table lookup for the Frobenius trace `t` of a supersingular curve over `F_q`.
pub fn classify_weil(q: u64, t: &Integer) -> Result<WeilClass> {
    let (p, a) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    if !within_hasse_bound(q, t) {
        return Err(Error::domain(format!("t = {t} violates t^2 <= 4q for q = {q}")));
    }
    if !(t % p).is_zero() {
        return Err(Error::domain(format!("t = {t} is not divisible by p = {p}")));
    }
    let abs = t.abs();
    let quad = |d: i64| EndLabel::QuadraticField(Integer::from(d));
    let row = if a % 2 == 0 {
        let half = Integer::from(p.pow(a / 2));
        if abs == &half * 2u32 {
            Some((PiForm::RationalSqrtQ, EndLabel::FullQuaternion))
        } else if t.is_zero() && p % 4 == 3 {
            Some((PiForm::EvenZeta4, quad(-1)))
        } else if abs == half && p % 3 == 2 {
            Some((PiForm::EvenZeta3, quad(-3)))
        } else {
            None
        }
    } else if t.is_zero() {
        Some((PiForm::OddZeta4, quad(-(p as i64))))
    } else if p == 2 && abs == Integer::from(2u64.pow(a.div_ceil(2))) {
        Some((PiForm::OddZeta8, quad(-1)))
    } else if p == 3 && abs == Integer::from(3u64.pow(a.div_ceil(2))) {
        Some((PiForm::OddZeta12, quad(-3)))
    } else {
        None
    };
    let (pi_form, end_label) =
        row.ok_or_else(|| Error::NotInTable { q, t: t.try_into().expect("|t| <= 2 sqrt(q)") })?;
    Ok(WeilClass { q, p, a, t: t.clone(), pi_form, end_label })
}

/// Endomorphism algebra read off from the characteristic polynomial
/// `x^2 - t x + q` of Frobenius: `Q(sqrt(t^2 - 4q))`, or the full
/// quaternion algebra when the discriminant vanishes.
pub fn tate_label(q: u64, t: &Integer) -> Result<EndLabel> {
    let disc = t * t - Integer::from(4 * q);
    if disc.is_positive() {
        return Err(Error::domain(format!("t = {t} violates t^2 <= 4q for q = {q}")));
    }
    if disc.is_zero() {
        return Ok(EndLabel::FullQuaternion);
    }
    Ok(EndLabel::QuadraticField(squarefree_part(&disc)?))
}

/// Whether the imaginary quadratic field `Q(sqrt(d))` embeds in `B_{p,inf}`,
/// i.e. whether `p` fails to split in it.
pub fn quadratic_embeds_in_bp(d: &Integer, p: u64) -> Result<bool> {
    if !d.is_negative() {
        return Ok(false);
    }
    if p == 2 {
        return Ok(d.mod_floor(&Integer::from(8)) != Integer::from(1));
    }
    Ok(legendre_symbol(d, p)? != 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableStatus {
    Consistent,
    /// A trace the table does not list, in one of the two known gaps.
    TableEdge,
    Mismatch,
}

/// One Frobenius trace met while scanning supersingular curves over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableObservation {
    pub q: u64,
    #[serde(serialize_with = "serialize_int")]
    pub t: Integer,
    /// Field indices of `a1, a2, a3, a4, a6` of a curve with this trace.
    pub curve: [u64; 5],
    pub class: Option<WeilClass>,
    pub tate_label: EndLabel,
    pub status: TableStatus,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Representatives `g^k`, `k < gcd(n, q - 1)`, of `F_q^x / (F_q^x)^n`.
fn power_class_reps(f: &FiniteField, n: u64) -> Vec<Fq> {
    let g = f.generator();
    (0..gcd(n, f.order() - 1)).map(|k| f.pow(g, k)).collect()
}

/// Rough number of field operations [`supersingular_traces`] spends on `F_q`.
fn scan_cost(p: u64, q: u64) -> u128 {
    let q = q as u128;
    match p {
        2 => 3 * q * q * q,
        3 => 4 * q * q,
        _ => (p as u128 * p as u128 + 12) * q,
    }
}

const MAX_SCAN_COST: u128 = 400_000_000;

/// Every Frobenius trace of a supersingular curve over `field`, with one
/// witness curve per trace.
///
/// For `p > 3` each supersingular `j` in `F_q` is twisted through all its
/// forms (sextic for `j = 0`, quartic for `j = 1728`, quadratic otherwise).
/// In characteristic 2 and 3 the supersingular curves all have `j = 0` and
/// the families `y^2 + a3 y = x^3 + a4 x + a6` and `y^2 = x^3 + a4 x + a6`
/// are scanned with the leading coefficient up to scaling.
pub fn supersingular_traces(field: &Arc<FiniteField>) -> Result<BTreeMap<Integer, WeierstrassCurve>> {
    let f = &**field;
    let (p, q, a) = (f.characteristic(), f.order(), f.degree());
    if q > MAX_COUNT_FIELD || scan_cost(p, q) > MAX_SCAN_COST {
        return Err(Error::size(format!("scanning all supersingular curves over F_{q} is too expensive")));
    }
    let mut found = BTreeMap::new();
    let mut add = |curve: WeierstrassCurve| -> Result<bool> {
        let stats = curve.stats()?;
        if stats.supersingular {
            found.entry(stats.trace).or_insert(curve);
        }
        Ok(stats.supersingular)
    };
    match p {
        2 => {
            for a3 in power_class_reps(f, 3) {
                for a4 in f.elements() {
                    for a6 in f.elements() {
                        add(WeierstrassCurve::new(field.clone(), [Fq::ZERO, Fq::ZERO, a3, a4, a6])?)?;
                    }
                }
            }
        }
        3 => {
            for a4 in power_class_reps(f, 4) {
                for a6 in f.elements() {
                    add(WeierstrassCurve::short(field.clone(), a4, a6)?)?;
                }
            }
        }
        _ => {
            let j1728 = f.from_int(1728);
            let g = f.generator();
            for j in f.subfield_elements(gcd(a as u64, 2) as u32) {
                let base = curve_from_j(field, j)?;
                if !add(base.clone())? {
                    continue;
                }
                if j.is_zero() {
                    for b in power_class_reps(f, 6) {
                        add(WeierstrassCurve::short(field.clone(), Fq::ZERO, b)?)?;
                    }
                } else if j == j1728 {
                    for c in power_class_reps(f, 4) {
                        add(WeierstrassCurve::short(field.clone(), c, Fq::ZERO)?)?;
                    }
                } else {
                    add(base.quadratic_twist(g)?)?;
                }
            }
        }
    }
    Ok(found)
}

fn is_table_edge(p: u64, a: u32, q: u64, t: &Integer) -> bool {
    a % 2 == 0 && ((p == 2 && t.is_zero()) || (p == 3 && t * t == Integer::from(q)))
}

/// Scans supersingular curves over `F_{p^a}` for every prime `p <= p_max`
/// and `a <= a_max` and checks each observed trace against the table, the
/// Frobenius discriminant and the embedding criterion in `B_{p,inf}`.
pub fn verify_table(p_max: u64, a_max: u32) -> Result<ScenarioReport> {
    if p_max < 2 || a_max == 0 {
        return Err(Error::domain("verify_table needs p_max >= 2 and a_max >= 1"));
    }
    let mut report = ScenarioReport::new("table", p_max);
    report.input("p_max", p_max);
    report.input("a_max", a_max);
    let mut fields = Vec::new();
    for p in (2..=p_max).filter(|&p| is_prime(p)) {
        for a in 1..=a_max {
            let q = p
                .checked_pow(a)
                .filter(|&q| q <= MAX_COUNT_FIELD)
                .ok_or_else(|| Error::size(format!("{p}^{a} exceeds the point-counting limit {MAX_COUNT_FIELD}")))?;
            if scan_cost(p, q) > MAX_SCAN_COST {
                return Err(Error::size(format!("scanning F_{q} is too expensive")));
            }
            fields.push((p, a));
        }
    }
    for (p, a) in fields {
        let field = Arc::new(FiniteField::new(p, a)?);
        let q = field.order();
        let traces = supersingular_traces(&field)?;
        let mut consistent = !traces.is_empty();
        let mut embeds = true;
        let mut listed = Vec::new();
        for (t, curve) in traces {
            let tate = tate_label(q, &t)?;
            let (class, status) = match classify_weil(q, &t) {
                Ok(c) if c.end_label == tate => (Some(c), TableStatus::Consistent),
                Ok(c) => (Some(c), TableStatus::Mismatch),
                Err(Error::NotInTable { .. }) if is_table_edge(p, a, q, &t) => (None, TableStatus::TableEdge),
                Err(_) => (None, TableStatus::Mismatch),
            };
            if let EndLabel::QuadraticField(d) = &tate {
                embeds &= quadratic_embeds_in_bp(d, p)?;
            }
            consistent &= status != TableStatus::Mismatch;
            listed.push(match status {
                TableStatus::TableEdge => format!("{t} (outside the table)"),
                _ => t.to_string(),
            });
            report.table.push(TableObservation {
                q,
                t,
                curve: curve.coefficients().map(Fq::index),
                class,
                tate_label: tate,
                status,
            });
        }
        report.note(format!("F_{q}: supersingular traces {}", listed.join(", ")));
        report.check(format!("F_{q}: every trace classified consistently"), consistent);
        report.check(format!("F_{q}: every quadratic label embeds in B_({p},inf)"), embeds);
    }
    Ok(report.finish())
}
