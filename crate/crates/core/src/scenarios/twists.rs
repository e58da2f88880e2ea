use std::collections::BTreeSet;
use std::sync::Arc;

use crate::arith::{int, is_prime, Integer};
use crate::cohomology::{
    build_dihedral_action, build_dihedral_cocycle, build_trivial_action, enumerate_h1, enumerate_z1,
    extend_from_generators, orbit, trivial_action_on, twisted_fixed_algebra, twisted_fixed_algebra_over,
    twisted_fixed_algebra_within, Cocycle, FiniteGroup, GaloisAction, GroupKind,
};
use crate::ellcurve::{supersingular_census, WeierstrassCurve, MAX_CENSUS_PRIME};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::quat::{build_bp_infinity, maximal_order, EndLabel, Quaternion, QuaternionAlgebra};

use super::report::{ScenarioReport, TwistClassReport};
use super::weil::classify_weil;

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{p} is not prime")))
    }
}

/// Largest multiplicative order among the units in `image`.
fn image_exponent(action: &GaloisAction, image: &BTreeSet<usize>) -> u64 {
    image.iter().map(|&u| action.unit(u).multiplicative_order(24).expect("finite unit")).max().unwrap_or(1)
}

fn quadratic(d: i64) -> EndLabel {
    EndLabel::QuadraticField(int(d))
}

/// Trivial action of `C_m` (`m = 3` for `p = 2`, else `m = 2`) on the unit
/// group of a maximal order: `H^1` must contain a nontrivial class, and the
/// twists by `omega` (for `p = 2`) and by `-1` (for odd `p`) have the
/// expected endomorphism algebras.
pub fn scenario_counterexample(p: u64) -> Result<ScenarioReport> {
    require_prime(p)?;
    let m = if p == 2 { 3 } else { 2 };
    let order = maximal_order(p)?;
    let action = build_trivial_action(FiniteGroup::new(GroupKind::Cyclic(m))?, &order)?;
    let mut report = ScenarioReport::new("counterexample", p);
    report.input("m", m);
    report.input("group", format!("C{m}"));
    report.input("action", "trivial");
    report.input("units", action.units().len());
    let classes = enumerate_h1(&action)?;
    report.note(format!(
        "C{m} acting trivially on {} units has {} cohomology classes",
        action.units().len(),
        classes.len()
    ));
    report.check("H^1 has a nontrivial class", classes.len() >= 2);
    let mut special = Vec::new();
    for class in &classes {
        let fixed = twisted_fixed_algebra(&action, &class.representative)?;
        let exponent = image_exponent(&action, &class.representative.image());
        if (p == 2 && exponent == 3) || (p != 2 && exponent == 2) {
            special.push(fixed.label.clone());
        }
        report.classes.push(TwistClassReport::new(&action, &class.representative, class.orbit_size, fixed));
    }
    if p == 2 {
        report.check(
            "twists by omega have End^0 = Q(sqrt(-3))",
            !special.is_empty() && special.iter().all(|l| *l == quadratic(-3)),
        );
    } else {
        report.check("twist by -1 has End^0 = B_(p,inf)", special.len() == 1 && special[0] == EndLabel::FullQuaternion);
    }
    Ok(report.finish())
}

/// First cocycle (in generator-tuple order) for the trivial action whose
/// image has as many elements as the group, i.e. an injective one.
fn injective_cocycle(action: &GaloisAction) -> Option<Cocycle> {
    let n = action.units().len();
    let gens = action.group().generators().len();
    let order = action.group().order();
    let mut tuple = vec![0usize; gens];
    loop {
        if let Some(xi) = extend_from_generators(action, &tuple) {
            if xi.image().len() == order {
                return Some(xi);
            }
        }
        let pos = (0..gens).rev().find(|&i| tuple[i] + 1 < n)?;
        tuple[pos] += 1;
        tuple[pos + 1..].iter_mut().for_each(|x| *x = 0);
    }
}

/// A twist with `End^0 = Q` for `p` not congruent to 1 mod 12.
///
/// * `p = 2`: an injective cocycle from `Q_8` into the 24 Hurwitz units.
/// * `p = 3`: an injective cocycle from the dicyclic group of order 12 onto
///   the full unit group.
/// * `p > 3`: the dihedral action with every valid `m` in `{4, 6}` and
///   every `alpha` in `C_m`.
pub fn scenario_end_q(p: u64) -> Result<ScenarioReport> {
    require_prime(p)?;
    if p % 12 == 1 {
        return Err(Error::domain(format!("p = {p} is 1 mod 12: every twist then has End^0 of degree 2 or 4")));
    }
    let mut report = ScenarioReport::new("endq", p);
    if p <= 3 {
        let order = maximal_order(p)?;
        let units = order.unit_group()?;
        let n = if p == 2 { 2 } else { 3 };
        let group = FiniteGroup::new(GroupKind::Dicyclic(n))?;
        let kind = group.kind();
        let action = trivial_action_on(group, order.algebra(), units)?;
        report.input("group", kind);
        report.input("action", "trivial");
        report.input("units", action.units().len());
        let xi =
            injective_cocycle(&action).ok_or_else(|| Error::internal(format!("no injective cocycle from {kind}")))?;
        let image: Vec<&Quaternion> = xi.image().iter().map(|&u| action.unit(u)).collect();
        if p == 2 {
            let q8: Vec<&Quaternion> =
                action.units().iter().filter(|u| matches!(u.multiplicative_order(4), Some(1 | 2 | 4))).collect();
            report.check("image is the quaternion group of order 8", image == q8);
        } else {
            report.check("image is the whole unit group", image.len() == action.units().len());
        }
        let fixed = twisted_fixed_algebra(&action, &xi)?;
        report.note(format!("cocycle image of order {}; End^0 = {}", image.len(), fixed.label));
        report.check("End^0 = Q", fixed.label == EndLabel::RationalsOnly);
        let orbit_size = orbit(&action, &xi).len();
        report.classes.push(TwistClassReport::new(&action, &xi, orbit_size, fixed));
        return Ok(report.finish());
    }
    let ms: Vec<u32> = [4, 6].into_iter().filter(|&m| (m == 4 && p % 4 == 3) || (m == 6 && p % 3 == 2)).collect();
    report.input("m", ms.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    report.input("action", "dihedral");
    for m in ms {
        let d = build_dihedral_action(p, m)?;
        let action = &d.action;
        let all: Vec<usize> = (0..action.group().order()).collect();
        let mut rationals = true;
        let mut generators_suffice = true;
        for alpha in action.units() {
            let xi = build_dihedral_cocycle(&d, alpha)?;
            let fixed = twisted_fixed_algebra(action, &xi)?;
            generators_suffice &= twisted_fixed_algebra_over(action, &xi, &all)? == fixed;
            rationals &= fixed.label == EndLabel::RationalsOnly;
            report.note(format!("D{} with alpha = {alpha}: End^0 = {}", 2 * m, fixed.label));
            let orbit_size = orbit(action, &xi).len();
            report.classes.push(TwistClassReport::new(action, &xi, orbit_size, fixed));
        }
        report.check(format!("m = {m}: End^0 = Q for every alpha"), rationals);
        report.check(format!("m = {m}: generator conditions cut out the full fixed algebra"), generators_suffice);
    }
    Ok(report.finish())
}

/// The cyclic unit group of order `o` in a presentation of `B_{p,inf}`:
/// `{+-1}`, `<i>` in `(-1,-p)` or `<(1+i)/2>` in `(-3,-p)`.
fn cyclic_units(p: u64, o: u64) -> Result<(Arc<QuaternionAlgebra>, Vec<Quaternion>)> {
    match o {
        2 => {
            let alg = build_bp_infinity(p)?;
            let one = alg.one();
            Ok((alg.clone(), vec![-&one, one]))
        }
        4 | 6 => {
            let d = build_dihedral_action(p, o as u32)?;
            Ok((d.action.algebra().clone(), d.action.units().to_vec()))
        }
        _ => Err(Error::domain(format!("no cyclic unit group of order {o} for p = {p}"))),
    }
}

/// Every cocycle of a trivial cyclic action (`C_n`, `n <= 12`) on each unit
/// group of order 2, 4 or 6 that occurs among supersingular curves over
/// `F_{p^2}` has a twisted fixed algebra of dimension 2 or 4.
pub fn scenario_cyclic_galois(p: u64) -> Result<ScenarioReport> {
    require_prime(p)?;
    if p <= 3 {
        return Err(Error::domain(format!("this scenario needs p > 3, got {p}")));
    }
    if p > MAX_CENSUS_PRIME {
        return Err(Error::size(format!("census limited to p <= {MAX_CENSUS_PRIME}")));
    }
    let census = supersingular_census(p)?;
    let orders: BTreeSet<u64> = census.supersingular.iter().map(|e| e.aut_order).collect();
    let mut report = ScenarioReport::new("cyclic-galois", p);
    report.input("unit_group_orders", orders.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    report.input("groups", "C1..C12");
    report.input("action", "trivial");
    report.check("census mass is (p-1)/24", census.mass_ok);
    report.check("unit group orders lie in {2, 4, 6}", orders.iter().all(|o| [2, 4, 6].contains(o)));
    for &o in &orders {
        let (alg, units) = cyclic_units(p, o)?;
        let mut never_q = true;
        let mut labels_match = true;
        let mut count = 0usize;
        for n in 1..=12 {
            let action = trivial_action_on(FiniteGroup::new(GroupKind::Cyclic(n))?, &alg, units.clone())?;
            for xi in enumerate_z1(&action)? {
                let fixed = twisted_fixed_algebra(&action, &xi)?;
                let expected = match image_exponent(&action, &xi.image()) {
                    1 | 2 => EndLabel::FullQuaternion,
                    4 => quadratic(-1),
                    _ => quadratic(-3),
                };
                never_q &= fixed.label != EndLabel::RationalsOnly;
                labels_match &= fixed.label == expected;
                count += 1;
                report.classes.push(TwistClassReport::new(&action, &xi, 1, fixed));
            }
        }
        report.note(format!("G = C{o}: {count} cocycles over C1..C12"));
        report.check(format!("G = C{o}: no twist has End^0 = Q"), never_q);
        report.check(
            format!("G = C{o}: End^0 is B_(p,inf) exactly for images in {{+-1}}, else Q(sqrt(-1)) or Q(sqrt(-3))"),
            labels_match,
        );
    }
    Ok(report.finish())
}

/// For `p = 1 mod 12` only `+-1` are automorphisms, and a curve over `F_p`
/// with trace 0 has `End^0 = Q(sqrt(-p))`; the `{+-1}`-valued twists leave
/// that field fixed.
pub fn scenario_sign_units(p: u64) -> Result<ScenarioReport> {
    require_prime(p)?;
    if p % 12 != 1 {
        return Err(Error::domain(format!("this scenario needs p = 1 mod 12, got {p}")));
    }
    if p > MAX_CENSUS_PRIME {
        return Err(Error::size(format!("census limited to p <= {MAX_CENSUS_PRIME}")));
    }
    let mut report = ScenarioReport::new("sign-units", p);
    report.input("group", "C2");
    report.input("action", "trivial");

    let census = supersingular_census(p)?;
    let f2 = FiniteField::new(p, 2)?;
    let special = [f2.from_int(0), f2.from_int(1728)];
    report.check(
        "census: j = 0 and j = 1728 are not supersingular",
        census.supersingular.iter().all(|e| !special.contains(&e.j)),
    );
    let fp = Arc::new(FiniteField::new(p, 1)?);
    let ordinary = [[0, 0, 0, 0, 1], [0, 0, 0, -1, 0]]
        .into_iter()
        .map(|a| WeierstrassCurve::from_ints(fp.clone(), a)?.stats())
        .collect::<Result<Vec<_>>>()?;
    report
        .check("point counts: y^2 = x^3 + 1 and y^2 = x^3 - x are ordinary", ordinary.iter().all(|s| !s.supersingular));

    let mut witness = None;
    'search: for a4 in fp.elements() {
        for a6 in fp.elements() {
            if let Ok(curve) = WeierstrassCurve::short(fp.clone(), a4, a6) {
                if curve.stats()?.trace == Integer::from(0) {
                    witness = Some(curve);
                    break 'search;
                }
            }
        }
    }
    report.check("a curve over F_p with trace 0 exists", witness.is_some());
    if let Some(curve) = &witness {
        let [_, _, _, a4, a6] = curve.coefficients();
        report.input("curve", format!("y^2 = x^3 + {}x + {}", a4.index(), a6.index()));
        report.note(format!("y^2 = x^3 + {}x + {} over F_{p} has trace 0", a4.index(), a6.index()));
    }
    let class = classify_weil(p, &Integer::from(0))?;
    let target = quadratic(-(p as i64));
    report.check("table label for (p, 0) is Q(sqrt(-p))", class.end_label == target);

    let alg = build_bp_infinity(p)?;
    let minus_p = alg.scalar(crate::arith::rat_int(-(p as i64)));
    let pi = alg
        .basis()
        .into_iter()
        .find(|x| x * x == minus_p)
        .ok_or_else(|| Error::internal(format!("no basis element squares to -{p}")))?;
    let one = alg.one();
    let ambient = [one.clone(), pi.clone()];
    let order = maximal_order(p)?;
    let action = build_trivial_action(FiniteGroup::new(GroupKind::Cyclic(2))?, &order)?;
    report.check("unit group is {+-1}", action.units().len() == 2);
    let classes = enumerate_h1(&action)?;
    let mut all_full_field = classes.len() == 2;
    for class in &classes {
        let fixed = twisted_fixed_algebra_within(&action, &class.representative, &ambient)?;
        all_full_field &= fixed.dimension == 2 && fixed.label == target;
        report.classes.push(TwistClassReport::new(&action, &class.representative, class.orbit_size, fixed));
    }
    report.note(format!("pi = {pi} satisfies pi^2 = -{p}"));
    report.check("both C2 twists fix all of Q(sqrt(-p))", all_full_field);
    Ok(report.finish())
}
