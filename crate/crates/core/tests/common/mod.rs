//! Independent oracles and property checks shared by the property tests
//! and the acceptance runner. Each check returns a description of the
//! first violation it finds.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use sstwist::arith::{int, prime_divisors, rat, Integer, Rational};
use sstwist::cohomology::*;
use sstwist::ellcurve::{trace_lift, within_hasse_bound, WeierstrassCurve};
use sstwist::field::FiniteField;
use sstwist::quat::*;

pub type Check = Result<(), String>;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The 24 Hurwitz units written out by hand: `+-1, +-i, +-j, +-k` and
/// `(+-1 +-i +-j +-k)/2` in `(-1,-1)`.
pub fn hurwitz_units_oracle(alg: &Arc<QuaternionAlgebra>) -> Vec<Quaternion> {
    let mut out = Vec::new();
    for axis in 0..4 {
        for sign in [-1, 1] {
            let mut c = [0i64; 4];
            c[axis] = sign;
            out.push(alg.element_ints(c, 1));
        }
    }
    for signs in 0..16 {
        let c = [0, 1, 2, 3].map(|b| if signs >> b & 1 == 1 { -1 } else { 1 });
        out.push(alg.element_ints(c, 2));
    }
    out.sort();
    out
}

/// `|Hom(C_m, G) / G|` by listing `g` with `g^m = 1` and counting orbits
/// under conjugation, using quaternion arithmetic directly.
pub fn hom_cyclic_mod_conjugation(m: u32, units: &[Quaternion]) -> usize {
    let roots: Vec<&Quaternion> = units.iter().filter(|g| g.pow(m).is_one()).collect();
    let mut classes: Vec<BTreeSet<Quaternion>> = Vec::new();
    for g in roots {
        if classes.iter().any(|c| c.contains(g)) {
            continue;
        }
        let class = units.iter().map(|h| h * g * h.inverse().unwrap()).collect();
        classes.push(class);
    }
    classes.len()
}

/// Squarefree part by trial division.
pub fn squarefree_oracle(n: i64) -> i64 {
    let sign = n.signum();
    let mut m = n.abs();
    let mut out = 1;
    let mut d = 2;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    sign * out * m
}

/// `End^0` read from `x^2 - t x + q`: the full algebra for a repeated
/// root, otherwise `Q(sqrt(t^2 - 4q))`.
pub fn tate_oracle(q: i64, t: i64) -> EndLabel {
    let disc = t * t - 4 * q;
    if disc == 0 {
        EndLabel::FullQuaternion
    } else {
        EndLabel::QuadraticField(int(squarefree_oracle(disc)))
    }
}

/// Number of supersingular `j` in characteristic `p`: `floor(p/12)` plus
/// a correction depending on `p mod 12`.
pub fn supersingular_count_oracle(p: u64) -> usize {
    if p <= 3 {
        return 1;
    }
    let extra = match p % 12 {
        1 => 0,
        5 | 7 => 1,
        11 => 2,
        _ => unreachable!("prime > 3"),
    };
    (p / 12) as usize + extra
}

/// Actions exercised by the cohomology property checks.
pub fn sample_actions() -> Vec<(String, GaloisAction)> {
    let mut out = Vec::new();
    for p in [2, 3, 5, 7, 13] {
        let order = maximal_order(p).unwrap();
        for m in 1..=6 {
            let g = FiniteGroup::new(GroupKind::Cyclic(m)).unwrap();
            out.push((format!("C{m} trivial on O_{p}"), build_trivial_action(g, &order).unwrap()));
        }
    }
    let q8 = FiniteGroup::new(GroupKind::Dicyclic(2)).unwrap();
    out.push(("Q8 trivial on O_2".into(), build_trivial_action(q8, &maximal_order(2).unwrap()).unwrap()));
    for (p, m) in [(7, 4), (11, 4), (11, 6), (5, 6), (23, 6)] {
        out.push((format!("D{} on B_{p}", 2 * m), build_dihedral_action(p, m).unwrap().action));
    }
    out
}

/// Every property of `Z^1`, twisted conjugacy and twisted fixed algebras
/// on one action.
pub fn check_cohomology(name: &str, action: &GaloisAction) -> Check {
    let z1 = enumerate_z1(action).map_err(|e| format!("{name}: {e}"))?;
    let n = action.group().order();
    let all: Vec<usize> = (0..n).collect();
    for xi in &z1 {
        ensure(validate_cocycle(action, xi), || format!("{name}: enumerated {xi:?} is not a cocycle"))?;
        ensure(cohomologous(action, xi, xi), || format!("{name}: relation not reflexive"))?;
        for s in 0..n {
            for t in 0..n {
                let lhs = twisting_matrix(action, xi, action.group().mul(s, t)).unwrap();
                let rhs = &twisting_matrix(action, xi, s).unwrap() * &twisting_matrix(action, xi, t).unwrap();
                ensure(lhs == rhs, || format!("{name}: twisting is not an action at ({s}, {t})"))?;
            }
        }
        let fixed = twisted_fixed_algebra(action, xi).unwrap();
        ensure([1, 2, 4].contains(&fixed.dimension), || format!("{name}: fixed dimension {}", fixed.dimension))?;
        ensure(fixed.is_unital_subalgebra(), || format!("{name}: fixed set is not a unital subalgebra"))?;
        ensure(twisted_fixed_algebra_over(action, xi, &all).unwrap() == fixed, || {
            format!("{name}: generators and all elements give different fixed algebras")
        })?;
        for other in orbit(action, xi) {
            let f = twisted_fixed_algebra(action, &other).unwrap();
            ensure(f.label == fixed.label && f.dimension == fixed.dimension, || {
                format!("{name}: cohomologous cocycles give {} and {}", fixed.label, f.label)
            })?;
        }
    }
    for a in &z1 {
        for b in &z1 {
            let ab = cohomologous(action, a, b);
            ensure(ab == cohomologous(action, b, a), || format!("{name}: relation not symmetric"))?;
            if !ab {
                continue;
            }
            for c in &z1 {
                if cohomologous(action, b, c) {
                    ensure(cohomologous(action, a, c), || format!("{name}: relation not transitive"))?;
                }
            }
        }
    }
    let classes = enumerate_h1(action).unwrap();
    let total: usize = classes.iter().map(|c| c.orbit_size).sum();
    ensure(total == z1.len(), || format!("{name}: class sizes sum to {total}, |Z^1| = {}", z1.len()))?;
    if action.is_trivial() {
        if let GroupKind::Cyclic(m) = action.group().kind() {
            let oracle = hom_cyclic_mod_conjugation(m, action.units());
            ensure(classes.len() == oracle, || {
                format!("{name}: {} classes, Hom oracle gives {oracle}", classes.len())
            })?;
        }
    }
    Ok(())
}

/// The dihedral cocycle is a cocycle for every `alpha` in `C_m`.
pub fn check_dihedral_cocycles() -> Check {
    for (p, m) in [(7, 4), (11, 4), (11, 6), (5, 6), (23, 4), (23, 6), (47, 4), (47, 6)] {
        let d = build_dihedral_action(p, m).unwrap();
        for alpha in d.action.units() {
            let xi = build_dihedral_cocycle(&d, alpha).map_err(|e| format!("p={p} m={m}: {e}"))?;
            ensure(validate_cocycle(&d.action, &xi), || format!("p={p} m={m} alpha={alpha}: invalid"))?;
        }
    }
    Ok(())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

/// `nrd(xy) = nrd(x) nrd(y)` on random pairs in random `B_{p,inf}`.
pub fn check_nrd_multiplicative(cases: u32) -> Check {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let algebras: Vec<_> = primes.iter().map(|&p| build_bp_infinity(p).unwrap()).collect();
    let coeffs = proptest::collection::vec(small_rational(), 8);
    runner(cases)
        .run(&(0..algebras.len(), coeffs), |(k, c)| {
            let alg = &algebras[k];
            let x = alg.element_from_slice(&c[..4]);
            let y = alg.element_from_slice(&c[4..]);
            prop_assert_eq!((&x * &y).nrd(), x.nrd() * y.nrd());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `prod_v (a, b)_v = 1` on random nonzero integer pairs.
pub fn check_hilbert_product_formula(cases: u32) -> Check {
    let nonzero = (-100_000i64..=100_000).prop_filter("nonzero", |x| *x != 0);
    runner(cases)
        .run(&(nonzero.clone(), nonzero), |(a, b)| {
            let (ra, rb) = (Rational::from_integer(int(a)), Rational::from_integer(int(b)));
            let mut places: BTreeSet<Integer> = prime_divisors(&int(2 * a * b)).into_iter().collect();
            places.insert(int(2));
            let mut product = hilbert_symbol(&ra, &rb, Place::Infinity).unwrap() as i32;
            for q in places {
                let q: u64 = q.try_into().unwrap();
                product *= hilbert_symbol(&ra, &rb, Place::Prime(q)).unwrap() as i32;
            }
            prop_assert_eq!(product, 1, "a = {}, b = {}", a, b);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Random long Weierstrass curves over `F_p`, `p <= 31`: the Hasse bound
/// holds, and counting over `F_(p^n)` agrees with the trace recurrence.
pub fn check_trace_lift_and_hasse(cases: u32) -> Check {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    let fields: Vec<Arc<FiniteField>> = primes.iter().map(|&p| Arc::new(FiniteField::new(p, 1).unwrap())).collect();
    runner(cases)
        .run(&(0..primes.len(), proptest::array::uniform5(0i64..31), 2u32..=3), |(k, a, n)| {
            let f = &fields[k];
            let Ok(curve) = WeierstrassCurve::from_ints(f.clone(), a) else {
                return Ok(());
            };
            let p = primes[k];
            let stats = curve.stats().unwrap();
            prop_assert!(within_hasse_bound(p, &stats.trace));
            let ext = Arc::new(FiniteField::new(p, n).unwrap());
            let lifted = curve.base_change(ext).unwrap().stats().unwrap();
            prop_assert!(within_hasse_bound(p.pow(n), &lifted.trace));
            prop_assert_eq!(lifted.trace, trace_lift(&stats.trace, p, n).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}
