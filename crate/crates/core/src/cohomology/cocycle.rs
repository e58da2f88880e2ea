use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::Zero;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quat::{left_mul_matrix, right_mul_matrix, Quaternion, SubalgebraReport};

use super::action::{DihedralAction, GaloisAction};
use super::group::GroupKind;

/// Largest Galois group [`enumerate_h1`] accepts.
pub const MAX_H1_GROUP: usize = 16;
/// Largest unit set [`enumerate_h1`] accepts.
pub const MAX_H1_UNITS: usize = 24;

/// A map from group elements to the unit set of an action, stored on every
/// element as unit indices. The ordering is lexicographic on those indices,
/// which matches the ordering of the quaternion values.
///
/// The cocycle condition is `a_{st} = s(a_t) a_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocycle {
    values: Vec<usize>,
}

impl Cocycle {
    pub fn from_indices(values: Vec<usize>) -> Self {
        Cocycle { values }
    }

    pub fn from_quaternions(action: &GaloisAction, values: &[Quaternion]) -> Result<Self> {
        if values.len() != action.group().order() {
            return Err(Error::domain("a cocycle needs one value per group element"));
        }
        let values = values
            .iter()
            .map(|x| action.unit_index(x).ok_or_else(|| Error::domain(format!("{x} is not in the unit set"))))
            .collect::<Result<_>>()?;
        Ok(Cocycle { values })
    }

    /// The constant cocycle `a_s = 1`.
    pub fn trivial(action: &GaloisAction) -> Self {
        Cocycle { values: vec![action.unit_one(); action.group().order()] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.values
    }

    pub fn value<'a>(&self, action: &'a GaloisAction, g: usize) -> &'a Quaternion {
        action.unit(self.values[g])
    }

    pub fn values<'a>(&self, action: &'a GaloisAction) -> Vec<&'a Quaternion> {
        self.values.iter().map(|&u| action.unit(u)).collect()
    }

    /// Unit indices of the image of the map.
    pub fn image(&self) -> BTreeSet<usize> {
        self.values.iter().copied().collect()
    }
}

/// A twisted-conjugacy class in `Z^1`, represented by its least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleClass {
    pub representative: Cocycle,
    pub orbit_size: usize,
}

/// Checks `a_{st} = s(a_t) a_s` on every pair.
pub fn validate_cocycle(action: &GaloisAction, xi: &Cocycle) -> bool {
    let g = action.group();
    let n = g.order();
    if xi.values.len() != n || xi.values.iter().any(|&u| u >= action.units().len()) {
        return false;
    }
    (0..n).all(|s| {
        (0..n).all(|t| xi.values[g.mul(s, t)] == action.unit_mul(action.act_unit(s, xi.values[t]), xi.values[s]))
    })
}

/// Extends values on the generators to every element through the cocycle
/// rule and keeps the result only if it is a cocycle.
pub fn extend_from_generators(action: &GaloisAction, generator_values: &[usize]) -> Option<Cocycle> {
    let g = action.group();
    let mut values: Vec<Option<usize>> = vec![None; g.order()];
    values[0] = Some(action.unit_one());
    let mut queue = VecDeque::from([0]);
    while let Some(a) = queue.pop_front() {
        for (&s, &v) in g.generators().iter().zip(generator_values) {
            let b = g.mul(a, s);
            if values[b].is_none() {
                // a_{a s} = a(a_s) a_a
                let xa = values[a].expect("visited");
                values[b] = Some(action.unit_mul(action.act_unit(a, v), xa));
                queue.push_back(b);
            }
        }
    }
    let xi = Cocycle { values: values.into_iter().collect::<Option<_>>()? };
    validate_cocycle(action, &xi).then_some(xi)
}

/// `b_s = s(g) a_s g^-1`.
pub fn twist_by(action: &GaloisAction, xi: &Cocycle, g: usize) -> Cocycle {
    let ginv = action.unit_inv(g);
    let values = (0..action.group().order())
        .map(|s| action.unit_mul(action.unit_mul(action.act_unit(s, g), xi.values[s]), ginv))
        .collect();
    Cocycle { values }
}

/// The twisted-conjugacy orbit of `xi`, sorted.
pub fn orbit(action: &GaloisAction, xi: &Cocycle) -> BTreeSet<Cocycle> {
    (0..action.units().len()).map(|g| twist_by(action, xi, g)).collect()
}

pub fn cohomologous(action: &GaloisAction, a: &Cocycle, b: &Cocycle) -> bool {
    (0..action.units().len()).any(|g| twist_by(action, a, g) == *b)
}

/// Every cocycle, found by trying all generator images; sorted.
pub fn enumerate_z1(action: &GaloisAction) -> Result<Vec<Cocycle>> {
    let order = action.group().order();
    let units = action.units().len();
    if order > MAX_H1_GROUP || units > MAX_H1_UNITS {
        return Err(Error::size(format!(
            "H^1 enumeration needs |group| <= {MAX_H1_GROUP} and |G| <= {MAX_H1_UNITS}, got {order} and {units}"
        )));
    }
    let gens = action.group().generators().len();
    let mut tuple = vec![0usize; gens];
    let mut found = BTreeSet::new();
    loop {
        if let Some(xi) = extend_from_generators(action, &tuple) {
            found.insert(xi);
        }
        let Some(pos) = (0..gens).rev().find(|&i| tuple[i] + 1 < units) else {
            break;
        };
        tuple[pos] += 1;
        tuple[pos + 1..].iter_mut().for_each(|x| *x = 0);
    }
    Ok(found.into_iter().collect())
}

/// `H^1(group, G)`: one class per twisted-conjugacy orbit of `Z^1`, listed
/// by increasing representative.
pub fn enumerate_h1(action: &GaloisAction) -> Result<Vec<CocycleClass>> {
    let z1 = enumerate_z1(action)?;
    let mut seen = HashSet::new();
    let mut classes = Vec::new();
    for xi in &z1 {
        if seen.contains(xi) {
            continue;
        }
        let orb = orbit(action, xi);
        let representative = orb.first().expect("orbit contains xi").clone();
        let orbit_size = orb.len();
        for o in orb {
            seen.insert(o);
        }
        classes.push(CocycleClass { representative, orbit_size });
    }
    Ok(classes)
}

/// The cocycle `a_{t^i} = eta^i`, `a_{c t^i} = eta^-i alpha` on `D_2m`.
pub fn build_dihedral_cocycle(d: &DihedralAction, alpha: &Quaternion) -> Result<Cocycle> {
    let action = &d.action;
    if alpha.algebra() != action.algebra() || action.unit_index(alpha).is_none() {
        return Err(Error::domain(format!("alpha = {alpha} is not in C{}", d.m)));
    }
    if action.group().kind() != GroupKind::Dihedral(d.m) {
        return Err(Error::internal("action is not dihedral"));
    }
    let m = d.m as usize;
    let eta_inv = d.eta.inverse()?;
    let mut values = vec![action.algebra().one(); 2 * m];
    for i in 0..m {
        values[i] = d.eta.pow(i as u32);
        values[m + i] = &eta_inv.pow(i as u32) * alpha;
    }
    let xi = Cocycle::from_quaternions(action, &values)?;
    if !validate_cocycle(action, &xi) {
        return Err(Error::internal("dihedral cocycle fails the cocycle condition"));
    }
    Ok(xi)
}

/// Matrix of `x -> a_s^-1 s(x) a_s`.
pub fn twisting_matrix(action: &GaloisAction, xi: &Cocycle, s: usize) -> Result<Matrix> {
    let a = xi.value(action, s);
    let twist = &left_mul_matrix(&a.inverse()?) * &right_mul_matrix(a);
    Ok(&twist * action.matrix(s))
}

fn minus_identity(mut m: Matrix) -> Matrix {
    for r in 0..m.rows() {
        let v = &m[(r, r)] - Rational::from_integer(1.into());
        m[(r, r)] = v;
    }
    m
}

/// Solves `a_s^-1 s(x) a_s = x` for `s` in `elements`, restricted to the
/// span of `ambient` (coordinate vectors).
fn fixed_subspace(
    action: &GaloisAction,
    xi: &Cocycle,
    elements: &[usize],
    ambient: &[Vec<Rational>],
) -> Result<Vec<Vec<Rational>>> {
    let v = Matrix::from_columns(ambient.to_vec());
    let mut system: Option<Matrix> = None;
    for &s in elements {
        let block = &minus_identity(twisting_matrix(action, xi, s)?) * &v;
        system = Some(match system {
            None => block,
            Some(acc) => acc.vstack(&block),
        });
    }
    let null = match system {
        Some(sys) => sys.nullspace(),
        None => (0..ambient.len())
            .map(|i| (0..ambient.len()).map(|k| Rational::from_integer((i == k).into())).collect())
            .collect(),
    };
    Ok(null.iter().map(|lam| v.mul_vec(lam)).collect())
}

fn standard_basis() -> Vec<Vec<Rational>> {
    (0..4)
        .map(|i| (0..4).map(|k| if i == k { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
        .collect()
}

/// The twisted fixed algebra `{x : a_s^-1 s(x) a_s = x for all s}`,
/// solved over the group generators.
pub fn twisted_fixed_algebra(action: &GaloisAction, xi: &Cocycle) -> Result<SubalgebraReport> {
    twisted_fixed_algebra_over(action, xi, action.group().generators())
}

/// Same as [`twisted_fixed_algebra`] with the conditions imposed for every
/// listed group element.
pub fn twisted_fixed_algebra_over(action: &GaloisAction, xi: &Cocycle, elements: &[usize]) -> Result<SubalgebraReport> {
    if !validate_cocycle(action, xi) {
        return Err(Error::domain("not a 1-cocycle"));
    }
    let vectors = fixed_subspace(action, xi, elements, &standard_basis())?;
    SubalgebraReport::from_vectors(action.algebra(), vectors)
}

/// The twisted fixed points inside the subalgebra spanned by `ambient`,
/// which must be stable under the group and the twist.
pub fn twisted_fixed_algebra_within(
    action: &GaloisAction,
    xi: &Cocycle,
    ambient: &[Quaternion],
) -> Result<SubalgebraReport> {
    if !validate_cocycle(action, xi) {
        return Err(Error::domain("not a 1-cocycle"));
    }
    let span: Vec<Vec<Rational>> = ambient.iter().map(|x| x.coeffs().to_vec()).collect();
    if Matrix::from_rows(span.clone()).rank() != span.len() {
        return Err(Error::domain("ambient vectors are linearly dependent"));
    }
    let vectors = fixed_subspace(action, xi, action.group().generators(), &span)?;
    SubalgebraReport::from_vectors(action.algebra(), vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::cohomology::{build_dihedral_action, build_trivial_action, FiniteGroup};
    use crate::quat::{maximal_order, EndLabel};

    fn trivial(p: u64, kind: GroupKind) -> GaloisAction {
        build_trivial_action(FiniteGroup::new(kind).unwrap(), &maximal_order(p).unwrap()).unwrap()
    }

    #[test]
    fn validation_examples() {
        let act = trivial(2, GroupKind::Cyclic(3));
        assert!(validate_cocycle(&act, &Cocycle::trivial(&act)));
        let omega = act.units().iter().position(|u| u.multiplicative_order(3) == Some(3)).unwrap();
        let one = act.unit_one();
        assert!(!validate_cocycle(&act, &Cocycle::from_indices(vec![one, omega, omega])));
        let omega2 = act.unit_mul(omega, omega);
        assert!(validate_cocycle(&act, &Cocycle::from_indices(vec![one, omega, omega2])));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(enumerate_h1(&trivial(2, GroupKind::Cyclic(3))).unwrap().len(), 3);
        assert_eq!(enumerate_h1(&trivial(2, GroupKind::Cyclic(2))).unwrap().len(), 2);
        assert_eq!(enumerate_h1(&trivial(13, GroupKind::Cyclic(2))).unwrap().len(), 2);
        let big = trivial(2, GroupKind::Dihedral(12));
        assert!(matches!(enumerate_h1(&big), Err(Error::Size(_))));
    }

    #[test]
    fn dihedral_cocycle() {
        let d = build_dihedral_action(7, 4).unwrap();
        let one = d.action.algebra().one();
        let xi = build_dihedral_cocycle(&d, &one).unwrap();
        let [_, i, j, _] = d.action.algebra().basis();
        assert_eq!(xi.value(&d.action, 1), &i);
        let rep = twisted_fixed_algebra(&d.action, &xi).unwrap();
        assert_eq!(rep.label, EndLabel::RationalsOnly);
        assert!(build_dihedral_cocycle(&d, &j).is_err());

        let d = build_dihedral_action(5, 6).unwrap();
        let xi = build_dihedral_cocycle(&d, &d.eta).unwrap();
        assert!(validate_cocycle(&d.action, &xi));
    }

    #[test]
    fn fixed_algebra_examples() {
        let act = trivial(3, GroupKind::Cyclic(2));
        let rep = twisted_fixed_algebra(&act, &Cocycle::trivial(&act)).unwrap();
        assert_eq!(rep.label, EndLabel::FullQuaternion);

        let act = trivial(2, GroupKind::Cyclic(3));
        let omega = act.units().iter().position(|u| u.multiplicative_order(3) == Some(3)).unwrap();
        let xi = extend_from_generators(&act, &[omega]).unwrap();
        let rep = twisted_fixed_algebra(&act, &xi).unwrap();
        assert_eq!(rep.label, EndLabel::QuadraticField(int(-3)));
        let all: Vec<usize> = (0..3).collect();
        assert_eq!(twisted_fixed_algebra_over(&act, &xi, &all).unwrap(), rep);
    }
}
