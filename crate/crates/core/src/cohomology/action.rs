use std::sync::Arc;

use crate::arith::{is_prime, rat, rat_int};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quat::{
    apply_matrix, definite_ramified_prime, left_mul_matrix, right_mul_matrix, QuatOrder, Quaternion, QuaternionAlgebra,
};

use super::group::{FiniteGroup, GroupKind};

/// A finite group acting on a quaternion algebra by algebra automorphisms,
/// together with a finite unit set `G` that the action permutes.
///
/// Every group element carries its own 4x4 matrix and its permutation of
/// `G`; units are referred to by their index in the sorted list.
#[derive(Clone, Debug)]
pub struct GaloisAction {
    group: FiniteGroup,
    algebra: Arc<QuaternionAlgebra>,
    matrices: Vec<Matrix>,
    units: Vec<Quaternion>,
    unit_mul: Vec<Vec<usize>>,
    unit_inv: Vec<usize>,
    unit_one: usize,
    perm: Vec<Vec<usize>>,
}

fn is_automorphism(alg: &Arc<QuaternionAlgebra>, m: &Matrix) -> bool {
    let basis = alg.basis();
    apply_matrix(m, &basis[0]).is_one()
        && m.determinant() != rat_int(0)
        && basis
            .iter()
            .all(|x| basis.iter().all(|y| apply_matrix(m, &(x * y)) == &apply_matrix(m, x) * &apply_matrix(m, y)))
}

/// Matrix of `x -> u x u^-1`.
pub fn conjugation_matrix(u: &Quaternion) -> Result<Matrix> {
    Ok(&left_mul_matrix(u) * &right_mul_matrix(&u.inverse()?))
}

impl GaloisAction {
    /// Builds and verifies an action from one matrix per group generator.
    pub fn new(
        group: FiniteGroup,
        algebra: &Arc<QuaternionAlgebra>,
        generator_matrices: Vec<Matrix>,
        units: Vec<Quaternion>,
    ) -> Result<Self> {
        if generator_matrices.len() != group.generators().len() {
            return Err(Error::domain("one matrix per generator is required"));
        }
        for (name, m) in group.generator_names().iter().zip(&generator_matrices) {
            if m.rows() != 4 || m.cols() != 4 || !is_automorphism(algebra, m) {
                return Err(Error::domain(format!("generator {name} does not act by an automorphism")));
            }
        }
        let n = group.order();
        let mut matrices: Vec<Option<Matrix>> = vec![None; n];
        matrices[0] = Some(Matrix::identity(4));
        let mut queue = std::collections::VecDeque::from([0]);
        while let Some(g) = queue.pop_front() {
            for (s, m) in group.generators().iter().zip(&generator_matrices) {
                let h = group.mul(g, *s);
                if matrices[h].is_none() {
                    matrices[h] = Some(matrices[g].as_ref().expect("visited") * m);
                    queue.push_back(h);
                }
            }
        }
        let matrices: Vec<Matrix> = matrices
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::internal("generator matrices do not reach every group element"))?;
        for a in 0..n {
            for b in 0..n {
                if matrices[group.mul(a, b)] != &matrices[a] * &matrices[b] {
                    return Err(Error::domain(format!(
                        "matrices do not respect the relations ({} * {})",
                        group.word(a),
                        group.word(b)
                    )));
                }
            }
        }

        let mut units = units;
        units.sort();
        units.dedup();
        if units.iter().any(|u| u.algebra() != algebra) {
            return Err(Error::domain("unit set lies in a different algebra"));
        }
        let index = |x: &Quaternion| units.binary_search(x).ok();
        let unit_mul = units
            .iter()
            .map(|x| units.iter().map(|y| index(&(x * y))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::domain("unit set is not closed under products"))?;
        let unit_one =
            units.iter().position(Quaternion::is_one).ok_or_else(|| Error::domain("unit set does not contain 1"))?;
        let unit_inv = (0..units.len())
            .map(|a| (0..units.len()).find(|&b| unit_mul[a][b] == unit_one))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::domain("unit set is not closed under inverses"))?;
        let perm = matrices
            .iter()
            .map(|m| units.iter().map(|u| index(&apply_matrix(m, u))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::domain("the action does not preserve the unit set"))?;
        Ok(GaloisAction { group, algebra: algebra.clone(), matrices, units, unit_mul, unit_inv, unit_one, perm })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    /// Matrix of the group element `g`.
    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn act(&self, g: usize, x: &Quaternion) -> Quaternion {
        apply_matrix(&self.matrices[g], x)
    }

    /// The unit set `G`, sorted.
    pub fn units(&self) -> &[Quaternion] {
        &self.units
    }

    pub fn unit(&self, u: usize) -> &Quaternion {
        &self.units[u]
    }

    pub fn unit_index(&self, x: &Quaternion) -> Option<usize> {
        self.units.binary_search(x).ok()
    }

    pub fn unit_one(&self) -> usize {
        self.unit_one
    }

    pub fn unit_mul(&self, a: usize, b: usize) -> usize {
        self.unit_mul[a][b]
    }

    pub fn unit_inv(&self, a: usize) -> usize {
        self.unit_inv[a]
    }

    /// Index of `g(u)`.
    pub fn act_unit(&self, g: usize, u: usize) -> usize {
        self.perm[g][u]
    }

    pub fn is_trivial(&self) -> bool {
        self.matrices.iter().all(|m| *m == Matrix::identity(4))
    }
}

/// Every generator acts as the identity; `G` is the unit group of `order`.
pub fn build_trivial_action(group: FiniteGroup, order: &QuatOrder) -> Result<GaloisAction> {
    let units = order.unit_group()?;
    trivial_action_on(group, order.algebra(), units)
}

/// Trivial action with an explicitly given unit set.
pub fn trivial_action_on(
    group: FiniteGroup,
    algebra: &Arc<QuaternionAlgebra>,
    units: Vec<Quaternion>,
) -> Result<GaloisAction> {
    let mats = vec![Matrix::identity(4); group.generators().len()];
    GaloisAction::new(group, algebra, mats, units)
}

/// A dihedral action together with its distinguished elements.
#[derive(Clone, Debug)]
pub struct DihedralAction {
    pub action: GaloisAction,
    /// Order-`m` unit generating `G`.
    pub eta: Quaternion,
    /// Conjugating element with `mu eta mu^-1 = eta^-1`.
    pub mu: Quaternion,
    pub m: u32,
}

/// `D_2m = <t, c>` acting on `B_{p,inf}` with `t` trivial and `c` the
/// conjugation by `mu`, on the unit set `C_m = <eta>`.
///
/// `m = 4` needs `p = 3 mod 4` and uses `(-1,-p)` with `eta = i`;
/// `m = 6` needs `p = 2 mod 3` and uses `(-3,-p)` with `eta = (1+i)/2`.
/// In both cases `mu = j`.
pub fn build_dihedral_action(p: u64, m: u32) -> Result<DihedralAction> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::domain(format!("dihedral action needs a prime p > 3, got {p}")));
    }
    let (a, eta_coeffs) = match m {
        4 if p % 4 == 3 => (-1, [rat_int(0), rat_int(1), rat_int(0), rat_int(0)]),
        6 if p % 3 == 2 => (-3, [rat(1, 2), rat(1, 2), rat_int(0), rat_int(0)]),
        4 | 6 => {
            return Err(Error::domain(format!(
                "C{m} needs p = 3 mod 4 for m = 4 and p = 2 mod 3 for m = 6; p = {p} fails"
            )))
        }
        _ => return Err(Error::domain(format!("dihedral action needs m in {{4, 6}}, got {m}"))),
    };
    let alg = QuaternionAlgebra::from_ints(a, -(p as i64))?;
    if definite_ramified_prime(&alg)? != p {
        return Err(Error::internal(format!("({a},-{p}) is not B_({p},inf)")));
    }
    let eta = alg.element(eta_coeffs);
    let mu = alg.basis()[2].clone();
    if eta.multiplicative_order(m as u64) != Some(m as u64) {
        return Err(Error::internal("eta has the wrong order"));
    }
    let c = conjugation_matrix(&mu)?;
    if apply_matrix(&c, &eta) != eta.inverse()? {
        return Err(Error::internal("conjugation by mu does not invert eta"));
    }
    let units: Vec<Quaternion> = (0..m).map(|e| eta.pow(e)).collect();
    let group = FiniteGroup::new(GroupKind::Dihedral(m))?;
    let action = GaloisAction::new(group, &alg, vec![Matrix::identity(4), c], units)?;
    Ok(DihedralAction { action, eta, mu, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::maximal_order;

    #[test]
    fn trivial_actions_are_identity() {
        for p in [2, 3, 7] {
            let g = FiniteGroup::new(GroupKind::Cyclic(3)).unwrap();
            let act = build_trivial_action(g, &maximal_order(p).unwrap()).unwrap();
            assert!(act.is_trivial());
            assert_eq!(act.matrix(1), &Matrix::identity(4));
        }
    }

    #[test]
    fn dihedral_examples() {
        let d = build_dihedral_action(7, 4).unwrap();
        let [_, i, j, _] = d.action.algebra().basis();
        let c = d.action.group().generators()[1];
        assert_eq!(d.action.act(c, &i), -&i);
        assert_eq!(d.action.act(c, &j), j);
        // oracle: j x j^-1 computed directly
        let jinv = j.inverse().unwrap();
        for x in d.action.algebra().basis() {
            assert_eq!(d.action.act(c, &x), &(&j * &x) * &jinv);
        }

        let d = build_dihedral_action(5, 6).unwrap();
        let c = d.action.group().generators()[1];
        let one = d.action.algebra().one();
        assert_eq!(d.action.act(c, &d.eta), &one - &d.eta);
        assert!((&d.eta * &(&one - &d.eta)).is_one());

        assert!(build_dihedral_action(13, 4).is_err());
        assert!(build_dihedral_action(7, 6).is_err());
        assert!(build_dihedral_action(11, 6).is_ok());
        assert!(build_dihedral_action(11, 5).is_err());
    }

    #[test]
    fn bad_action_rejected() {
        let alg = QuaternionAlgebra::from_ints(-1, -1).unwrap();
        let g = FiniteGroup::new(GroupKind::Cyclic(3)).unwrap();
        // conjugation by i has order 2, so it cannot satisfy s^3 = 1
        let m = conjugation_matrix(&alg.basis()[1]).unwrap();
        let units = vec![alg.one(), -&alg.one()];
        assert!(GaloisAction::new(g, &alg, vec![m], units).is_err());
    }
}
