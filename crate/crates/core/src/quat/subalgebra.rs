use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::algebra::{left_mul_matrix, right_mul_matrix, Quaternion, QuaternionAlgebra};
use crate::arith::{squarefree_part_rational, Integer};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Isomorphism class of a semisimple subalgebra of a definite quaternion algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndLabel {
    RationalsOnly,
    /// `Q(sqrt(d))` with `d` squarefree and negative.
    QuadraticField(Integer),
    FullQuaternion,
}

impl EndLabel {
    pub fn dimension(&self) -> usize {
        match self {
            EndLabel::RationalsOnly => 1,
            EndLabel::QuadraticField(_) => 2,
            EndLabel::FullQuaternion => 4,
        }
    }
}

impl fmt::Display for EndLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndLabel::RationalsOnly => write!(f, "RationalsOnly"),
            EndLabel::QuadraticField(d) => write!(f, "QuadraticField({d})"),
            EndLabel::FullQuaternion => write!(f, "FullQuaternion"),
        }
    }
}

impl Serialize for EndLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubalgebraReport {
    pub dimension: usize,
    pub basis: Vec<Quaternion>,
    pub label: EndLabel,
}

impl SubalgebraReport {
    /// Classifies the subspace spanned by `vectors` (coordinates in `1, i, j, k`).
    pub fn from_vectors(alg: &Arc<QuaternionAlgebra>, vectors: Vec<Vec<crate::arith::Rational>>) -> Result<Self> {
        let basis: Vec<Quaternion> = vectors.iter().map(|v| alg.element_from_slice(v)).collect();
        let label = match basis.len() {
            1 => EndLabel::RationalsOnly,
            2 => {
                let u = basis
                    .iter()
                    .find(|u| !u.is_scalar())
                    .ok_or_else(|| Error::internal("2-dimensional subalgebra of scalars"))?;
                let d = squarefree_part_rational(&u.discriminant())?;
                if !d.is_negative() {
                    return Err(Error::internal(format!("quadratic subalgebra Q(sqrt({d})) is not imaginary")));
                }
                EndLabel::QuadraticField(d)
            }
            4 => EndLabel::FullQuaternion,
            n => return Err(Error::internal(format!("subalgebra of dimension {n}"))),
        };
        Ok(SubalgebraReport { dimension: basis.len(), basis, label })
    }

    /// Membership by rank: `x` lies in the span of the basis.
    pub fn contains(&self, x: &Quaternion) -> bool {
        let rows: Vec<Vec<_>> = self.basis.iter().map(|b| b.coeffs().to_vec()).collect();
        let m = Matrix::from_rows(rows.clone());
        let mut with = rows;
        with.push(x.coeffs().to_vec());
        Matrix::from_rows(with).rank() == m.rank()
    }

    /// True when the span contains 1 and is closed under products.
    pub fn is_unital_subalgebra(&self) -> bool {
        let Some(first) = self.basis.first() else {
            return false;
        };
        self.contains(&first.algebra().one())
            && self.basis.iter().all(|x| self.basis.iter().all(|y| self.contains(&(x * y))))
    }

    pub fn is_commutative(&self) -> bool {
        self.basis.iter().all(|x| self.basis.iter().all(|y| x * y == y * x))
    }
}

/// Matrix of `x -> x s - s x`.
fn commutator_matrix(s: &Quaternion) -> Matrix {
    let r = right_mul_matrix(s);
    let l = left_mul_matrix(s);
    let mut m = r.clone();
    for row in 0..4 {
        for col in 0..4 {
            m[(row, col)] = &r[(row, col)] - &l[(row, col)];
        }
    }
    m
}

/// `{x : x s = s x for all s in S}`, solved exactly.
pub fn centralizer(alg: &Arc<QuaternionAlgebra>, set: &[Quaternion]) -> Result<SubalgebraReport> {
    if set.is_empty() {
        return Err(Error::domain("centralizer of the empty set"));
    }
    let system = set.iter().map(commutator_matrix).reduce(|acc, m| acc.vstack(&m)).expect("nonempty");
    let ns = system.nullspace();
    debug_assert!(ns.iter().all(|v| !v.iter().all(Zero::is_zero)));
    SubalgebraReport::from_vectors(alg, ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::quat::order::maximal_order;

    #[test]
    fn centralizer_examples() {
        let h = QuaternionAlgebra::from_ints(-1, -1).unwrap();
        let [one, i, j, k] = h.basis();
        let full = centralizer(&h, &[-&one]).unwrap();
        assert_eq!((full.dimension, &full.label), (4, &EndLabel::FullQuaternion));

        let ci = centralizer(&h, &[i.clone()]).unwrap();
        assert_eq!(ci.label, EndLabel::QuadraticField(int(-1)));
        assert!(ci.contains(&one) && ci.contains(&i));

        let q8 = [one.clone(), -&one, i.clone(), -&i, j.clone(), -&j, k.clone(), -&k];
        let cq = centralizer(&h, &q8).unwrap();
        assert_eq!((cq.dimension, &cq.label), (1, &EndLabel::RationalsOnly));

        assert!(matches!(centralizer(&h, &[]), Err(Error::Domain(_))));
    }

    #[test]
    fn centralizers_of_single_elements() {
        for p in [2, 3, 5, 7, 11, 13, 17] {
            let o = maximal_order(p).unwrap();
            let alg = o.algebra().clone();
            let mut elements = o.basis().to_vec();
            elements.extend(o.unit_group().unwrap());
            for x in elements {
                let c = centralizer(&alg, &[x.clone()]).unwrap();
                assert_ne!(c.dimension, 3);
                assert!(c.contains(&x) && c.is_unital_subalgebra());
                if x.is_scalar() {
                    assert_eq!(c.label, EndLabel::FullQuaternion);
                } else {
                    assert_eq!(c.dimension, 2);
                    assert!(c.is_commutative());
                }
            }
        }
    }

    #[test]
    fn omega_centralizer_is_q_sqrt_minus_3() {
        let h = QuaternionAlgebra::from_ints(-1, -1).unwrap();
        let omega = h.element_ints([-1, 1, 1, 1], 2);
        let c = centralizer(&h, &[omega]).unwrap();
        assert_eq!(c.label, EndLabel::QuadraticField(int(-3)));
    }
}
