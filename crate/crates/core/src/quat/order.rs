use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::algebra::{auxiliary_prime, build_bp_infinity, definite_ramified_prime, Quaternion, QuaternionAlgebra};
use crate::arith::{floor_sqrt, int, is_prime, rat_int, Integer, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Largest coordinate box `unit_group` is willing to scan.
const MAX_UNIT_SEARCH_BOX: u128 = 2_000_000_000;

/// A full-rank lattice in a quaternion algebra that is a ring containing 1.
#[derive(Clone, Debug, Serialize)]
pub struct QuatOrder {
    #[serde(skip)]
    algebra: Arc<QuaternionAlgebra>,
    basis: Vec<Quaternion>,
    #[serde(skip)]
    inverse: Matrix,
}

impl QuatOrder {
    /// Validates that the rows span an order: nonzero determinant, 1 in the
    /// lattice, closed under multiplication.
    pub fn new(algebra: &Arc<QuaternionAlgebra>, basis: Vec<Quaternion>) -> Result<Self> {
        if basis.len() != 4 {
            return Err(Error::domain(format!("an order needs 4 generators, got {}", basis.len())));
        }
        let m = Matrix::from_rows(basis.iter().map(|q| q.coeffs().to_vec()).collect());
        let inverse = m.inverse().ok_or_else(|| Error::domain("basis is linearly dependent"))?;
        let order = QuatOrder { algebra: Arc::clone(algebra), basis, inverse };
        if order.integral_coordinates(&algebra.one()).is_none() {
            return Err(Error::domain("lattice does not contain 1"));
        }
        for x in &order.basis {
            for y in &order.basis {
                if order.integral_coordinates(&(x * y)).is_none() {
                    return Err(Error::domain(format!("lattice not closed under multiplication: ({x})({y})")));
                }
            }
        }
        Ok(order)
    }

    pub fn from_rational_rows(algebra: &Arc<QuaternionAlgebra>, rows: &[[Rational; 4]]) -> Result<Self> {
        Self::new(algebra, rows.iter().map(|r| algebra.element(r.clone())).collect())
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &[Quaternion] {
        &self.basis
    }

    /// Coordinates of `x` in the lattice basis.
    pub fn coordinates(&self, x: &Quaternion) -> Vec<Rational> {
        // x = c B  =>  c = x B^{-1}
        self.inverse.transpose().mul_vec(x.coeffs())
    }

    fn integral_coordinates(&self, x: &Quaternion) -> Option<Vec<Integer>> {
        self.coordinates(x).into_iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.integral_coordinates(x).is_some()
    }

    /// `trd(e_r conj(e_s))`, which is integral for an order.
    pub fn gram(&self) -> Matrix {
        let rows = self.basis.iter().map(|x| self.basis.iter().map(|y| (x * &y.conjugate()).trd()).collect()).collect();
        Matrix::from_rows(rows)
    }

    /// Positive `d` with `d^2 = |det gram|`.
    pub fn reduced_discriminant(&self) -> Result<Integer> {
        let det = self.gram().determinant().abs();
        if !det.is_integer() {
            return Err(Error::internal("order with non-integral trace form"));
        }
        let det = det.to_integer();
        let d = det.sqrt();
        if &d * &d != det {
            return Err(Error::internal(format!("trace form determinant {det} is not a square")));
        }
        Ok(d)
    }

    /// For an order in `B_{p,inf}`: maximal iff its reduced discriminant is `p`.
    pub fn is_maximal(&self) -> Result<bool> {
        let p = definite_ramified_prime(&self.algebra)?;
        Ok(self.reduced_discriminant()? == Integer::from(p))
    }

    /// All `x` in the order with `nrd(x) = 1`, sorted lexicographically.
    ///
    /// Writing `x = sum c_r e_r`, `nrd(x) = c^T N c` with `N = gram / 2`
    /// positive definite, so every unit satisfies `c_r^2 <= (N^{-1})_{rr}`.
    /// The whole box is scanned, so the list is complete.
    pub fn unit_group(&self) -> Result<Vec<Quaternion>> {
        if !self.algebra.is_definite() {
            return Err(Error::domain("unit group of an indefinite algebra is infinite"));
        }
        let gram = self.gram();
        let gram_inv = gram.inverse().ok_or_else(|| Error::internal("degenerate trace form"))?;
        let bounds: Vec<i64> =
            (0..4).map(|r| floor_sqrt(&(&gram_inv[(r, r)] * rat_int(2))).to_i64().expect("small bound")).collect();
        let cells: u128 = bounds.iter().map(|&b| (2 * b + 1) as u128).product();
        if cells > MAX_UNIT_SEARCH_BOX {
            return Err(Error::size(format!("unit search box has {cells} cells; reduce the order basis first")));
        }
        let g: Vec<Vec<i128>> =
            (0..4).map(|r| (0..4).map(|c| gram[(r, c)].to_integer().to_i128().expect("small")).collect()).collect();
        let mut coords = Vec::new();
        let mut c = [0i128; 4];
        for c0 in -bounds[0]..=bounds[0] {
            c[0] = c0 as i128;
            for c1 in -bounds[1]..=bounds[1] {
                c[1] = c1 as i128;
                for c2 in -bounds[2]..=bounds[2] {
                    c[2] = c2 as i128;
                    for c3 in -bounds[3]..=bounds[3] {
                        c[3] = c3 as i128;
                        let mut form = 0i128;
                        for r in 0..4 {
                            for s in 0..4 {
                                form += c[r] * g[r][s] * c[s];
                            }
                        }
                        // c^T gram c = 2 nrd(x)
                        if form == 2 {
                            coords.push(c);
                        }
                    }
                }
            }
        }
        let mut units: Vec<Quaternion> = coords
            .into_iter()
            .map(|c| {
                self.basis.iter().zip(c).fold(self.algebra.scalar(Rational::zero()), |acc, (e, k)| {
                    &acc + &e.scale(&Rational::from_integer(Integer::from(k)))
                })
            })
            .collect();
        units.sort();
        check_closed(&units)?;
        Ok(units)
    }

    /// First unit (in canonical order) of multiplicative order `m`.
    pub fn embed_root_of_unity(&self, m: u64) -> Result<Quaternion> {
        self.unit_group()?
            .into_iter()
            .find(|u| u.multiplicative_order(m) == Some(m))
            .ok_or(Error::NotEmbeddable { order: m })
    }
}

/// Checks closure under products and inverses of a finite list of units.
pub(crate) fn check_closed(elements: &[Quaternion]) -> Result<()> {
    let mut sorted = elements.to_vec();
    sorted.sort();
    let has = |x: &Quaternion| sorted.binary_search(x).is_ok();
    for x in elements {
        let inv = x.inverse()?;
        if !has(&inv) {
            return Err(Error::domain(format!("set not closed under inversion at {x}")));
        }
        for y in elements {
            if !has(&(x * y)) {
                return Err(Error::domain(format!("set not closed under products: ({x})({y})")));
            }
        }
    }
    Ok(())
}

fn rows(entries: [[(i64, i64); 4]; 4]) -> Vec<[Rational; 4]> {
    entries.iter().map(|row| row.map(|(n, d)| Rational::new(int(n), int(d)))).collect()
}

/// A maximal order of [`build_bp_infinity`]`(p)`, certified by its
/// reduced discriminant.
pub fn maximal_order(p: u64) -> Result<QuatOrder> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let alg = build_bp_infinity(p)?;
    let h = (1, 2);
    let z = (0, 1);
    let o = (1, 1);
    let basis = if p == 2 {
        // Hurwitz order
        rows([[o, z, z, z], [z, o, z, z], [z, z, o, z], [h, h, h, h]])
    } else if p % 4 == 3 {
        // <1, i, (i + j)/2, (1 + k)/2> in (-1, -p)
        rows([[o, z, z, z], [z, o, z, z], [z, h, h, z], [h, z, z, h]])
    } else if p % 8 == 5 {
        // <(1 + j + k)/2, (i + 2j + k)/4, j, k> in (-2, -p)
        let q = (1, 4);
        rows([[h, z, h, h], [z, q, h, q], [z, z, o, z], [z, z, z, o]])
    } else {
        // <(1 + j)/2, (i + k)/2, (j + c k)/q, k> in (-p, -q) with q | c^2 p + 1
        let q = auxiliary_prime(p);
        let c = (0..q)
            .find(|c| (c * c % q * (p % q) + 1) % q == 0)
            .ok_or_else(|| Error::internal(format!("no square root of -1/{p} modulo {q}")))?;
        let (qi, ci) = (q as i64, c as i64);
        rows([[h, z, h, z], [z, h, z, h], [z, z, (1, qi), (ci, qi)], [z, z, z, o]])
    };
    let order = QuatOrder::from_rational_rows(&alg, &basis)?;
    certify_maximal(order, p)
}

/// Maximal order of `build_bp_infinity(p)` from a caller-supplied basis.
pub fn maximal_order_with_basis(p: u64, basis: &[[Rational; 4]]) -> Result<QuatOrder> {
    let alg = build_bp_infinity(p)?;
    let order = QuatOrder::from_rational_rows(&alg, basis)?;
    if !order.is_maximal()? {
        return Err(Error::domain(format!(
            "supplied order has reduced discriminant {}, not {p}",
            order.reduced_discriminant()?
        )));
    }
    Ok(order)
}

fn certify_maximal(order: QuatOrder, p: u64) -> Result<QuatOrder> {
    if order.is_maximal()? {
        Ok(order)
    } else {
        Err(Error::internal(format!(
            "built-in order for p = {p} has reduced discriminant {}",
            order.reduced_discriminant()?
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::algebra::QuaternionAlgebra;

    fn lipschitz() -> QuatOrder {
        let h = QuaternionAlgebra::from_ints(-1, -1).unwrap();
        QuatOrder::new(&h, h.basis().to_vec()).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(maximal_order(2).unwrap().reduced_discriminant().unwrap(), int(2));
        // Gram = diag(2, 2, 2, 2): det 16, reduced discriminant 4.
        let mut diag2 = Matrix::identity(4);
        for r in 0..4 {
            diag2[(r, r)] = rat_int(2);
        }
        assert_eq!(lipschitz().gram(), diag2);
        assert_eq!(lipschitz().reduced_discriminant().unwrap(), int(4));
        assert!(!lipschitz().is_maximal().unwrap());
        assert_eq!(maximal_order(7).unwrap().reduced_discriminant().unwrap(), int(7));
        assert_eq!(maximal_order(13).unwrap().reduced_discriminant().unwrap(), int(13));
    }

    #[test]
    fn built_in_orders_are_maximal_for_small_primes() {
        for p in (2..=100).filter(|&p| is_prime(p)) {
            let o = maximal_order(p).unwrap();
            assert!(o.is_maximal().unwrap(), "p = {p}");
        }
    }

    #[test]
    fn order_validation_rejects_non_rings() {
        let h = QuaternionAlgebra::from_ints(-1, -1).unwrap();
        let half_i = rows([
            [(1, 1), (0, 1), (0, 1), (0, 1)],
            [(0, 1), (1, 2), (0, 1), (0, 1)],
            [(0, 1), (0, 1), (1, 1), (0, 1)],
            [(0, 1), (0, 1), (0, 1), (1, 1)],
        ]);
        assert!(QuatOrder::from_rational_rows(&h, &half_i).is_err());
        let no_one = rows([
            [(2, 1), (0, 1), (0, 1), (0, 1)],
            [(0, 1), (1, 1), (0, 1), (0, 1)],
            [(0, 1), (0, 1), (1, 1), (0, 1)],
            [(0, 1), (0, 1), (0, 1), (1, 1)],
        ]);
        assert!(QuatOrder::from_rational_rows(&h, &no_one).is_err());
    }

    #[test]
    fn hurwitz_units_are_e24() {
        let units = maximal_order(2).unwrap().unit_group().unwrap();
        assert_eq!(units.len(), 24);
        let h = units[0].algebra().clone();
        let mut expected = Vec::new();
        for r in 0..4 {
            for s in [1, -1] {
                let mut c = [0; 4];
                c[r] = s;
                expected.push(h.element_ints(c, 1));
            }
        }
        for mask in 0..16 {
            let c = [0, 1, 2, 3].map(|b| if mask >> b & 1 == 1 { -1 } else { 1 });
            expected.push(h.element_ints(c, 2));
        }
        expected.sort();
        assert_eq!(units, expected);
    }

    #[test]
    fn unit_group_orders() {
        assert_eq!(maximal_order(3).unwrap().unit_group().unwrap().len(), 12);
        let u13 = maximal_order(13).unwrap().unit_group().unwrap();
        let alg = u13[0].algebra().clone();
        assert_eq!(u13, vec![-&alg.one(), alg.one()]);
        assert!(lipschitz().unit_group().unwrap().len() == 8);
        let split = QuaternionAlgebra::from_ints(1, -1).unwrap();
        let o = QuatOrder::new(&split, split.basis().to_vec()).unwrap();
        assert!(matches!(o.unit_group(), Err(Error::Domain(_))));
    }

    #[test]
    fn roots_of_unity() {
        let w = maximal_order(2).unwrap().embed_root_of_unity(3).unwrap();
        assert_eq!(w.multiplicative_order(24), Some(3));
        let eta = maximal_order(7).unwrap().embed_root_of_unity(4).unwrap();
        assert_eq!(&eta * &eta, -&eta.algebra().one());
        assert_eq!(maximal_order(13).unwrap().embed_root_of_unity(4), Err(Error::NotEmbeddable { order: 4 }));
    }

    #[test]
    fn user_basis_path() {
        let h = rows([
            [(1, 1), (0, 1), (0, 1), (0, 1)],
            [(0, 1), (1, 1), (0, 1), (0, 1)],
            [(0, 1), (0, 1), (1, 1), (0, 1)],
            [(1, 2), (1, 2), (1, 2), (1, 2)],
        ]);
        assert!(maximal_order_with_basis(2, &h).is_ok());
        let lip = rows([
            [(1, 1), (0, 1), (0, 1), (0, 1)],
            [(0, 1), (1, 1), (0, 1), (0, 1)],
            [(0, 1), (0, 1), (1, 1), (0, 1)],
            [(0, 1), (0, 1), (0, 1), (1, 1)],
        ]);
        assert!(matches!(maximal_order_with_basis(2, &lip), Err(Error::Domain(_))));
    }
}
