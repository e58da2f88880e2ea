use std::fmt;

use serde::{Serialize, Serializer};

use super::algebra::Quaternion;
use super::order::check_closed;
use crate::error::{Error, Result};

/// Isomorphism type of a finite subgroup of a definite quaternion algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    Cyclic(u64),
    /// Dicyclic (binary dihedral) group; the payload is the group order `4n`.
    Dicyclic(u64),
    BinaryTetrahedral,
}

impl GroupLabel {
    /// Traditional short name, where one exists.
    pub fn alias(self) -> Option<&'static str> {
        match self {
            GroupLabel::BinaryTetrahedral => Some("E24"),
            GroupLabel::Dicyclic(8) => Some("Q8"),
            // Often called D12 in the supersingular-curve literature.
            GroupLabel::Dicyclic(12) => Some("D12"),
            _ => None,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Cyclic(n) => write!(f, "Cyclic({n})"),
            GroupLabel::Dicyclic(n) => write!(f, "Dicyclic({n})"),
            GroupLabel::BinaryTetrahedral => write!(f, "BinaryTetrahedral"),
        }
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Names the structure of a finite group of quaternion units from its
/// element orders and commutativity.
pub fn classify_group(elements: &[Quaternion]) -> Result<GroupLabel> {
    if elements.is_empty() {
        return Err(Error::domain("empty set is not a group"));
    }
    check_closed(elements)?;
    let n = elements.len() as u64;
    let orders: Vec<u64> = elements
        .iter()
        .map(|x| x.multiplicative_order(n).ok_or_else(|| Error::domain(format!("{x} has infinite order"))))
        .collect::<Result<_>>()?;
    let abelian = elements.iter().all(|x| elements.iter().all(|y| x * y == y * x));
    let has_order = |k: u64| orders.contains(&k);
    if abelian {
        return if has_order(n) {
            Ok(GroupLabel::Cyclic(n))
        } else {
            Err(Error::domain(format!("abelian group of order {n} is not cyclic")))
        };
    }
    let involutions = orders.iter().filter(|&&k| k == 2).count();
    if involutions == 1 && n % 4 == 0 && has_order(n / 2) {
        return Ok(GroupLabel::Dicyclic(n));
    }
    if involutions == 1 && n == 24 {
        return Ok(GroupLabel::BinaryTetrahedral);
    }
    Err(Error::domain(format!("unrecognized nonabelian group of order {n} with {involutions} involutions")))
}
