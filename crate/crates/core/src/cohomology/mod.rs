//! Finite Galois groups acting on a quaternion algebra, 1-cocycles with
//! values in a finite unit group, `H^1` and twisted fixed subalgebras.
//!
//! Conventions: a cocycle satisfies `a_{st} = s(a_t) a_s`. Two cocycles are
//! cohomologous when `b_s = s(g) a_s g^-1` for some unit `g`; this is the
//! relation that the cocycle rule is stable under. The twist of `x` by `a`
//! along `s` is `a_s^-1 s(x) a_s`, and the twisted fixed algebra is the set
//! of `x` fixed by every such map.

mod action;
mod cocycle;
mod group;

pub use action::{
    build_dihedral_action, build_trivial_action, conjugation_matrix, trivial_action_on, DihedralAction, GaloisAction,
};
pub use cocycle::{
    build_dihedral_cocycle, cohomologous, enumerate_h1, enumerate_z1, extend_from_generators, orbit, twist_by,
    twisted_fixed_algebra, twisted_fixed_algebra_over, twisted_fixed_algebra_within, twisting_matrix, validate_cocycle,
    Cocycle, CocycleClass, MAX_H1_GROUP, MAX_H1_UNITS,
};
pub use group::{FiniteGroup, GroupKind, Letter, MAX_GROUP_ORDER};
