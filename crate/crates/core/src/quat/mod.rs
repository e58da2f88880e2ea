//! Quaternion algebras over `Q`, their maximal orders, unit groups and
//! subalgebras.

mod algebra;
mod group;
mod order;
mod subalgebra;

pub use algebra::{
    apply_matrix, build_bp_infinity, definite_ramified_prime, hilbert_symbol, left_mul_matrix, ramified_places,
    right_mul_matrix, Place, Quaternion, QuaternionAlgebra,
};
pub use group::{classify_group, GroupLabel};
pub use order::{maximal_order, maximal_order_with_basis, QuatOrder};
pub use subalgebra::{centralizer, EndLabel, SubalgebraReport};
