//! Exact linear algebra over F2.

mod bitvec;
mod canonical;
mod commutant;
pub mod linear;
mod matrix;
mod poly;

pub use bitvec::{check_dimension, BitVec, MAX_N};
pub use canonical::{
    fixed_space, intertwiners, is_similar, minimal_polynomial, order, point_order, point_orders,
    rcf, similarity_transform, FixedSpace, RcfDecomposition,
};
pub use commutant::{commutant, is_extendable, DEFAULT_COMMUTANT_BUDGET};
pub use matrix::Gf2Matrix;
pub use poly::{irreducibles_of_degree, Gf2Poly};
pub(crate) use poly::{gcd_u64, is_prime};
