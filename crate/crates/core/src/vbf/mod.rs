//! Vectorial Boolean functions as lookup tables.

mod automorphism;
mod ddt;
mod field;
mod fingerprint;
mod fixtures;
mod lut;

pub use automorphism::{
    butterfly_automorphism, frobenius_automorphism, monomial_for_tuple, multinomial_automorphism,
    quadratic_shift_automorphism, transport_automorphism, verify_le_automorphism, GraphShift,
};
pub use ddt::{apn_violation, ddt, is_apn, Ddt};
pub use field::{default_modulus, FiniteField};
pub use fingerprint::{
    extended_walsh_spectrum, fingerprint, gamma_rank, pair_sum_correlation, CczFingerprint, FINGERPRINT_SCHEMA,
    DESIGN_INVARIANT_MAX_N,
};
pub use fixtures::{
    butterfly, butterfly_alpha, butterfly_field, dillon_field, dillon_fixture, monomial_lut,
    polynomial_lut, N5_MONOMIAL_EXPONENTS, N7_MONOMIAL_EXPONENTS,
};
pub use lut::Lut;
