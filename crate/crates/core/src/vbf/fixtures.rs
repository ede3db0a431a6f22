//! Known APN constructions used as reference points.

use super::field::FiniteField;
use super::lut::Lut;
use crate::error::{Error, Result};
use crate::gf2::Gf2Poly;

/// Exponents of the six inequivalent APN monomial permutations of F_{2^7}.
pub const N7_MONOMIAL_EXPONENTS: [u64; 6] = [5, 9, 63, 78, 85, 88];

/// Exponents representing the APN monomial classes of F_{2^5}.
pub const N5_MONOMIAL_EXPONENTS: [u64; 5] = [3, 5, 7, 11, 15];

pub fn monomial_lut(field: &FiniteField, d: u64) -> Lut {
    Lut::from_fn(field.n(), |x| field.pow(x, d)).expect("field dimension is valid")
}

/// `x -> sum c_i x^{e_i}` for terms `(c_i, e_i)`.
pub fn polynomial_lut(field: &FiniteField, terms: &[(u16, u64)]) -> Lut {
    Lut::from_fn(field.n(), |x| {
        terms
            .iter()
            .fold(0, |acc, &(c, e)| acc ^ field.mul(c, field.pow(x, e)))
    })
    .expect("field dimension is valid")
}

/// The field in which the six-bit quadratic representative is defined.
pub fn dillon_field() -> FiniteField {
    FiniteField::new(Gf2Poly::from_bits(0b101_1011)).expect("irreducible")
}

/// Quadratic APN function `x^3 + a x^24 + x^10` on F_{2^6}, where `a` is a
/// root of `X^6+X^4+X^3+X+1`. Its CCZ class contains the six-bit APN
/// permutation.
pub fn dillon_fixture() -> Lut {
    let field = dillon_field();
    // X is a root of the modulus in polynomial basis
    let a = 0b10;
    polynomial_lut(&field, &[(1, 3), (a, 24), (1, 10)])
}

/// The field F_8 underlying [`butterfly`].
pub fn butterfly_field() -> FiniteField {
    FiniteField::with_default_modulus(3).expect("n = 3 is supported")
}

/// Open butterfly with exponent 3 on F_8 x F_8: with
/// `R(x, y) = (x + a y)^3 + b y^3` and `z = R_y^{-1}(x)`,
/// `H(x, y) = (R(y, z), z)`. Input and output pack `x` in the low three bits
/// and `y` in the high three bits.
pub fn butterfly(alpha: u16, beta: u16) -> Result<Lut> {
    if beta == 0 || beta >= 8 || alpha >= 8 {
        return Err(Error::InvalidInput(format!(
            "butterfly needs alpha in F_8 and nonzero beta in F_8 (got {alpha}, {beta})"
        )));
    }
    let f = butterfly_field();
    let cube = |v: u16| f.pow(v, 3);
    // 3 * 5 = 15 = 1 mod 7, so cube roots are fifth powers
    let cube_root = |v: u16| f.pow(v, 5);
    let r = |x: u16, y: u16| cube(x ^ f.mul(alpha, y)) ^ f.mul(beta, cube(y));
    let r_inv = |v: u16, y: u16| cube_root(v ^ f.mul(beta, cube(y))) ^ f.mul(alpha, y);
    Lut::from_fn(6, |input| {
        let (x, y) = (input & 7, input >> 3);
        let z = r_inv(x, y);
        r(y, z) | (z << 3)
    })
}

/// A trace-zero nonzero element of F_8 (the smallest one).
pub fn butterfly_alpha() -> u16 {
    let f = butterfly_field();
    (1..8).find(|&a| !f.trace(a)).expect("trace-zero elements exist")
}
