//! Builders and checkers for automorphisms of function graphs.

use super::field::FiniteField;
use super::lut::Lut;
use crate::error::{Error, Result};
use crate::gf2::{gcd_u64, minimal_polynomial, similarity_transform, Gf2Matrix};

/// Whether `F(A x) = B F(x)` for every input.
pub fn verify_le_automorphism(f: &Lut, a: &Gf2Matrix, b: &Gf2Matrix) -> Result<bool> {
    for m in [a, b] {
        if m.n() != f.n() {
            return Err(Error::DimensionMismatch {
                expected: f.n(),
                got: m.n(),
            });
        }
    }
    Ok((0..f.size() as u16).all(|x| f.get(a.apply(x)) == b.apply(f.get(x))))
}

/// Given `F` with `F A0 = B0 F`, returns a linearly equivalent `F'` with
/// `F' A = B F'`, or `None` if `A0 ~ A` or `B0 ~ B` fails.
pub fn transport_automorphism(
    f: &Lut,
    (a0, b0): (&Gf2Matrix, &Gf2Matrix),
    (a, b): (&Gf2Matrix, &Gf2Matrix),
) -> Result<Option<Lut>> {
    let (Some(pa), Some(pb)) = (similarity_transform(a0, a)?, similarity_transform(b0, b)?) else {
        return Ok(None);
    };
    f.linear_transform(&pa, &pb.inverse()?).map(Some)
}

/// Searches the maps `x -> alpha x^(2^i)` for one similar to `A` whose partner
/// `y -> alpha^d y^(2^i)` is similar to `B`, and returns `x^d` moved onto
/// `(A, B)` by [`transport_automorphism`].
pub fn monomial_for_tuple(
    field: &FiniteField,
    d: u64,
    a: &Gf2Matrix,
    b: &Gf2Matrix,
) -> Result<Option<Lut>> {
    let f = super::fixtures::monomial_lut(field, d);
    let (qa, qb) = (minimal_polynomial(a), minimal_polynomial(b));
    let frob = field.frobenius_matrix();
    let mut s = Gf2Matrix::identity(field.n());
    for _ in 0..field.n() {
        for alpha in 1..1u16 << field.n() {
            let ma = field.mult_matrix(alpha).mul(&s);
            let mb = field.mult_matrix(field.pow(alpha, d)).mul(&s);
            if minimal_polynomial(&ma) != qa || minimal_polynomial(&mb) != qb {
                continue;
            }
            if let Some(g) = transport_automorphism(&f, (&ma, &mb), (a, b))? {
                return Ok(Some(g));
            }
        }
        s = frob.mul(&s);
    }
    Ok(None)
}

/// The affine map `(x, y) -> (x + a, y + L_a(x) + F(a) + L_a(a) + F(0))` on
/// F2^n x F2^n, where `L_a(x) = F(x + a) + F(x) + F(a) + F(0)` is linear for
/// quadratic `F`.
#[derive(Clone, Debug)]
pub struct GraphShift {
    alpha: u16,
    /// `L_a` as a lookup table
    linear_part: Vec<u16>,
    offset: u16,
}

impl GraphShift {
    pub fn alpha(&self) -> u16 {
        self.alpha
    }

    pub fn apply(&self, x: u16, y: u16) -> (u16, u16) {
        (
            x ^ self.alpha,
            y ^ self.linear_part[x as usize] ^ self.offset,
        )
    }

    /// Whether the map sends every graph point `(x, F(x))` back into the graph.
    pub fn preserves_graph(&self, f: &Lut) -> bool {
        (0..f.size() as u16).all(|x| {
            let (u, v) = self.apply(x, f.get(x));
            f.get(u) == v
        })
    }
}

pub fn quadratic_shift_automorphism(f: &Lut, alpha: u16) -> Result<GraphShift> {
    let deg = f.algebraic_degree();
    if deg > 2 {
        return Err(Error::NotQuadratic(deg));
    }
    if alpha == 0 || alpha as usize >= f.size() {
        return Err(Error::InvalidInput(format!(
            "shift {alpha:#x} must be nonzero and within dimension"
        )));
    }
    let f0 = f.get(0);
    let fa = f.get(alpha);
    let linear_part: Vec<u16> = (0..f.size() as u16)
        .map(|x| f.get(x ^ alpha) ^ f.get(x) ^ fa ^ f0)
        .collect();
    let offset = fa ^ linear_part[alpha as usize] ^ f0;
    Ok(GraphShift {
        alpha,
        linear_part,
        offset,
    })
}

/// For `F(x) = sum c_i x^{a_i}`, multiplication matrices `(A, B)` by `g` and
/// `g^{a_0}` where `g` has order `gcd(a_1 - a_0, ..., 2^n - 1)`. `None` when
/// that gcd is 1.
pub fn multinomial_automorphism(
    field: &FiniteField,
    exponents: &[u64],
) -> Option<(Gf2Matrix, Gf2Matrix)> {
    let (&a0, rest) = exponents.split_first()?;
    let m = field.group_order();
    let g = rest
        .iter()
        .fold(m, |acc, &a| gcd_u64(acc, a.abs_diff(a0) % m));
    if g <= 1 {
        return None;
    }
    let alpha = field.exp(m / g);
    let a = field.mult_matrix(alpha);
    let b = field.mult_matrix(field.pow(alpha, a0));
    Some((a, b))
}

/// The pair `(S, S)` with `S` the Frobenius matrix; every polynomial with
/// coefficients in F2 commutes with it.
pub fn frobenius_automorphism(field: &FiniteField) -> (Gf2Matrix, Gf2Matrix) {
    let s = field.frobenius_matrix();
    (s, s)
}

/// `diag(z^3, z)` acting on the `(x, y)` halves of a butterfly input.
pub fn butterfly_automorphism(zeta: u16) -> Result<Gf2Matrix> {
    let f = super::fixtures::butterfly_field();
    if zeta == 0 || zeta >= 8 {
        return Err(Error::InvalidInput("zeta must be a nonzero element of F_8".into()));
    }
    f.mult_matrix(f.pow(zeta, 3)).direct_sum(&f.mult_matrix(zeta))
}
