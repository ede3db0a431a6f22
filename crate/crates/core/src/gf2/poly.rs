//! Polynomials over F2 stored as coefficient bitsets (bit `i` is the
//! coefficient of `X^i`).

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest degree a polynomial may reach.
pub const MAX_DEGREE: u32 = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Poly(u64);

impl Gf2Poly {
    pub const ZERO: Gf2Poly = Gf2Poly(0);
    pub const ONE: Gf2Poly = Gf2Poly(1);
    pub const X: Gf2Poly = Gf2Poly(2);
    /// `X + 1`
    pub const X_PLUS_ONE: Gf2Poly = Gf2Poly(3);

    pub const fn from_bits(bits: u64) -> Self {
        Gf2Poly(bits)
    }

    pub fn monomial(k: u32) -> Self {
        assert!(k <= MAX_DEGREE, "degree {k} exceeds {MAX_DEGREE}");
        Gf2Poly(1 << k)
    }

    /// Builds `sum X^e` over the given exponents (repeated exponents cancel).
    pub fn from_exponents(exps: &[u32]) -> Self {
        exps.iter()
            .fold(Gf2Poly::ZERO, |acc, &e| acc + Gf2Poly::monomial(e))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros())
        }
    }

    pub fn coeff(self, i: u32) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    pub fn is_monic(self) -> bool {
        !self.is_zero()
    }

    pub fn constant_term(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(self, divisor: Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.0;
        let mut quot = 0u64;
        while let Some(rd) = Gf2Poly(rem).degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot |= 1 << shift;
            rem ^= divisor.0 << shift;
        }
        (Gf2Poly(quot), Gf2Poly(rem))
    }

    pub fn rem(self, divisor: Gf2Poly) -> Gf2Poly {
        self.divrem(divisor).1
    }

    pub fn divides(self, other: Gf2Poly) -> bool {
        other.rem(self).is_zero()
    }

    pub fn gcd(self, other: Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a.rem(b);
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(self, other: Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::ZERO;
        }
        let g = self.gcd(other);
        self.divrem(g).0 * other
    }

    pub fn pow(self, e: u32) -> Gf2Poly {
        let mut acc = Gf2Poly::ONE;
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    /// `self * other mod modulus`; operands must already be reduced.
    pub fn mul_mod(self, other: Gf2Poly, modulus: Gf2Poly) -> Gf2Poly {
        let d = modulus.degree().expect("zero modulus");
        let mut a = self.0;
        let mut b = other.0;
        let mut acc = 0u64;
        let top = 1u64 << d;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= modulus.0;
            }
        }
        Gf2Poly(acc)
    }

    /// `X^e mod modulus`.
    pub fn x_pow_mod(e: u64, modulus: Gf2Poly) -> Gf2Poly {
        let mut result = Gf2Poly::ONE.rem(modulus);
        let mut base = Gf2Poly::X.rem(modulus);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_mod(base, modulus);
            }
            base = base.mul_mod(base, modulus);
            e >>= 1;
        }
        result
    }

    /// Rabin-style irreducibility via trial division by all irreducibles of
    /// degree at most half.
    pub fn is_irreducible(self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        if !self.constant_term() {
            return false;
        }
        for k in 1..=d / 2 {
            for &f in irreducibles_of_degree(k) {
                if f.divides(self) {
                    return false;
                }
            }
        }
        true
    }

    /// Factorization into irreducibles with multiplicities, sorted by factor.
    pub fn factor(self) -> Vec<(Gf2Poly, u32)> {
        assert!(!self.is_zero(), "cannot factor zero");
        let mut rest = self;
        let mut out = Vec::new();
        let d = rest.degree().unwrap();
        'outer: for k in 1..=d {
            if rest.degree().unwrap() < k {
                break;
            }
            for &f in irreducibles_of_degree(k) {
                let mut mult = 0;
                while f.divides(rest) {
                    rest = rest.divrem(f).0;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((f, mult));
                }
                if rest.degree() == Some(0) {
                    break 'outer;
                }
            }
        }
        out
    }

    /// Multiplicative order of `X` modulo `self`, i.e. the least `e >= 1`
    /// with `self | X^e + 1`. Requires a nonzero constant term.
    pub fn order(self) -> Result<u64> {
        let d = self
            .degree()
            .ok_or_else(|| Error::InvalidPolynomial("zero polynomial has no order".into()))?;
        if !self.constant_term() {
            return Err(Error::InvalidPolynomial(format!(
                "{self} has zero constant term"
            )));
        }
        if d == 0 {
            return Ok(1);
        }
        let mut order = 1u64;
        let mut max_mult = 1u32;
        for (f, mult) in self.factor() {
            order = lcm_u64(order, irreducible_order(f));
            max_mult = max_mult.max(mult);
        }
        // (f^m) has order ord(f) * 2^ceil(log2 m)
        let mut two_pow = 1u64;
        while two_pow < max_mult as u64 {
            two_pow *= 2;
        }
        Ok(order * two_pow)
    }

    /// Polynomial whose roots are the inverses of the roots of `self`.
    pub fn reciprocal(self) -> Gf2Poly {
        let Some(d) = self.degree() else {
            return self;
        };
        let mut out = 0u64;
        for i in 0..=d {
            if self.coeff(i) {
                out |= 1 << (d - i);
            }
        }
        Gf2Poly(out)
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches("0x");
        u64::from_str_radix(s, 16)
            .map(Gf2Poly)
            .map_err(|e| Error::InvalidPolynomial(format!("{s}: {e}")))
    }
}

fn irreducible_order(f: Gf2Poly) -> u64 {
    let d = f.degree().unwrap();
    if f == Gf2Poly::X_PLUS_ONE {
        return 1;
    }
    let group = (1u64 << d) - 1;
    let mut best = group;
    for p in prime_factors(group) {
        while best % p == 0 && Gf2Poly::x_pow_mod(best / p, f) == Gf2Poly::ONE {
            best /= p;
        }
    }
    best
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn is_prime(m: u64) -> bool {
    m >= 2 && prime_factors(m) == vec![m]
}

/// All irreducible polynomials of degree `d` (1..=24), ascending.
pub fn irreducibles_of_degree(d: u32) -> &'static [Gf2Poly] {
    static TABLE: OnceLock<Vec<Vec<Gf2Poly>>> = OnceLock::new();
    const MAX_TABLE: u32 = 12;
    assert!((1..=MAX_TABLE).contains(&d), "degree {d} outside table");
    let table = TABLE.get_or_init(|| {
        let mut table: Vec<Vec<Gf2Poly>> = vec![Vec::new(); MAX_TABLE as usize + 1];
        // sieve: mark products of lower-degree irreducibles
        for deg in 1..=MAX_TABLE {
            let lo = 1u64 << deg;
            let mut composite = vec![false; 1 << deg];
            for a in 1..deg {
                let b = deg - a;
                if a > b {
                    continue;
                }
                // products of an irreducible of degree a with any poly of degree b
                for &f in &table[a as usize] {
                    for g in (1u64 << b)..(1u64 << (b + 1)) {
                        let prod = (f * Gf2Poly(g)).0;
                        composite[(prod - lo) as usize] = true;
                    }
                }
            }
            table[deg as usize] = (lo..(lo << 1))
                .filter(|&q| !composite[(q - lo) as usize])
                .map(Gf2Poly)
                .collect();
        }
        table
    });
    &table[d as usize]
}

impl Add for Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: Gf2Poly) -> Gf2Poly {
        Gf2Poly(self.0 ^ rhs.0)
    }
}

impl Mul for Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: Gf2Poly) -> Gf2Poly {
        if let (Some(a), Some(b)) = (self.degree(), rhs.degree()) {
            assert!(a + b <= MAX_DEGREE, "product degree {} overflows", a + b);
        }
        let mut acc = 0u64;
        let mut b = rhs.0;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= self.0 << shift;
            }
            b >>= 1;
            shift += 1;
        }
        Gf2Poly(acc)
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=d).rev() {
            if !self.coeff(i) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    /// Accepts `x^6+x^3+x^2+1` (case-insensitive, spaces allowed) or a hex
    /// bitset prefixed with `0x`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(hex) = compact.strip_prefix("0x") {
            return Gf2Poly::from_hex(hex);
        }
        if compact.is_empty() {
            return Err(Error::InvalidPolynomial("empty".into()));
        }
        let mut acc = Gf2Poly::ZERO;
        for term in compact.split('+') {
            let term = term.to_ascii_lowercase();
            let exp = match term.as_str() {
                "0" => continue,
                "1" => 0,
                "x" => 1,
                t => {
                    let e = t
                        .strip_prefix("x^")
                        .ok_or_else(|| Error::InvalidPolynomial(format!("bad term '{t}'")))?;
                    e.parse::<u32>()
                        .ok()
                        .filter(|&e| e <= MAX_DEGREE)
                        .ok_or_else(|| Error::InvalidPolynomial(format!("bad exponent '{e}'")))?
                }
            };
            acc = acc + Gf2Poly::monomial(exp);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["x^6+x^3+x^2+1", "x+1", "1", "x", "x^7+x^6+x^5+x^4+x^3+x^2+1"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("X^3 + X + 1"), Gf2Poly::from_bits(0b1011));
        assert_eq!(p("0x13"), Gf2Poly::from_bits(0x13));
        assert!("x^".parse::<Gf2Poly>().is_err());
        assert!("y+1".parse::<Gf2Poly>().is_err());
    }

    #[test]
    fn zero_degree_is_sentinel() {
        assert_eq!(Gf2Poly::ZERO.degree(), None);
        assert_eq!(Gf2Poly::ONE.degree(), Some(0));
    }

    #[test]
    fn division_identity() {
        let a = p("x^9+x^4+x+1");
        let b = p("x^3+x+1");
        let (q, r) = a.divrem(b);
        assert_eq!(q * b + r, a);
        assert!(r.degree().unwrap_or(0) < 3);
    }

    #[test]
    fn irreducible_counts() {
        // necklace counts of irreducible binary polynomials
        let expected = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335];
        for (d, &count) in (1..=12).zip(expected.iter()) {
            assert_eq!(irreducibles_of_degree(d).len(), count, "degree {d}");
        }
    }

    #[test]
    fn factor_x7_plus_1() {
        let f = p("x^7+1").factor();
        assert_eq!(
            f,
            vec![(p("x+1"), 1), (p("x^3+x+1"), 1), (p("x^3+x^2+1"), 1)]
        );
        assert_eq!(p("x^4+x^3+x^2+1").factor(), vec![(p("x+1"), 1), (p("x^3+x+1"), 1)]);
        assert_eq!(p("x^2+1").factor(), vec![(p("x+1"), 2)]);
    }

    #[test]
    fn orders() {
        assert_eq!(p("x+1").order().unwrap(), 1);
        assert_eq!(p("x^2+1").order().unwrap(), 2);
        assert_eq!(p("x^3+x+1").order().unwrap(), 7);
        assert_eq!(p("x^6+x^5+x^4+x^3+x^2+x+1").order().unwrap(), 7);
        assert_eq!(p("x^4+x^3+x^2+x+1").order().unwrap(), 5);
        assert_eq!(p("x^8+x^4+x^3+x+1").order().unwrap(), 51);
        assert!(p("x^2+x").order().is_err());
    }

    #[test]
    fn reciprocal_swaps_cubics() {
        assert_eq!(p("x^3+x+1").reciprocal(), p("x^3+x^2+1"));
    }
}
