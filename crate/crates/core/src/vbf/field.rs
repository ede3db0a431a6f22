use crate::error::{Error, Result};
use crate::gf2::{check_dimension, irreducibles_of_degree, Gf2Matrix, Gf2Poly};

/// The field F_{2^n} in polynomial basis (bit `i` = coefficient of `X^i`),
/// with log/antilog tables for a fixed primitive element.
#[derive(Clone, Debug)]
pub struct FiniteField {
    n: usize,
    modulus: Gf2Poly,
    generator: u16,
    exp: Vec<u16>,
    log: Vec<u32>,
}

/// Modulus used when none is requested explicitly.
pub fn default_modulus(n: usize) -> Result<Gf2Poly> {
    check_dimension(n)?;
    let bits: u64 = match n {
        3 => 0b1011,
        6 => 0b101_1011,
        7 => 0b1000_0011,
        8 => 0b1_0001_1011,
        _ => {
            return irreducibles_of_degree(n as u32)
                .iter()
                .copied()
                .find(|p| p.constant_term())
                .ok_or(Error::UnsupportedDimension(n))
        }
    };
    Ok(Gf2Poly::from_bits(bits))
}

impl FiniteField {
    pub fn new(modulus: Gf2Poly) -> Result<Self> {
        let n = modulus
            .degree()
            .ok_or_else(|| Error::InvalidPolynomial("zero modulus".into()))? as usize;
        check_dimension(n)?;
        if !modulus.is_irreducible() || !modulus.constant_term() {
            return Err(Error::InvalidPolynomial(format!(
                "{modulus} is not an irreducible polynomial with nonzero constant term"
            )));
        }
        let order = (1usize << n) - 1;
        let mul = |a: u16, b: u16| {
            Gf2Poly::from_bits(a as u64)
                .mul_mod(Gf2Poly::from_bits(b as u64), modulus)
                .bits() as u16
        };
        let generator = (1..=order as u16)
            .find(|&g| {
                let mut x = g;
                for i in 1..=order {
                    if x == 1 {
                        return i == order;
                    }
                    x = mul(x, g);
                }
                false
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u16; order];
        let mut log = vec![0u32; order + 1];
        let mut x = 1u16;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = x;
            log[x as usize] = i as u32;
            x = mul(x, generator);
        }
        Ok(FiniteField {
            n,
            modulus,
            generator,
            exp,
            log,
        })
    }

    pub fn with_default_modulus(n: usize) -> Result<Self> {
        FiniteField::new(default_modulus(n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Gf2Poly {
        self.modulus
    }

    /// The primitive element behind the log tables (smallest one).
    pub fn generator(&self) -> u16 {
        self.generator
    }

    /// Size of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(s as u64 % self.group_order()) as usize]
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as u64 * (e % self.group_order())) % self.group_order();
        self.exp[l as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::InvalidInput("zero has no inverse".into()));
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    /// `g^k` for the fixed generator.
    pub fn exp(&self, k: u64) -> u16 {
        self.exp[(k % self.group_order()) as usize]
    }

    pub fn log(&self, a: u16) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Absolute trace to F2.
    pub fn trace(&self, a: u16) -> bool {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.n {
            t ^= x;
            x = self.mul(x, x);
        }
        debug_assert!(t <= 1);
        t == 1
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u16) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let m = self.group_order();
        m / crate::gf2::gcd_u64(self.log[a as usize] as u64, m)
    }

    /// Matrix of `x -> a x`.
    pub fn mult_matrix(&self, a: u16) -> Gf2Matrix {
        let cols: Vec<u16> = (0..self.n).map(|j| self.mul(a, 1 << j)).collect();
        Gf2Matrix::from_columns(self.n, &cols).expect("columns within dimension")
    }

    /// Matrix of the Frobenius map `x -> x^2`.
    pub fn frobenius_matrix(&self) -> Gf2Matrix {
        let cols: Vec<u16> = (0..self.n)
            .map(|j| self.mul(1 << j, 1 << j))
            .collect();
        Gf2Matrix::from_columns(self.n, &cols).expect("columns within dimension")
    }

    /// Minimal polynomial of an element over F2.
    pub fn minimal_polynomial(&self, a: u16) -> Gf2Poly {
        crate::gf2::minimal_polynomial(&self.mult_matrix(a))
    }
}
