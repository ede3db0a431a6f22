use std::fmt;

use super::bitvec::{check_dimension, BitVec, MAX_N};
use super::poly::Gf2Poly;
use crate::error::{Error, Result};

/// An n x n matrix over F2. Row `i` is a word whose bit `j` is entry (i, j);
/// vectors are columns, so `apply` computes `M x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    n: u8,
    rows: [u16; MAX_N],
}

#[inline]
fn parity(x: u16) -> u16 {
    (x.count_ones() & 1) as u16
}

impl Gf2Matrix {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "unsupported dimension {n}");
        Gf2Matrix {
            n: n as u8,
            rows: [0; MAX_N],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zero(n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(n: usize, rows: &[u16]) -> Result<Self> {
        check_dimension(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut m = Gf2Matrix::zero(n);
        for (i, &r) in rows.iter().enumerate() {
            if r >> n != 0 {
                return Err(Error::InvalidInput(format!(
                    "row {i} ({r:#x}) has bits above dimension {n}"
                )));
            }
            m.rows[i] = r;
        }
        Ok(m)
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(n: usize, cols: &[u16]) -> Result<Self> {
        Ok(Gf2Matrix::from_rows(n, cols)?.transpose())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.n as usize]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::new(self.rows[i], self.n()).expect("row within dimension")
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Column `j` as a word.
    pub fn column(&self, j: usize) -> u16 {
        let mut c = 0;
        for i in 0..self.n() {
            c |= ((self.rows[i] >> j) & 1) << i;
        }
        c
    }

    /// Companion matrix: subdiagonal ones, last column holds `q_0..q_{n-1}`.
    pub fn companion(q: Gf2Poly) -> Result<Self> {
        let d = q
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidPolynomial(format!("{q} has degree < 1")))?
            as usize;
        check_dimension(d)?;
        if !q.constant_term() {
            return Err(Error::InvalidPolynomial(format!(
                "{q} has zero constant term; companion matrix would be singular"
            )));
        }
        let mut m = Gf2Matrix::zero(d);
        for i in 0..d {
            if i >= 1 {
                m.rows[i] |= 1 << (i - 1);
            }
            if q.coeff(i as u32) {
                m.rows[i] |= 1 << (d - 1);
            }
        }
        Ok(m)
    }

    /// `self ⊕ other` with `self` acting on the low coordinates.
    pub fn direct_sum(&self, other: &Gf2Matrix) -> Result<Self> {
        let (a, b) = (self.n(), other.n());
        check_dimension(a + b)?;
        let mut m = Gf2Matrix::zero(a + b);
        m.rows[..a].copy_from_slice(self.rows());
        for i in 0..b {
            m.rows[a + i] = other.rows[i] << a;
        }
        Ok(m)
    }

    /// Block-diagonal matrix, first block on the lowest coordinates.
    pub fn block_diag(blocks: &[Gf2Matrix]) -> Result<Self> {
        let (first, rest) = blocks
            .split_first()
            .ok_or_else(|| Error::InvalidInput("no blocks".into()))?;
        rest.iter().try_fold(*first, |acc, b| acc.direct_sum(b))
    }

    #[inline]
    pub fn apply(&self, x: u16) -> u16 {
        let mut y = 0;
        for i in 0..self.n() {
            y |= parity(self.rows[i] & x) << i;
        }
        y
    }

    pub fn apply_vec(&self, x: BitVec) -> Result<BitVec> {
        self.check_same(x.dim())?;
        BitVec::new(self.apply(x.bits()), self.n())
    }

    /// Images of every point, indexed by input.
    pub fn image_table(&self) -> Vec<u16> {
        (0..1u32 << self.n()).map(|x| self.apply(x as u16)).collect()
    }

    fn check_same(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut m = Gf2Matrix::zero(self.n());
        for i in 0..self.n() {
            let mut acc = 0;
            let mut r = self.rows[i];
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                acc ^= other.rows[j];
                r &= r - 1;
            }
            m.rows[i] = acc;
        }
        m
    }

    pub fn add(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut m = *self;
        for i in 0..self.n() {
            m.rows[i] ^= other.rows[i];
        }
        m
    }

    pub fn pow(&self, mut e: u64) -> Gf2Matrix {
        let mut result = Gf2Matrix::identity(self.n());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zero(self.n());
        for i in 0..self.n() {
            m.rows[i] = self.column(i);
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == Gf2Matrix::identity(self.n())
    }

    pub fn is_zero(&self) -> bool {
        self.rows().iter().all(|&r| r == 0)
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<u16> = self.rows().to_vec();
        let mut rank = 0;
        for col in 0..self.n() {
            let bit = 1 << col;
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n()
    }

    pub fn inverse(&self) -> Result<Gf2Matrix> {
        let n = self.n();
        let mut a: Vec<u16> = self.rows().to_vec();
        let mut inv: Vec<u16> = (0..n).map(|i| 1u16 << i).collect();
        for col in 0..n {
            let bit = 1 << col;
            let p = (col..n).find(|&r| a[r] & bit != 0).ok_or(Error::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Gf2Matrix::from_rows(n, &inv)
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<u16> {
        let n = self.n();
        let mut rows: Vec<u16> = self.rows().to_vec();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let bit = 1 << col;
            let Some(p) = (rank..n).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = 1u16 << free;
            for (r, &pc) in pivots.iter().enumerate() {
                if rows[r] >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// `q(M)` by Horner's rule.
    pub fn eval_poly(&self, q: Gf2Poly) -> Gf2Matrix {
        let n = self.n();
        let mut acc = Gf2Matrix::zero(n);
        let Some(d) = q.degree() else {
            return acc;
        };
        let id = Gf2Matrix::identity(n);
        for i in (0..=d).rev() {
            acc = acc.mul(self);
            if q.coeff(i) {
                acc = acc.add(&id);
            }
        }
        acc
    }

    /// Rows as lowercase hex words, one per line.
    pub fn to_hex_lines(&self) -> String {
        self.rows()
            .iter()
            .map(|r| format!("{r:x}"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn hex_rows(&self) -> Vec<String> {
        self.rows().iter().map(|r| format!("{r:x}")).collect()
    }

    /// Parses hex row words; the dimension is the number of rows.
    pub fn from_hex_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let s = s.as_ref().trim();
                u16::from_str_radix(s.trim_start_matches("0x"), 16).map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("bad hex row '{s}': {e}"),
                })
            })
            .collect::<Result<Vec<u16>>>()?;
        Gf2Matrix::from_rows(parsed.len(), &parsed)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n() {
            let s: String = (0..self.n())
                .map(|j| if self.entry(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn companion_degree_one() {
        let m = Gf2Matrix::companion(p("x+1")).unwrap();
        assert_eq!(m.rows(), &[1]);
    }

    #[test]
    fn companion_cubic_last_column() {
        let m = Gf2Matrix::companion(p("x^3+x+1")).unwrap();
        assert_eq!(m.column(2), 0b011);
        assert_eq!(m.column(0), 0b010);
        assert_eq!(m.column(1), 0b100);
        assert!(Gf2Matrix::companion(p("x^3+x")).is_err());
    }

    #[test]
    fn companion_is_multiplication_by_x() {
        let q = p("x^6+x^4+x^3+x+1");
        let m = Gf2Matrix::companion(q).unwrap();
        for a in 0..64u64 {
            let prod = Gf2Poly::from_bits(a).mul_mod(Gf2Poly::X, q);
            assert_eq!(m.apply(a as u16) as u64, prod.bits());
        }
        assert!(m.eval_poly(q).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Gf2Matrix::companion(p("x^5+x^2+1")).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        for x in 0..32 {
            assert_eq!(inv.apply(m.apply(x)), x);
        }
        assert!(Gf2Matrix::zero(3).inverse().is_err());
    }

    #[test]
    fn apply_is_linear_and_matches_mul() {
        let a = Gf2Matrix::from_rows(4, &[0b1011, 0b0110, 0b1100, 0b0001]).unwrap();
        let b = Gf2Matrix::companion(p("x^4+x+1")).unwrap();
        for x in 0..16u16 {
            for y in 0..16u16 {
                assert_eq!(a.apply(x ^ y), a.apply(x) ^ a.apply(y));
            }
            assert_eq!(a.mul(&b).apply(x), a.apply(b.apply(x)));
        }
    }

    #[test]
    fn kernel_spans_null_space() {
        let m = Gf2Matrix::identity(5).add(&Gf2Matrix::companion(p("x^5+1")).unwrap());
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], 0b11111);
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn direct_sum_places_blocks() {
        let a = Gf2Matrix::identity(1);
        let c = Gf2Matrix::companion(p("x^2+1")).unwrap();
        let m = a.direct_sum(&c).unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.apply(0b001), 0b001);
        assert_eq!(m.apply(0b010), 0b100);
    }

    #[test]
    fn hex_round_trip() {
        let m = Gf2Matrix::companion(p("x^7+x+1")).unwrap();
        let back = Gf2Matrix::from_hex_rows(&m.hex_rows()).unwrap();
        assert_eq!(m, back);
    }
}
