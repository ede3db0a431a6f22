use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{check_dimension, Gf2Matrix};

/// A total function F2^n -> F2^n given by its lookup table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lut {
    n: usize,
    table: Vec<u16>,
}

impl Lut {
    pub fn new(n: usize, table: Vec<u16>) -> Result<Self> {
        check_dimension(n)?;
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: table.len(),
            });
        }
        if let Some((x, &y)) = table.iter().enumerate().find(|(_, &y)| y >> n != 0) {
            return Err(Error::InvalidInput(format!(
                "entry {x} = {y:#x} is out of range for n = {n}"
            )));
        }
        Ok(Lut { n, table })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u16) -> u16) -> Result<Self> {
        check_dimension(n)?;
        Lut::new(n, (0..1u32 << n).map(|x| f(x as u16)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Lut::from_fn(n, |x| x).expect("valid dimension")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn table(&self) -> &[u16] {
        &self.table
    }

    #[inline]
    pub fn get(&self, x: u16) -> u16 {
        self.table[x as usize]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.size()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    pub fn inverse(&self) -> Result<Lut> {
        if !self.is_permutation() {
            return Err(Error::InvalidInput("function is not a permutation".into()));
        }
        let mut inv = vec![0u16; self.size()];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        Lut::new(self.n, inv)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Lut) -> Result<Lut> {
        if self.n != inner.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: inner.n,
            });
        }
        Lut::new(self.n, inner.table.iter().map(|&x| self.get(x)).collect())
    }

    /// `x -> post(F(pre x) + c_in) + c_out`, i.e. affine equivalence.
    pub fn affine_transform(
        &self,
        pre: &Gf2Matrix,
        pre_const: u16,
        post: &Gf2Matrix,
        post_const: u16,
    ) -> Result<Lut> {
        for m in [pre, post] {
            if m.n() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: m.n(),
                });
            }
        }
        Lut::from_fn(self.n, |x| post.apply(self.get(pre.apply(x) ^ pre_const)) ^ post_const)
    }

    /// `x -> post(F(pre x))`.
    pub fn linear_transform(&self, pre: &Gf2Matrix, post: &Gf2Matrix) -> Result<Lut> {
        self.affine_transform(pre, 0, post, 0)
    }

    /// Degree of the algebraic normal form (max over coordinates).
    pub fn algebraic_degree(&self) -> u32 {
        let mut anf: Vec<u16> = self.table.clone();
        // Möbius transform on all coordinates at once
        let size = self.size();
        let mut step = 1;
        while step < size {
            for x in 0..size {
                if x & step != 0 {
                    anf[x] ^= anf[x ^ step];
                }
            }
            step <<= 1;
        }
        anf.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(u, _)| u.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Space-separated hex fields, zero-padded to the output width.
    pub fn to_hex_line(&self) -> String {
        let width = self.n.div_ceil(4);
        self.table
            .iter()
            .map(|y| format!("{y:0width$x}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses one wire-format line; `n` is inferred from the field count.
    pub fn parse_hex_line(line: &str, line_no: usize) -> Result<Lut> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let len = fields.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2^n hex fields, found {len}"),
            });
        }
        let n = len.trailing_zeros() as usize;
        let table = fields
            .iter()
            .map(|f| {
                u16::from_str_radix(f, 16).map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad hex field '{f}': {e}"),
                })
            })
            .collect::<Result<Vec<u16>>>()?;
        Lut::new(n, table).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })
    }
}

impl fmt::Debug for Lut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lut(n={}; {})", self.n, self.to_hex_line())
    }
}
