//! Partially defined lookup tables and the incremental partial DDT.

use crate::error::Result;
use crate::gf2::check_dimension;
use crate::vbf::Lut;

/// A lookup table under construction. Undefined entries hold `2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialLut {
    n: usize,
    table: Vec<u16>,
    used: Vec<u64>,
    defined: usize,
}

impl PartialLut {
    /// All entries undefined.
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let size = 1usize << n;
        Ok(PartialLut {
            n,
            table: vec![size as u16; size],
            used: vec![0; size.div_ceil(64)],
            defined: 0,
        })
    }

    /// The search's starting point: only `F(0) = 0` is fixed.
    pub fn pinned(n: usize) -> Result<Self> {
        let mut p = PartialLut::new(n)?;
        p.set(0, 0);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    /// The sentinel stored in undefined entries.
    #[inline]
    pub fn undef(&self) -> u16 {
        self.table.len() as u16
    }

    #[inline]
    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn get(&self, x: u16) -> Option<u16> {
        let v = self.table[x as usize];
        (v != self.undef()).then_some(v)
    }

    #[inline]
    pub fn is_defined(&self, x: u16) -> bool {
        self.table[x as usize] != self.undef()
    }

    #[inline]
    pub fn is_used(&self, y: u16) -> bool {
        (self.used[y as usize / 64] >> (y % 64)) & 1 == 1
    }

    pub fn defined_count(&self) -> usize {
        self.defined
    }

    pub fn is_complete(&self) -> bool {
        self.defined == self.table.len()
    }

    /// Defines `F(x) = y`. Both `x` and `y` must be free.
    #[inline]
    pub fn set(&mut self, x: u16, y: u16) {
        debug_assert!(!self.is_defined(x) && !self.is_used(y));
        self.table[x as usize] = y;
        self.used[y as usize / 64] |= 1 << (y % 64);
        self.defined += 1;
    }

    #[inline]
    pub fn clear(&mut self, x: u16) {
        let y = self.table[x as usize];
        debug_assert!(y != self.undef());
        self.used[y as usize / 64] &= !(1 << (y % 64));
        self.table[x as usize] = self.undef();
        self.defined -= 1;
    }

    pub fn to_lut(&self) -> Option<Lut> {
        self.is_complete()
            .then(|| Lut::new(self.n, self.table.clone()).expect("complete table is valid"))
    }
}

/// Partial DDT restricted to input differences of even weight. Entries count
/// ordered pairs, so each defined unordered pair adds 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdtAccumulator {
    n: usize,
    counts: Vec<u8>,
    even_alphas: Vec<u16>,
}

impl DdtAccumulator {
    pub fn new(n: usize) -> Self {
        let size = 1usize << n;
        DdtAccumulator {
            n,
            counts: vec![0; size * size],
            even_alphas: (1..size as u16).filter(|a| a.count_ones() % 2 == 0).collect(),
        }
    }

    /// Recomputes the accumulator for `lut` without incremental updates.
    pub fn from_scratch(lut: &PartialLut) -> Self {
        let mut acc = DdtAccumulator::new(lut.n());
        for i in 0..acc.even_alphas.len() {
            let alpha = acc.even_alphas[i];
            for x in 0..lut.size() as u16 {
                if let (Some(u), Some(v)) = (lut.get(x), lut.get(x ^ alpha)) {
                    acc.counts[((alpha as usize) << acc.n) | (u ^ v) as usize] += 1;
                }
            }
        }
        acc
    }

    pub fn get(&self, alpha: u16, beta: u16) -> u8 {
        self.counts[((alpha as usize) << self.n) | beta as usize]
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }

    /// Accounts for the newly defined entry `c`. Returns `false` as soon as
    /// some counter exceeds 2; the matching [`remove_ddt_information`] call
    /// undoes exactly the increments made so far.
    ///
    /// [`remove_ddt_information`]: DdtAccumulator::remove_ddt_information
    #[inline]
    pub fn add_ddt_information(&mut self, lut: &PartialLut, c: u16) -> bool {
        let table = lut.table();
        let undef = lut.undef();
        let fc = table[c as usize];
        for &alpha in &self.even_alphas {
            let partner = table[(c ^ alpha) as usize];
            if partner == undef {
                continue;
            }
            let v = &mut self.counts[((alpha as usize) << self.n) | (fc ^ partner) as usize];
            *v += 2;
            if *v > 2 {
                return false;
            }
        }
        true
    }

    /// Reverts [`add_ddt_information`] for entry `c`, traversing differences in
    /// the same order and stopping where the add stopped. `c` must still be
    /// defined.
    ///
    /// [`add_ddt_information`]: DdtAccumulator::add_ddt_information
    #[inline]
    pub fn remove_ddt_information(&mut self, lut: &PartialLut, c: u16) {
        let table = lut.table();
        let undef = lut.undef();
        let fc = table[c as usize];
        for &alpha in &self.even_alphas {
            let partner = table[(c ^ alpha) as usize];
            if partner == undef {
                continue;
            }
            let v = &mut self.counts[((alpha as usize) << self.n) | (fc ^ partner) as usize];
            *v -= 2;
            if *v == 2 {
                return;
            }
        }
    }
}
