use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_N: usize = 12;

/// Checks `1 <= n <= MAX_N`.
pub fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

/// An element of F2^n packed into the low `n` bits of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    bits: u16,
    n: u8,
}

impl BitVec {
    pub fn new(bits: u16, n: usize) -> Result<Self> {
        check_dimension(n)?;
        if bits >> n != 0 {
            return Err(Error::InvalidInput(format!(
                "vector {bits:#x} has bits above dimension {n}"
            )));
        }
        Ok(BitVec { bits, n: n as u8 })
    }

    pub fn zero(n: usize) -> Self {
        BitVec { bits: 0, n: n as u8 }
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Standard inner product over F2.
    pub fn dot(self, other: BitVec) -> bool {
        (self.bits & other.bits).count_ones() & 1 == 1
    }
}

impl BitXor for BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: BitVec) -> BitVec {
        debug_assert_eq!(self.n, rhs.n);
        BitVec {
            bits: self.bits ^ rhs.bits,
            n: self.n,
        }
    }
}

impl BitXorAssign for BitVec {
    fn bitxor_assign(&mut self, rhs: BitVec) {
        debug_assert_eq!(self.n, rhs.n);
        self.bits ^= rhs.bits;
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.n as usize)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_high_bits() {
        assert!(BitVec::new(0b1000, 3).is_err());
        assert!(BitVec::new(0b111, 3).is_ok());
        assert!(BitVec::new(0, 13).is_err());
    }

    #[test]
    fn xor_is_addition() {
        let a = BitVec::new(0b101, 3).unwrap();
        let b = BitVec::new(0b011, 3).unwrap();
        assert_eq!((a ^ b).bits(), 0b110);
        assert_eq!(a ^ BitVec::zero(3), a);
        assert!((a ^ a).is_zero());
    }
}
