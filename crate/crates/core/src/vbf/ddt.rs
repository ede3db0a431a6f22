use std::collections::BTreeMap;

use super::lut::Lut;

/// Difference distribution table, row-major by input difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ddt {
    n: usize,
    counts: Vec<u32>,
}

impl Ddt {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, alpha: u16, beta: u16) -> u32 {
        self.counts[((alpha as usize) << self.n) | beta as usize]
    }

    pub fn row(&self, alpha: u16) -> &[u32] {
        let size = 1 << self.n;
        &self.counts[alpha as usize * size..(alpha as usize + 1) * size]
    }

    /// Maximum over nonzero input differences.
    pub fn uniformity(&self) -> u32 {
        self.counts[1 << self.n..].iter().copied().max().unwrap_or(0)
    }

    /// Multiset of entries over nonzero input differences as sorted
    /// `(value, count)` pairs.
    pub fn spectrum(&self) -> Vec<(u32, u64)> {
        let mut m: BTreeMap<u32, u64> = BTreeMap::new();
        for &c in &self.counts[1 << self.n..] {
            *m.entry(c).or_default() += 1;
        }
        m.into_iter().collect()
    }
}

pub fn ddt(f: &Lut) -> Ddt {
    let n = f.n();
    let size = 1usize << n;
    let t = f.table();
    let mut counts = vec![0u32; size * size];
    for alpha in 0..size {
        let row = &mut counts[alpha * size..(alpha + 1) * size];
        for x in 0..size {
            row[(t[x] ^ t[x ^ alpha]) as usize] += 1;
        }
    }
    Ddt { n, counts }
}

pub fn is_apn(f: &Lut) -> bool {
    apn_violation(f).is_none()
}

/// First `(alpha, beta, count)` with `alpha != 0` and `count > 2`.
pub fn apn_violation(f: &Lut) -> Option<(u16, u16, u32)> {
    let size = f.size();
    let t = f.table();
    let mut row = vec![0u32; size];
    for alpha in 1..size {
        row.iter_mut().for_each(|c| *c = 0);
        for x in 0..size {
            row[(t[x] ^ t[x ^ alpha]) as usize] += 1;
        }
        if let Some((beta, &c)) = row.iter().enumerate().find(|(_, &c)| c > 2) {
            return Some((alpha as u16, beta as u16, c));
        }
    }
    None
}
