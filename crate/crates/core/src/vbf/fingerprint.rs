//! CCZ-invariant fingerprints. Equal fingerprints are necessary for
//! CCZ-equivalence; different fingerprints prove inequivalence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ddt::ddt;
use super::lut::Lut;
use crate::gf2::linear::BitRows;

/// Largest dimension for which the design invariants (graph rank and
/// pair-sum correlation) are computed; both cost about 2^{4n} word operations.
pub const DESIGN_INVARIANT_MAX_N: usize = 7;

pub const FINGERPRINT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CczFingerprint {
    pub n: usize,
    /// `(|W_F(a, b)|, multiplicity)` over all `a` and `b != 0`, sorted.
    pub extended_walsh: Vec<(u32, u64)>,
    /// `(DDT entry, multiplicity)` over input differences `!= 0`, sorted.
    pub differential_spectrum: Vec<(u32, u64)>,
    /// F2-rank of the incidence matrix of the translates of the graph;
    /// `None` above [`DESIGN_INVARIANT_MAX_N`], as is the next field.
    pub gamma_rank: Option<u64>,
    /// See [`pair_sum_correlation`].
    pub pair_sum_correlation: Option<Vec<(u32, u64)>>,
}

impl CczFingerprint {
    /// Canonical JSON with a schema tag; field and multiset order are fixed.
    pub fn to_canonical_json(&self) -> String {
        #[derive(Serialize)]
        struct Tagged<'a> {
            schema: u32,
            #[serde(flatten)]
            fp: &'a CczFingerprint,
        }
        serde_json::to_string(&Tagged {
            schema: FINGERPRINT_SCHEMA,
            fp: self,
        })
        .expect("fingerprint serializes")
    }

    /// Lowercase hex SHA-256 of the canonical JSON.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_json().as_bytes()))
    }
}

/// Walsh coefficients of the component `b . F` for every mask `a`.
fn component_walsh(f: &Lut, b: u16) -> Vec<i32> {
    let size = f.size();
    let mut w: Vec<i32> = f
        .table()
        .iter()
        .map(|&y| if (y & b).count_ones() & 1 == 1 { -1 } else { 1 })
        .collect();
    let mut h = 1;
    while h < size {
        for i in (0..size).step_by(2 * h) {
            for j in i..i + h {
                let (u, v) = (w[j], w[j + h]);
                w[j] = u + v;
                w[j + h] = u - v;
            }
        }
        h <<= 1;
    }
    w
}

pub fn extended_walsh_spectrum(f: &Lut) -> Vec<(u32, u64)> {
    let mut m: BTreeMap<u32, u64> = BTreeMap::new();
    for b in 1..f.size() as u16 {
        for c in component_walsh(f, b) {
            *m.entry(c.unsigned_abs()).or_default() += 1;
        }
    }
    m.into_iter().collect()
}

/// Rank over F2 of the `2^{2n} x 2^{2n}` matrix whose row `(a, b)` is the
/// indicator of `{(u, F(u + a) + b)}`.
pub fn gamma_rank(f: &Lut) -> u64 {
    let n = f.n();
    let size = f.size();
    let dim = size * size;
    let mut rows = BitRows::new(dim, dim);
    for a in 0..size {
        for b in 0..size {
            let r = a | (b << n);
            for u in 0..size {
                let v = (f.get((u ^ a) as u16) as usize) ^ b;
                rows.set(r, u | (v << n), true);
            }
        }
    }
    rows.rank() as u64
}

fn fwht(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for chunk in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h <<= 1;
    }
}

/// Multiset of `c(v, w) = #{h in P ∩ (P + w) : h + v in G}` over all pairs
/// `(v, w)` of F2^{2n}, where `G` is the graph and `P` the set of sums of two
/// distinct graph points. Affine permutations of F2^{2n} permute the index
/// pairs, so the multiset is a CCZ invariant.
pub fn pair_sum_correlation(f: &Lut) -> Vec<(u32, u64)> {
    let n = f.n();
    let size = f.size();
    let dim = size * size;
    let graph: Vec<usize> = (0..size).map(|x| x | ((f.get(x as u16) as usize) << n)).collect();
    let mut in_p = vec![false; dim];
    for (i, &g) in graph.iter().enumerate() {
        for &h in &graph[i + 1..] {
            in_p[g ^ h] = true;
        }
    }
    let mut g_hat = vec![0i32; dim];
    for &g in &graph {
        g_hat[g] = 1;
    }
    fwht(&mut g_hat);
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut q = vec![0i32; dim];
    for w in 0..dim {
        for (h, slot) in q.iter_mut().enumerate() {
            *slot = (in_p[h] && in_p[h ^ w]) as i32;
        }
        fwht(&mut q);
        for (a, b) in q.iter_mut().zip(&g_hat) {
            *a *= *b;
        }
        fwht(&mut q);
        for &c in &q {
            *counts.entry((c / dim as i32) as u32).or_default() += 1;
        }
    }
    counts.into_iter().collect()
}

pub fn fingerprint(f: &Lut) -> CczFingerprint {
    CczFingerprint {
        n: f.n(),
        extended_walsh: extended_walsh_spectrum(f),
        differential_spectrum: ddt(f).spectrum(),
        gamma_rank: (f.n() <= DESIGN_INVARIANT_MAX_N).then(|| gamma_rank(f)),
        pair_sum_correlation: (f.n() <= DESIGN_INVARIANT_MAX_N).then(|| pair_sum_correlation(f)),
    }
}
