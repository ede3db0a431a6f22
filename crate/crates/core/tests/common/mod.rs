//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use apn_search::gf2::Gf2Matrix;
use apn_search::vbf::{is_apn, verify_le_automorphism, Lut};

/// Every permutation of `0..2^n` with `F(0) = 0`, `F A = B F` and the APN
/// property, found by enumerating all `(2^n)!` permutations.
pub fn brute_force(a: &Gf2Matrix, b: &Gf2Matrix) -> BTreeSet<Vec<u16>> {
    let size = 1usize << a.n();
    let mut perm: Vec<u16> = (0..size as u16).collect();
    let mut out = BTreeSet::new();
    let mut c = vec![0usize; size];
    let mut check = |p: &[u16]| {
        if p[0] != 0 {
            return;
        }
        let f = Lut::new(a.n(), p.to_vec()).unwrap();
        if verify_le_automorphism(&f, a, b).unwrap() && is_apn(&f) {
            out.insert(p.to_vec());
        }
    };
    // Heap's algorithm.
    check(&perm);
    let mut i = 0;
    while i < size {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            check(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Full partial DDT recomputed from scratch: whether every nonzero input
/// difference has every output difference at most twice among defined pairs.
fn partial_apn(table: &[Option<u16>]) -> bool {
    let size = table.len();
    let mut counts = vec![0u8; size];
    for alpha in 1..size {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..size {
            if let (Some(u), Some(v)) = (table[x], table[x ^ alpha]) {
                let k = &mut counts[(u ^ v) as usize];
                *k += 1;
                if *k > 2 {
                    return false;
                }
            }
        }
    }
    true
}

/// All solutions with `F(0) = 0` by plain orbit-wise backtracking, checking
/// injectivity, orbit consistency and the full DDT from scratch at each node.
pub fn orbit_search(a: &Gf2Matrix, b: &Gf2Matrix) -> BTreeSet<Vec<u16>> {
    fn go(a: &Gf2Matrix, b: &Gf2Matrix, table: &mut Vec<Option<u16>>, out: &mut BTreeSet<Vec<u16>>) {
        let Some(x) = table.iter().position(Option::is_none) else {
            out.insert(table.iter().map(|v| v.unwrap()).collect());
            return;
        };
        for y in 0..table.len() as u16 {
            if table.contains(&Some(y)) {
                continue;
            }
            let saved = table.clone();
            let (mut u, mut v) = (x as u16, y);
            let ok = loop {
                match table[u as usize] {
                    Some(w) => break w == v,
                    None if table.contains(&Some(v)) => break false,
                    None => table[u as usize] = Some(v),
                }
                u = a.apply(u);
                v = b.apply(v);
            };
            if ok && partial_apn(table) {
                go(a, b, table, out);
            }
            *table = saved;
        }
    }
    let mut table = vec![None; 1 << a.n()];
    table[0] = Some(0);
    let mut out = BTreeSet::new();
    go(a, b, &mut table, &mut out);
    out
}

/// Orbit of `f` under `g -> cb o g o ca` for all listed pairs.
pub fn linear_orbit(f: &[u16], ca: &[Gf2Matrix], cb: &[Gf2Matrix]) -> BTreeSet<Vec<u16>> {
    let ta: Vec<Vec<u16>> = ca.iter().map(Gf2Matrix::image_table).collect();
    let tb: Vec<Vec<u16>> = cb.iter().map(Gf2Matrix::image_table).collect();
    let mut seen = BTreeSet::from([f.to_vec()]);
    let mut queue = VecDeque::from([f.to_vec()]);
    while let Some(g) = queue.pop_front() {
        for pa in &ta {
            for pb in &tb {
                let h: Vec<u16> = (0..g.len()).map(|x| pb[g[pa[x] as usize] as usize]).collect();
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
    }
    seen
}

pub fn tables(luts: &[Lut]) -> BTreeSet<Vec<u16>> {
    luts.iter().map(|l| l.table().to_vec()).collect()
}
