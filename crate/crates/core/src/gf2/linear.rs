//! Dense bit matrices of arbitrary width for solving linear systems over F2.

/// Rows of `cols` bits each, packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRows {
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitRows {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        BitRows {
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.words.len() / self.stride
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.words[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.words[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.words[r * self.stride + c / 64] ^= 1 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn push_row(&mut self, bits: &[u64]) {
        assert_eq!(bits.len(), self.stride);
        self.words.extend_from_slice(bits);
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.words.swap(a * s + k, b * s + k);
        }
    }

    /// Reduces in place to reduced row echelon form over the first
    /// `limit` columns; returns the pivot columns in row order.
    pub fn rref(&mut self, limit: usize) -> Vec<usize> {
        let nrows = self.rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..nrows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank via forward elimination only (rows are consumed).
    pub fn rank(mut self) -> usize {
        let nrows = self.rows();
        let mut r = 0;
        for c in 0..self.cols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            // words left of the pivot are already zero in rows below
            let s = self.stride;
            let w0 = c / 64;
            let (head, tail) = self.words.split_at_mut((r + 1) * s);
            let pivot = &head[r * s + w0..(r + 1) * s];
            for row in tail.chunks_exact_mut(s) {
                if (row[w0] >> (c % 64)) & 1 == 1 {
                    for (x, y) in row[w0..].iter_mut().zip(pivot) {
                        *x ^= *y;
                    }
                }
            }
            r += 1;
        }
        r
    }
}

/// Solution set of a linear system: one particular solution plus a basis of
/// the homogeneous solutions. Vectors are bit-packed over the variables.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solves `E x = rhs` where `E` has `vars` columns. Returns `None` when
/// inconsistent.
pub fn solve(equations: &BitRows, rhs: &[bool], vars: usize) -> Option<Solution> {
    assert_eq!(equations.rows(), rhs.len());
    assert_eq!(equations.cols(), vars);
    // augment with the right-hand side as column `vars`
    let mut aug = BitRows::new(0, vars + 1);
    for (r, &b) in rhs.iter().enumerate() {
        let mut row = vec![0u64; aug.stride];
        row[..equations.stride].copy_from_slice(equations.row(r));
        if b {
            row[vars / 64] |= 1 << (vars % 64);
        }
        aug.push_row(&row);
    }
    let pivots = aug.rref(vars + 1);
    if pivots.last() == Some(&vars) {
        return None;
    }
    let words = vars.div_ceil(64).max(1);
    let mut particular = vec![0u64; words];
    for (r, &pc) in pivots.iter().enumerate() {
        if aug.get(r, vars) {
            particular[pc / 64] |= 1 << (pc % 64);
        }
    }
    let mut is_pivot = vec![false; vars];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..vars).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; words];
        v[free / 64] |= 1 << (free % 64);
        for (r, &pc) in pivots.iter().enumerate() {
            if aug.get(r, free) {
                v[pc / 64] |= 1 << (pc % 64);
            }
        }
        kernel.push(v);
    }
    Some(Solution { particular, kernel })
}

/// Basis of the null space of `E`.
pub fn null_space(equations: &BitRows, vars: usize) -> Vec<Vec<u64>> {
    let rhs = vec![false; equations.rows()];
    solve(equations, &rhs, vars)
        .expect("homogeneous systems are consistent")
        .kernel
}
