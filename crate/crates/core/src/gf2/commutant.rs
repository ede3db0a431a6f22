//! Centralizers of invertible matrices and the extendability test used for
//! fixed-point seeding.

use std::collections::{BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::canonical::{fixed_space, intertwiners, random_combination, words_to_matrix};
use super::linear::{solve, BitRows};
use super::matrix::Gf2Matrix;

/// Default number of elements returned by [`commutant`].
pub const DEFAULT_COMMUTANT_BUDGET: usize = 1 << 16;

/// Centralizer dimensions up to this are enumerated exhaustively.
const EXHAUSTIVE_DIM: usize = 20;

/// Invertible matrices commuting with `m`.
///
/// When the full centralizer fits in `budget` it is returned completely.
/// Otherwise the result is a subset of at most `budget` elements grown by
/// closing a few random invertible centralizer elements (and `m`) under
/// multiplication. The identity and `m` are always present. Output is sorted.
pub fn commutant(m: &Gf2Matrix, budget: usize) -> Vec<Gf2Matrix> {
    let n = m.n();
    let basis = intertwiners(m, m);
    let budget = budget.max(2);
    if basis.len() <= EXHAUSTIVE_DIM {
        let mut all = Vec::new();
        let mut cur = Gf2Matrix::zero(n);
        // Gray-code walk over the solution space
        for i in 1u64..(1u64 << basis.len()) {
            cur = cur.add(&basis[i.trailing_zeros() as usize]);
            if cur.is_invertible() {
                all.push(cur);
            }
        }
        if all.len() <= budget {
            all.sort();
            return all;
        }
    }
    sampled_closure(m, &basis, budget)
}

fn sampled_closure(m: &Gf2Matrix, basis: &[Gf2Matrix], budget: usize) -> Vec<Gf2Matrix> {
    let n = m.n();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut gens = vec![*m];
    let mut attempts = 0;
    while gens.len() < 9 && attempts < 10_000 {
        attempts += 1;
        let c = random_combination(basis, n, &mut rng);
        if c.is_invertible() && !c.is_identity() && !gens.contains(&c) {
            gens.push(c);
        }
    }
    let id = Gf2Matrix::identity(n);
    let mut seen: BTreeSet<Gf2Matrix> = BTreeSet::new();
    seen.insert(id);
    seen.insert(*m);
    let mut queue: VecDeque<Gf2Matrix> = VecDeque::from([id]);
    'grow: while let Some(e) = queue.pop_front() {
        for g in &gens {
            if seen.len() >= budget {
                break 'grow;
            }
            let next = e.mul(g);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Whether every linear permutation of the fixed space `Ord(m, 1)` extends to
/// an invertible matrix commuting with `m`.
///
/// Checked on a generating set of `GL(k, 2)`: the transvection `v0 -> v0 + v1`
/// and the cyclic shift of the fixed-space basis. Liftable maps form a group,
/// so lifting the generators suffices.
pub fn is_extendable(m: &Gf2Matrix) -> bool {
    let fs = fixed_space(m, 1);
    let k = fs.dim;
    if k <= 1 {
        return true;
    }
    let v: Vec<u16> = fs.basis.iter().map(|b| b.bits()).collect();
    let mut transvection: Vec<u16> = v.clone();
    transvection[0] ^= v[1];
    let shift: Vec<u16> = (0..k).map(|l| v[(l + 1) % k]).collect();
    [transvection, shift]
        .iter()
        .all(|targets| lift_exists(m, &v, targets))
}

/// Searches for an invertible `X` with `X m = m X` and `X v[l] = w[l]`.
fn lift_exists(m: &Gf2Matrix, v: &[u16], w: &[u16]) -> bool {
    let n = m.n();
    let vars = n * n;
    let var = |i: usize, j: usize| i * n + j;
    let mut eqs = BitRows::new(vars + n * v.len(), vars);
    let mut rhs = vec![false; vars + n * v.len()];
    for i in 0..n {
        for j in 0..n {
            let row = var(i, j);
            for k in 0..n {
                if m.entry(i, k) {
                    eqs.flip(row, var(k, j));
                }
                if m.entry(k, j) {
                    eqs.flip(row, var(i, k));
                }
            }
        }
    }
    for (l, (&src, &dst)) in v.iter().zip(w).enumerate() {
        for i in 0..n {
            let row = vars + l * n + i;
            // (X src)_i = sum_j X[i][j] src_j
            for j in 0..n {
                if (src >> j) & 1 == 1 {
                    eqs.flip(row, var(i, j));
                }
            }
            rhs[row] = (dst >> i) & 1 == 1;
        }
    }
    let Some(sol) = solve(&eqs, &rhs, vars) else {
        return false;
    };
    let base = words_to_matrix(&sol.particular, n);
    let kernel: Vec<Gf2Matrix> = sol.kernel.iter().map(|k| words_to_matrix(k, n)).collect();
    if base.is_invertible() {
        return true;
    }
    if kernel.len() <= 16 {
        let mut cur = base;
        for i in 1u64..(1u64 << kernel.len()) {
            cur = cur.add(&kernel[i.trailing_zeros() as usize]);
            if cur.is_invertible() {
                return true;
            }
        }
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7e4d);
    (0..4096).any(|_| base.add(&random_combination(&kernel, n, &mut rng)).is_invertible())
}
