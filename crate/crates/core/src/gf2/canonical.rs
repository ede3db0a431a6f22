//! Similarity invariants: minimal polynomial, rational canonical form,
//! orders and fixed-point subspaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bitvec::BitVec;
use super::linear::{null_space, BitRows};
use super::matrix::Gf2Matrix;
use super::poly::Gf2Poly;
use crate::error::{Error, Result};

/// A matrix in block-companion form together with its invariant factors,
/// listed smallest first (`q_r | ... | q_1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RcfDecomposition {
    pub matrix: Gf2Matrix,
    pub invariant_factors: Vec<Gf2Poly>,
}

impl RcfDecomposition {
    /// Builds the block-companion matrix for a divisibility chain given
    /// smallest first.
    pub fn from_invariant_factors(factors: &[Gf2Poly]) -> Result<Self> {
        for w in factors.windows(2) {
            if !w[0].divides(w[1]) {
                return Err(Error::InvalidPolynomial(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        let blocks = factors
            .iter()
            .map(|&q| Gf2Matrix::companion(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(RcfDecomposition {
            matrix: Gf2Matrix::block_diag(&blocks)?,
            invariant_factors: factors.to_vec(),
        })
    }
}

/// Monic polynomial of least degree annihilating `v` under `m`.
fn local_minimal_polynomial(m: &Gf2Matrix, v: u16) -> Gf2Poly {
    // echelon basis of the Krylov vectors, each with the polynomial that
    // produced it
    let mut by_lead: [Option<(u16, u64)>; 16] = [None; 16];
    let mut cur = v;
    for k in 0..=m.n() as u32 {
        let mut vec = cur;
        let mut comb = 1u64 << k;
        while vec != 0 {
            let lead = (15 - vec.leading_zeros()) as usize;
            match by_lead[lead] {
                Some((b, c)) => {
                    vec ^= b;
                    comb ^= c;
                }
                None => break,
            }
        }
        if vec == 0 {
            return Gf2Poly::from_bits(comb);
        }
        by_lead[(15 - vec.leading_zeros()) as usize] = Some((vec, comb));
        cur = m.apply(cur);
    }
    unreachable!("Krylov sequence must become dependent within n + 1 steps")
}

pub fn minimal_polynomial(m: &Gf2Matrix) -> Gf2Poly {
    (0..m.n()).fold(Gf2Poly::ONE, |acc, i| {
        acc.lcm(local_minimal_polynomial(m, 1 << i))
    })
}

/// Rational canonical form of an invertible matrix.
pub fn rcf(m: &Gf2Matrix) -> Result<RcfDecomposition> {
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    let n = m.n();
    let minpoly = minimal_polynomial(m);
    // per irreducible factor, the sizes (as exponents) of its elementary divisors
    let mut exponents: Vec<(Gf2Poly, Vec<u32>)> = Vec::new();
    for (f, e) in minpoly.factor() {
        let d = f.degree().unwrap() as usize;
        let fm = m.eval_poly(f);
        let mut nullity = vec![0usize];
        let mut power = Gf2Matrix::identity(n);
        for _ in 0..=e {
            power = power.mul(&fm);
            nullity.push(n - power.rank());
        }
        let mut exps = Vec::new();
        for k in 1..=e as usize {
            let blocks = (2 * nullity[k] - nullity[k - 1] - nullity[k + 1]) / d;
            exps.extend(std::iter::repeat_n(k as u32, blocks));
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exponents.push((f, exps));
    }
    let count = exponents.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<Gf2Poly> = (0..count)
        .map(|i| {
            exponents.iter().fold(Gf2Poly::ONE, |acc, (f, exps)| {
                exps.get(i).map_or(acc, |&e| acc * f.pow(e))
            })
        })
        .collect();
    factors.reverse();
    let total: u32 = factors.iter().map(|q| q.degree().unwrap()).sum();
    debug_assert_eq!(total as usize, n);
    RcfDecomposition::from_invariant_factors(&factors)
}

/// Least `i >= 1` with `M^i = I`.
pub fn order(m: &Gf2Matrix) -> Result<u64> {
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    let minpoly = minimal_polynomial(m);
    let bound = minpoly.order()?;
    if !m.pow(bound).is_identity() {
        return Err(Error::OrderBoundExceeded { bound });
    }
    // the bound is exact for the minimal polynomial, but trim defensively
    let mut ord = bound;
    for p in super::poly::prime_factors(bound) {
        while ord % p == 0 && m.pow(ord / p).is_identity() {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Least `i >= 1` with `M^i x = x`.
pub fn point_order(m: &Gf2Matrix, x: u16) -> u64 {
    let mut y = m.apply(x);
    let mut i = 1;
    while y != x {
        y = m.apply(y);
        i += 1;
        assert!(i <= 1 << m.n(), "matrix is not invertible");
    }
    i
}

/// Point orders for every input, indexed by point.
pub fn point_orders(m: &Gf2Matrix) -> Vec<u64> {
    let size = 1usize << m.n();
    let img = m.image_table();
    let mut out = vec![0u64; size];
    for x in 0..size {
        if out[x] != 0 {
            continue;
        }
        let mut orbit = vec![x];
        let mut y = img[x] as usize;
        while y != x {
            orbit.push(y);
            y = img[y] as usize;
        }
        let len = orbit.len() as u64;
        for z in orbit {
            out[z] = len;
        }
    }
    out
}

/// The subspace `Ord(M, i) = {x : M^i x = x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSpace {
    pub dim: usize,
    pub basis: Vec<BitVec>,
}

impl FixedSpace {
    /// Maps coordinates `c` (bit `j` = coefficient of basis vector `j`)
    /// into the ambient space.
    pub fn embed(&self, c: u16) -> u16 {
        self.basis
            .iter()
            .enumerate()
            .filter(|(j, _)| (c >> j) & 1 == 1)
            .fold(0, |acc, (_, b)| acc ^ b.bits())
    }

    /// All points of the subspace indexed by their coordinates.
    pub fn points(&self) -> Vec<u16> {
        (0..1u32 << self.dim).map(|c| self.embed(c as u16)).collect()
    }
}

pub fn fixed_space(m: &Gf2Matrix, i: u64) -> FixedSpace {
    let k = m.pow(i).add(&Gf2Matrix::identity(m.n()));
    let basis: Vec<BitVec> = k
        .kernel()
        .into_iter()
        .map(|v| BitVec::new(v, m.n()).expect("kernel vector in range"))
        .collect();
    FixedSpace {
        dim: basis.len(),
        basis,
    }
}

pub fn is_similar(m: &Gf2Matrix, other: &Gf2Matrix) -> Result<bool> {
    if m.n() != other.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: other.n(),
        });
    }
    Ok(rcf(m)?.matrix == rcf(other)?.matrix)
}

/// Basis of `{X : M X = X N}`.
pub fn intertwiners(m: &Gf2Matrix, nm: &Gf2Matrix) -> Vec<Gf2Matrix> {
    let n = m.n();
    assert_eq!(n, nm.n(), "dimension mismatch");
    let var = |i: usize, j: usize| i * n + j;
    let mut eqs = BitRows::new(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = var(i, j);
            for k in 0..n {
                // (M X)[i][j] = sum_k M[i][k] X[k][j]
                if m.entry(i, k) {
                    eqs.flip(row, var(k, j));
                }
                // (X N)[i][j] = sum_k X[i][k] N[k][j]
                if nm.entry(k, j) {
                    eqs.flip(row, var(i, k));
                }
            }
        }
    }
    null_space(&eqs, n * n)
        .into_iter()
        .map(|v| words_to_matrix(&v, n))
        .collect()
}

pub(crate) fn words_to_matrix(v: &[u64], n: usize) -> Gf2Matrix {
    let mut x = Gf2Matrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let b = i * n + j;
            if (v[b / 64] >> (b % 64)) & 1 == 1 {
                x.set(i, j, true);
            }
        }
    }
    x
}

pub(crate) fn random_combination<R: Rng>(basis: &[Gf2Matrix], n: usize, rng: &mut R) -> Gf2Matrix {
    basis.iter().fold(Gf2Matrix::zero(n), |acc, b| {
        if rng.gen::<bool>() {
            acc.add(b)
        } else {
            acc
        }
    })
}

/// An invertible `P` with `P^-1 M P = N`, if the matrices are similar.
pub fn similarity_transform(m: &Gf2Matrix, nm: &Gf2Matrix) -> Result<Option<Gf2Matrix>> {
    if !is_similar(m, nm)? {
        return Ok(None);
    }
    let basis = intertwiners(m, nm);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100_000 {
        let p = random_combination(&basis, m.n(), &mut rng);
        if p.is_invertible() {
            return Ok(Some(p));
        }
    }
    Err(Error::InvalidInput(
        "no invertible intertwiner found by sampling".into(),
    ))
}
