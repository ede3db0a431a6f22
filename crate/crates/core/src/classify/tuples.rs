//! Prime-order tuples `(B, A)` up to extended power-similarity.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::reference::reference_classes;
use crate::error::{Error, Result};
use crate::gf2::{
    check_dimension, fixed_space, irreducibles_of_degree, is_prime, order, point_orders, rcf,
    Gf2Matrix, Gf2Poly, RcfDecomposition,
};

/// A class representative `(B, A)` with `F o A = B o F` in mind. Both
/// matrices are in rational canonical form and have the same prime order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoTuple {
    pub n: usize,
    pub p: u64,
    pub b: Gf2Matrix,
    pub a: Gf2Matrix,
    /// 1-based position in the sorted class list.
    pub class_id: usize,
    /// Index in the published list, when one exists for `n`.
    pub paper_class: Option<usize>,
    /// `(dim Ord(A, 1), dim Ord(B, 1))`
    pub fixed_dims: (usize, usize),
    /// `A = I` or `B = I`; such tuples cannot belong to a permutation.
    pub degenerate: bool,
}

impl AutoTuple {
    /// Builds a tuple from arbitrary matrices of equal prime order,
    /// replacing both by their canonical forms.
    pub fn new(b: &Gf2Matrix, a: &Gf2Matrix) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: b.n(),
                got: a.n(),
            });
        }
        let (oa, ob) = (order(a)?, order(b)?);
        let p = if oa == 1 { ob } else { oa };
        if (oa != ob && oa != 1 && ob != 1) || !is_prime(p) {
            return Err(Error::OrderMismatch { a: oa, b: ob });
        }
        let (b, a) = (rcf(b)?.matrix, rcf(a)?.matrix);
        Ok(AutoTuple {
            n: a.n(),
            p,
            class_id: 0,
            paper_class: None,
            fixed_dims: (fixed_space(&a, 1).dim, fixed_space(&b, 1).dim),
            degenerate: a.is_identity() || b.is_identity(),
            b,
            a,
        })
    }

    pub fn point_orders_a(&self) -> Vec<u64> {
        point_orders(&self.a)
    }

    pub fn point_orders_b(&self) -> Vec<u64> {
        point_orders(&self.b)
    }

    pub fn b_invariant_factors(&self) -> Vec<Gf2Poly> {
        rcf(&self.b).expect("tuple matrices are invertible").invariant_factors
    }

    pub fn a_invariant_factors(&self) -> Vec<Gf2Poly> {
        rcf(&self.a).expect("tuple matrices are invertible").invariant_factors
    }

    /// Short human-readable form, e.g. `B = I2 + C(x^4+x^3+x^2+1), A = ...`.
    pub fn describe(&self) -> String {
        format!(
            "B = {}, A = {}",
            describe_factors(&self.b_invariant_factors()),
            describe_factors(&self.a_invariant_factors())
        )
    }

    pub fn to_record(&self) -> ClassRecord {
        let fmt = |f: Vec<Gf2Poly>| f.iter().map(|q| q.to_string()).collect();
        ClassRecord {
            n: self.n,
            p: self.p,
            class_id: self.class_id,
            paper_class: self.paper_class,
            b_rows_hex: self.b.hex_rows(),
            a_rows_hex: self.a.hex_rows(),
            fixed_dims: self.fixed_dims,
            b_invariant_factors: fmt(self.b_invariant_factors()),
            a_invariant_factors: fmt(self.a_invariant_factors()),
            degenerate: self.degenerate,
        }
    }

    pub fn from_record(r: &ClassRecord) -> Result<Self> {
        let b = Gf2Matrix::from_hex_rows(&r.b_rows_hex)?;
        let a = Gf2Matrix::from_hex_rows(&r.a_rows_hex)?;
        let mut t = AutoTuple::new(&b, &a)?;
        if t.b != b || t.a != a || t.n != r.n || t.p != r.p {
            return Err(Error::InvalidInput(format!(
                "class {} is not a canonical prime-order tuple",
                r.class_id
            )));
        }
        t.class_id = r.class_id;
        t.paper_class = r.paper_class;
        Ok(t)
    }
}

fn describe_factors(factors: &[Gf2Poly]) -> String {
    let mut parts = Vec::new();
    let ones = factors.iter().filter(|&&q| q == Gf2Poly::X_PLUS_ONE).count();
    if ones > 0 {
        parts.push(format!("I{ones}"));
    }
    for q in factors.iter().filter(|&&q| q != Gf2Poly::X_PLUS_ONE) {
        parts.push(format!("C({q})"));
    }
    parts.join(" + ")
}

/// One entry of `classes.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub n: usize,
    pub p: u64,
    pub class_id: usize,
    pub paper_class: Option<usize>,
    #[serde(rename = "B_rows_hex")]
    pub b_rows_hex: Vec<String>,
    #[serde(rename = "A_rows_hex")]
    pub a_rows_hex: Vec<String>,
    pub fixed_dims: (usize, usize),
    #[serde(rename = "B_invariant_factors")]
    pub b_invariant_factors: Vec<String>,
    #[serde(rename = "A_invariant_factors")]
    pub a_invariant_factors: Vec<String>,
    #[serde(default)]
    pub degenerate: bool,
}

pub const CLASSES_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassesFile {
    pub schema: u32,
    pub n: usize,
    pub classes: Vec<ClassRecord>,
}

impl ClassesFile {
    pub fn new(n: usize, tuples: &[AutoTuple]) -> Self {
        ClassesFile {
            schema: CLASSES_SCHEMA,
            n,
            classes: tuples.iter().map(AutoTuple::to_record).collect(),
        }
    }

    pub fn tuples(&self) -> Result<Vec<AutoTuple>> {
        if self.schema != CLASSES_SCHEMA {
            return Err(Error::InvalidInput(format!(
                "unsupported classes schema {}",
                self.schema
            )));
        }
        self.classes.iter().map(AutoTuple::from_record).collect()
    }
}

/// Multiplicative order of 2 modulo an odd `p`.
fn order_of_two(p: u64) -> u64 {
    let mut v = 2 % p;
    let mut k = 1;
    while v != 1 {
        v = v * 2 % p;
        k += 1;
    }
    k
}

/// Primes `p` for which GL(n, 2) has elements of order `p`.
pub fn prime_orders(n: usize) -> Vec<u64> {
    if check_dimension(n).is_err() || n < 2 {
        return Vec::new();
    }
    let mut out = vec![2];
    out.extend((3..1u64 << n).filter(|&p| is_prime(p) && order_of_two(p) <= n as u64));
    out
}

/// Invariant factors (smallest first) of a semisimple matrix whose
/// elementary divisors are the given irreducibles with multiplicities.
fn semisimple_factors(divisors: &[(Gf2Poly, usize)]) -> Vec<Gf2Poly> {
    let depth = divisors.iter().map(|&(_, m)| m).max().unwrap_or(0);
    let mut out: Vec<Gf2Poly> = (1..=depth)
        .map(|i| {
            divisors
                .iter()
                .filter(|&&(_, m)| m >= i)
                .fold(Gf2Poly::ONE, |acc, &(f, _)| acc * f)
        })
        .collect();
    out.reverse();
    out
}

/// All vectors of `len` nonnegative integers summing to at most `max_sum`.
fn multiplicities(len: usize, max_sum: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for m in 0..=left {
            cur.push(m);
            rec(len, left - m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, max_sum, &mut Vec::new(), &mut out);
    out
}

/// Every rational canonical form in GL(n, 2) of order exactly `p`, sorted.
/// Empty when `p` is not prime or no such element exists.
pub fn prime_order_rcfs(n: usize, p: u64) -> Vec<Gf2Matrix> {
    if check_dimension(n).is_err() || !is_prime(p) {
        return Vec::new();
    }
    let mut factor_lists: Vec<Vec<Gf2Poly>> = Vec::new();
    if p == 2 {
        // elementary divisors X+1 and (X+1)^2, at least one of the latter
        for twos in 1..=n / 2 {
            let mut f = vec![Gf2Poly::X_PLUS_ONE; n - 2 * twos];
            f.extend(std::iter::repeat_n(Gf2Poly::from_bits(0b101), twos));
            factor_lists.push(f);
        }
    } else {
        let d = order_of_two(p) as usize;
        if d > n {
            return Vec::new();
        }
        // X^p + 1 is squarefree, so order-p matrices are semisimple
        let fs: Vec<Gf2Poly> = irreducibles_of_degree(d as u32)
            .iter()
            .copied()
            .filter(|f| f.order().ok() == Some(p))
            .collect();
        for ms in multiplicities(fs.len(), n / d) {
            let used: usize = ms.iter().sum();
            if used == 0 {
                continue;
            }
            let mut divisors = vec![(Gf2Poly::X_PLUS_ONE, n - d * used)];
            divisors.extend(fs.iter().copied().zip(ms.iter().copied()));
            factor_lists.push(semisimple_factors(&divisors));
        }
    }
    let mut out: Vec<Gf2Matrix> = factor_lists
        .iter()
        .map(|f| {
            RcfDecomposition::from_invariant_factors(f)
                .expect("factors form a divisibility chain")
                .matrix
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn check_prime_orders(ms: &[&Gf2Matrix]) -> Result<u64> {
    let orders = ms.iter().map(|m| order(m)).collect::<Result<Vec<_>>>()?;
    let p = orders[0];
    if let Some(&q) = orders.iter().find(|&&q| q != p) {
        return Err(Error::OrderMismatch { a: p, b: q });
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("order {p} is not prime")));
    }
    Ok(p)
}

/// `(A, B) ~ (C, D)`: some `i` in `1..p` has `A ~ C^i` and `B ~ D^i`.
pub fn power_similar(t1: (&Gf2Matrix, &Gf2Matrix), t2: (&Gf2Matrix, &Gf2Matrix)) -> Result<bool> {
    let p = check_prime_orders(&[t1.0, t1.1, t2.0, t2.1])?;
    let (ra, rb) = (rcf(t1.0)?.matrix, rcf(t1.1)?.matrix);
    let (mut c, mut d) = (t2.0.clone(), t2.1.clone());
    for _ in 1..p {
        if rcf(&c)?.matrix == ra && rcf(&d)?.matrix == rb {
            return Ok(true);
        }
        c = c.mul(t2.0);
        d = d.mul(t2.1);
    }
    Ok(false)
}

/// Power-similarity, or power-similarity of `(A^-1, B^-1)` to `(D, C)`.
pub fn extended_power_similar(
    t1: (&Gf2Matrix, &Gf2Matrix),
    t2: (&Gf2Matrix, &Gf2Matrix),
) -> Result<bool> {
    if power_similar(t1, t2)? {
        return Ok(true);
    }
    let (ai, bi) = (t1.0.inverse()?, t1.1.inverse()?);
    power_similar((&ai, &bi), (t2.1, t2.0))
}

/// Canonical forms of all powers, indexed `[r][i]` for exponent `i` in `0..p`
/// (entry 0 unused).
fn power_table(rcfs: &[Gf2Matrix], p: u64) -> Vec<Vec<usize>> {
    let index: HashMap<&Gf2Matrix, usize> = rcfs.iter().enumerate().map(|(i, m)| (m, i)).collect();
    rcfs.iter()
        .map(|m| {
            let mut row = vec![usize::MAX; p as usize];
            let mut cur = m.clone();
            for slot in row.iter_mut().skip(1) {
                let r = rcf(&cur).expect("powers stay invertible").matrix;
                *slot = index[&r];
                cur = cur.mul(m);
            }
            row
        })
        .collect()
}

/// The extended power-similarity orbit of `(B, A)` as canonical-form pairs.
fn tuple_orbit(b: &Gf2Matrix, a: &Gf2Matrix, p: u64) -> HashSet<(Gf2Matrix, Gf2Matrix)> {
    let mut out = HashSet::new();
    let (mut bi, mut ai) = (b.clone(), a.clone());
    for _ in 1..p {
        let (rb, ra) = (rcf(&bi).unwrap().matrix, rcf(&ai).unwrap().matrix);
        out.insert((ra.clone(), rb.clone()));
        out.insert((rb, ra));
        bi = bi.mul(b);
        ai = ai.mul(a);
    }
    out
}

fn sort_and_number(n: usize, mut tuples: Vec<AutoTuple>) -> Vec<AutoTuple> {
    for t in tuples.iter_mut() {
        t.paper_class = match_paper_class(t);
    }
    tuples.sort_by(|x, y| {
        let key = |t: &AutoTuple| (t.paper_class.unwrap_or(usize::MAX), t.p, t.b.clone(), t.a.clone());
        key(x).cmp(&key(y))
    });
    for (i, t) in tuples.iter_mut().enumerate() {
        t.class_id = i + 1;
        debug_assert_eq!(t.n, n);
    }
    tuples
}

/// One representative per extended power-similarity class of pairs
/// `(B, A)` of equal prime order that a permutation can satisfy.
///
/// A permutation maps `Ord(A, 1)` onto `Ord(B, 1)`, so only pairs with equal
/// fixed-space dimensions are listed. The representative is the pair with
/// the lexicographically least rows of `B`, then `A`. For n = 6, 7, 8 the
/// list follows the published numbering; otherwise it is sorted by `(p, B, A)`.
pub fn enumerate_classes(n: usize) -> Vec<AutoTuple> {
    let mut out = Vec::new();
    for p in prime_orders(n) {
        let rcfs = prime_order_rcfs(n, p);
        let pow = power_table(&rcfs, p);
        let dims: Vec<usize> = rcfs.iter().map(|m| fixed_space(m, 1).dim).collect();
        let k = rcfs.len();
        let mut seen = vec![false; k * k];
        // pairs in lexicographic order, so the first unseen pair of an orbit is its least
        for bi in 0..k {
            for ai in 0..k {
                if seen[bi * k + ai] || dims[bi] != dims[ai] {
                    continue;
                }
                for i in 1..p as usize {
                    let (x, y) = (pow[bi][i], pow[ai][i]);
                    seen[x * k + y] = true;
                    seen[y * k + x] = true;
                }
                out.push(AutoTuple {
                    n,
                    p,
                    b: rcfs[bi].clone(),
                    a: rcfs[ai].clone(),
                    class_id: 0,
                    paper_class: None,
                    fixed_dims: (dims[ai], dims[bi]),
                    degenerate: false,
                });
            }
        }
    }
    sort_and_number(n, out)
}

/// Classes with exactly one of `A`, `B` equal to the identity, up to
/// simultaneous powers. Listed for completeness; no permutation has them.
pub fn enumerate_degenerate_classes(n: usize) -> Vec<AutoTuple> {
    let mut out = Vec::new();
    let id = Gf2Matrix::identity(n);
    for p in prime_orders(n) {
        let rcfs = prime_order_rcfs(n, p);
        let pow = power_table(&rcfs, p);
        let mut seen = vec![false; rcfs.len()];
        for r in 0..rcfs.len() {
            if seen[r] {
                continue;
            }
            for i in 1..p as usize {
                seen[pow[r][i]] = true;
            }
            let m = &rcfs[r];
            let d = fixed_space(m, 1).dim;
            for (b, a, dims) in [(m, &id, (n, d)), (&id, m, (d, n))] {
                out.push(AutoTuple {
                    n,
                    p,
                    b: b.clone(),
                    a: a.clone(),
                    class_id: 0,
                    paper_class: None,
                    fixed_dims: dims,
                    degenerate: true,
                });
            }
        }
    }
    out.sort_by(|x, y| (x.p, &x.b, &x.a).cmp(&(y.p, &y.b, &y.a)));
    for (i, t) in out.iter_mut().enumerate() {
        t.class_id = i + 1;
    }
    out
}

/// Canonical forms of the published pairs, per dimension.
fn reference_pairs(n: usize) -> Option<&'static [(usize, Gf2Matrix, Gf2Matrix)]> {
    static CACHE: OnceLock<Vec<(usize, Vec<(usize, Gf2Matrix, Gf2Matrix)>)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [6, 7, 8]
            .into_iter()
            .map(|n| {
                let rows = reference_classes(n)
                    .expect("reference dimensions")
                    .iter()
                    .map(|c| {
                        let b = rcf(&c.b_matrix().expect("valid block spec")).unwrap().matrix;
                        let a = rcf(&c.a_matrix().expect("valid block spec")).unwrap().matrix;
                        (c.class, b, a)
                    })
                    .collect();
                (n, rows)
            })
            .collect()
    });
    all.iter().find(|(m, _)| *m == n).map(|(_, v)| v.as_slice())
}

/// Index of the published class that is extended power-similar to the
/// tuple; `None` for n outside 6, 7, 8 or for degenerate tuples.
pub fn match_paper_class(t: &AutoTuple) -> Option<usize> {
    if t.degenerate {
        return None;
    }
    let refs = reference_pairs(t.n)?;
    let orbit = tuple_orbit(&t.b, &t.a, t.p);
    refs.iter()
        .find(|(_, b, a)| orbit.contains(&(b.clone(), a.clone())))
        .map(|(c, _, _)| *c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Gf2Matrix {
        Gf2Matrix::companion(s.parse().unwrap()).unwrap()
    }

    /// All 168 elements of GL(3, 2), by brute force over row triples.
    fn gl3() -> Vec<Gf2Matrix> {
        let mut out = Vec::new();
        for r0 in 1..8u16 {
            for r1 in 1..8u16 {
                for r2 in 1..8u16 {
                    let m = Gf2Matrix::from_rows(3, &[r0, r1, r2]).unwrap();
                    if m.is_invertible() {
                        out.push(m);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn order_seven_forms_in_dimension_three() {
        let got = prime_order_rcfs(3, 7);
        let mut brute: Vec<Gf2Matrix> = gl3()
            .iter()
            .filter(|m| order(m).unwrap() == 7)
            .map(|m| rcf(m).unwrap().matrix)
            .collect();
        brute.sort();
        brute.dedup();
        assert_eq!(got, brute);
        let mut expect = vec![comp("x^3+x+1"), comp("x^3+x^2+1")];
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn prime_order_forms_match_brute_force_in_gl3() {
        let all = gl3();
        for p in [2, 3, 7] {
            let mut brute: Vec<Gf2Matrix> = all
                .iter()
                .filter(|m| order(m).unwrap() == p)
                .map(|m| rcf(m).unwrap().matrix)
                .collect();
            brute.sort();
            brute.dedup();
            assert_eq!(prime_order_rcfs(3, p), brute, "p = {p}");
        }
        assert!(prime_order_rcfs(3, 5).is_empty());
        assert!(prime_order_rcfs(3, 9).is_empty());
    }

    #[test]
    fn involution_with_single_jordan_block() {
        for n in 2..=8 {
            let mut blocks = vec![];
            if n > 2 {
                blocks.push(Gf2Matrix::identity(n - 2));
            }
            blocks.push(comp("x^2+1"));
            let m = Gf2Matrix::block_diag(&blocks).unwrap();
            assert!(prime_order_rcfs(n, 2).contains(&m));
        }
        assert!(prime_order_rcfs(6, 7).contains(&comp("x^6+x^5+x^4+x^3+x^2+x+1")));
    }

    #[test]
    fn prime_orders_small() {
        assert_eq!(prime_orders(1), Vec::<u64>::new());
        assert_eq!(prime_orders(3), vec![2, 3, 7]);
        assert_eq!(prime_orders(6), vec![2, 3, 5, 7, 31]);
    }

    #[test]
    fn power_similarity_examples() {
        let c1 = comp("x^3+x+1");
        let c2 = comp("x^3+x^2+1");
        assert!(power_similar((&c1, &c1), (&c1, &c1)).unwrap());
        let sq = c1.pow(2);
        assert!(power_similar((&sq, &sq), (&c1, &c1)).unwrap());
        assert!(power_similar((&c1, &c1), (&c2, &c2)).unwrap());
        assert!(!power_similar((&c1, &c2), (&c1, &c1)).unwrap());
        assert!(matches!(
            power_similar((&c1, &comp("x^2+x+1").direct_sum(&Gf2Matrix::identity(1)).unwrap()), (&c1, &c1)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn dimension_three_classes() {
        // p = 2: one class; p = 3: one class; p = 7: (C1, C1) and (C1, C2)
        let cls = enumerate_classes(3);
        assert_eq!(cls.len(), 4);
        assert!(cls.iter().all(|t| t.satisfies_tuple_invariants()));
    }

    impl AutoTuple {
        fn satisfies_tuple_invariants(&self) -> bool {
            order(&self.a).unwrap() == self.p
                && order(&self.b).unwrap() == self.p
                && rcf(&self.a).unwrap().matrix == self.a
                && rcf(&self.b).unwrap().matrix == self.b
                && self.fixed_dims.0 == self.fixed_dims.1
        }
    }

    #[test]
    fn classes_cover_all_pairs_without_overlap() {
        // re-classify every equal-dimension pair of prime-order forms for n <= 6
        for n in 2..=6 {
            let classes = enumerate_classes(n);
            for (i, x) in classes.iter().enumerate() {
                for y in &classes[i + 1..] {
                    if x.p == y.p {
                        assert!(!extended_power_similar((&x.b, &x.a), (&y.b, &y.a)).unwrap());
                    }
                }
            }
            for p in prime_orders(n) {
                let rcfs = prime_order_rcfs(n, p);
                for b in &rcfs {
                    for a in &rcfs {
                        if fixed_space(a, 1).dim != fixed_space(b, 1).dim {
                            continue;
                        }
                        let hits = classes
                            .iter()
                            .filter(|t| t.p == p && extended_power_similar((b, a), (&t.b, &t.a)).unwrap())
                            .count();
                        assert_eq!(hits, 1, "n = {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn swap_inverse_closure() {
        for t in enumerate_classes(6) {
            let bi = rcf(&t.b.inverse().unwrap()).unwrap().matrix;
            let ai = rcf(&t.a.inverse().unwrap()).unwrap().matrix;
            let swapped = AutoTuple::new(&ai, &bi).unwrap();
            assert_eq!(match_paper_class(&swapped), t.paper_class);
        }
    }

    #[test]
    fn published_counts_and_bijection() {
        for (n, count) in [(6, 17), (7, 27), (8, 32)] {
            let cls = enumerate_classes(n);
            assert_eq!(cls.len(), count, "n = {n}");
            let ids: Vec<Option<usize>> = cls.iter().map(|t| t.paper_class).collect();
            let expect: Vec<Option<usize>> = (1..=count).map(Some).collect();
            assert_eq!(ids, expect, "n = {n}");
            assert!(cls.iter().all(|t| t.class_id == t.paper_class.unwrap()));
        }
    }

    #[test]
    fn named_published_classes() {
        let seven = comp("x^6+x^5+x^4+x^3+x^2+x+1");
        let t = AutoTuple::new(&seven, &seven).unwrap();
        assert_eq!(match_paper_class(&t), Some(5));
        let c7 = comp("x^7+1");
        assert_eq!(match_paper_class(&AutoTuple::new(&c7, &c7).unwrap()), Some(1));
        let inv = Gf2Matrix::identity(6).direct_sum(&comp("x^2+1")).unwrap();
        assert_eq!(match_paper_class(&AutoTuple::new(&inv, &inv).unwrap()), Some(32));
        assert_eq!(match_paper_class(&AutoTuple::new(&comp("x^3+x+1"), &comp("x^3+x+1")).unwrap()), None);
    }

    #[test]
    fn degenerate_tuples_are_flagged() {
        let d = enumerate_degenerate_classes(3);
        // one order-2 form, one order-3 form, one power class of order-7 forms; two sides each
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|t| t.degenerate && (t.a.is_identity() || t.b.is_identity())));
    }

    #[test]
    fn record_round_trip() {
        for t in enumerate_classes(5) {
            let r = t.to_record();
            let back = AutoTuple::from_record(&r).unwrap();
            assert_eq!(back, t);
        }
        let file = ClassesFile::new(4, &enumerate_classes(4));
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"B_rows_hex\""));
        let parsed: ClassesFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.tuples().unwrap(), enumerate_classes(4));
    }
}
