use apn_search::gf2::{fixed_space, rcf, Gf2Matrix, Gf2Poly};
use apn_search::search::{DdtAccumulator, PartialLut};
use apn_search::vbf::{is_apn, monomial_for_tuple, FiniteField, Lut};
use proptest::prelude::*;
use proptest::sample::Index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Even-weight rows of the partial DDT, counted pair by pair.
fn even_rows_oracle(table: &[Option<u16>]) -> Vec<u8> {
    let size = table.len();
    let mut counts = vec![0u8; size * size];
    for alpha in (1..size).filter(|a| a.count_ones() % 2 == 0) {
        for x in 0..size {
            if let (Some(u), Some(v)) = (table[x], table[x ^ alpha]) {
                counts[alpha * size + (u ^ v) as usize] += 1;
            }
        }
    }
    counts
}

#[derive(Clone, Debug)]
enum Op {
    Assign(Index, Index),
    Unassign,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (any::<Index>(), any::<Index>()).prop_map(|(x, y)| Op::Assign(x, y)),
        1 => Just(Op::Unassign),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ddt_accumulator_tracks_from_scratch(n in 4usize..=6, ops in prop::collection::vec(op(), 1..40)) {
        let mut lut = PartialLut::new(n).unwrap();
        let mut acc = DdtAccumulator::new(n);
        let mut stack: Vec<u16> = Vec::new();
        let size = 1usize << n;
        for o in ops {
            match o {
                Op::Assign(xi, yi) => {
                    let free: Vec<u16> = (0..size as u16).filter(|&x| !lut.is_defined(x)).collect();
                    let unused: Vec<u16> = (0..size as u16).filter(|&y| !lut.is_used(y)).collect();
                    if free.is_empty() {
                        continue;
                    }
                    let (x, y) = (*xi.get(&free), *yi.get(&unused));
                    let before = acc.clone();
                    lut.set(x, y);
                    if acc.add_ddt_information(&lut, x) {
                        stack.push(x);
                    } else {
                        acc.remove_ddt_information(&lut, x);
                        lut.clear(x);
                        prop_assert_eq!(&acc, &before);
                    }
                }
                Op::Unassign => {
                    if let Some(x) = stack.pop() {
                        acc.remove_ddt_information(&lut, x);
                        lut.clear(x);
                    }
                }
            }
            let table: Vec<Option<u16>> = (0..size as u16).map(|x| lut.get(x)).collect();
            prop_assert_eq!(acc.counts(), &even_rows_oracle(&table)[..]);
        }
    }
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Gf2Matrix {
    loop {
        let rows: Vec<u16> = (0..n).map(|_| rng.gen_range(0..1u32 << n) as u16).collect();
        let m = Gf2Matrix::from_rows(n, &rows).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

fn block_diag(polys: &[&str]) -> Gf2Matrix {
    let blocks: Vec<Gf2Matrix> = polys
        .iter()
        .map(|p| Gf2Matrix::companion(p.parse::<Gf2Poly>().unwrap()).unwrap())
        .collect();
    Gf2Matrix::block_diag(&blocks).unwrap()
}

#[test]
fn rcf_is_invariant_under_conjugation() {
    let bases = [
        block_diag(&["x^7+x^6+x^5+x^4+x^3+x^2+1"]),
        block_diag(&["x+1", "x^2+1", "x^2+1", "x^2+1"]),
        block_diag(&["x^2+x+1", "x^2+x+1", "x^4+x^3+x^2+1"]),
        block_diag(&["x^3+x+1", "x^5+x^4+x^2+x+1"]),
        block_diag(&["x+1", "x+1", "x^3+1", "x^3+1"]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for m in &bases {
        let expected = rcf(m).unwrap();
        for _ in 0..1000 {
            let p = random_invertible(m.n(), &mut rng);
            let conj = p.inverse().unwrap().mul(m).mul(&p);
            assert_eq!(rcf(&conj).unwrap(), expected);
        }
    }
}

fn brute_fixed(m: &Gf2Matrix, i: u64) -> Vec<u16> {
    let mi = m.pow(i);
    (0..1u32 << m.n()).map(|x| x as u16).filter(|&x| mi.apply(x) == x).collect()
}

fn span(basis: &[u16]) -> Vec<u16> {
    let mut out = vec![0u16];
    for &b in basis {
        let shifted: Vec<u16> = out.iter().map(|v| v ^ b).collect();
        out.extend(shifted);
    }
    out.sort_unstable();
    out
}

#[test]
fn fixed_space_matches_brute_force_on_all_small_matrices() {
    for n in 1..=3usize {
        for bits in 0..1u32 << (n * n) {
            let rows: Vec<u16> = (0..n).map(|r| ((bits >> (r * n)) & ((1 << n) - 1)) as u16).collect();
            let m = Gf2Matrix::from_rows(n, &rows).unwrap();
            for i in 1..=4 {
                let fs = fixed_space(&m, i);
                let basis: Vec<u16> = fs.basis.iter().map(|b| b.bits()).collect();
                assert_eq!(span(&basis), brute_fixed(&m, i));
                assert_eq!(fs.dim, basis.len());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn fixed_space_matches_brute_force(n in 1usize..=8, rows in prop::collection::vec(any::<u16>(), 8), i in 1u64..=12) {
        let rows: Vec<u16> = rows[..n].iter().map(|r| r & ((1 << n) - 1)).collect();
        let m = Gf2Matrix::from_rows(n, &rows).unwrap();
        let fs = fixed_space(&m, i);
        let basis: Vec<u16> = fs.basis.iter().map(|b| b.bits()).collect();
        prop_assert_eq!(span(&basis), brute_fixed(&m, i));
    }
}

/// APN check that only looks at even-weight input differences, fed entry
/// by entry through the accumulator.
fn apn_by_even_rows(f: &Lut) -> bool {
    let mut lut = PartialLut::new(f.n()).unwrap();
    let mut acc = DdtAccumulator::new(f.n());
    (0..f.size() as u16).all(|x| {
        lut.set(x, f.get(x));
        acc.add_ddt_information(&lut, x)
    })
}

#[test]
fn even_weight_rows_decide_apn_for_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let field = FiniteField::with_default_modulus(5).unwrap();
    let cube = apn_search::vbf::monomial_lut(&field, 3);
    let mut apn_seen = 0;
    for n in [4usize, 5] {
        for k in 0..1000 {
            let f = if n == 5 && k % 2 == 0 {
                let (a, b) = (random_invertible(5, &mut rng), random_invertible(5, &mut rng));
                cube.affine_transform(&a, rng.gen_range(0..32), &b, rng.gen_range(0..32)).unwrap()
            } else {
                let mut t: Vec<u16> = (0..1u16 << n).collect();
                t.shuffle(&mut rng);
                Lut::new(n, t).unwrap()
            };
            let full = is_apn(&f);
            apn_seen += full as usize;
            assert_eq!(apn_by_even_rows(&f), full);
        }
    }
    assert!(apn_seen >= 500);
}

#[test]
fn transported_monomials_keep_their_self_equivalence() {
    let field = FiniteField::with_default_modulus(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in [3u64, 5, 7, 11, 15] {
        let g = field.generator();
        let (ma, mb) = (field.mult_matrix(g), field.mult_matrix(field.pow(g, d)));
        let p = random_invertible(5, &mut rng);
        let q = random_invertible(5, &mut rng);
        let a = p.inverse().unwrap().mul(&ma).mul(&p);
        let b = q.inverse().unwrap().mul(&mb).mul(&q);
        let f = monomial_for_tuple(&field, d, &a, &b).unwrap().unwrap();
        assert!(apn_search::vbf::verify_le_automorphism(&f, &a, &b).unwrap());
    }
}
