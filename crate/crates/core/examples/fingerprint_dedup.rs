//! Fingerprints survive affine transformations; grouping by fingerprint
//! separates the n = 5 power functions into their classes.

use apn_search::dedup::{group, known_fixtures};
use apn_search::gf2::Gf2Matrix;
use apn_search::vbf::{fingerprint, monomial_lut, FiniteField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_invertible(rng: &mut ChaCha8Rng) -> Gf2Matrix {
    loop {
        let rows: Vec<u16> = (0..5).map(|_| rng.gen_range(0..32)).collect();
        let m = Gf2Matrix::from_rows(5, &rows).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

fn main() -> apn_search::Result<()> {
    let field = FiniteField::with_default_modulus(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut luts = Vec::new();
    for d in [3u64, 5, 15] {
        let f = monomial_lut(&field, d);
        for _ in 0..3 {
            let (a, b) = (random_invertible(&mut rng), random_invertible(&mut rng));
            luts.push(f.affine_transform(&a, rng.gen_range(0..32), &b, rng.gen_range(0..32))?);
        }
    }
    println!("x^3 digest: {}", fingerprint(&luts[0]).digest());
    for g in group(&luts, known_fixtures(5))? {
        println!("{} member(s): {}", g.members.len(), g.known_match.as_deref().unwrap_or("new"));
    }
    Ok(())
}
