//! Checks that the n = 7 APN power functions are permutations with a linear
//! self-equivalence, moved onto each published class tuple.

use apn_search::classify::{enumerate_classes, reference_classes};
use apn_search::vbf::{apn_violation, monomial_for_tuple, verify_le_automorphism, FiniteField, Lut};

fn main() -> apn_search::Result<()> {
    let field = FiniteField::with_default_modulus(7)?;
    let classes = enumerate_classes(7);
    for r in reference_classes(7).expect("n = 7 is published") {
        let t = classes.iter().find(|t| t.paper_class == Some(r.class)).expect("class");
        for s in &r.solutions {
            let d: u64 = s.trim_start_matches("x^").parse().expect("exponent");
            let fit = [(&t.a, &t.b, "F A = B F"), (&t.b, &t.a, "F B = A F")]
                .into_iter()
                .find_map(|(a, b, how)| {
                    let f: Lut = monomial_for_tuple(&field, d, a, b).ok()??;
                    verify_le_automorphism(&f, a, b).ok()?.then(|| (f, how))
                });
            match fit {
                Some((f, how)) => println!(
                    "class {:>2}  x^{d:<3} {how}  permutation={} apn={}",
                    r.class,
                    f.is_permutation(),
                    apn_violation(&f).is_none()
                ),
                None => println!("class {:>2}  x^{d:<3} does not fit", r.class),
            }
        }
    }
    Ok(())
}
