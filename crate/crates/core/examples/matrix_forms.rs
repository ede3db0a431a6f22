//! Rational canonical form, order and fixed space of a few matrices over F2.

use apn_search::gf2::{commutant, fixed_space, order, rcf, Gf2Matrix, Gf2Poly};

fn main() -> apn_search::Result<()> {
    let blocks: Vec<Gf2Matrix> = ["x+1", "x^2+1", "x^3+x+1"]
        .iter()
        .map(|p| Gf2Matrix::companion(p.parse::<Gf2Poly>().expect("polynomial")))
        .collect::<apn_search::Result<_>>()?;
    let m = Gf2Matrix::block_diag(&blocks)?;
    let p = Gf2Matrix::from_hex_rows(&["01", "03", "05", "0b", "13", "21"])?;
    let conj = p.inverse()?.mul(&m).mul(&p);
    let r = rcf(&conj)?;
    let factors: Vec<String> = r.invariant_factors.iter().map(ToString::to_string).collect();
    println!("conjugate rows:    {:?}", conj.hex_rows());
    println!("invariant factors: {}", factors.join(" | "));
    println!("order:             {}", order(&conj)?);
    println!("dim Fix(M):        {}", fixed_space(&conj, 1).dim);
    println!("dim Fix(M^2):      {}", fixed_space(&conj, 2).dim);
    println!("commutant sample:  {} invertible elements", commutant(&conj, 64).len());
    Ok(())
}
