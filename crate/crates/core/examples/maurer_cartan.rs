//! Binary algebras as Maurer-Cartan elements of a convolution algebra.

use dgcyl::convolution::{mc_residual, CofreeComplex};
use dgcyl::samples;
use dgcyl::scenario::{cooperad_for, encode_for};

fn main() -> dgcyl::Result<()> {
    for (name, alg) in samples::algebras() {
        let src = CofreeComplex::new(cooperad_for(alg.kind, 3), &alg.complex);
        let q = encode_for(&src, &alg)?;
        println!("{name:>13}: residual zero: {}", mc_residual(&q)?.is_zero());
    }

    // break the Jacobi identity of sl2 by hand
    let sl2 = samples::sl2();
    let bad = sl2.perturbed(1, 0, 0, &dgcyl::linalg::Scalar::from_int(1))?;
    let src = CofreeComplex::new(cooperad_for(bad.kind, 3), &bad.complex);
    let res = mc_residual(&encode_for(&src, &bad)?)?;
    println!("perturbed sl2: axioms {:?}, residual zero: {}", bad.axiom_defect(), res.is_zero());
    Ok(())
}
