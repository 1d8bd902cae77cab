//! The cylinder L-infinity algebra: the generalized Jacobi identities on random elements, and a
//! strict morphism packaged as a Maurer-Cartan element.

use dgcyl::cooperad::builtin_cocom_shifted;
use dgcyl::cylinder::{CylAlgebra, CylSpaces};
use dgcyl::random::{self, random_complex, random_element};
use dgcyl::samples;
use dgcyl::scenario::Instance;
use std::sync::Arc;

fn main() -> dgcyl::Result<()> {
    let mut rng = random::rng(11);
    let a = random_complex(&mut rng, "a", 2, -1, 1);
    let b = random_complex(&mut rng, "b", 2, -1, 1);
    let alg = CylAlgebra::new(CylSpaces::new(Arc::new(builtin_cocom_shifted(3)), &a, &b));
    for n in 2..=3 {
        let xs: Vec<_> = (0..n).map(|_| random_element(&mut rng, alg.spaces(), 0, false)).collect();
        println!("generalized Jacobi identity with {n} inputs: residual zero {}", alg.linf_residual(&xs)?.is_zero());
    }

    for arrow in samples::quasi_isomorphisms().iter().filter(|a| a.name.contains("to")) {
        let inst = Instance::strict(&arrow.source, &arrow.target, &arrow.f1, 3)?;
        let cyl = CylAlgebra::new(inst.spaces.clone());
        let dec = cyl.decode_mc(&inst.u()?)?;
        println!("{}: Maurer-Cartan {}", arrow.name, dec.is_mc());
    }
    Ok(())
}
