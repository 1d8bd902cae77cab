//! Truncated deformation complexes and their cohomology.

use dgcyl::convolution::{def_complex, CofreeComplex};
use dgcyl::linalg::cohomology;
use dgcyl::samples;
use dgcyl::scenario::{cooperad_for, encode_for};

fn main() -> dgcyl::Result<()> {
    for (name, alg) in samples::algebras() {
        let src = CofreeComplex::new(cooperad_for(alg.kind, 3), &alg.complex);
        let def = def_complex(&encode_for(&src, &alg)?)?;
        let ranks = cohomology(&def.complex)?.ranks();
        let nonzero: Vec<_> = ranks.iter().filter(|(_, &r)| r > 0).collect();
        println!("{name:>13}: dim {:>3}, cohomology {nonzero:?}", def.basis.dim());
    }
    Ok(())
}
