//! Cohomology and quasi-isomorphisms of small cochain complexes over ℚ.

use std::collections::BTreeMap;

use dgcyl::linalg::{cohomology, induced_cohomology_map, is_quasi_iso, Complex, GradedMap, GradedSpace, Matrix};

fn main() -> dgcyl::Result<()> {
    // a → b in degrees 0 → 1 with d(a) = 2b, plus a lone cycle c in degree 1
    let v = GradedSpace::from_labels([("a", 0), ("b", 1), ("c", 1)])?;
    let d = GradedMap::new(v.clone(), v.clone(), 1, BTreeMap::from([(0, Matrix::from_ints(2, 1, &[2, 0]))]))?;
    let cx = Complex::new(v, d)?;
    let h = cohomology(&cx)?;
    println!("ranks: {:?}", h.ranks());

    // projection onto the cycle c is a quasi-isomorphism
    let w = Complex::zero_differential(GradedSpace::from_labels([("x", 1)])?);
    let p = GradedMap::new(cx.space().clone(), w.space().clone(), 0, BTreeMap::from([(1, Matrix::from_ints(1, 2, &[0, 1]))]))?;
    println!("projection is a quasi-isomorphism: {}", is_quasi_iso(&p, &cx, &w)?);
    let induced = induced_cohomology_map(&p, &cx, &w)?;
    for (k, m) in &induced.matrices {
        println!("H^{k}: {:?}", m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    Ok(())
}
