//! The mapping cylinder of a pair of quasi-isomorphisms, with lifting witnesses.

use dgcyl::mapping_cylinder::check_lemma;
use dgcyl::random::{self, random_complex, random_quasi_iso_onto};

fn main() -> dgcyl::Result<()> {
    let mut rng = random::rng(5);
    let w = random_complex(&mut rng, "w", 3, -1, 1);
    let (v, f) = random_quasi_iso_onto(&mut rng, &w, "v", 2, -1, 1)?;
    let (vt, ft) = random_quasi_iso_onto(&mut rng, &w, "u", 2, -1, 1)?;
    let r = check_lemma(&v, &w, &vt, &f, &ft)?;
    println!("dims V {}, W {}, V~ {}", v.space().total_dim(), w.space().total_dim(), vt.space().total_dim());
    println!("pi_V quasi-iso {}, pi_V~ quasi-iso {}", r.pi_v_quasi_iso, r.pi_vt_quasi_iso);
    for wit in &r.witnesses {
        println!("degree {}: class lifts {}", wit.degree, wit.lifts);
    }
    println!("verdict: {}", r.verdict);
    Ok(())
}
