//! The zigzag Def(A) ← Def(A⇝B) → Def(B) for strict quasi-isomorphisms.

use dgcyl::cylinder::verify_zigzag;
use dgcyl::samples;
use dgcyl::scenario::Instance;

fn main() -> dgcyl::Result<()> {
    for arrow in samples::quasi_isomorphisms() {
        let inst = Instance::strict(&arrow.source, &arrow.target, &arrow.f1, 2)?;
        let r = verify_zigzag(&inst.q_a, &inst.q_b, &inst.f)?;
        println!(
            "{:>22}: dims {} <- {} -> {}, projections quasi-isomorphisms {} {}",
            arrow.name, r.def_a_dim, r.def_ab_dim, r.def_b_dim, r.pi_a.quasi_iso, r.pi_b.quasi_iso
        );
    }
    Ok(())
}
