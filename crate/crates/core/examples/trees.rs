//! Labelled planar trees: canonical forms, insertion, two-vertex classes and pitchforks.

use dgcyl::trees::{
    canonical_form, enumerate_sh, enumerate_tree2_classes, insert, pitchfork_from_sh, verify_insertion_bijection,
    LabeledPlanarTree,
};

fn parse(s: &str) -> LabeledPlanarTree {
    LabeledPlanarTree::from_json(&serde_json::from_str(s).unwrap()).unwrap()
}

fn main() -> dgcyl::Result<()> {
    let t = parse("[[3, 1], 2]");
    let c = canonical_form(&t);
    println!("{} is isomorphic to {}", t.to_json_string(), c.representative().to_json_string());
    println!("{}", c.representative().ascii_art());

    // the top vertex of [1,[2,3]] has two inputs, replaced by the two-input tree [2,[1]]
    let grown = insert(&parse("[1, [2, 3]]"), 1, &parse("[2, [1]]"))?;
    println!("[1,[2,3]] with [2,[1]] inserted at its first vertex: {}", grown.to_json_string());

    for n in 1..=5 {
        println!("two-vertex classes with {n} leaves: {}", enumerate_tree2_classes(n).len());
    }
    for tau in enumerate_sh(4, 2).iter().take(3) {
        println!("pitchfork {}", pitchfork_from_sh(tau)?.to_json_string());
    }
    println!("insertion bijection up to 4 leaves: {}", (1..=4).all(verify_insertion_bijection));
    Ok(())
}
