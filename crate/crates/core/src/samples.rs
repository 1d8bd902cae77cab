//! Small dg Lie and dg associative algebras used in tests, examples and the CLI.

use crate::convolution::BinaryAlgebra;
use crate::error::Result;
use crate::linalg::GradedMap;
use crate::scenario::linear_map;

fn parse(json: &str) -> BinaryAlgebra {
    BinaryAlgebra::from_json_str(json).expect("built-in algebra")
}

pub fn affine_lie() -> BinaryAlgebra {
    parse(
        r#"{"kind":"dgla","basis":[{"label":"x","degree":0},{"label":"y","degree":0}],
            "products":[{"left":"x","right":"y","target":"y","coeff":"1"}]}"#,
    )
}

pub fn super_lie() -> BinaryAlgebra {
    parse(
        r#"{"kind":"dgla","basis":[{"label":"x","degree":0},{"label":"o","degree":1},{"label":"z","degree":2}],
            "products":[{"left":"x","right":"o","target":"o","coeff":"1"},
                        {"left":"x","right":"z","target":"z","coeff":"2"},
                        {"left":"o","right":"o","target":"z","coeff":"1"}]}"#,
    )
}

pub fn dg_lie() -> BinaryAlgebra {
    // x in degree 0 acting on the acyclic pair u → v
    parse(
        r#"{"kind":"dgla","basis":[{"label":"x","degree":0},{"label":"u","degree":0},{"label":"v","degree":1}],
            "differential":[{"source":"u","target":"v","coeff":"1"}],
            "products":[{"left":"x","right":"u","target":"u","coeff":"1"},
                        {"left":"x","right":"v","target":"v","coeff":"1"}]}"#,
    )
}

pub fn dg_assoc() -> BinaryAlgebra {
    // unital, u² = 0, v = du, uv = vu = 0
    parse(
        r#"{"kind":"dga","basis":[{"label":"1","degree":0},{"label":"u","degree":-1},{"label":"v","degree":0}],
            "differential":[{"source":"u","target":"v","coeff":"1"}],
            "products":[{"left":"1","right":"1","target":"1","coeff":"1"},
                        {"left":"1","right":"u","target":"u","coeff":"1"},
                        {"left":"u","right":"1","target":"u","coeff":"1"},
                        {"left":"1","right":"v","target":"v","coeff":"1"},
                        {"left":"v","right":"1","target":"v","coeff":"1"}]}"#,
    )
}

pub fn graded_assoc() -> BinaryAlgebra {
    // truncated polynomials on t of degree 1: t² = s, t³ = 0
    parse(
        r#"{"kind":"dga","basis":[{"label":"1","degree":0},{"label":"t","degree":1},{"label":"s","degree":2}],
            "products":[{"left":"1","right":"1","target":"1","coeff":"1"},
                        {"left":"1","right":"t","target":"t","coeff":"1"},
                        {"left":"t","right":"1","target":"t","coeff":"1"},
                        {"left":"1","right":"s","target":"s","coeff":"1"},
                        {"left":"s","right":"1","target":"s","coeff":"1"},
                        {"left":"t","right":"t","target":"s","coeff":"1"}]}"#,
    )
}

pub fn sl2() -> BinaryAlgebra {
    parse(
        r#"{"kind":"dgla","basis":[{"label":"e","degree":0},{"label":"h","degree":0},{"label":"f","degree":0}],
            "products":[{"left":"h","right":"e","target":"e","coeff":"2"},
                        {"left":"h","right":"f","target":"f","coeff":"-2"},
                        {"left":"e","right":"f","target":"h","coeff":"1"}]}"#,
    )
}

/// The abelian Lie algebra on one generator `x` of degree 0.
pub fn line_lie() -> BinaryAlgebra {
    parse(r#"{"kind":"dgla","basis":[{"label":"x","degree":0}]}"#)
}

/// The ground field `ℚ·1` as a dg associative algebra.
pub fn ground_dga() -> BinaryAlgebra {
    parse(
        r#"{"kind":"dga","basis":[{"label":"1","degree":0}],
            "products":[{"left":"1","right":"1","target":"1","coeff":"1"}]}"#,
    )
}

/// All built-in algebras by name.
pub fn algebras() -> Vec<(&'static str, BinaryAlgebra)> {
    vec![
        ("affine_lie", affine_lie()),
        ("super_lie", super_lie()),
        ("dg_lie", dg_lie()),
        ("line_lie", line_lie()),
        ("sl2", sl2()),
        ("dg_assoc", dg_assoc()),
        ("graded_assoc", graded_assoc()),
        ("ground_dga", ground_dga()),
    ]
}

/// A strict morphism between built-in algebras.
pub struct Arrow {
    pub name: String,
    pub source: BinaryAlgebra,
    pub target: BinaryAlgebra,
    pub f1: GradedMap,
}

fn arrow(name: &str, a: BinaryAlgebra, b: BinaryAlgebra, images: &[(&str, &[(&str, i64)])]) -> Result<Arrow> {
    let f1 = linear_map(&a, &b, images)?;
    Ok(Arrow { name: name.to_string(), source: a, target: b, f1 })
}

/// Strict quasi-isomorphisms between the built-in algebras: identities, rescalings and the
/// inclusions and projections relating algebras with the same cohomology.
pub fn quasi_isomorphisms() -> Vec<Arrow> {
    let mut out: Vec<Arrow> = algebras()
        .into_iter()
        .map(|(name, alg)| {
            let f1 = GradedMap::identity(alg.complex.space());
            Arrow { name: format!("id_{name}"), source: alg.clone(), target: alg, f1 }
        })
        .collect();
    let more = [
        arrow("dg_lie_to_line", dg_lie(), line_lie(), &[("x", &[("x", 1)])]),
        arrow("line_into_dg_lie", line_lie(), dg_lie(), &[("x", &[("x", 1)])]),
        arrow("dg_assoc_to_ground", dg_assoc(), ground_dga(), &[("1", &[("1", 1)])]),
        arrow("ground_into_dg_assoc", ground_dga(), dg_assoc(), &[("1", &[("1", 1)])]),
        arrow("affine_rescale", affine_lie(), affine_lie(), &[("x", &[("x", 1)]), ("y", &[("y", 2)])]),
        arrow("super_rescale", super_lie(), super_lie(), &[("x", &[("x", 1)]), ("o", &[("o", 2)]), ("z", &[("z", 4)])]),
        arrow("graded_rescale", graded_assoc(), graded_assoc(), &[("1", &[("1", 1)]), ("t", &[("t", -1)]), ("s", &[("s", 1)])]),
    ];
    out.extend(more.into_iter().map(|r| r.expect("built-in labels")));
    out
}
