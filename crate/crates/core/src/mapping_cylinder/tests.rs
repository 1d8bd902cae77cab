use super::*;
use crate::random;

fn complex(basis: &[(&str, i64)], d: &[(&str, &str, i64)]) -> Complex {
    let space = GradedSpace::from_labels(basis.iter().map(|(l, k)| (l.to_string(), *k))).unwrap();
    let dm = GradedMap::from_fn(&space, &space, 1, |i| {
        d.iter()
            .filter(|(s, _, _)| space.find_flat(s) == Some(i))
            .map(|(_, t, c)| (space.find_flat(t).unwrap(), Scalar::from_int(*c)))
            .collect()
    })
    .unwrap();
    Complex::new(space, dm).unwrap()
}

fn unit(c: &Complex, label: &str) -> SparseVec {
    SparseVec::unit(c.space().find_flat(label).unwrap())
}

#[test]
fn differential_on_pure_components() {
    let v = complex(&[("a", 0), ("b", 1)], &[("a", "b", 1)]);
    let w = complex(&[("x", 0), ("y", 1)], &[("x", "y", 3)]);
    let f = GradedMap::from_fn(v.space(), w.space(), 0, SparseVec::unit).unwrap();
    // f is not a chain map: d(a) = b ↦ y but d(f a) = 3y
    assert!(matches!(MappingCylinder::build(&v, &w, &v, &f, &f), Err(Error::NotChainMap(0))));
    let f = f.scale(&Scalar::from_int(1));
    let w = complex(&[("x", 0), ("y", 1)], &[("x", "y", 1)]);
    let cyl = MappingCylinder::build(&v, &w, &v, &f, &f).unwrap();
    let a = unit(&v, "a");
    // ∂(v) = ∂v + s f(v)
    assert_eq!(cyl.differential(&cyl.element(&a, &SparseVec::new(), &SparseVec::new())), cyl.element(&unit(&v, "b"), &unit(&w, "x"), &SparseVec::new()));
    // ∂(sw) = −s ∂w
    let sx = cyl.element(&SparseVec::new(), &unit(&w, "x"), &SparseVec::new());
    assert_eq!(cyl.differential(&sx), cyl.element(&SparseVec::new(), &unit(&w, "y").scaled(&-Scalar::one()), &SparseVec::new()));
    assert_eq!(cyl.complex.space().find("sw:x").map(|(k, _)| k), Some(1));
}

#[test]
fn projections_are_chain_maps() {
    let mut rng = random::rng(1);
    for _ in 0..20 {
        let w = random::random_complex_of_dim(&mut rng, "w", 4, -2, 2);
        let v = random::random_complex_of_dim(&mut rng, "v", 3, -2, 2);
        let vt = random::random_complex_of_dim(&mut rng, "t", 3, -2, 2);
        let f = random::random_chain_map(&mut rng, &v, &w).unwrap();
        let ft = random::random_chain_map(&mut rng, &vt, &w).unwrap();
        let cyl = MappingCylinder::build(&v, &w, &vt, &f, &ft).unwrap();
        assert!(crate::linalg::check_d_squared(&cyl.complex));
        assert_eq!(chain_map_failure(&cyl.pi_v().unwrap(), &cyl.complex, &v).unwrap(), None);
        assert_eq!(chain_map_failure(&cyl.pi_vt().unwrap(), &cyl.complex, &vt).unwrap(), None);
        let x = SparseVec::unit(0);
        let sw = cyl.element(&SparseVec::new(), &cyl.proj_w(&x), &SparseVec::new());
        assert!(cyl.proj_v(&sw).is_zero() && cyl.proj_vt(&sw).is_zero());
    }
}

#[test]
fn identity_pair() {
    let v = complex(&[("a", 0), ("b", 1), ("c", 1)], &[("a", "b", 1)]);
    let id = GradedMap::identity(v.space());
    let rep = check_lemma(&v, &v, &v, &id, &id).unwrap();
    assert_eq!(rep.verdict, "pass");
    assert_eq!(rep.witnesses.len(), 1);
    assert!(rep.witnesses[0].lifts);
}

#[test]
fn constructed_quasi_isomorphisms_give_quasi_isomorphic_projections() {
    let mut rng = random::rng(2);
    for _ in 0..30 {
        let w = random::random_complex_of_dim(&mut rng, "w", 3, -2, 2);
        let (v, f) = random::random_quasi_iso_onto(&mut rng, &w, "v", 2, -2, 2).unwrap();
        let (vt, ft) = random::random_quasi_iso_onto(&mut rng, &w, "t", 2, -2, 2).unwrap();
        let rep = check_lemma(&v, &w, &vt, &f, &ft).unwrap();
        assert!(rep.f_quasi_iso && rep.ft_quasi_iso);
        assert_eq!(rep.verdict, "pass", "{rep:?}");
    }
}

#[test]
fn zero_map_violates_the_hypothesis() {
    let w = complex(&[("x", 0)], &[]);
    let zero = GradedMap::zero(w.space(), w.space(), 0);
    let id = GradedMap::identity(w.space());
    let rep = check_lemma(&w, &w, &w, &zero, &id).unwrap();
    assert!(!rep.f_quasi_iso);
    assert_eq!(rep.verdict, "hypothesis-violated");
    assert!(rep.witnesses.is_empty());
    assert!(rep.pi_v_quasi_iso && !rep.pi_vt_quasi_iso);
}


#[test]
fn explicit_instance_from_json() {
    let doc = LemmaDoc::from_json_str(
        r#"{"v": {"basis": [{"label": "a", "degree": 0}, {"label": "b", "degree": 1}],
                  "differential": [{"source": "a", "target": "b", "coeff": "1"}]},
            "w": {"basis": [{"label": "x", "degree": 1}]},
            "vt": {"basis": [{"label": "c", "degree": 1}]},
            "f": [],
            "ft": [{"source": "c", "target": "x", "coeff": "1/2"}]}"#,
    )
    .unwrap();
    let rep = doc.check().unwrap();
    // V is acyclic while W is not
    assert!(!rep.f_quasi_iso && rep.ft_quasi_iso);
    assert_eq!(rep.verdict, "hypothesis-violated");
    let mut bad = doc.clone();
    bad.ft[0].source = "q".into();
    assert!(matches!(bad.check(), Err(Error::Schema(_))));
}
