//! Seeded property suites. Each report is a pure function of its parameters, so rerunning a
//! suite with the same seed serializes to the same bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::convolution::{conv_bracket, mc_residual, BinaryAlgebra, BinaryKind, CofreeComplex, HomMap};
use crate::cooperad::{builtin_coass_shifted, builtin_cocom_shifted, TruncatedCooperad};
use crate::cylinder::{
    build_def_morphism_complex, describe_residual, untwisted_by_arity, verify_zigzag, ArityReport, CylAlgebra,
    CylElement, CylSpaces, ZigzagReport,
};
use crate::error::Result;
use crate::linalg::{is_quasi_iso, Scalar};
use crate::mapping_cylinder::{check_lemma, LemmaReport};
use crate::random::{self, random_element, DetRng};
use crate::samples::{self, quasi_isomorphisms, Arrow};
use crate::scenario::{encode_for, Instance};
use crate::trees;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

fn cooperads(cap: usize) -> [Arc<TruncatedCooperad>; 2] {
    [Arc::new(builtin_cocom_shifted(cap)), Arc::new(builtin_coass_shifted(cap))]
}

fn residual_text(x: &CylElement) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        describe_residual(x)
    }
}

fn only(sp: &CylSpaces, x: &CylElement, shape: char) -> Result<CylElement> {
    match shape {
        'P' => CylElement::from_p(sp, x.p().clone()),
        'T' => CylElement::from_t(sp, x.t().clone()),
        'R' => CylElement::from_r(sp, x.r().clone()),
        _ => Ok(x.clone()),
    }
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinfParams {
    pub seed: u64,
    /// Tuples per cooperad and tuple size.
    pub trials: usize,
    pub max_arity: usize,
    pub max_dim: usize,
    pub min_degree: i64,
    pub max_degree: i64,
    pub sizes: Vec<usize>,
}

impl Default for LinfParams {
    fn default() -> Self {
        LinfParams { seed: 0, trials: 50, max_arity: 4, max_dim: 3, min_degree: -2, max_degree: 2, sizes: vec![2, 3, 4] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinfCase {
    pub cooperad: String,
    pub dims: [usize; 2],
    /// Component shape and degree of every input: `P`, `T`, `R`, or `*` for all three.
    pub inputs: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinfReport {
    pub params: LinfParams,
    pub by_size: BTreeMap<String, Tally>,
    /// Tuples with at least two `R` and one `T` input.
    pub two_r_cases: usize,
    pub cases: Vec<LinfCase>,
    pub passed: bool,
}

/// The generalized Jacobi identities of `Cyl` on random homogeneous tuples.
pub fn linf_suite(p: &LinfParams) -> Result<LinfReport> {
    let mut rng = random::rng(p.seed);
    let mut by_size = BTreeMap::new();
    let mut cases = Vec::new();
    let mut two_r_cases = 0;
    for coop in cooperads(p.max_arity) {
        for &n in &p.sizes {
            let tally: &mut Tally = by_size.entry(format!("{}/n={n}", coop.name())).or_default();
            for trial in 0..p.trials {
                let a = random::random_complex(&mut rng, "a", p.max_dim, -1, 1);
                let b = random::random_complex(&mut rng, "b", p.max_dim, -1, 1);
                let sp = CylSpaces::new(coop.clone(), &a, &b);
                let mut shapes: Vec<char> = if trial % 4 == 0 {
                    (0..n).map(|i| if i < 2 && n > 2 || i == 0 { 'R' } else { 'T' }).collect()
                } else {
                    (0..n).map(|_| ['P', 'T', 'R', '*'][rng.gen_range(0..4)]).collect()
                };
                random::shuffle(&mut rng, &mut shapes);
                let rs = shapes.iter().filter(|&&c| c == 'R').count();
                if rs >= 2 && shapes.contains(&'T') {
                    two_r_cases += 1;
                }
                let mut fs = Vec::new();
                let mut inputs = Vec::new();
                for &c in &shapes {
                    let d = rng.gen_range(p.min_degree..=p.max_degree);
                    fs.push(only(&sp, &random_element(&mut rng, &sp, d, false), c)?);
                    inputs.push(format!("{c}{d}"));
                }
                let res = CylAlgebra::new(sp.clone()).linf_residual(&fs)?;
                tally.record(res.is_zero());
                cases.push(LinfCase {
                    cooperad: coop.name().to_string(),
                    dims: [a.space().total_dim(), b.space().total_dim()],
                    inputs,
                    residual: residual_text(&res),
                });
            }
        }
    }
    let passed = by_size.values().all(|t| t.failed == 0);
    Ok(LinfReport { params: p.clone(), by_size, two_r_cases, cases, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McParams {
    pub seed: u64,
    pub trials: usize,
    pub max_arity: usize,
}

impl Default for McParams {
    fn default() -> Self {
        McParams { seed: 0, trials: 60, max_arity: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McCase {
    pub kind: String,
    pub source: String,
    pub mc: bool,
    /// Whether the equations on `A`, on the map and on `B` hold.
    pub equations: [bool; 3],
    pub components_match: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub params: McParams,
    pub mc_count: usize,
    pub non_mc_count: usize,
    pub cases: Vec<McCase>,
    pub passed: bool,
}

fn strict_instances(cap: usize) -> Result<Vec<(Arrow, Instance)>> {
    quasi_isomorphisms()
        .into_iter()
        .map(|a| {
            let inst = Instance::strict(&a.source, &a.target, &a.f1, cap)?;
            Ok((a, inst))
        })
        .collect()
}

/// One structure constant changed by a small nonzero amount, if the algebra admits any.
pub fn random_perturbation(rng: &mut DetRng, alg: &BinaryAlgebra) -> Option<(BinaryAlgebra, String)> {
    let deg = alg.degrees();
    let n = deg.len();
    let mut slots = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if alg.kind == BinaryKind::Dgla && (b < a || (a == b && deg[a] % 2 == 0)) {
                continue;
            }
            slots.extend((0..n).filter(|&t| deg[t] == deg[a] + deg[b]).map(|t| (a, b, t)));
        }
    }
    if slots.is_empty() {
        return None;
    }
    let (a, b, t) = slots[rng.gen_range(0..slots.len())];
    let delta = random::small_nonzero(rng);
    let basis = alg.complex.space().flat_basis();
    let what = format!("({}, {}) -> {} by {delta}", basis[a].0, basis[b].0, basis[t].0);
    alg.perturbed(a, b, t, &delta).ok().map(|p| (p, what))
}

/// `U` is Maurer–Cartan in `Cyl` exactly when the three decoded equations hold.
pub fn mc_suite(p: &McParams) -> Result<McReport> {
    let mut rng = random::rng(p.seed);
    let catalog = strict_instances(p.max_arity)?;
    let coops = cooperads(p.max_arity);
    let mut cases = Vec::new();
    for trial in 0..p.trials {
        let (arrow, inst) = &catalog[rng.gen_range(0..catalog.len())];
        let (kind, source, sp, u) = match trial % 6 {
            0 | 3 => {
                let coop = coops[rng.gen_range(0..2)].clone();
                let a = random::random_complex(&mut rng, "a", 2, -1, 1);
                let b = random::random_complex(&mut rng, "b", 2, -1, 1);
                let sp = CylSpaces::new(coop.clone(), &a, &b);
                let u = if trial % 6 == 0 {
                    random_element(&mut rng, &sp, 1, false)
                } else {
                    let f1 = random::random_chain_map(&mut rng, &a, &b)?;
                    CylElement::from_t(&sp, sp.t_from_linear(0, &f1)?)?
                };
                let kind = if trial % 6 == 0 { "random" } else { "linear" };
                (kind, format!("random/{}", coop.name()), sp, u)
            }
            1 => ("strict", arrow.name.clone(), inst.spaces.clone(), inst.u()?),
            2 => {
                let zero = HomMap::zero(inst.spaces.a(), inst.spaces.b().base(), 0);
                let u = CylElement::new(inst.q_a.clone(), zero, inst.q_b.clone(), 1)?;
                ("structures-only", arrow.name.clone(), inst.spaces.clone(), u)
            }
            4 => {
                let u = CylElement::new(inst.q_a.clone(), inst.f.scale(&Scalar::from_int(2)), inst.q_b.clone(), 1)?;
                ("doubled-map", arrow.name.clone(), inst.spaces.clone(), u)
            }
            _ => match random_perturbation(&mut rng, &arrow.source) {
                Some((pert, what)) => {
                    let q = encode_for(inst.spaces.a(), &pert)?;
                    let u = CylElement::new(q, inst.f.clone(), inst.q_b.clone(), 1)?;
                    ("perturbed-source", format!("{} {what}", arrow.name), inst.spaces.clone(), u)
                }
                None => ("strict", arrow.name.clone(), inst.spaces.clone(), inst.u()?),
            },
        };
        let alg = CylAlgebra::new(sp);
        let res = alg.mc_residual(&u)?;
        let dec = alg.decode_mc(&u)?;
        let equations = [dec.residual_a.is_zero(), dec.residual_mixed.is_zero(), dec.residual_b.is_zero()];
        let components_match =
            res.p() == &dec.residual_a && res.t() == &dec.residual_mixed && res.r() == &dec.residual_b;
        let mc = res.is_zero();
        cases.push(McCase {
            kind: kind.into(),
            source,
            mc,
            equations,
            components_match,
            consistent: components_match && mc == equations.iter().all(|&e| e),
        });
    }
    let mc_count = cases.iter().filter(|c| c.mc).count();
    let passed = cases.iter().all(|c| c.consistent);
    Ok(McReport { params: p.clone(), mc_count, non_mc_count: cases.len() - mc_count, cases, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sf1Params {
    pub seed: u64,
    pub trials: usize,
    pub max_arity: usize,
    pub max_dim: usize,
}

impl Default for Sf1Params {
    fn default() -> Self {
        Sf1Params { seed: 0, trials: 50, max_arity: 3, max_dim: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sf1Case {
    pub cooperad: String,
    pub dims: [usize; 2],
    pub mc: bool,
    pub structures_trivial: bool,
    pub map_is_f1: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sf1Report {
    pub params: Sf1Params,
    pub cases: Vec<Sf1Case>,
    pub passed: bool,
}

/// `sF₁` is Maurer–Cartan for every chain map `F₁` and decodes to trivial structures and the
/// strict map `F₁`.
pub fn sf1_suite(p: &Sf1Params) -> Result<Sf1Report> {
    let mut rng = random::rng(p.seed);
    let coops = cooperads(p.max_arity);
    let mut cases = Vec::new();
    for trial in 0..p.trials {
        let coop = coops[trial % 2].clone();
        let a = random::random_complex(&mut rng, "a", p.max_dim, -1, 1);
        let b = random::random_complex(&mut rng, "b", p.max_dim, -1, 1);
        let f1 = random::random_chain_map(&mut rng, &a, &b)?;
        let sp = CylSpaces::new(coop.clone(), &a, &b);
        let x = CylElement::from_t(&sp, sp.t_from_linear(0, &f1)?)?;
        let alg = CylAlgebra::new(sp.clone());
        let mc = alg.mc_residual(&x)?.is_zero();
        let dec = alg.decode_mc(&x)?;
        let higher_vanish = (2..=sp.cap()).all(|n| dec.u_f.arity_part(n).is_zero());
        cases.push(Sf1Case {
            cooperad: coop.name().to_string(),
            dims: [a.space().total_dim(), b.space().total_dim()],
            mc: mc && dec.is_mc(),
            structures_trivial: dec.q_a.is_zero() && dec.q_b.is_zero(),
            map_is_f1: higher_vanish && sp.linear_part(&dec.u_f)? == f1,
        });
    }
    let passed = cases.iter().all(|c| c.mc && c.structures_trivial && c.map_is_f1);
    Ok(Sf1Report { params: p.clone(), cases, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrictParams {
    pub seed: u64,
    pub trials: usize,
    pub max_arity: usize,
    pub max_inputs: usize,
}

impl Default for StrictParams {
    fn default() -> Self {
        StrictParams { seed: 0, trials: 50, max_arity: 3, max_inputs: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrictCase {
    pub arrow: String,
    pub degrees: Vec<i64>,
    /// `[plain, twisted]` for each projection.
    pub pi_a: [bool; 2],
    pub pi_b: [bool; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrictReport {
    pub params: StrictParams,
    pub cases: Vec<StrictCase>,
    pub passed: bool,
}

/// The bracket of `Conv` on the images, twisted by `q` when given: `∂f + [q, f]` for one
/// input, the shifted binary bracket for two, and zero beyond.
fn conv_side(q: Option<&HomMap>, xs: &[&HomMap], degrees: &[i64]) -> Result<HomMap> {
    match xs {
        [f] => {
            let mut out = f.differential();
            if let Some(q) = q {
                out.add_scaled(&conv_bracket(q, f)?, &Scalar::one())?;
            }
            Ok(out)
        }
        [f, g] => Ok(conv_bracket(f, g)?.scale(&-Scalar::sign(degrees[0]))),
        _ => {
            let d = degrees.iter().sum::<i64>() + 1 - (xs.len() as i64 - 1);
            Ok(HomMap::zero(xs[0].source(), xs[0].target(), d))
        }
    }
}

/// `π_A` and `π_B` intertwine the brackets of `Cyl` and of `Def(A⇝B)` with those of the
/// convolution algebras of `A` and `B`.
pub fn strictness_suite(p: &StrictParams) -> Result<StrictReport> {
    let mut rng = random::rng(p.seed);
    let catalog = strict_instances(p.max_arity)?;
    let mut defs: BTreeMap<usize, CylAlgebra> = BTreeMap::new();
    let mut cases = Vec::new();
    for _ in 0..p.trials {
        let k = rng.gen_range(0..catalog.len());
        let (arrow, inst) = &catalog[k];
        if let std::collections::btree_map::Entry::Vacant(e) = defs.entry(k) {
            e.insert(build_def_morphism_complex(&inst.q_a, &inst.q_b, &inst.f)?.0);
        }
        let def = &defs[&k];
        let sp = &inst.spaces;
        let plain = CylAlgebra::new(sp.clone());
        let n = rng.gen_range(1..=p.max_inputs);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=2)).collect();
        let xs: Vec<CylElement> = degrees.iter().map(|&d| random_element(&mut rng, sp, d, true)).collect();
        let refs: Vec<&CylElement> = xs.iter().collect();
        let ps: Vec<&HomMap> = xs.iter().map(CylElement::p).collect();
        let rs: Vec<&HomMap> = xs.iter().map(CylElement::r).collect();
        let mut pi_a = [false; 2];
        let mut pi_b = [false; 2];
        for (i, (alg, qa, qb)) in [(&plain, None, None), (def, Some(&inst.q_a), Some(&inst.q_b))].into_iter().enumerate() {
            let out = alg.bracket(&refs)?;
            pi_a[i] = alg.project_a(&out).values() == conv_side(qa, &ps, &degrees)?.values();
            pi_b[i] = alg.project_b(&out).values() == conv_side(qb, &rs, &degrees)?.values();
        }
        cases.push(StrictCase { arrow: arrow.name.clone(), degrees, pi_a, pi_b });
    }
    let passed = cases.iter().all(|c| c.pi_a.iter().chain(&c.pi_b).all(|&b| b));
    Ok(StrictReport { params: p.clone(), cases, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArityParams {
    pub seed: u64,
    pub instances: usize,
    pub max_arity: usize,
    pub max_dim: usize,
    pub max_extra: usize,
}

impl Default for ArityParams {
    fn default() -> Self {
        ArityParams { seed: 0, instances: 20, max_arity: 4, max_dim: 2, max_extra: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArityInstance {
    pub cooperad: String,
    pub cap: usize,
    pub dims: [usize; 2],
    pub f1_quasi_iso: bool,
    pub arities: Vec<ArityReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArityReportSet {
    pub params: ArityParams,
    pub instances: Vec<ArityInstance>,
    pub passed: bool,
}

/// The untwisted `Cyl∘(C, A, B)^{sF₁}` against `Hom(C∘(A), A)` and `Hom(C∘(B), B)`, arity by
/// arity, for constructed quasi-isomorphisms `F₁`.
pub fn arity_suite(p: &ArityParams) -> Result<ArityReportSet> {
    let mut rng = random::rng(p.seed);
    let lower = p.max_arity.saturating_sub(1).max(1);
    let coops = [cooperads(p.max_arity), cooperads(lower)];
    let mut instances = Vec::new();
    for i in 0..p.instances {
        // alternate the cooperad, and the cap between N and N − 1
        let coop = coops[(i / 2) % 2][i % 2].clone();
        let b = random::random_complex(&mut rng, "b", p.max_dim, -1, 1);
        let (a, f1) = random::random_quasi_iso_onto(&mut rng, &b, "a", p.max_extra, -1, 1)?;
        let sp = CylSpaces::new(coop.clone(), &a, &b);
        let f1_quasi_iso = is_quasi_iso(&f1, &a, &b)?;
        let arities = untwisted_by_arity(&sp, &f1)?;
        let passed = f1_quasi_iso && arities.iter().all(|r| r.pi_a_quasi_iso && r.pi_b_quasi_iso);
        instances.push(ArityInstance {
            cooperad: coop.name().to_string(),
            cap: coop.cap(),
            dims: [a.space().total_dim(), b.space().total_dim()],
            f1_quasi_iso,
            arities,
            passed,
        });
    }
    let passed = instances.iter().all(|i| i.passed);
    Ok(ArityReportSet { params: p.clone(), instances, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZigzagParams {
    pub seed: u64,
    pub max_arity: usize,
    /// Random transports of built-in algebras added to the fixed scenarios.
    pub transports: usize,
}

impl Default for ZigzagParams {
    fn default() -> Self {
        ZigzagParams { seed: 0, max_arity: 3, transports: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZigzagCase {
    pub name: String,
    pub report: ZigzagReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZigzagSuiteReport {
    pub params: ZigzagParams,
    pub cases: Vec<ZigzagCase>,
    pub passed: bool,
}

/// The scenarios of the zigzag suite: the built-in strict quasi-isomorphisms, then
/// isomorphisms onto random transports of the built-in algebras.
pub fn zigzag_arrows(seed: u64, transports: usize) -> Result<Vec<Arrow>> {
    let mut rng = random::rng(seed);
    let mut arrows = quasi_isomorphisms();
    let algs = samples::algebras();
    for k in 0..transports {
        let (name, alg) = &algs[rng.gen_range(0..algs.len())];
        let (target, f1) = random::random_isomorphic(&mut rng, alg)?;
        arrows.push(Arrow { name: format!("transport_{name}_{k}"), source: alg.clone(), target, f1 });
    }
    Ok(arrows)
}

/// `Def(A) ← Def(A⇝B) → Def(B)` on strict quasi-isomorphisms.
pub fn zigzag_suite(p: &ZigzagParams) -> Result<ZigzagSuiteReport> {
    let mut cases = Vec::new();
    for arrow in zigzag_arrows(p.seed, p.transports)? {
        let inst = Instance::strict(&arrow.source, &arrow.target, &arrow.f1, p.max_arity)?;
        let report = verify_zigzag(&inst.q_a, &inst.q_b, &inst.f)?;
        cases.push(ZigzagCase { name: arrow.name, report });
    }
    let passed = cases.iter().all(|c| c.report.f1_quasi_iso && c.report.verdict == "pass");
    Ok(ZigzagSuiteReport { params: p.clone(), cases, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapcylParams {
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub max_extra: usize,
    pub min_degree: i64,
    pub max_degree: i64,
}

impl Default for MapcylParams {
    fn default() -> Self {
        MapcylParams { seed: 0, trials: 100, max_dim: 3, max_extra: 2, min_degree: -2, max_degree: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapcylCase {
    /// Dimensions of `V`, `W`, `Ṽ`.
    pub dims: [usize; 3],
    pub report: LemmaReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapcylReport {
    pub params: MapcylParams,
    pub witnesses: usize,
    pub cases: Vec<MapcylCase>,
    pub passed: bool,
}

/// The mapping cylinder of two constructed quasi-isomorphisms `V → W ← Ṽ`.
pub fn mapcyl_suite(p: &MapcylParams) -> Result<MapcylReport> {
    let mut rng = random::rng(p.seed);
    let mut cases = Vec::new();
    for _ in 0..p.trials {
        let w = random::random_complex(&mut rng, "w", p.max_dim, p.min_degree, p.max_degree);
        let (v, f) = random::random_quasi_iso_onto(&mut rng, &w, "v", p.max_extra, p.min_degree, p.max_degree)?;
        let (vt, ft) = random::random_quasi_iso_onto(&mut rng, &w, "t", p.max_extra, p.min_degree, p.max_degree)?;
        let report = check_lemma(&v, &w, &vt, &f, &ft)?;
        cases.push(MapcylCase { dims: [v.space().total_dim(), w.space().total_dim(), vt.space().total_dim()], report });
    }
    let witnesses = cases.iter().map(|c| c.report.witnesses.len()).sum();
    let passed = cases.iter().all(|c| c.report.verdict == "pass");
    Ok(MapcylReport { params: p.clone(), witnesses, cases, passed })
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinatoricsParams {
    pub max_tree2: usize,
    pub max_sh: usize,
    pub max_insertion: usize,
}

impl Default for CombinatoricsParams {
    fn default() -> Self {
        CombinatoricsParams { max_tree2: 6, max_sh: 7, max_insertion: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub r: Option<usize>,
    pub found: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionRow {
    pub n: usize,
    pub bijective: bool,
    /// Sizes of the two sides of the bijection.
    pub sizes: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinatoricsReport {
    pub params: CombinatoricsParams,
    pub tree2: Vec<CountRow>,
    pub sh: Vec<CountRow>,
    pub insertion: Vec<InsertionRow>,
    pub passed: bool,
}

/// Stirling numbers of the second kind by their recurrence.
pub fn stirling2(n: usize, r: usize) -> usize {
    let mut row = vec![1usize];
    for m in 1..=n {
        let mut next = vec![0usize; m + 1];
        for k in 1..=m {
            next[k] = k * row.get(k).copied().unwrap_or(0) + row[k - 1];
        }
        row = next;
    }
    row.get(r).copied().unwrap_or(0)
}

pub fn combinatorics_suite(p: &CombinatoricsParams) -> CombinatoricsReport {
    let tree2: Vec<CountRow> = (1..=p.max_tree2)
        .map(|n| CountRow { n, r: None, found: trees::enumerate_tree2_classes(n).len(), expected: 1 << n })
        .collect();
    let sh: Vec<CountRow> = (1..=p.max_sh)
        .flat_map(|n| (1..=n).map(move |r| (n, r)))
        .map(|(n, r)| CountRow { n, r: Some(r), found: trees::enumerate_sh(n, r).len(), expected: stirling2(n, r) })
        .collect();
    let insertion: Vec<InsertionRow> = (1..=p.max_insertion)
        .map(|n| InsertionRow {
            n,
            bijective: trees::verify_insertion_bijection(n),
            sizes: trees::insertion_bijection_counts(n),
        })
        .collect();
    let passed = tree2.iter().chain(&sh).all(|c| c.found == c.expected) && insertion.iter().all(|i| i.bijective);
    CombinatoricsReport { params: p.clone(), tree2, sh, insertion, passed }
}

// ---------------------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EncoderParams {
    pub seed: u64,
    /// Cases per kind of algebra.
    pub cases: usize,
    pub max_arity: usize,
}

impl Default for EncoderParams {
    fn default() -> Self {
        EncoderParams { seed: 0, cases: 20, max_arity: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    pub change: String,
    pub residual_zero: bool,
    pub axioms_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EncoderCase {
    pub kind: BinaryKind,
    pub base: String,
    pub residual_zero: bool,
    pub axioms_hold: bool,
    /// Perturbations tried in order until one breaks the axioms.
    pub perturbations: Vec<Perturbation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EncoderReport {
    pub params: EncoderParams,
    /// Perturbations that break the structure, by kind.
    pub broken: BTreeMap<String, usize>,
    pub cases: Vec<EncoderCase>,
    pub passed: bool,
}

/// The MC residual of an encoded structure vanishes exactly when the axioms hold, checked on
/// random transports of the built-in algebras and on single-constant perturbations.
pub fn encoder_suite(p: &EncoderParams) -> Result<EncoderReport> {
    const ATTEMPTS: usize = 24;
    let mut rng = random::rng(p.seed);
    let mut cases = Vec::new();
    let mut broken = BTreeMap::new();
    for kind in [BinaryKind::Dgla, BinaryKind::Dga] {
        let coop = crate::scenario::cooperad_for(kind, p.max_arity);
        let bases: Vec<(&str, BinaryAlgebra)> = samples::algebras()
            .into_iter()
            // every bracket on two generators is a Lie bracket, and ℚ·1 has only associative
            // products, so perturbations of these never break the axioms
            .filter(|(name, alg)| alg.kind == kind && !matches!(*name, "line_lie" | "affine_lie" | "ground_dga"))
            .collect();
        let count: &mut usize = broken.entry(format!("{kind:?}").to_lowercase()).or_default();
        for i in 0..p.cases {
            let (name, base) = &bases[i % bases.len()];
            let (alg, _) = random::random_isomorphic(&mut rng, base)?;
            let src = CofreeComplex::new(coop.clone(), &alg.complex);
            let residual = |a: &BinaryAlgebra| -> Result<bool> { Ok(mc_residual(&encode_for(&src, a)?)?.is_zero()) };
            let mut perturbations = Vec::new();
            for _ in 0..ATTEMPTS {
                let Some((pert, change)) = random_perturbation(&mut rng, &alg) else { break };
                let axioms_hold = pert.axiom_defect().is_none();
                perturbations.push(Perturbation { change, residual_zero: residual(&pert)?, axioms_hold });
                if !axioms_hold {
                    *count += 1;
                    break;
                }
            }
            cases.push(EncoderCase {
                kind,
                base: name.to_string(),
                residual_zero: residual(&alg)?,
                axioms_hold: alg.axiom_defect().is_none(),
                perturbations,
            });
        }
    }
    let passed = cases.iter().all(|c| {
        c.residual_zero && c.axioms_hold && c.perturbations.iter().all(|q| q.residual_zero == q.axioms_hold)
    });
    Ok(EncoderReport { params: p.clone(), broken, cases, passed })
}
