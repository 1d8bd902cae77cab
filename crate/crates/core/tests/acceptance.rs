//! The acceptance suite: every criterion runs exactly (rational arithmetic, no tolerance) and
//! prints one PASS/FAIL line. Runs without the libtest harness so the lines are always shown.

use std::collections::BTreeSet;
use std::time::Instant;

use dgcyl::suites::{
    arity_suite, combinatorics_suite, encoder_suite, linf_suite, mapcyl_suite, mc_suite, sf1_suite,
    strictness_suite, zigzag_suite, ArityParams, CombinatoricsParams, EncoderParams, LinfParams, MapcylParams,
    McParams, Sf1Params, StrictParams, ZigzagParams,
};
use dgcyl::trees::enumerate_sh;

const SEED: u64 = 20240601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Set partitions of `{1..n}` into `r` blocks, from all surjections onto `r` colours.
fn partitions_oracle(n: usize, r: usize) -> BTreeSet<BTreeSet<BTreeSet<usize>>> {
    let mut out = BTreeSet::new();
    let total = r.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut blocks = vec![BTreeSet::new(); r];
        for i in 1..=n {
            blocks[c % r].insert(i);
            c /= r;
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.insert(blocks.into_iter().collect());
        }
    }
    out
}

fn linf_params() -> LinfParams {
    LinfParams { seed: SEED, trials: 50, max_arity: 4, max_dim: 3, min_degree: -2, max_degree: 2, sizes: vec![2, 3, 4] }
}

fn c1() -> Outcome {
    let r = linf_suite(&linf_params()).expect("linf suite runs");
    let enough = r.by_size.values().all(|t| t.checked >= 50) && r.by_size.len() == 6;
    let failed: usize = r.by_size.values().map(|t| t.failed).sum();
    outcome(
        r.passed && enough && failed == 0 && r.two_r_cases > 0,
        format!("{} tuples, {} with two R and a T, {failed} nonzero residuals", r.cases.len(), r.two_r_cases),
    )
}

fn c2() -> Outcome {
    let r = mc_suite(&McParams { seed: SEED, trials: 60, max_arity: 3 }).expect("mc suite runs");
    let ok = r.passed && r.cases.len() >= 50 && r.mc_count > 0 && r.non_mc_count > 0;
    outcome(ok, format!("{} elements: {} MC, {} not MC, all consistent: {}", r.cases.len(), r.mc_count, r.non_mc_count, r.passed))
}

fn c3() -> Outcome {
    let r = sf1_suite(&Sf1Params { seed: SEED, trials: 50, max_arity: 3, max_dim: 3 }).expect("sF1 suite runs");
    let good = r.cases.iter().filter(|c| c.mc && c.structures_trivial && c.map_is_f1).count();
    outcome(r.passed && r.cases.len() >= 50, format!("{good}/{} chain maps decode to (0, F1, 0)", r.cases.len()))
}

fn c4() -> Outcome {
    let r = strictness_suite(&StrictParams { seed: SEED, trials: 50, max_arity: 3, max_inputs: 4 }).expect("strictness suite runs");
    let max_n = r.cases.iter().map(|c| c.degrees.len()).max().unwrap_or(0);
    outcome(r.passed && r.cases.len() >= 50 && max_n == 4, format!("{} trials up to {max_n} inputs, plain and twisted", r.cases.len()))
}

fn c5() -> Outcome {
    let r = arity_suite(&ArityParams { seed: SEED, instances: 20, max_arity: 4, max_dim: 2, max_extra: 1 }).expect("arity suite runs");
    let arities: usize = r.instances.iter().map(|i| i.arities.len()).sum();
    let top = r.instances.iter().flat_map(|i| i.arities.iter().map(|a| a.arity)).max().unwrap_or(0);
    outcome(
        r.passed && r.instances.len() >= 20 && top == 4,
        format!("{} instances, {arities} arity pieces up to arity {top}", r.instances.len()),
    )
}

fn c6() -> Outcome {
    let r = zigzag_suite(&ZigzagParams { seed: SEED, max_arity: 3, transports: 4 }).expect("zigzag suite runs");
    let pass = r.cases.iter().filter(|c| c.report.verdict == "pass").count();
    outcome(r.passed && r.cases.len() >= 10, format!("{pass}/{} scenarios with both projections quasi-isomorphisms", r.cases.len()))
}

fn c7() -> Outcome {
    let r = mapcyl_suite(&MapcylParams { seed: SEED, ..MapcylParams::default() }).expect("mapping cylinder suite runs");
    let lifted = r.cases.iter().flat_map(|c| &c.report.witnesses).filter(|w| w.lifts).count();
    outcome(
        r.passed && r.cases.len() >= 100 && lifted == r.witnesses && r.witnesses > 0,
        format!("{} instances, {lifted}/{} witnesses lift", r.cases.len(), r.witnesses),
    )
}

fn c8() -> Outcome {
    let r = combinatorics_suite(&CombinatoricsParams::default());
    let trees_ok = r.tree2.iter().all(|c| c.found == 1 << c.n) && r.tree2.len() == 6;
    let mut sh_ok = true;
    for n in 1..=7 {
        for k in 1..=n {
            let oracle = partitions_oracle(n, k);
            let got: BTreeSet<BTreeSet<BTreeSet<usize>>> = enumerate_sh(n, k)
                .iter()
                .map(|s| s.block_slices().iter().map(|b| b.iter().copied().collect()).collect())
                .collect();
            let row = r.sh.iter().find(|c| c.n == n && c.r == Some(k));
            sh_ok &= got == oracle && row.is_some_and(|c| c.found == oracle.len());
        }
    }
    let ins_ok = r.insertion.len() == 4 && r.insertion.iter().all(|i| i.bijective);
    outcome(
        r.passed && trees_ok && sh_ok && ins_ok,
        format!("Tree2 counts {trees_ok}, Sh against set partitions {sh_ok}, insertion bijection {ins_ok}"),
    )
}

fn c9() -> Outcome {
    let r = encoder_suite(&EncoderParams { seed: SEED, cases: 20, max_arity: 3 }).expect("encoder suite runs");
    let enough = ["dgla", "dga"].iter().all(|k| r.broken.get(*k).is_some_and(|&c| c >= 20));
    let broken_nonzero = r
        .cases
        .iter()
        .flat_map(|c| &c.perturbations)
        .filter(|p| !p.axioms_hold)
        .all(|p| !p.residual_zero);
    outcome(
        r.passed && enough && broken_nonzero,
        format!("{} genuine structures, broken perturbations {:?}", r.cases.len(), r.broken),
    )
}

fn c10() -> Outcome {
    fn twice<T: serde::Serialize>(f: impl Fn() -> T) -> bool {
        let a = serde_json::to_string(&f()).unwrap();
        let b = serde_json::to_string(&f()).unwrap();
        a == b
    }
    let checks = [
        ("linf", twice(|| linf_suite(&LinfParams { trials: 10, ..linf_params() }).unwrap())),
        ("mc", twice(|| mc_suite(&McParams { seed: SEED, trials: 60, max_arity: 3 }).unwrap())),
        ("sf1", twice(|| sf1_suite(&Sf1Params { seed: SEED, ..Sf1Params::default() }).unwrap())),
        ("strict", twice(|| strictness_suite(&StrictParams { seed: SEED, ..StrictParams::default() }).unwrap())),
        ("arity", twice(|| arity_suite(&ArityParams { seed: SEED, instances: 6, ..ArityParams::default() }).unwrap())),
        ("zigzag", twice(|| zigzag_suite(&ZigzagParams { seed: SEED, max_arity: 2, transports: 4 }).unwrap())),
        ("mapcyl", twice(|| mapcyl_suite(&MapcylParams { seed: SEED, ..MapcylParams::default() }).unwrap())),
        ("combinatorics", twice(|| combinatorics_suite(&CombinatoricsParams::default()))),
        ("encoder", twice(|| encoder_suite(&EncoderParams { seed: SEED, ..EncoderParams::default() }).unwrap())),
    ];
    let bad: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    outcome(bad.is_empty(), if bad.is_empty() { "all suite reports byte-identical on rerun".to_string() } else { format!("differs: {bad:?}") })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 L-infinity identities", c1),
        ("2 Maurer-Cartan equivalence", c2),
        ("3 sF1 is Maurer-Cartan", c3),
        ("4 strict projections", c4),
        ("5 arity-graded quasi-isomorphism", c5),
        ("6 zigzag of deformation complexes", c6),
        ("7 mapping cylinder lemma", c7),
        ("8 combinatorics", c8),
        ("9 structure recovery", c9),
        ("10 determinism", c10),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failures = 0;
    for (name, run) in criteria {
        if filter.as_ref().is_some_and(|f| !name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        if !o.passed {
            failures += 1;
        }
        println!(
            "criterion {name}: {} ({}) [{:.1}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
