//! Run the seeded property suites and print their JSON reports.

use dgcyl::suites::{combinatorics_suite, mc_suite, CombinatoricsParams, McParams};

fn main() -> dgcyl::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mc = mc_suite(&McParams { seed, trials: 12, max_arity: 3 })?;
    println!("mc suite: {} cases, {} Maurer-Cartan, passed {}", mc.cases.len(), mc.mc_count, mc.passed);
    let comb = combinatorics_suite(&CombinatoricsParams::default());
    println!("{}", serde_json::to_string_pretty(&comb.tree2).unwrap());
    Ok(())
}
