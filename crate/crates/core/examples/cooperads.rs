//! The built-in cooperads, their arity dimensions, and a round trip through the JSON format.

use dgcyl::cooperad::{builtin_coass_shifted, builtin_cocom_shifted, CooperadDoc};

fn main() -> dgcyl::Result<()> {
    for coop in [builtin_cocom_shifted(4), builtin_coass_shifted(4)] {
        let dims: Vec<usize> = (1..=coop.cap()).map(|n| coop.dim(n)).collect();
        let s = coop.validate()?;
        println!("{}: dims by arity {dims:?}, {} trees and {} cuts checked", coop.name(), s.trees, s.cuts);
    }
    let json = builtin_cocom_shifted(3).to_json_string();
    let back = CooperadDoc::from_json_str(&json)?.build()?;
    println!("reloaded {} from {} bytes of JSON, valid: {}", back.name(), json.len(), back.validate().is_ok());
    Ok(())
}
