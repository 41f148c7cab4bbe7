//! Decide an instance read from a file, or a built-in one.
//!
//!     cargo run --example solve_instance -- tests/data/corpus/three_agents.json

use eef::{parse_instance, serialize_verdict, solve_eef, EngineConfig, Instance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = match std::env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => Instance::from_numbers(&[2, 1], &[vec![2, -1], vec![1, 1]])?,
    };
    let verdict = solve_eef(&inst, &EngineConfig::default())?;
    print!("{}", serialize_verdict(&verdict));
    Ok(())
}
