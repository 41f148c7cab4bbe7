//! Exhaustive enumeration next to the engine on small random instances.

use eef::generate::{generate, GenConfig};
use eef::oracle::DEFAULT_ENUM_CAP;
use eef::{brute_eef, solve_eef, EngineConfig};

fn main() -> Result<(), eef::Error> {
    println!("seed answer allocations fair pareto both engine");
    for seed in 0..12 {
        let inst = generate(&GenConfig::new(3, 2, seed))?;
        let brute = brute_eef(&inst, DEFAULT_ENUM_CAP, 2)?;
        let engine = solve_eef(&inst, &EngineConfig::default())?;
        let c = brute.census;
        println!(
            "{seed:>4} {:>6} {:>11} {:>4} {:>6} {:>4} {:>6}",
            brute.verdict.answer().as_str(),
            c.allocations,
            c.fair,
            c.pareto,
            c.intersection,
            engine.answer().as_str()
        );
    }
    Ok(())
}
