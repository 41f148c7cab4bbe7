//! Two agents, one item type valued 1 by both. An envy-free and efficient
//! allocation exists exactly when the number of copies is even, and the
//! work done does not grow with the number of copies.

use std::time::Instant;

use eef::{solve_eef, EngineConfig, Instance};
use num_bigint::BigInt;

fn main() -> Result<(), eef::Error> {
    for exp in [3u32, 6, 9, 12, 30, 100] {
        for extra in [0u32, 1] {
            let copies = BigInt::from(10u32).pow(exp) + extra;
            let inst = Instance::from_numbers(std::slice::from_ref(&copies), &[vec![1], vec![1]])?;
            let start = Instant::now();
            let v = solve_eef(&inst, &EngineConfig::default())?;
            let label = format!("10^{exp}{}", if extra == 1 { "+1" } else { "" });
            println!(
                "{label:<9} {:<3} {:>3} iterations {:>5} pivots {:>10.2?}",
                v.answer().as_str(),
                v.iterations,
                v.stats.pivots,
                start.elapsed()
            );
        }
    }
    Ok(())
}
