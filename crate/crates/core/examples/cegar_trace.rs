//! Watch the engine alternate between fair candidates and dominators.

use eef::engine::solve_eef_traced;
use eef::generate::{generate, GenConfig};
use eef::EngineConfig;

fn main() -> Result<(), eef::Error> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(190);
    let inst = generate(&GenConfig::new(3, 3, seed))?;
    println!("utilities {:?}", inst.utilities());
    println!("copies    {:?}", inst.multiplicities());
    let (verdict, trace) = solve_eef_traced(&inst, &EngineConfig::default())?;
    for (k, p) in trace.candidates.iter().enumerate() {
        println!("round {}: best fair profile {p}", k + 1);
        if let Some(q) = verdict.blocked_profiles().get(k) {
            println!("         blocked by efficient profile {q}");
        }
    }
    println!(
        "{} after {} rounds",
        verdict.answer().as_str(),
        verdict.iterations
    );
    Ok(())
}
