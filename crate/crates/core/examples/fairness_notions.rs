//! One instance, three fairness notions, with and without an envy graph.

use eef::{solve_eef, EngineConfig, Fairness, Instance};

fn main() -> Result<(), eef::Error> {
    // Three copies of one good valued 1 by both agents. Under EF every
    // split handing out all copies is envious, so the answer is NO; EF1 and
    // EFX tolerate one copy of difference. Dropping the edge a2->a1 lets
    // a1 keep everything.
    let inst = Instance::from_numbers(&[3], &[vec![1], vec![1]])?;
    for f in [Fairness::Ef, Fairness::Ef1, Fairness::Efx] {
        for graph in [None, Some(vec![(0, 1)])] {
            let variant = inst.with_fairness(f)?.with_envy_graph(graph.clone())?;
            let v = solve_eef(&variant, &EngineConfig::default())?;
            let alloc = v.certificate().map_or("-".to_string(), |a| a.to_string());
            println!(
                "{:<3} {:<10} {:<3} {}",
                f.as_str(),
                if graph.is_some() {
                    "a1->a2"
                } else {
                    "complete"
                },
                v.answer().as_str(),
                alloc
            );
        }
    }
    Ok(())
}
