//! Replay both properties on a few hand-made allocations.

use eef::{verify, Allocation, Fairness, Instance, SolverLimits};

fn main() -> Result<(), eef::Error> {
    let inst = Instance::from_numbers(&[3, 1], &[vec![2, 1], vec![1, 4]])?;
    let limits = SolverLimits::default();
    for rows in [
        vec![vec![3, 0], vec![0, 1]],
        vec![vec![2, 0], vec![1, 1]],
        vec![vec![0, 0], vec![0, 0]],
    ] {
        let alloc = Allocation::from_numbers(&rows)?;
        let report = verify(&inst, &alloc, &limits)?;
        println!("{alloc}");
        println!(
            "  profile {}  fair {}  efficient {}",
            report.profile, report.fair, report.efficient
        );
        if let Some(d) = &report.dominator_profile {
            println!("  dominated by an allocation with profile {d}");
        }
    }

    // The same allocation under the weaker notions.
    let unit = Instance::from_numbers(&[1], &[vec![1], vec![1]])?;
    let given = Allocation::from_numbers(&[vec![1], vec![0]])?;
    for f in [Fairness::Ef, Fairness::Ef1, Fairness::Efx] {
        let report = verify(&unit.with_fairness(f)?, &given, &limits)?;
        println!("{}: fair {}", f.as_str(), report.fair);
    }
    Ok(())
}
