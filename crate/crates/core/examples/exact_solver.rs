//! The rational simplex and branch-and-bound on a hand-built model.

use eef::solver::text::write_model;
use eef::solver::{ilp_solve, lp_solve, IlpModel, Relation, Sense, SolverLimits};
use num_bigint::BigInt;
use num_rational::BigRational;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // max 3x + 4y  s.t.  2x + 3y <= 6,  x, y in {0..3}
    let mut model = IlpModel::new();
    let x = model.add_int_var("x", &BigInt::from(0), &BigInt::from(3))?;
    let y = model.add_int_var("y", &BigInt::from(0), &BigInt::from(3))?;
    model.add_constraint("cap", vec![r(2, 1), r(3, 1)], Relation::Le, r(6, 1))?;
    model.set_objective(Sense::Maximize, vec![r(3, 1), r(4, 1)])?;
    print!("{}", write_model(&model));

    let limits = SolverLimits::default();
    let lp = lp_solve(&model, &limits);
    let ilp = ilp_solve(&model, &limits);
    let show =
        |p: &Option<Vec<BigRational>>| p.as_ref().map(|v| format!("x = {}, y = {}", v[x], v[y]));
    println!(
        "LP  {:?} objective {:?} at {:?}",
        lp.status,
        lp.objective.map(|o| o.to_string()),
        show(&lp.assignment)
    );
    println!(
        "ILP {:?} objective {:?} at {:?}",
        ilp.status,
        ilp.objective.map(|o| o.to_string()),
        show(&ilp.assignment)
    );
    println!("nodes {}, pivots {}", ilp.stats.nodes, ilp.stats.pivots);
    Ok(())
}
