//! Pareto domination between allocations and the integer program
//! "some allocation dominates profile p".
//!
//! Domination only depends on utility profiles. Since utilities are
//! integers, a strict improvement for some agent is the same as a welfare
//! gain of at least one; the welfare row below relies on that.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{InputError, Result};
use crate::instance::{Allocation, Instance, UtilityProfile};
use crate::solver::{
    ilp_solve, AllocationVars, IlpModel, Relation, Sense, SolveStatus, SolverLimits,
};

/// True iff `x` Pareto-dominates `z`.
pub fn pareto_dominates(
    inst: &Instance,
    x: &Allocation,
    z: &Allocation,
) -> Result<bool, InputError> {
    Ok(inst.profile_of(x)?.dominates(&inst.profile_of(z)?))
}

fn allocation_block(inst: &Instance) -> (IlpModel, AllocationVars) {
    let mut model = IlpModel::new();
    let mult = inst.multiplicities();
    let vars = AllocationVars::declare(&mut model, inst.n(), &mult);
    vars.add_supply_constraints(&mut model, &mult);
    (model, vars)
}

fn add_profile_floor(
    inst: &Instance,
    vars: &AllocationVars,
    model: &mut IlpModel,
    p: &UtilityProfile,
) {
    for a in 0..inst.n() {
        model.add_int_row(
            format!("dom_{a}"),
            vars.terms(a, &inst.utilities()[a]),
            Relation::Ge,
            p.agent(a).clone(),
        );
    }
}

fn welfare_terms<'a>(
    inst: &'a Instance,
    vars: &'a AllocationVars,
) -> impl Iterator<Item = (usize, &'a BigInt)> + 'a {
    (0..inst.n()).flat_map(move |a| vars.terms(a, &inst.utilities()[a]))
}

/// Feasibility model whose integer points are the allocations dominating
/// any allocation with profile `p`:
///
/// * `Σ_a x_a^i ≤ m_i` for every item type,
/// * `x_a^i ≥ 0` (variable bounds),
/// * `Σ_i u_a(i) x_a^i ≥ p_a` for every agent,
/// * `Σ_a Σ_i u_a(i) x_a^i ≥ 1 + welfare(p)`.
pub fn encode_domination(inst: &Instance, p: &UtilityProfile) -> IlpModel {
    domination_model(inst, p).0
}

fn domination_model(inst: &Instance, p: &UtilityProfile) -> (IlpModel, AllocationVars) {
    let (mut model, vars) = allocation_block(inst);
    add_profile_floor(inst, &vars, &mut model, p);
    model.add_int_row(
        "welfare",
        welfare_terms(inst, &vars),
        Relation::Ge,
        p.welfare() + BigInt::one(),
    );
    (model, vars)
}

fn to_allocation(vars: &AllocationVars, point: &[num_rational::BigRational]) -> Allocation {
    Allocation::new(vars.extract(point)).expect("solver respects variable bounds")
}

/// Some allocation dominating profile `p`, or `None` when `p` is
/// Pareto-efficient among achievable profiles.
pub fn find_dominator(
    inst: &Instance,
    p: &UtilityProfile,
    limits: &SolverLimits,
) -> Result<Option<Allocation>> {
    let (model, vars) = domination_model(inst, p);
    let out = ilp_solve(&model, limits).check_limit(limits)?;
    Ok(out.assignment.as_deref().map(|pt| to_allocation(&vars, pt)))
}

/// Among allocations whose profile is at least `p` componentwise, one of
/// maximum welfare, provided that welfare exceeds `welfare(p)`.
///
/// The returned allocation is Pareto-efficient: a dominator of it would also
/// be at least `p` and have strictly larger welfare.
pub fn max_welfare_dominator(
    inst: &Instance,
    p: &UtilityProfile,
    limits: &SolverLimits,
) -> Result<Option<Allocation>> {
    let (mut model, vars) = allocation_block(inst);
    add_profile_floor(inst, &vars, &mut model, p);
    model.set_int_objective(Sense::Maximize, welfare_terms(inst, &vars));
    let out = ilp_solve(&model, limits).check_limit(limits)?;
    match out.status {
        SolveStatus::Optimal => {
            let best = out.objective.expect("optimal carries objective");
            if best.to_integer() > *p.welfare() {
                Ok(Some(to_allocation(
                    &vars,
                    out.assignment.as_deref().unwrap(),
                )))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

pub fn is_pareto_efficient(
    inst: &Instance,
    alloc: &Allocation,
    limits: &SolverLimits,
) -> Result<bool> {
    let p = inst.profile_of(alloc)?;
    Ok(find_dominator(inst, &p, limits)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(mult: &[i64], u: &[Vec<i64>]) -> Instance {
        Instance::from_numbers(mult, u).unwrap()
    }

    fn alloc(rows: &[Vec<i64>]) -> Allocation {
        Allocation::from_numbers(rows).unwrap()
    }

    fn limits() -> SolverLimits {
        SolverLimits::default()
    }

    #[test]
    fn domination_on_allocations() {
        let i = inst(&[1], &[vec![1], vec![1]]);
        let x = alloc(&[vec![1], vec![0]]);
        let z = Allocation::zeros(2, 1);
        assert!(!pareto_dominates(&i, &x, &x).unwrap());
        assert!(pareto_dominates(&i, &x, &z).unwrap());
        assert!(!pareto_dominates(&i, &z, &x).unwrap());

        let p = UtilityProfile::from_numbers(&[3, 1]);
        let q = UtilityProfile::from_numbers(&[2, 2]);
        assert!(!p.dominates(&q) && !q.dominates(&p));
    }

    #[test]
    fn domination_model_solutions() {
        let i = inst(&[1], &[vec![1], vec![1]]);
        let model = encode_domination(&i, &UtilityProfile::from_numbers(&[0, 0]));
        let rat = |v: i64| num_rational::BigRational::from_integer(v.into());
        let solutions: Vec<(i64, i64)> = [(0, 0), (1, 0), (0, 1)]
            .into_iter()
            .filter(|&(a, b)| model.is_satisfied_by(&[rat(a), rat(b)], true))
            .collect();
        assert_eq!(solutions, vec![(1, 0), (0, 1)]);

        let found = find_dominator(&i, &UtilityProfile::from_numbers(&[0, 0]), &limits())
            .unwrap()
            .unwrap();
        assert_eq!(i.profile_of(&found).unwrap().welfare(), &BigInt::from(1));

        assert!(
            find_dominator(&i, &UtilityProfile::from_numbers(&[1, 0]), &limits())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn unit_utilities_need_the_plus_one() {
        // Without the +1 the profile (1, 0) would be "dominated" by itself.
        let i = inst(&[1], &[vec![1], vec![1]]);
        let model = encode_domination(&i, &UtilityProfile::from_numbers(&[1, 0]));
        let welfare_row = model
            .constraints()
            .iter()
            .find(|c| c.name == "welfare")
            .unwrap();
        assert_eq!(
            welfare_row.rhs,
            num_rational::BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn bound_violation_has_no_dominator() {
        let i = inst(&[2], &[vec![1], vec![3]]);
        assert!(
            find_dominator(&i, &UtilityProfile::from_numbers(&[3, 0]), &limits())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn max_welfare_dominator_examples() {
        let i = inst(&[1], &[vec![1], vec![1]]);
        let x = max_welfare_dominator(&i, &UtilityProfile::from_numbers(&[0, 0]), &limits())
            .unwrap()
            .unwrap();
        assert!(is_pareto_efficient(&i, &x, &limits()).unwrap());
        assert!(
            max_welfare_dominator(&i, &UtilityProfile::from_numbers(&[1, 0]), &limits())
                .unwrap()
                .is_none()
        );

        let single = inst(&[5], &[vec![1]]);
        let x = max_welfare_dominator(&single, &UtilityProfile::from_numbers(&[2]), &limits())
            .unwrap()
            .unwrap();
        assert_eq!(x, alloc(&[vec![5]]));
    }

    #[test]
    fn efficiency_examples() {
        let i = inst(&[1, 1], &[vec![1, 1], vec![1, 1]]);
        assert!(is_pareto_efficient(&i, &alloc(&[vec![1, 0], vec![0, 1]]), &limits()).unwrap());
        assert!(!is_pareto_efficient(&i, &Allocation::zeros(2, 2), &limits()).unwrap());
    }
}
