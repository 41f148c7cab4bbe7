//! Envy-freeness, EF1 and EFX: predicates on concrete allocations and their
//! linear encodings over allocation variables.
//!
//! All notions are checked only along the edges of the instance's envy
//! graph (every ordered pair of distinct agents when no graph is given).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{ErrorCode, InputError};
use crate::instance::{Allocation, Fairness, Instance};
use crate::solver::{AllocationVars, IlpModel, Relation};

/// `envier` values `envied`'s bundle `deficit` more than its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyPair {
    pub envier: usize,
    pub envied: usize,
    pub deficit: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnvyReport {
    pub envious_pairs: Vec<EnvyPair>,
}

impl EnvyReport {
    pub fn is_envy_free(&self) -> bool {
        self.envious_pairs.is_empty()
    }
}

pub fn is_envy_free(inst: &Instance, alloc: &Allocation) -> Result<EnvyReport, InputError> {
    inst.check_allocation(alloc)?;
    Ok(envy_report(inst, alloc))
}

pub(crate) fn envy_report(inst: &Instance, alloc: &Allocation) -> EnvyReport {
    let envious_pairs = inst
        .envy_edges()
        .into_iter()
        .filter_map(|(a, b)| {
            let deficit = inst.bundle_value(a, alloc, b) - inst.bundle_value(a, alloc, a);
            deficit.is_positive().then_some(EnvyPair {
                envier: a,
                envied: b,
                deficit,
            })
        })
        .collect();
    EnvyReport { envious_pairs }
}

fn require_nonnegative(inst: &Instance, notion: &str) -> Result<(), InputError> {
    if inst.has_negative_utility() {
        return Err(InputError::new(
            ErrorCode::UnsupportedCombination,
            "utilities",
            format!("{notion} is only defined for nonnegative utilities"),
        ));
    }
    Ok(())
}

/// Edges violating EF1: the envy survives removing the most valuable item
/// type (in the envier's eyes) held by the envied agent.
pub fn ef1_violations(
    inst: &Instance,
    alloc: &Allocation,
) -> Result<Vec<(usize, usize)>, InputError> {
    require_nonnegative(inst, "EF1")?;
    inst.check_allocation(alloc)?;
    Ok(ef1_violations_unchecked(inst, alloc))
}

pub(crate) fn ef1_violations_unchecked(inst: &Instance, alloc: &Allocation) -> Vec<(usize, usize)> {
    inst.envy_edges()
        .into_iter()
        .filter(|&(a, b)| {
            let own = inst.bundle_value(a, alloc, a);
            let other = inst.bundle_value(a, alloc, b);
            let best_removal = (0..inst.m())
                .filter(|&i| alloc.get(b, i).is_positive())
                .map(|i| inst.utility(a, i).clone())
                .max()
                .unwrap_or_else(BigInt::zero);
            own < other - best_removal
        })
        .collect()
}

pub fn is_ef1(inst: &Instance, alloc: &Allocation) -> Result<bool, InputError> {
    Ok(ef1_violations(inst, alloc)?.is_empty())
}

/// Edges violating EFX: some positively valued item type held by the envied
/// agent does not eliminate the envy when removed.
pub fn efx_violations(
    inst: &Instance,
    alloc: &Allocation,
) -> Result<Vec<(usize, usize)>, InputError> {
    require_nonnegative(inst, "EFX")?;
    inst.check_allocation(alloc)?;
    Ok(efx_violations_unchecked(inst, alloc))
}

pub(crate) fn efx_violations_unchecked(inst: &Instance, alloc: &Allocation) -> Vec<(usize, usize)> {
    inst.envy_edges()
        .into_iter()
        .filter(|&(a, b)| {
            let own = inst.bundle_value(a, alloc, a);
            let other = inst.bundle_value(a, alloc, b);
            let mut removable = (0..inst.m())
                .filter(|&i| alloc.get(b, i).is_positive() && inst.utility(a, i).is_positive())
                .peekable();
            if removable.peek().is_none() {
                return own < other;
            }
            removable.any(|i| own < &other - inst.utility(a, i))
        })
        .collect()
}

pub fn is_efx(inst: &Instance, alloc: &Allocation) -> Result<bool, InputError> {
    Ok(efx_violations(inst, alloc)?.is_empty())
}

/// Evaluates the instance's selected fairness notion.
pub fn satisfies(inst: &Instance, alloc: &Allocation) -> Result<bool, InputError> {
    match inst.fairness() {
        Fairness::Ef => Ok(is_envy_free(inst, alloc)?.is_envy_free()),
        Fairness::Ef1 => is_ef1(inst, alloc),
        Fairness::Efx => is_efx(inst, alloc),
    }
}

/// Same as [`satisfies`] for allocations already known to be valid.
pub(crate) fn satisfies_unchecked(inst: &Instance, alloc: &Allocation) -> bool {
    match inst.fairness() {
        Fairness::Ef => envy_report(inst, alloc).is_envy_free(),
        Fairness::Ef1 => ef1_violations_unchecked(inst, alloc).is_empty(),
        Fairness::Efx => efx_violations_unchecked(inst, alloc).is_empty(),
    }
}

/// Adds rows (and selector binaries) to `model` whose integer solutions,
/// projected onto `vars`, are exactly the allocations satisfying the
/// instance's fairness notion.
///
/// * EF: `Σ_i u_a(i) x_a^i ≥ Σ_i u_a(i) x_{a'}^i` per edge.
/// * EF1: per edge, binaries `y{a}_{a'}_{i}` for positively valued types,
///   at most one selected, `y ≤ x_{a'}^i`, and the envy row relaxed by
///   `Σ_i u_a(i) y`.
/// * EFX: per edge and positively valued type, a binary `h` forced to 1
///   whenever `x_{a'}^i ≥ 1`, and a big-M row enforcing the removal
///   condition when `h = 1`, with `M = UB_a - LB_a + 1`.
pub fn encode_fairness(
    inst: &Instance,
    vars: &AllocationVars,
    model: &mut IlpModel,
) -> Result<(), InputError> {
    if inst.fairness() != Fairness::Ef {
        require_nonnegative(inst, inst.fairness().as_str())?;
    }
    let one = BigInt::one();
    let neg_one = -BigInt::one();
    for (a, b) in inst.envy_edges() {
        let u = &inst.utilities()[a];
        let neg_u: Vec<BigInt> = u.iter().map(|v| -v).collect();
        let envy_terms = || vars.terms(a, u).chain(vars.terms(b, &neg_u));
        match inst.fairness() {
            Fairness::Ef => {
                model.add_int_row(
                    format!("ef_{a}_{b}"),
                    envy_terms(),
                    Relation::Ge,
                    BigInt::zero(),
                );
            }
            Fairness::Ef1 => {
                let selectors: Vec<(usize, usize)> = (0..inst.m())
                    .filter(|&i| u[i].is_positive())
                    .map(|i| {
                        let y = model
                            .add_binary(format!("y{a}_{b}_{i}"))
                            .expect("fresh selector");
                        (i, y)
                    })
                    .collect();
                model.add_int_row(
                    format!("ef1_{a}_{b}"),
                    envy_terms().chain(selectors.iter().map(|&(i, y)| (y, &u[i]))),
                    Relation::Ge,
                    BigInt::zero(),
                );
                if selectors.is_empty() {
                    continue;
                }
                model.add_int_row(
                    format!("ef1_{a}_{b}_pick"),
                    selectors.iter().map(|&(_, y)| (y, &one)),
                    Relation::Le,
                    one.clone(),
                );
                for &(i, y) in &selectors {
                    model.add_int_row(
                        format!("ef1_{a}_{b}_{i}_held"),
                        [(y, &one), (vars.var(b, i), &neg_one)],
                        Relation::Le,
                        BigInt::zero(),
                    );
                }
            }
            Fairness::Efx => {
                let big_m = inst.utility_upper_bound(a) - inst.utility_lower_bound(a) + 1;
                let neg_m = -&big_m;
                for i in (0..inst.m()).filter(|&i| u[i].is_positive()) {
                    let h = model
                        .add_binary(format!("h{a}_{b}_{i}"))
                        .expect("fresh selector");
                    let neg_mult = -inst.multiplicity(i);
                    model.add_int_row(
                        format!("efx_{a}_{b}_{i}_held"),
                        [(vars.var(b, i), &one), (h, &neg_mult)],
                        Relation::Le,
                        BigInt::zero(),
                    );
                    // own - other - M h ≥ -M - u_a(i)
                    model.add_int_row(
                        format!("efx_{a}_{b}_{i}"),
                        envy_terms().chain([(h, &neg_m)]),
                        Relation::Ge,
                        -&big_m - &u[i],
                    );
                }
            }
        }
    }
    Ok(())
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

    #[test]
    fn empty_bundles_are_envy_free() {
        let i = inst(&[2, 3], &[vec![1, 0], vec![3, 2]]);
        assert!(is_envy_free(&i, &Allocation::zeros(2, 2))
            .unwrap()
            .is_envy_free());
    }

    #[test]
    fn single_item_envy() {
        let i = inst(&[1], &[vec![1], vec![1]]);
        let report = is_envy_free(&i, &alloc(&[vec![1], vec![0]])).unwrap();
        assert_eq!(
            report.envious_pairs,
            vec![EnvyPair {
                envier: 1,
                envied: 0,
                deficit: BigInt::from(1)
            }]
        );
        let restricted = i.with_envy_graph(Some(vec![(0, 1)])).unwrap();
        assert!(is_envy_free(&restricted, &alloc(&[vec![1], vec![0]]))
            .unwrap()
            .is_envy_free());
    }

    #[test]
    fn ef1_examples() {
        let i = inst(&[1], &[vec![1], vec![1]]);
        assert!(is_ef1(&i, &alloc(&[vec![1], vec![0]])).unwrap());
        assert!(is_ef1(&i, &Allocation::zeros(2, 1)).unwrap());
        let i = inst(&[3], &[vec![1], vec![1]]);
        assert!(!is_ef1(&i, &alloc(&[vec![3], vec![0]])).unwrap());
    }

    #[test]
    fn efx_examples() {
        let i = inst(&[1, 1], &[vec![1, 1], vec![3, 1]]);
        assert!(!is_efx(&i, &alloc(&[vec![1, 1], vec![0, 0]])).unwrap());
        // Removing the value-3 item still leaves envy 1.
        assert!(!is_ef1(&i, &alloc(&[vec![1, 1], vec![0, 0]])).unwrap());
        let i = inst(&[2], &[vec![1], vec![1]]);
        assert!(is_efx(&i, &alloc(&[vec![1], vec![1]])).unwrap());
    }

    #[test]
    fn negative_utilities_rejected_for_relaxed_notions() {
        let i = inst(&[1], &[vec![-1], vec![1]]);
        let a = Allocation::zeros(2, 1);
        assert_eq!(
            is_ef1(&i, &a).unwrap_err().code,
            ErrorCode::UnsupportedCombination
        );
        assert_eq!(
            is_efx(&i, &a).unwrap_err().code,
            ErrorCode::UnsupportedCombination
        );
    }

    #[test]
    fn ef_encoding_row_count() {
        let i = inst(&[2], &[vec![1], vec![2]]);
        let mut model = IlpModel::new();
        let vars = AllocationVars::declare(&mut model, 2, &i.multiplicities());
        encode_fairness(&i, &vars, &mut model).unwrap();
        assert_eq!(model.constraints().len(), 2);
        assert_eq!(model.num_vars(), 2);

        let empty = i.with_envy_graph(Some(Vec::new())).unwrap();
        let mut model = IlpModel::new();
        let vars = AllocationVars::declare(&mut model, 2, &i.multiplicities());
        encode_fairness(&empty, &vars, &mut model).unwrap();
        assert!(model.constraints().is_empty());
    }
}
