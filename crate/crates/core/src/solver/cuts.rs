use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::model::{IlpModel, Relation};
use crate::instance::UtilityProfile;

/// Handle to an `n × m` block of integer allocation variables `x{a}_{i}`
/// with bounds `0 ≤ x ≤ m_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationVars {
    index: Vec<Vec<usize>>,
    lower: Vec<Vec<BigInt>>,
    upper: Vec<Vec<BigInt>>,
}

impl AllocationVars {
    /// Declares the block in `model`, agent-major.
    pub fn declare(model: &mut IlpModel, n: usize, multiplicities: &[BigInt]) -> Self {
        Self::declare_named(model, "x", n, multiplicities)
    }

    pub fn declare_named(
        model: &mut IlpModel,
        prefix: &str,
        n: usize,
        multiplicities: &[BigInt],
    ) -> Self {
        let zero = BigInt::zero();
        let index = (0..n)
            .map(|a| {
                multiplicities
                    .iter()
                    .enumerate()
                    .map(|(i, mi)| {
                        model
                            .add_int_var(format!("{prefix}{a}_{i}"), &zero, mi)
                            .expect("fresh allocation variable")
                    })
                    .collect()
            })
            .collect();
        AllocationVars {
            index,
            lower: vec![vec![zero; multiplicities.len()]; n],
            upper: vec![multiplicities.to_vec(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.index.len()
    }

    pub fn m(&self) -> usize {
        self.index.first().map_or(0, Vec::len)
    }

    pub fn var(&self, agent: usize, item: usize) -> usize {
        self.index[agent][item]
    }

    pub fn upper(&self, agent: usize, item: usize) -> &BigInt {
        &self.upper[agent][item]
    }

    /// Adds `Σ_a x_a^i ≤ m_i` for every item type.
    pub fn add_supply_constraints(&self, model: &mut IlpModel, multiplicities: &[BigInt]) {
        let one = BigInt::one();
        for (i, mi) in multiplicities.iter().enumerate() {
            model.add_int_row(
                format!("supply_{i}"),
                (0..self.n()).map(|a| (self.var(a, i), &one)),
                Relation::Le,
                mi.clone(),
            );
        }
    }

    /// Terms of `Σ_i coeffs[i] · x_{agent}^i`.
    pub fn terms<'a>(
        &'a self,
        agent: usize,
        coeffs: &'a [BigInt],
    ) -> impl Iterator<Item = (usize, &'a BigInt)> + 'a {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.var(agent, i), c))
    }

    /// Range `[lo, hi]` of `Σ_i coeffs[i] · x_{agent}^i` over the variable box.
    pub fn linear_range(&self, agent: usize, coeffs: &[BigInt]) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let a = c * &self.lower[agent][i];
            let b = c * &self.upper[agent][i];
            if c.is_negative() {
                lo += b;
                hi += a;
            } else {
                lo += a;
                hi += b;
            }
        }
        (lo, hi)
    }

    /// Reads the block out of a solver assignment.
    pub fn extract(&self, point: &[num_rational::BigRational]) -> Vec<Vec<BigInt>> {
        self.index
            .iter()
            .map(|row| row.iter().map(|&j| point[j].to_integer()).collect())
            .collect()
    }
}

/// Adds binaries `d{tag}_0 … d{tag}_n` and constraints forbidding every
/// allocation whose profile is dominated by `q`:
///
/// * `d_{a+1} = 1 ⇒ Σ_i u_a(i) x_a^i ≥ q_a + 1` for each agent `a`,
/// * `d_0 = 1 ⇒ Σ_a Σ_i u_a(i) x_a^i ≥ welfare(q)`,
/// * `Σ d ≥ 1`.
///
/// Each implication is a big-M row whose M comes from the exact range of
/// its left-hand side over the variable box.
pub fn add_nogood_dominance_cut(
    model: &mut IlpModel,
    vars: &AllocationVars,
    utilities: &[Vec<BigInt>],
    q: &UtilityProfile,
    tag: usize,
) {
    let one = BigInt::one();
    let n = vars.n();
    let welfare_sel = model
        .add_binary(format!("d{tag}_0"))
        .expect("fresh cut selector");
    let agent_sel: Vec<usize> = (0..n)
        .map(|a| {
            model
                .add_binary(format!("d{tag}_{}", a + 1))
                .expect("fresh cut selector")
        })
        .collect();

    let mut welfare_lo = BigInt::zero();
    let mut welfare_hi = BigInt::zero();
    for a in 0..n {
        let (lo, hi) = vars.linear_range(a, &utilities[a]);
        let target = q.agent(a) + 1;
        // d = 0 must leave the row implied by lo: M ≥ target - lo.
        let big_m: BigInt = (&hi - &lo + 1u32).max(&target - &lo);
        // Σ u x - M d ≥ target - M
        let neg_m = -&big_m;
        model.add_int_row(
            format!("cut{tag}_agent_{a}"),
            vars.terms(a, &utilities[a]).chain([(agent_sel[a], &neg_m)]),
            Relation::Ge,
            target - &big_m,
        );
        welfare_lo += lo;
        welfare_hi += hi;
    }
    let target = q.welfare().clone();
    let big_m: BigInt = (&welfare_hi - &welfare_lo + 1u32).max(&target - &welfare_lo);
    let neg_m = -&big_m;
    model.add_int_row(
        format!("cut{tag}_welfare"),
        (0..n)
            .flat_map(|a| vars.terms(a, &utilities[a]))
            .chain([(welfare_sel, &neg_m)]),
        Relation::Ge,
        target - &big_m,
    );
    model.add_int_row(
        format!("cut{tag}_any"),
        std::iter::once(welfare_sel)
            .chain(agent_sel.iter().copied())
            .map(|j| (j, &one)),
        Relation::Ge,
        one.clone(),
    );
}
