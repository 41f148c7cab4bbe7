//! Exact linear and integer linear programming.
//!
//! Everything here works over `BigRational`; there is no tolerance parameter
//! anywhere. [`lp_solve`] is a bounded-variable primal simplex with Bland's
//! rule, [`ilp_solve`] wraps it in depth-first branch-and-bound.

mod bnb;
mod cuts;
mod model;
mod simplex;
pub mod text;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, LimitKind};

pub use cuts::{add_nogood_dominance_cut, AllocationVars};
pub use model::{Constraint, IlpModel, ModelError, Objective, Relation, Sense, Variable};

pub const DEFAULT_NODE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_PIVOT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    /// Branch-and-bound nodes per solve call.
    pub node_limit: u64,
    /// Simplex pivots per solve call, summed over all nodes.
    pub pivot_limit: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            node_limit: DEFAULT_NODE_LIMIT,
            pivot_limit: DEFAULT_PIVOT_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
    Limit,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub pivots: u64,
    pub lp_solves: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Present for `Optimal` and `Feasible`.
    pub assignment: Option<Vec<BigRational>>,
    /// Present for `Optimal`.
    pub objective: Option<BigRational>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    fn limit(stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::Limit,
            assignment: None,
            objective: None,
            stats,
        }
    }

    fn unbounded(stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::Unbounded,
            assignment: None,
            objective: None,
            stats,
        }
    }

    pub fn is_solution(&self) -> bool {
        matches!(self.status, SolveStatus::Optimal | SolveStatus::Feasible)
    }

    /// Integer values of the first `len` variables of the assignment.
    pub fn integer_prefix(&self, len: usize) -> Option<Vec<BigInt>> {
        self.assignment
            .as_ref()
            .map(|a| a[..len].iter().map(|v| v.to_integer()).collect())
    }

    /// Converts the `Limit` status into an error naming which limit was hit.
    pub(crate) fn check_limit(self, limits: &SolverLimits) -> Result<Self, Error> {
        if self.status != SolveStatus::Limit {
            return Ok(self);
        }
        Err(if self.stats.nodes >= limits.node_limit {
            Error::limit(LimitKind::Nodes, limits.node_limit)
        } else {
            Error::limit(LimitKind::Pivots, limits.pivot_limit)
        })
    }
}

/// Solves the LP relaxation (integrality flags ignored).
///
/// With an objective the status is `Optimal`; without one a feasible vertex
/// is returned with status `Feasible`.
pub fn lp_solve(model: &IlpModel, limits: &SolverLimits) -> SolveOutcome {
    let lower: Vec<_> = model.variables().iter().map(|v| v.lower.clone()).collect();
    let upper: Vec<_> = model.variables().iter().map(|v| v.upper.clone()).collect();
    let lp = simplex::solve_relaxation(model, &lower, &upper, limits.pivot_limit);
    let stats = SolveStats {
        nodes: 0,
        pivots: lp.pivots,
        lp_solves: 1,
    };
    match lp.status {
        simplex::LpStatus::Optimal => {
            let objective = model.objective_value(&lp.point);
            SolveOutcome {
                status: if objective.is_some() {
                    SolveStatus::Optimal
                } else {
                    SolveStatus::Feasible
                },
                assignment: Some(lp.point),
                objective,
                stats,
            }
        }
        simplex::LpStatus::Infeasible => SolveOutcome {
            status: SolveStatus::Infeasible,
            assignment: None,
            objective: None,
            stats,
        },
        simplex::LpStatus::Unbounded => SolveOutcome::unbounded(stats),
        simplex::LpStatus::PivotLimit => SolveOutcome::limit(stats),
    }
}

/// Solves the model with integrality enforced.
pub fn ilp_solve(model: &IlpModel, limits: &SolverLimits) -> SolveOutcome {
    let mut stats = SolveStats::default();
    bnb::branch_and_bound(model, limits, &mut stats)
}

pub(crate) fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn bounded(model: &mut IlpModel, name: &str, lo: i64, hi: i64, integer: bool) -> usize {
        model
            .add_variable(name, Some(r(lo, 1)), Some(r(hi, 1)), integer)
            .unwrap()
    }

    #[test]
    fn lp_single_constraint_fractional_optimum() {
        let mut m = IlpModel::new();
        let x = bounded(&mut m, "x", 0, 10, false);
        m.add_constraint("c", vec![r(1, 1)], Relation::Le, r(5, 2))
            .unwrap();
        m.set_objective(Sense::Maximize, vec![r(1, 1)]).unwrap();
        let out = lp_solve(&m, &SolverLimits::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.assignment.unwrap()[x], r(5, 2));
    }

    #[test]
    fn lp_detects_contradiction() {
        let mut m = IlpModel::new();
        m.add_variable("x", None, None, false).unwrap();
        m.add_constraint("lo", vec![r(1, 1)], Relation::Le, r(1, 1))
            .unwrap();
        m.add_constraint("hi", vec![r(1, 1)], Relation::Ge, r(2, 1))
            .unwrap();
        assert_eq!(
            lp_solve(&m, &SolverLimits::default()).status,
            SolveStatus::Infeasible
        );
    }

    #[test]
    fn lp_vertex_objective() {
        let mut m = IlpModel::new();
        m.add_variable("x", Some(BigRational::zero()), None, false)
            .unwrap();
        m.add_variable("y", Some(BigRational::zero()), None, false)
            .unwrap();
        m.add_constraint(
            "c",
            vec![r(1, 1), r(1, 1)],
            Relation::Le,
            BigRational::one(),
        )
        .unwrap();
        m.set_objective(Sense::Maximize, vec![r(1, 1), r(1, 1)])
            .unwrap();
        let out = lp_solve(&m, &SolverLimits::default());
        assert_eq!(out.objective, Some(BigRational::one()));
        assert!(m.is_satisfied_by(out.assignment.as_ref().unwrap(), false));
    }

    #[test]
    fn lp_unbounded() {
        let mut m = IlpModel::new();
        m.add_variable("x", Some(BigRational::zero()), None, false)
            .unwrap();
        m.add_variable("y", None, None, false).unwrap();
        m.add_constraint("c", vec![r(1, 1), r(-1, 1)], Relation::Le, r(3, 1))
            .unwrap();
        m.set_objective(Sense::Maximize, vec![r(1, 1), r(0, 1)])
            .unwrap();
        assert_eq!(
            lp_solve(&m, &SolverLimits::default()).status,
            SolveStatus::Unbounded
        );
    }

    #[test]
    fn lp_free_variable_minimum() {
        let mut m = IlpModel::new();
        m.add_variable("x", None, None, false).unwrap();
        m.add_constraint("c", vec![r(3, 1)], Relation::Ge, r(-7, 1))
            .unwrap();
        m.set_objective(Sense::Minimize, vec![r(1, 1)]).unwrap();
        let out = lp_solve(&m, &SolverLimits::default());
        assert_eq!(out.objective, Some(r(-7, 3)));
    }

    #[test]
    fn ilp_rounds_down() {
        let mut m = IlpModel::new();
        bounded(&mut m, "x", 0, 10, true);
        m.add_constraint("c", vec![r(1, 1)], Relation::Le, r(5, 2))
            .unwrap();
        m.set_objective(Sense::Maximize, vec![r(1, 1)]).unwrap();
        let out = ilp_solve(&m, &SolverLimits::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.assignment.unwrap()[0], r(2, 1));
    }

    #[test]
    fn ilp_knapsack_matches_brute_force() {
        let mut m = IlpModel::new();
        bounded(&mut m, "x", 0, 3, true);
        bounded(&mut m, "y", 0, 3, true);
        m.add_constraint("cap", vec![r(2, 1), r(3, 1)], Relation::Le, r(6, 1))
            .unwrap();
        m.set_objective(Sense::Maximize, vec![r(3, 1), r(4, 1)])
            .unwrap();
        let out = ilp_solve(&m, &SolverLimits::default());

        let brute = (0..=3i64)
            .flat_map(|x| (0..=3i64).map(move |y| (x, y)))
            .filter(|(x, y)| 2 * x + 3 * y <= 6)
            .map(|(x, y)| 3 * x + 4 * y)
            .max()
            .unwrap();
        assert_eq!(brute, 9);
        assert_eq!(out.objective, Some(r(brute, 1)));
        assert_eq!(out.assignment.unwrap(), vec![r(3, 1), r(0, 1)]);
    }

    #[test]
    fn ilp_node_limit_is_reported() {
        let mut m = IlpModel::new();
        bounded(&mut m, "x", 0, 10, true);
        bounded(&mut m, "y", 0, 10, true);
        m.add_constraint("c", vec![r(2, 1), r(2, 1)], Relation::Eq, r(7, 1))
            .unwrap();
        let limits = SolverLimits {
            node_limit: 1,
            ..SolverLimits::default()
        };
        let out = ilp_solve(&m, &limits);
        assert_eq!(out.status, SolveStatus::Limit);
        assert!(matches!(
            out.check_limit(&limits),
            Err(Error::Limit {
                kind: LimitKind::Nodes,
                ..
            })
        ));
        // Without the limit the parity argument shows infeasibility.
        assert_eq!(
            ilp_solve(&m, &SolverLimits::default()).status,
            SolveStatus::Infeasible
        );
    }

    #[test]
    fn ilp_unbounded_objective() {
        let mut m = IlpModel::new();
        bounded(&mut m, "x", 0, 1, true);
        m.add_variable("y", Some(BigRational::zero()), None, false)
            .unwrap();
        m.set_objective(Sense::Maximize, vec![r(0, 1), r(1, 1)])
            .unwrap();
        assert_eq!(
            ilp_solve(&m, &SolverLimits::default()).status,
            SolveStatus::Unbounded
        );

        // Unbounded relaxation but no integer point.
        m.add_constraint("odd", vec![r(2, 1), r(0, 1)], Relation::Eq, r(1, 1))
            .unwrap();
        assert_eq!(
            ilp_solve(&m, &SolverLimits::default()).status,
            SolveStatus::Infeasible
        );
    }

    #[test]
    fn pivot_limit_is_reported() {
        let mut m = IlpModel::new();
        bounded(&mut m, "x", 0, 10, false);
        bounded(&mut m, "y", 0, 10, false);
        m.add_constraint("c", vec![r(1, 1), r(1, 1)], Relation::Ge, r(3, 1))
            .unwrap();
        let limits = SolverLimits {
            pivot_limit: 0,
            ..SolverLimits::default()
        };
        assert_eq!(lp_solve(&m, &limits).status, SolveStatus::Limit);
    }
}
