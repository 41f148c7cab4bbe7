//! Depth-first branch-and-bound over the exact LP relaxation.
//!
//! Branching takes the lowest-index integer variable with a fractional LP
//! value; the floor child is explored before the ceiling child. Nodes are
//! pruned when their relaxation bound cannot strictly beat the incumbent.

use num_rational::BigRational;

use super::model::{IlpModel, Sense};
use super::simplex::{solve_relaxation, LpStatus};
use super::{SolveOutcome, SolveStats, SolveStatus, SolverLimits};

type Bound = Option<BigRational>;

struct Node {
    lower: Vec<Bound>,
    upper: Vec<Bound>,
}

pub(crate) fn branch_and_bound(
    model: &IlpModel,
    limits: &SolverLimits,
    stats: &mut SolveStats,
) -> SolveOutcome {
    let root = Node {
        lower: model.variables().iter().map(|v| v.lower.clone()).collect(),
        upper: model.variables().iter().map(|v| v.upper.clone()).collect(),
    };
    search(model, root, limits, stats)
}

fn search(
    model: &IlpModel,
    root: Node,
    limits: &SolverLimits,
    stats: &mut SolveStats,
) -> SolveOutcome {
    let minimize = model
        .objective()
        .map(|o| o.sense == Sense::Minimize)
        .unwrap_or(false);
    // Internally compare in "larger is better" orientation.
    let score = |v: &BigRational| if minimize { -v } else { v.clone() };

    let mut incumbent: Option<(Vec<BigRational>, BigRational)> = None;
    let mut stack = vec![root];

    while let Some(node) = stack.pop() {
        if stats.nodes >= limits.node_limit {
            return SolveOutcome::limit(stats.clone());
        }
        stats.nodes += 1;
        let budget = limits.pivot_limit.saturating_sub(stats.pivots);
        let lp = solve_relaxation(model, &node.lower, &node.upper, budget);
        stats.pivots += lp.pivots;
        stats.lp_solves += 1;

        match lp.status {
            LpStatus::PivotLimit => return SolveOutcome::limit(stats.clone()),
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                // The relaxation is unbounded; the integer problem is unbounded
                // exactly when this subproblem has an integer point.
                let mut feasibility = model.clone();
                feasibility.clear_objective();
                let sub = search(&feasibility, node, limits, stats);
                match sub.status {
                    SolveStatus::Feasible => return SolveOutcome::unbounded(stats.clone()),
                    SolveStatus::Limit => return SolveOutcome::limit(stats.clone()),
                    _ => continue,
                }
            }
            LpStatus::Optimal => {}
        }

        let bound = model.objective_value(&lp.point).map(|v| score(&v));
        if let (Some(b), Some((_, best))) = (&bound, &incumbent) {
            if b <= best {
                continue;
            }
        }

        let fractional = model
            .variables()
            .iter()
            .zip(&lp.point)
            .position(|(v, x)| v.integer && !x.is_integer());

        match fractional {
            None => match bound {
                None => {
                    return SolveOutcome {
                        status: SolveStatus::Feasible,
                        assignment: Some(lp.point),
                        objective: None,
                        stats: stats.clone(),
                    }
                }
                Some(b) => incumbent = Some((lp.point, b)),
            },
            Some(j) => {
                let x = &lp.point[j];
                let down = x.floor();
                let up = x.ceil();
                let mut ceil_child = Node {
                    lower: node.lower.clone(),
                    upper: node.upper.clone(),
                };
                ceil_child.lower[j] = Some(up);
                let mut floor_child = node;
                floor_child.upper[j] = Some(down);
                stack.push(ceil_child);
                stack.push(floor_child);
            }
        }
    }

    match incumbent {
        Some((point, best)) => SolveOutcome {
            status: SolveStatus::Optimal,
            assignment: Some(point),
            objective: Some(if minimize { -best } else { best }),
            stats: stats.clone(),
        },
        None => SolveOutcome {
            status: SolveStatus::Infeasible,
            assignment: None,
            objective: None,
            stats: stats.clone(),
        },
    }
}
