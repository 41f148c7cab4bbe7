//! Decides whether a fair, Pareto-efficient allocation exists.
//!
//! The procedure alternates between two integer programs. A set `D` of
//! recorded Pareto-efficient profiles starts empty; each round:
//!
//! 1. Maximize welfare over fair allocations whose profile is not dominated
//!    by any profile in `D` (one no-good cut per recorded profile). If there
//!    is none, every fair allocation is dominated: answer NO.
//! 2. Let `z` be the optimum and `p` its profile. If nothing dominates `p`,
//!    answer YES with `z`.
//! 3. Otherwise take a welfare-maximal allocation among those at least `p`;
//!    its profile `q` is Pareto-efficient and dominates `p`.
//! 4. If some fair allocation has profile exactly `q`, answer YES with it.
//!    This probe only shortcuts the loop; dropping it leaves the answer
//!    unchanged because `q` would eventually be found in step 1.
//! 5. Record `q` in `D` and repeat.
//!
//! A recorded `q` can never repeat: `z` would have been cut in step 1. The
//! number of Pareto-efficient profiles is finite, so the loop terminates.
//! With EF this answers the negation of the sentence "every envy-free
//! allocation is dominated".

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::dominance::{find_dominator, max_welfare_dominator};
use crate::error::{Error, LimitKind, Result};
use crate::fairness::{
    ef1_violations_unchecked, efx_violations_unchecked, encode_fairness, envy_report, EnvyReport,
};
use crate::instance::{Allocation, Fairness, Instance, UtilityProfile};
use crate::pilp::induced_b;
use crate::solver::{
    add_nogood_dominance_cut, ilp_solve, text::format_rational, AllocationVars, IlpModel, Relation,
    Sense, SolveOutcome, SolveStatus, SolverLimits,
};
use crate::verdict::{DecisionStats, Outcome, Verdict};

pub const DEFAULT_ITERATION_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub iteration_limit: u64,
    pub solver: SolverLimits,
    /// Step 4 of the loop.
    pub equality_probe: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            iteration_limit: DEFAULT_ITERATION_LIMIT,
            solver: SolverLimits::default(),
            equality_probe: true,
        }
    }
}

/// Step-one candidates of a run, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub candidates: Vec<UtilityProfile>,
}

fn fair_model(inst: &Instance) -> Result<(IlpModel, AllocationVars)> {
    let mut model = IlpModel::new();
    let mult = inst.multiplicities();
    let vars = AllocationVars::declare(&mut model, inst.n(), &mult);
    vars.add_supply_constraints(&mut model, &mult);
    encode_fairness(inst, &vars, &mut model)?;
    Ok((model, vars))
}

fn welfare_objective(inst: &Instance, vars: &AllocationVars, model: &mut IlpModel) {
    model.set_int_objective(
        Sense::Maximize,
        (0..inst.n()).flat_map(|a| vars.terms(a, &inst.utilities()[a])),
    );
}

fn solve(
    model: &IlpModel,
    config: &EngineConfig,
    stats: &mut DecisionStats,
) -> Result<SolveOutcome> {
    let out = ilp_solve(model, &config.solver);
    stats.record(&out.stats);
    out.check_limit(&config.solver)
}

/// Fair allocation whose profile equals `q`, if any.
fn fair_with_profile(
    inst: &Instance,
    q: &UtilityProfile,
    config: &EngineConfig,
    stats: &mut DecisionStats,
) -> Result<Option<Allocation>> {
    let (mut model, vars) = fair_model(inst)?;
    for a in 0..inst.n() {
        model.add_int_row(
            format!("profile_{a}"),
            vars.terms(a, &inst.utilities()[a]),
            Relation::Eq,
            q.agent(a).clone(),
        );
    }
    let out = solve(&model, config, stats)?;
    Ok(out
        .assignment
        .as_deref()
        .map(|pt| Allocation::new(vars.extract(pt)).expect("bounded variables")))
}

pub fn solve_eef(inst: &Instance, config: &EngineConfig) -> Result<Verdict> {
    solve_eef_traced(inst, config).map(|(v, _)| v)
}

pub fn solve_eef_traced(inst: &Instance, config: &EngineConfig) -> Result<(Verdict, Trace)> {
    let mut stats = DecisionStats::default();
    let mut trace = Trace::default();
    let mut blocked: Vec<UtilityProfile> = Vec::new();
    let (mut model, vars) = fair_model(inst)?;
    welfare_objective(inst, &vars, &mut model);

    let with_trace = |e: Error, iterations: u64, blocked: &[UtilityProfile]| match e {
        Error::Limit { kind, limit, .. } => Error::Limit {
            kind,
            limit,
            iterations,
            blocked_profiles: blocked.to_vec(),
        },
        other => other,
    };

    let mut iterations = 0u64;
    loop {
        if iterations >= config.iteration_limit {
            return Err(with_trace(
                Error::limit(LimitKind::Iterations, config.iteration_limit),
                iterations,
                &blocked,
            ));
        }
        iterations += 1;

        let out =
            solve(&model, config, &mut stats).map_err(|e| with_trace(e, iterations, &blocked))?;
        let point = match out.status {
            SolveStatus::Optimal => out.assignment.expect("optimal carries a point"),
            SolveStatus::Infeasible => {
                let profile =
                    trace.candidates.first().cloned().expect(
                        "the empty allocation is fair, so round one always has a candidate",
                    );
                let verdict = Verdict {
                    outcome: Outcome::No {
                        blocked_profiles: blocked,
                    },
                    profile,
                    iterations,
                    stats,
                };
                return Ok((verdict, trace));
            }
            other => unreachable!("bounded welfare program returned {other:?}"),
        };
        let z = Allocation::new(vars.extract(&point)).expect("bounded variables");
        let p = inst.profile_unchecked(&z);
        trace.candidates.push(p.clone());

        let mut counted = |r: Result<Option<Allocation>>| {
            stats.ilp_calls += 1;
            r.map_err(|e| with_trace(e, iterations, &blocked))
        };
        if counted(find_dominator(inst, &p, &config.solver))?.is_none() {
            let verdict = Verdict {
                outcome: Outcome::Yes { certificate: z },
                profile: p,
                iterations,
                stats,
            };
            return Ok((verdict, trace));
        }
        let best = counted(max_welfare_dominator(inst, &p, &config.solver))?
            .expect("a dominated profile has a welfare-maximal dominator");
        let q = inst.profile_unchecked(&best);

        if config.equality_probe {
            let probe = fair_with_profile(inst, &q, config, &mut stats)
                .map_err(|e| with_trace(e, iterations, &blocked))?;
            if let Some(certificate) = probe {
                let verdict = Verdict {
                    outcome: Outcome::Yes { certificate },
                    profile: q,
                    iterations,
                    stats,
                };
                return Ok((verdict, trace));
            }
        }

        add_nogood_dominance_cut(&mut model, &vars, inst.utilities(), &q, blocked.len());
        blocked.push(q);
    }
}

/// Independent replay of both properties for a concrete allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub fairness: Fairness,
    pub fair: bool,
    /// Plain envy along the envy graph, whatever notion is selected.
    pub envy: EnvyReport,
    /// Edges violating the selected notion.
    pub violations: Vec<(usize, usize)>,
    pub efficient: bool,
    pub dominator: Option<Allocation>,
    pub dominator_profile: Option<UtilityProfile>,
    pub profile: UtilityProfile,
    pub induced_b: Vec<BigRational>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.fair && self.efficient
    }

    pub fn to_value(&self) -> Value {
        let mut doc = json!({
            "fairness": self.fairness.as_str(),
            "fair": self.fair,
            "envious_pairs": self.envy.envious_pairs.iter().map(|p| json!({
                "envier": p.envier,
                "envied": p.envied,
                "deficit": p.deficit.to_string(),
            })).collect::<Vec<_>>(),
            "violations": self.violations.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "efficient": self.efficient,
            "profile": self.profile.to_value(),
            "welfare": self.profile.welfare().to_string(),
            "induced_b": self.induced_b.iter().map(format_rational).collect::<Vec<_>>(),
        });
        if let (Some(d), Some(dp)) = (&self.dominator, &self.dominator_profile) {
            doc["dominator"] = d.to_value();
            doc["dominator_profile"] = dp.to_value();
        }
        doc
    }
}

pub fn verify(inst: &Instance, alloc: &Allocation, limits: &SolverLimits) -> Result<VerifyReport> {
    let profile = inst.profile_of(alloc)?;
    let envy = envy_report(inst, alloc);
    let violations = match inst.fairness() {
        Fairness::Ef => envy
            .envious_pairs
            .iter()
            .map(|p| (p.envier, p.envied))
            .collect(),
        Fairness::Ef1 => ef1_violations_unchecked(inst, alloc),
        Fairness::Efx => efx_violations_unchecked(inst, alloc),
    };
    let dominator = find_dominator(inst, &profile, limits)?;
    Ok(VerifyReport {
        fairness: inst.fairness(),
        fair: violations.is_empty(),
        envy,
        violations,
        efficient: dominator.is_none(),
        dominator_profile: dominator.as_ref().map(|d| inst.profile_unchecked(d)),
        dominator,
        induced_b: induced_b(inst, alloc)?,
        profile,
    })
}
