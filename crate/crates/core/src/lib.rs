//! Exact decision procedure for envy-free, Pareto-efficient allocations of
//! indivisible items given as item types with (possibly huge) multiplicities.
//!
//! ```
//! use eef::{solve_eef, Answer, EngineConfig, Instance};
//!
//! // Two agents, 1000 identical items valued 1 by both.
//! let inst = Instance::from_numbers(&[1000], &[vec![1], vec![1]]).unwrap();
//! let verdict = solve_eef(&inst, &EngineConfig::default()).unwrap();
//! assert_eq!(verdict.answer(), Answer::Yes);
//! ```

pub mod cli;
pub mod dominance;
pub mod engine;
pub mod error;
pub mod fairness;
pub mod generate;
pub mod instance;
pub mod oracle;
pub mod pilp;
pub mod solver;
pub mod verdict;

pub use dominance::{find_dominator, is_pareto_efficient, max_welfare_dominator, pareto_dominates};
pub use engine::{solve_eef, verify, EngineConfig, VerifyReport};
pub use error::{Error, ErrorCode, InputError, LimitKind, Result};
pub use fairness::{is_ef1, is_efx, is_envy_free, satisfies, EnvyReport};
pub use instance::{
    parse_instance, serialize_instance, Allocation, Fairness, Instance, ItemType, UtilityProfile,
};
pub use oracle::{brute_eef, brute_pilp_sentence, Census};
pub use pilp::{build_system, induced_b, verify_certificate, PilpSystem};
pub use solver::{ilp_solve, lp_solve, IlpModel, SolveOutcome, SolveStatus, SolverLimits};
pub use verdict::{parse_verdict, serialize_verdict, Answer, Outcome, Verdict};
