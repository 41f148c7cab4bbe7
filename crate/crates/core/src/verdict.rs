//! Decision results and their JSON document.
//!
//! ```json
//! {"answer": "YES", "allocation": [["1","0"],["0","1"]], "profile": ["1","1"],
//!  "welfare": "2", "iterations": 1, "stats": {...}}
//! ```
//!
//! `allocation` appears only for YES, `blocked_profiles` only for NO. For a
//! YES verdict `profile` is the certificate's profile; for NO it is the
//! profile of a welfare-maximal fair allocation (which is dominated).

use serde_json::{Map, Value};

use crate::error::{ErrorCode, InputError};
use crate::instance::{
    array, int_list, int_matrix, object, parse_json, parse_u64, required, Allocation,
    UtilityProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// A fair, Pareto-efficient allocation.
    Yes { certificate: Allocation },
    /// Pareto-efficient profiles that together dominate every fair
    /// allocation, in the order they were recorded.
    No {
        blocked_profiles: Vec<UtilityProfile>,
    },
}

/// Work counters accumulated over all solver calls of one decision.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecisionStats {
    pub ilp_calls: u64,
    pub nodes: u64,
    pub pivots: u64,
}

impl DecisionStats {
    pub(crate) fn record(&mut self, s: &crate::solver::SolveStats) {
        self.ilp_calls += 1;
        self.nodes += s.nodes;
        self.pivots += s.pivots;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub profile: UtilityProfile,
    pub iterations: u64,
    pub stats: DecisionStats,
}

impl Verdict {
    pub fn answer(&self) -> Answer {
        match self.outcome {
            Outcome::Yes { .. } => Answer::Yes,
            Outcome::No { .. } => Answer::No,
        }
    }

    pub fn certificate(&self) -> Option<&Allocation> {
        match &self.outcome {
            Outcome::Yes { certificate } => Some(certificate),
            Outcome::No { .. } => None,
        }
    }

    pub fn blocked_profiles(&self) -> &[UtilityProfile] {
        match &self.outcome {
            Outcome::Yes { .. } => &[],
            Outcome::No { blocked_profiles } => blocked_profiles,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut doc = Map::new();
        doc.insert(
            "answer".into(),
            Value::String(self.answer().as_str().into()),
        );
        match &self.outcome {
            Outcome::Yes { certificate } => {
                doc.insert("allocation".into(), certificate.to_value());
            }
            Outcome::No { blocked_profiles } => {
                doc.insert(
                    "blocked_profiles".into(),
                    Value::Array(
                        blocked_profiles
                            .iter()
                            .map(UtilityProfile::to_value)
                            .collect(),
                    ),
                );
            }
        }
        doc.insert("profile".into(), self.profile.to_value());
        doc.insert(
            "welfare".into(),
            Value::String(self.profile.welfare().to_string()),
        );
        doc.insert("iterations".into(), self.iterations.into());
        let mut stats = Map::new();
        stats.insert("ilp_calls".into(), self.stats.ilp_calls.into());
        stats.insert("nodes".into(), self.stats.nodes.into());
        stats.insert("pivots".into(), self.stats.pivots.into());
        doc.insert("stats".into(), Value::Object(stats));
        Value::Object(doc)
    }

    pub fn from_value(value: &Value) -> Result<Self, InputError> {
        let doc = object(value, "$")?;
        let answer = required(doc, "answer")?;
        let profile = UtilityProfile::new(int_list(required(doc, "profile")?, "profile")?);
        let welfare = crate::instance::parse_int(required(doc, "welfare")?, "welfare")?;
        if &welfare != profile.welfare() {
            return Err(InputError::new(
                ErrorCode::Malformed,
                "welfare",
                "welfare differs from the sum of the profile",
            ));
        }
        let outcome = match answer.as_str() {
            Some("YES") => {
                if doc.contains_key("blocked_profiles") {
                    return Err(InputError::new(
                        ErrorCode::Malformed,
                        "blocked_profiles",
                        "YES verdicts carry no blocked profiles",
                    ));
                }
                let rows = int_matrix(required(doc, "allocation")?, "allocation")?;
                Outcome::Yes {
                    certificate: Allocation::new(rows)?,
                }
            }
            Some("NO") => {
                if doc.contains_key("allocation") {
                    return Err(InputError::new(
                        ErrorCode::Malformed,
                        "allocation",
                        "NO verdicts carry no allocation",
                    ));
                }
                let blocked = array(required(doc, "blocked_profiles")?, "blocked_profiles")?
                    .iter()
                    .enumerate()
                    .map(|(k, p)| {
                        int_list(p, &format!("blocked_profiles[{k}]")).map(UtilityProfile::new)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Outcome::No {
                    blocked_profiles: blocked,
                }
            }
            _ => {
                return Err(InputError::new(
                    ErrorCode::Malformed,
                    "answer",
                    "answer must be \"YES\" or \"NO\"",
                ))
            }
        };
        let iterations = parse_u64(required(doc, "iterations")?, "iterations")?;
        let stats = match doc.get("stats") {
            None => DecisionStats::default(),
            Some(s) => {
                let s = object(s, "stats")?;
                DecisionStats {
                    ilp_calls: parse_u64(required(s, "ilp_calls")?, "stats.ilp_calls")?,
                    nodes: parse_u64(required(s, "nodes")?, "stats.nodes")?,
                    pivots: parse_u64(required(s, "pivots")?, "stats.pivots")?,
                }
            }
        };
        Ok(Verdict {
            outcome,
            profile,
            iterations,
            stats,
        })
    }
}

/// Canonical verdict document (sorted keys, decimal strings, trailing
/// newline).
pub fn serialize_verdict(v: &Verdict) -> String {
    let mut out = serde_json::to_string_pretty(&v.to_value()).expect("serializable");
    out.push('\n');
    out
}

pub fn parse_verdict(text: &str) -> Result<Verdict, InputError> {
    Verdict::from_value(&parse_json(text)?)
}
