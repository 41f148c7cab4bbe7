//! Domain model: instances, allocations and utility profiles, plus the JSON
//! instance document.
//!
//! Every count and utility is an arbitrary-precision integer. Numbers in
//! documents may be plain JSON integers up to 2^53 - 1 or decimal strings of
//! any size; output always uses decimal strings.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::error::{ErrorCode, InputError};

/// Largest integer that is exactly representable in an IEEE double.
const MAX_PLAIN_INTEGER: i64 = (1 << 53) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Fairness {
    #[default]
    Ef,
    Ef1,
    Efx,
}

impl Fairness {
    pub fn as_str(self) -> &'static str {
        match self {
            Fairness::Ef => "EF",
            Fairness::Ef1 => "EF1",
            Fairness::Efx => "EFX",
        }
    }
}

impl fmt::Display for Fairness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Fairness {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "EF" => Ok(Fairness::Ef),
            "EF1" => Ok(Fairness::Ef1),
            "EFX" => Ok(Fairness::Efx),
            other => Err(InputError::new(
                ErrorCode::Malformed,
                "fairness",
                format!("unknown fairness notion {other:?}, expected EF, EF1 or EFX"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemType {
    pub name: String,
    pub multiplicity: BigInt,
}

/// A validated allocation problem. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agents: Vec<String>,
    items: Vec<ItemType>,
    utilities: Vec<Vec<BigInt>>,
    fairness: Fairness,
    envy_graph: Option<Vec<(usize, usize)>>,
}

impl Instance {
    pub fn new(
        agents: Vec<String>,
        items: Vec<ItemType>,
        utilities: Vec<Vec<BigInt>>,
        fairness: Fairness,
        envy_graph: Option<Vec<(usize, usize)>>,
    ) -> Result<Self, InputError> {
        let inst = Instance {
            agents,
            items,
            utilities,
            fairness,
            envy_graph,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Convenience constructor with generated labels, EF and the complete
    /// envy graph.
    pub fn from_numbers<M, U>(
        multiplicities: &[M],
        utilities: &[Vec<U>],
    ) -> Result<Self, InputError>
    where
        M: Clone + Into<BigInt>,
        U: Clone + Into<BigInt>,
    {
        let agents = (1..=utilities.len()).map(|a| format!("a{a}")).collect();
        let items = multiplicities
            .iter()
            .enumerate()
            .map(|(i, m)| ItemType {
                name: format!("i{}", i + 1),
                multiplicity: m.clone().into(),
            })
            .collect();
        let utilities = utilities
            .iter()
            .map(|row| row.iter().map(|u| u.clone().into()).collect())
            .collect();
        Instance::new(agents, items, utilities, Fairness::Ef, None)
    }

    fn validate(&self) -> Result<(), InputError> {
        if self.agents.is_empty() {
            return Err(InputError::new(
                ErrorCode::DimensionMismatch,
                "agents",
                "at least one agent is required",
            ));
        }
        if self.items.is_empty() {
            return Err(InputError::new(
                ErrorCode::DimensionMismatch,
                "items",
                "at least one item type is required",
            ));
        }
        for (i, item) in self.items.iter().enumerate() {
            if item.multiplicity.is_negative() {
                return Err(InputError::new(
                    ErrorCode::NegativeMultiplicity,
                    format!("items[{i}].multiplicity"),
                    format!("multiplicity {} is negative", item.multiplicity),
                ));
            }
        }
        if self.utilities.len() != self.agents.len() {
            return Err(InputError::new(
                ErrorCode::DimensionMismatch,
                "utilities",
                format!(
                    "{} utility rows for {} agents",
                    self.utilities.len(),
                    self.agents.len()
                ),
            ));
        }
        for (a, row) in self.utilities.iter().enumerate() {
            if row.len() != self.items.len() {
                return Err(InputError::new(
                    ErrorCode::DimensionMismatch,
                    format!("utilities[{a}]"),
                    format!("{} entries for {} item types", row.len(), self.items.len()),
                ));
            }
        }
        if self.fairness != Fairness::Ef {
            for (a, row) in self.utilities.iter().enumerate() {
                if let Some(i) = row.iter().position(Signed::is_negative) {
                    return Err(InputError::new(
                        ErrorCode::UnsupportedCombination,
                        format!("utilities[{a}][{i}]"),
                        format!("{} requires nonnegative utilities", self.fairness),
                    ));
                }
            }
        }
        if let Some(edges) = &self.envy_graph {
            let n = self.agents.len();
            for (k, &(from, to)) in edges.iter().enumerate() {
                if from >= n || to >= n {
                    return Err(InputError::new(
                        ErrorCode::InvalidEnvyGraph,
                        format!("envy_graph[{k}]"),
                        format!("agent index out of range 0..{n}"),
                    ));
                }
                if from == to {
                    return Err(InputError::new(
                        ErrorCode::InvalidEnvyGraph,
                        format!("envy_graph[{k}]"),
                        "self-loops are not allowed",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn m(&self) -> usize {
        self.items.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn items(&self) -> &[ItemType] {
        &self.items
    }

    pub fn multiplicity(&self, item: usize) -> &BigInt {
        &self.items[item].multiplicity
    }

    pub fn multiplicities(&self) -> Vec<BigInt> {
        self.items
            .iter()
            .map(|it| it.multiplicity.clone())
            .collect()
    }

    pub fn utility(&self, agent: usize, item: usize) -> &BigInt {
        &self.utilities[agent][item]
    }

    pub fn utilities(&self) -> &[Vec<BigInt>] {
        &self.utilities
    }

    pub fn fairness(&self) -> Fairness {
        self.fairness
    }

    pub fn envy_graph(&self) -> Option<&[(usize, usize)]> {
        self.envy_graph.as_deref()
    }

    /// Returns a copy with a different fairness notion, re-validated.
    pub fn with_fairness(&self, fairness: Fairness) -> Result<Self, InputError> {
        Instance::new(
            self.agents.clone(),
            self.items.clone(),
            self.utilities.clone(),
            fairness,
            self.envy_graph.clone(),
        )
    }

    /// Returns a copy with a different utility matrix, re-validated.
    pub fn with_utilities(&self, utilities: Vec<Vec<BigInt>>) -> Result<Self, InputError> {
        Instance::new(
            self.agents.clone(),
            self.items.clone(),
            utilities,
            self.fairness,
            self.envy_graph.clone(),
        )
    }

    pub fn with_envy_graph(&self, graph: Option<Vec<(usize, usize)>>) -> Result<Self, InputError> {
        Instance::new(
            self.agents.clone(),
            self.items.clone(),
            self.utilities.clone(),
            self.fairness,
            graph,
        )
    }

    /// Edges (a, a') along which envy is checked, deduplicated, in
    /// ascending order. Absent graph means every ordered pair of distinct
    /// agents.
    pub fn envy_edges(&self) -> Vec<(usize, usize)> {
        match &self.envy_graph {
            Some(edges) => edges
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            None => {
                let n = self.n();
                (0..n)
                    .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
                    .collect()
            }
        }
    }

    pub fn has_negative_utility(&self) -> bool {
        self.utilities.iter().flatten().any(Signed::is_negative)
    }

    /// Smallest total utility agent `agent` can receive: Σ_i m_i·min(0, u_a(i)).
    pub fn utility_lower_bound(&self, agent: usize) -> BigInt {
        self.items
            .iter()
            .zip(&self.utilities[agent])
            .filter(|(_, u)| u.is_negative())
            .map(|(it, u)| &it.multiplicity * u)
            .sum()
    }

    /// Largest total utility agent `agent` can receive: Σ_i m_i·max(0, u_a(i)).
    pub fn utility_upper_bound(&self, agent: usize) -> BigInt {
        self.items
            .iter()
            .zip(&self.utilities[agent])
            .filter(|(_, u)| u.is_positive())
            .map(|(it, u)| &it.multiplicity * u)
            .sum()
    }

    /// Value agent `viewer` assigns to the bundle of `owner` in `alloc`.
    pub fn bundle_value(&self, viewer: usize, alloc: &Allocation, owner: usize) -> BigInt {
        self.utilities[viewer]
            .iter()
            .zip(alloc.bundle(owner))
            .map(|(u, x)| u * x)
            .sum()
    }

    /// Checks that `alloc` has the right shape and respects multiplicities.
    pub fn check_allocation(&self, alloc: &Allocation) -> Result<(), InputError> {
        if alloc.n() != self.n() || alloc.m() != self.m() {
            return Err(InputError::new(
                ErrorCode::DimensionMismatch,
                "allocation",
                format!(
                    "allocation is {}x{}, instance is {}x{}",
                    alloc.n(),
                    alloc.m(),
                    self.n(),
                    self.m()
                ),
            ));
        }
        for (i, item) in self.items.iter().enumerate() {
            let used: BigInt = (0..self.n()).map(|a| alloc.get(a, i)).sum();
            if used > item.multiplicity {
                return Err(InputError::new(
                    ErrorCode::OverAllocated,
                    format!("allocation[*][{i}]"),
                    format!(
                        "{used} copies of {:?} allocated, only {} exist",
                        item.name, item.multiplicity
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Per-agent satisfaction and welfare of `alloc`.
    pub fn profile_of(&self, alloc: &Allocation) -> Result<UtilityProfile, InputError> {
        self.check_allocation(alloc)?;
        Ok(self.profile_unchecked(alloc))
    }

    pub(crate) fn profile_unchecked(&self, alloc: &Allocation) -> UtilityProfile {
        UtilityProfile::new(
            (0..self.n())
                .map(|a| self.bundle_value(a, alloc, a))
                .collect(),
        )
    }
}

/// Items of each type given to each agent: `entries[a][i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation {
    entries: Vec<Vec<BigInt>>,
}

impl Allocation {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self, InputError> {
        let m = entries.first().map_or(0, Vec::len);
        for (a, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(InputError::new(
                    ErrorCode::DimensionMismatch,
                    format!("allocation[{a}]"),
                    "allocation rows have different lengths",
                ));
            }
            if let Some(i) = row.iter().position(Signed::is_negative) {
                return Err(InputError::new(
                    ErrorCode::NegativeEntry,
                    format!("allocation[{a}][{i}]"),
                    "allocation entries must be nonnegative",
                ));
            }
        }
        Ok(Allocation { entries })
    }

    pub fn from_numbers<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self, InputError> {
        Allocation::new(
            rows.iter()
                .map(|r| r.iter().map(|v| v.clone().into()).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Allocation {
            entries: vec![vec![BigInt::zero(); m]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn m(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn get(&self, agent: usize, item: usize) -> &BigInt {
        &self.entries[agent][item]
    }

    pub fn bundle(&self, agent: usize) -> &[BigInt] {
        &self.entries[agent]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Entries flattened agent-major, matching the `x{a}_{i}` variable order.
    pub fn flatten(&self) -> Vec<BigInt> {
        self.entries.iter().flatten().cloned().collect()
    }

    pub fn to_value(&self) -> Value {
        Value::Array(self.entries.iter().map(|row| int_row_value(row)).collect())
    }

    /// Reads an allocation from a JSON matrix, or from an object carrying an
    /// `"allocation"` key (such as a YES verdict document).
    pub fn from_value(value: &Value) -> Result<Self, InputError> {
        let matrix = match value {
            Value::Object(map) => map.get("allocation").ok_or_else(|| {
                InputError::new(
                    ErrorCode::Malformed,
                    "allocation",
                    "missing \"allocation\" key",
                )
            })?,
            other => other,
        };
        let rows = int_matrix(matrix, "allocation")?;
        Allocation::new(rows)
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        Allocation::from_value(&parse_json(text)?)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (a, row) in self.entries.iter().enumerate() {
            if a > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Per-agent totals and their sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UtilityProfile {
    per_agent: Vec<BigInt>,
    welfare: BigInt,
}

impl UtilityProfile {
    pub fn new(per_agent: Vec<BigInt>) -> Self {
        let welfare = per_agent.iter().sum();
        UtilityProfile { per_agent, welfare }
    }

    pub fn from_numbers<T: Clone + Into<BigInt>>(values: &[T]) -> Self {
        UtilityProfile::new(values.iter().map(|v| v.clone().into()).collect())
    }

    pub fn per_agent(&self) -> &[BigInt] {
        &self.per_agent
    }

    pub fn agent(&self, a: usize) -> &BigInt {
        &self.per_agent[a]
    }

    pub fn welfare(&self) -> &BigInt {
        &self.welfare
    }

    pub fn len(&self) -> usize {
        self.per_agent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_agent.is_empty()
    }

    /// Componentwise ≥ with at least one strict coordinate.
    pub fn dominates(&self, other: &UtilityProfile) -> bool {
        self.per_agent.len() == other.per_agent.len()
            && self
                .per_agent
                .iter()
                .zip(&other.per_agent)
                .all(|(a, b)| a >= b)
            && self.welfare > other.welfare
    }

    pub fn to_value(&self) -> Value {
        int_row_value(&self.per_agent)
    }
}

impl fmt::Display for UtilityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (a, v) in self.per_agent.iter().enumerate() {
            if a > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn parse_json(text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| {
        InputError::new(
            ErrorCode::Malformed,
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

pub(crate) fn int_row_value(row: &[BigInt]) -> Value {
    Value::Array(row.iter().map(|v| Value::String(v.to_string())).collect())
}

/// Parses a JSON integer or decimal string into a big integer.
pub(crate) fn parse_int(value: &Value, location: &str) -> Result<BigInt, InputError> {
    match value {
        Value::String(s) => {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(InputError::new(
                    ErrorCode::InvalidNumber,
                    location,
                    format!("{s:?} is not a decimal integer"),
                ));
            }
            Ok(BigInt::from_str(s).expect("validated decimal digits"))
        }
        Value::Number(n) => match n.as_i64() {
            Some(v) if (-MAX_PLAIN_INTEGER..=MAX_PLAIN_INTEGER).contains(&v) => Ok(BigInt::from(v)),
            Some(_) => Err(InputError::new(
                ErrorCode::InvalidNumber,
                location,
                "integers beyond 2^53-1 must be written as decimal strings",
            )),
            None if n.is_u64() => Err(InputError::new(
                ErrorCode::InvalidNumber,
                location,
                "integers beyond 2^53-1 must be written as decimal strings",
            )),
            None => Err(InputError::new(
                ErrorCode::InvalidNumber,
                location,
                format!("{n} is not an integer"),
            )),
        },
        _ => Err(InputError::new(
            ErrorCode::InvalidNumber,
            location,
            "expected an integer or a decimal string",
        )),
    }
}

pub(crate) fn parse_u64(value: &Value, location: &str) -> Result<u64, InputError> {
    value.as_u64().ok_or_else(|| {
        InputError::new(
            ErrorCode::Malformed,
            location,
            "expected a nonnegative integer",
        )
    })
}

pub(crate) fn array<'a>(value: &'a Value, location: &str) -> Result<&'a Vec<Value>, InputError> {
    value
        .as_array()
        .ok_or_else(|| InputError::new(ErrorCode::Malformed, location, "expected a list"))
}

pub(crate) fn object<'a>(
    value: &'a Value,
    location: &str,
) -> Result<&'a Map<String, Value>, InputError> {
    value
        .as_object()
        .ok_or_else(|| InputError::new(ErrorCode::Malformed, location, "expected an object"))
}

pub(crate) fn required<'a>(
    map: &'a Map<String, Value>,
    key: &str,
) -> Result<&'a Value, InputError> {
    map.get(key)
        .ok_or_else(|| InputError::new(ErrorCode::Malformed, key, format!("missing {key:?} key")))
}

pub(crate) fn int_list(value: &Value, location: &str) -> Result<Vec<BigInt>, InputError> {
    array(value, location)?
        .iter()
        .enumerate()
        .map(|(k, v)| parse_int(v, &format!("{location}[{k}]")))
        .collect()
}

pub(crate) fn int_matrix(value: &Value, location: &str) -> Result<Vec<Vec<BigInt>>, InputError> {
    array(value, location)?
        .iter()
        .enumerate()
        .map(|(k, row)| int_list(row, &format!("{location}[{k}]")))
        .collect()
}

fn string(value: &Value, location: &str) -> Result<String, InputError> {
    value
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| InputError::new(ErrorCode::Malformed, location, "expected a string"))
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    instance_from_value(&parse_json(text)?)
}

pub fn instance_from_value(value: &Value) -> Result<Instance, InputError> {
    let doc = object(value, "$")?;
    for key in doc.keys() {
        if !matches!(
            key.as_str(),
            "agents" | "items" | "utilities" | "fairness" | "envy_graph"
        ) {
            return Err(InputError::new(
                ErrorCode::Malformed,
                key.as_str(),
                format!("unknown key {key:?}"),
            ));
        }
    }
    let agents = array(required(doc, "agents")?, "agents")?
        .iter()
        .enumerate()
        .map(|(k, v)| string(v, &format!("agents[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let items = array(required(doc, "items")?, "items")?
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let loc = format!("items[{k}]");
            let item = object(v, &loc)?;
            let name = string(
                item.get("name").ok_or_else(|| {
                    InputError::new(ErrorCode::Malformed, loc.as_str(), "missing \"name\"")
                })?,
                &format!("{loc}.name"),
            )?;
            let multiplicity = parse_int(
                item.get("multiplicity").ok_or_else(|| {
                    InputError::new(
                        ErrorCode::Malformed,
                        loc.as_str(),
                        "missing \"multiplicity\"",
                    )
                })?,
                &format!("{loc}.multiplicity"),
            )?;
            Ok(ItemType { name, multiplicity })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let utilities = int_matrix(required(doc, "utilities")?, "utilities")?;
    let fairness = match doc.get("fairness") {
        None => Fairness::Ef,
        Some(v) => string(v, "fairness")?.parse()?,
    };
    let envy_graph = match doc.get("envy_graph") {
        None => None,
        Some(v) => Some(
            array(v, "envy_graph")?
                .iter()
                .enumerate()
                .map(|(k, pair)| {
                    let loc = format!("envy_graph[{k}]");
                    let pair = array(pair, &loc)?;
                    if pair.len() != 2 {
                        return Err(InputError::new(
                            ErrorCode::InvalidEnvyGraph,
                            loc,
                            "edges are [from, to] pairs",
                        ));
                    }
                    let from = pair[0].as_u64().ok_or_else(|| {
                        InputError::new(
                            ErrorCode::InvalidEnvyGraph,
                            loc.as_str(),
                            "invalid agent index",
                        )
                    })?;
                    let to = pair[1].as_u64().ok_or_else(|| {
                        InputError::new(
                            ErrorCode::InvalidEnvyGraph,
                            loc.as_str(),
                            "invalid agent index",
                        )
                    })?;
                    Ok((from as usize, to as usize))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Instance::new(agents, items, utilities, fairness, envy_graph)
}

/// Canonical instance document: every number as a decimal string, fairness
/// always present, envy graph only when one was given.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut doc = Map::new();
    doc.insert(
        "agents".into(),
        Value::Array(inst.agents.iter().cloned().map(Value::String).collect()),
    );
    doc.insert(
        "items".into(),
        Value::Array(
            inst.items
                .iter()
                .map(|it| {
                    let mut item = Map::new();
                    item.insert("name".into(), Value::String(it.name.clone()));
                    item.insert(
                        "multiplicity".into(),
                        Value::String(it.multiplicity.to_string()),
                    );
                    Value::Object(item)
                })
                .collect(),
        ),
    );
    doc.insert(
        "utilities".into(),
        Value::Array(
            inst.utilities
                .iter()
                .map(|row| int_row_value(row))
                .collect(),
        ),
    );
    doc.insert(
        "fairness".into(),
        Value::String(inst.fairness.as_str().into()),
    );
    if let Some(edges) = &inst.envy_graph {
        doc.insert(
            "envy_graph".into(),
            Value::Array(
                edges
                    .iter()
                    .map(|&(a, b)| Value::Array(vec![a.into(), b.into()]))
                    .collect(),
            ),
        );
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_instance() -> Instance {
        Instance::from_numbers(&[1], &[vec![1], vec![1]]).unwrap()
    }

    #[test]
    fn parses_large_multiplicity_from_string() {
        let doc = r#"{"agents":["a1","a2"],"items":[{"name":"g","multiplicity":"1000000000000"}],
                      "utilities":[[1],[1]]}"#;
        let inst = parse_instance(doc).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.m(), 1);
        assert_eq!(inst.multiplicity(0), &BigInt::from(10u64.pow(12)));
        assert_eq!(inst.fairness(), Fairness::Ef);
        assert_eq!(inst.envy_edges(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn rejects_row_count_mismatch() {
        let doc = r#"{"agents":["a1","a2"],"items":[{"name":"g","multiplicity":1}],
                      "utilities":[[1],[1],[1]]}"#;
        let err = parse_instance(doc).unwrap_err();
        assert_eq!(err.code, ErrorCode::DimensionMismatch);
        assert_eq!(err.location, "utilities");
    }

    #[test]
    fn rejects_column_count_mismatch() {
        let doc =
            r#"{"agents":["a1"],"items":[{"name":"g","multiplicity":1}],"utilities":[[1,2]]}"#;
        let err = parse_instance(doc).unwrap_err();
        assert_eq!(err.code, ErrorCode::DimensionMismatch);
        assert_eq!(err.location, "utilities[0]");
    }

    #[test]
    fn rejects_ef1_with_negative_utility() {
        let doc = r#"{"agents":["a1","a2"],"items":[{"name":"g","multiplicity":1}],
                      "utilities":[[-1],[1]],"fairness":"EF1"}"#;
        let err = parse_instance(doc).unwrap_err();
        assert_eq!(err.code, ErrorCode::UnsupportedCombination);
        assert_eq!(err.location, "utilities[0][0]");
    }

    #[test]
    fn rejects_negative_multiplicity() {
        let doc =
            r#"{"agents":["a1"],"items":[{"name":"g","multiplicity":"-3"}],"utilities":[[1]]}"#;
        let err = parse_instance(doc).unwrap_err();
        assert_eq!(err.code, ErrorCode::NegativeMultiplicity);
        assert_eq!(err.location, "items[0].multiplicity");
    }

    #[test]
    fn rejects_bad_envy_graph() {
        let base = r#"{"agents":["a1","a2"],"items":[{"name":"g","multiplicity":1}],"utilities":[[1],[1]],"envy_graph":"#;
        let err = parse_instance(&format!("{base}[[0,2]]}}")).unwrap_err();
        assert_eq!(err.code, ErrorCode::InvalidEnvyGraph);
        let err = parse_instance(&format!("{base}[[1,1]]}}")).unwrap_err();
        assert_eq!(err.code, ErrorCode::InvalidEnvyGraph);
        assert_eq!(err.location, "envy_graph[0]");
    }

    #[test]
    fn rejects_unportable_numbers() {
        let doc = r#"{"agents":["a1"],"items":[{"name":"g","multiplicity":9007199254740993}],"utilities":[[1]]}"#;
        assert_eq!(
            parse_instance(doc).unwrap_err().code,
            ErrorCode::InvalidNumber
        );
        let doc =
            r#"{"agents":["a1"],"items":[{"name":"g","multiplicity":1.5}],"utilities":[[1]]}"#;
        assert_eq!(
            parse_instance(doc).unwrap_err().code,
            ErrorCode::InvalidNumber
        );
        let doc =
            r#"{"agents":["a1"],"items":[{"name":"g","multiplicity":"1e3"}],"utilities":[[1]]}"#;
        assert_eq!(
            parse_instance(doc).unwrap_err().code,
            ErrorCode::InvalidNumber
        );
    }

    #[test]
    fn rejects_malformed_json() {
        assert_eq!(
            parse_instance("{\"agents\": [").unwrap_err().code,
            ErrorCode::Malformed
        );
        assert_eq!(parse_instance("[]").unwrap_err().code, ErrorCode::Malformed);
    }

    #[test]
    fn accepts_all_zero_agent() {
        let inst = Instance::from_numbers(&[2], &[vec![0], vec![3]]).unwrap();
        assert_eq!(inst.utility_upper_bound(0), BigInt::zero());
    }

    #[test]
    fn profile_examples() {
        let inst = unit_instance();
        let p = inst.profile_of(&Allocation::zeros(2, 1)).unwrap();
        assert_eq!(p, UtilityProfile::from_numbers(&[0, 0]));
        assert_eq!(p.welfare(), &BigInt::zero());

        let inst = Instance::from_numbers(&[3], &[vec![3], vec![5]]).unwrap();
        let p = inst
            .profile_of(&Allocation::from_numbers(&[vec![2], vec![1]]).unwrap())
            .unwrap();
        assert_eq!(p.per_agent(), &[BigInt::from(6), BigInt::from(5)]);
        assert_eq!(p.welfare(), &BigInt::from(11));

        let inst = Instance::from_numbers(&[1, 2], &[vec![1, -2], vec![0, 4]]).unwrap();
        let alloc = Allocation::from_numbers(&[vec![1, 1], vec![0, 1]]).unwrap();
        let p = inst.profile_of(&alloc).unwrap();
        // Independent recomputation: u_a · x_a for each agent.
        let expected: Vec<i64> = [[1i64, -2], [0, 4]]
            .iter()
            .zip([[1i64, 1], [0, 1]])
            .map(|(u, x)| u[0] * x[0] + u[1] * x[1])
            .collect();
        assert_eq!(expected, vec![-1, 4]);
        assert_eq!(p, UtilityProfile::from_numbers(&expected));
        assert_eq!(p.welfare(), &BigInt::from(3));
    }

    #[test]
    fn profile_rejects_invalid_allocations() {
        let inst = unit_instance();
        let err = inst
            .profile_of(&Allocation::from_numbers(&[vec![1], vec![1]]).unwrap())
            .unwrap_err();
        assert_eq!(err.code, ErrorCode::OverAllocated);
        let err = inst.profile_of(&Allocation::zeros(3, 1)).unwrap_err();
        assert_eq!(err.code, ErrorCode::DimensionMismatch);
        let err = Allocation::from_numbers(&[vec![-1]]).unwrap_err();
        assert_eq!(err.code, ErrorCode::NegativeEntry);
    }

    #[test]
    fn instance_document_round_trip() {
        let inst = Instance::from_numbers(&[4, 0], &[vec![1, -7], vec![0, 2]])
            .unwrap()
            .with_envy_graph(Some(vec![(1, 0)]))
            .unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn allocation_reads_verdict_documents() {
        let alloc =
            Allocation::parse(r#"{"answer":"YES","allocation":[["1","0"],[0,1]]}"#).unwrap();
        assert_eq!(
            alloc,
            Allocation::from_numbers(&[vec![1, 0], vec![0, 1]]).unwrap()
        );
        assert_eq!(
            Allocation::parse("[[2]]").unwrap().get(0, 0),
            &BigInt::from(2)
        );
    }
}
