//! Brute-force ground truth for tiny instances.
//!
//! Everything here enumerates allocations explicitly and calls the
//! fairness predicates directly, never the linear encodings, so it shares
//! no code path with the engine beyond the instance model.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, ErrorCode, InputError, Result};
use crate::fairness::satisfies_unchecked;
use crate::instance::{Allocation, Fairness, Instance, UtilityProfile};
use crate::pilp::{a_matrix, induced_b};
use crate::verdict::{DecisionStats, Outcome, Verdict};

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// Number of allocations: Π_i C(m_i + n, n).
pub fn allocation_count(inst: &Instance) -> BigInt {
    let n = BigInt::from(inst.n());
    inst.items()
        .iter()
        .map(|it| binomial(&it.multiplicity + &n, n.clone()))
        .fold(BigInt::one(), |acc, c| acc * c)
}

fn check_cap(inst: &Instance, cap: u64) -> Result<u64> {
    let count = allocation_count(inst);
    match count.to_u64() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::EnumerationCap { count, cap }),
    }
}

/// All vectors of `n` nonnegative integers with sum ≤ `total`, in
/// lexicographic order.
fn compositions(n: usize, total: u64) -> Vec<Vec<u64>> {
    fn rec(prefix: &mut Vec<u64>, n: usize, left: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(prefix, n, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, total, &mut out);
    out
}

/// Iterator over every allocation of an instance.
///
/// Order: lexicographic in item-major layout, i.e. the composition of item
/// type 0 varies slowest and each composition is ordered lexicographically
/// over agents.
pub struct Allocations {
    n: usize,
    per_item: Vec<Vec<Vec<u64>>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Allocations {
    fn new(n: usize, per_item: Vec<Vec<Vec<u64>>>) -> Self {
        let done = per_item.iter().any(Vec::is_empty);
        Allocations {
            n,
            cursor: vec![0; per_item.len()],
            per_item,
            done,
        }
    }
}

impl Iterator for Allocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        let entries = (0..self.n)
            .map(|a| {
                self.cursor
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| BigInt::from(self.per_item[i][k][a]))
                    .collect()
            })
            .collect();
        // Advance the odometer, last item fastest.
        let mut i = self.cursor.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.cursor[i] += 1;
            if self.cursor[i] < self.per_item[i].len() {
                break;
            }
            self.cursor[i] = 0;
        }
        Some(Allocation::new(entries).expect("nonnegative"))
    }
}

fn item_compositions(inst: &Instance) -> Vec<Vec<Vec<u64>>> {
    inst.items()
        .iter()
        .map(|it| {
            compositions(
                inst.n(),
                it.multiplicity.to_u64().expect("bounded by the cap"),
            )
        })
        .collect()
}

pub fn enumerate_allocations(inst: &Instance, cap: u64) -> Result<Allocations> {
    check_cap(inst, cap)?;
    Ok(Allocations::new(inst.n(), item_compositions(inst)))
}

/// Sizes of the sets computed by [`brute_eef`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub allocations: u64,
    pub fair: u64,
    pub pareto: u64,
    pub intersection: u64,
}

impl Census {
    pub fn to_value(&self) -> Value {
        json!({
            "allocations": self.allocations,
            "fair": self.fair,
            "pareto": self.pareto,
            "intersection": self.intersection,
        })
    }
}

struct Evaluated {
    alloc: Allocation,
    profile: UtilityProfile,
    fair: bool,
}

/// Enumerates and evaluates all allocations, splitting the work over
/// `jobs` threads by the composition of the first item type. Results come
/// back in enumeration order regardless of `jobs`.
fn evaluate_all(inst: &Instance, cap: u64, jobs: usize) -> Result<Vec<Evaluated>> {
    check_cap(inst, cap)?;
    let per_item = item_compositions(inst);
    let evaluate = |alloc: Allocation| Evaluated {
        profile: inst.profile_unchecked(&alloc),
        fair: satisfies_unchecked(inst, &alloc),
        alloc,
    };
    let jobs = jobs.max(1);
    if jobs == 1 {
        return Ok(Allocations::new(inst.n(), per_item).map(evaluate).collect());
    }
    let heads = per_item[0].clone();
    let chunk = heads.len().div_ceil(jobs);
    let parts: Vec<Vec<Evaluated>> = std::thread::scope(|scope| {
        let handles: Vec<_> = heads
            .chunks(chunk.max(1))
            .map(|head_chunk| {
                let mut items = per_item.clone();
                items[0] = head_chunk.to_vec();
                let evaluate = &evaluate;
                let n = inst.n();
                scope.spawn(move || Allocations::new(n, items).map(evaluate).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Profiles not dominated by any other profile in the set.
fn efficient_profiles(profiles: &BTreeSet<UtilityProfile>) -> BTreeSet<UtilityProfile> {
    let mut by_welfare: Vec<&UtilityProfile> = profiles.iter().collect();
    by_welfare.sort_by(|a, b| b.welfare().cmp(a.welfare()));
    let mut efficient = BTreeSet::new();
    for (k, p) in by_welfare.iter().enumerate() {
        // Only strictly higher welfare can dominate.
        let dominated = by_welfare[..k]
            .iter()
            .take_while(|q| q.welfare() > p.welfare())
            .any(|q| q.dominates(p));
        if !dominated {
            efficient.insert((*p).clone());
        }
    }
    efficient
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteResult {
    pub verdict: Verdict,
    pub census: Census,
}

/// Decides existence of a fair Pareto-efficient allocation by enumeration.
///
/// YES carries the first such allocation in enumeration order. NO lists,
/// for each fair profile in order of first appearance, the profile of the
/// first Pareto-efficient allocation dominating it (deduplicated).
pub fn brute_eef(inst: &Instance, cap: u64, jobs: usize) -> Result<BruteResult> {
    let all = evaluate_all(inst, cap, jobs)?;
    let profiles: BTreeSet<UtilityProfile> = all.iter().map(|e| e.profile.clone()).collect();
    let efficient = efficient_profiles(&profiles);

    let is_efficient = |e: &Evaluated| efficient.contains(&e.profile);
    let census = Census {
        allocations: all.len() as u64,
        fair: all.iter().filter(|e| e.fair).count() as u64,
        pareto: all.iter().filter(|e| is_efficient(e)).count() as u64,
        intersection: all.iter().filter(|e| e.fair && is_efficient(e)).count() as u64,
    };

    let witness = all.iter().find(|e| e.fair && is_efficient(e));
    let verdict = match witness {
        Some(w) => Verdict {
            outcome: Outcome::Yes {
                certificate: w.alloc.clone(),
            },
            profile: w.profile.clone(),
            iterations: 0,
            stats: DecisionStats::default(),
        },
        None => {
            let best_fair = all
                .iter()
                .filter(|e| e.fair)
                .fold(None::<&Evaluated>, |best, e| match best {
                    Some(b) if b.profile.welfare() >= e.profile.welfare() => Some(b),
                    _ => Some(e),
                })
                .expect("the empty allocation is always fair");
            let efficient_allocs: Vec<&Evaluated> =
                all.iter().filter(|e| is_efficient(e)).collect();
            let mut seen_fair = BTreeSet::new();
            let mut blocked: Vec<UtilityProfile> = Vec::new();
            for e in all.iter().filter(|e| e.fair) {
                if !seen_fair.insert(&e.profile) {
                    continue;
                }
                let dom = efficient_allocs
                    .iter()
                    .find(|d| d.profile.dominates(&e.profile))
                    .expect("every inefficient profile is dominated by an efficient one");
                if !blocked.contains(&dom.profile) {
                    blocked.push(dom.profile.clone());
                }
            }
            Verdict {
                outcome: Outcome::No {
                    blocked_profiles: blocked,
                },
                profile: best_fair.profile.clone(),
                iterations: 0,
                stats: DecisionStats::default(),
            }
        }
    };
    Ok(BruteResult { verdict, census })
}

/// Evaluates "for every envy-free allocation z, some integral x satisfies
/// A·x ≤ b(z)" literally, with x ranging over all allocations (the b1 and
/// b2 rows confine integral solutions to allocations).
pub fn brute_pilp_sentence(inst: &Instance, cap: u64) -> Result<bool> {
    if inst.fairness() != Fairness::Ef {
        return Err(InputError::new(
            ErrorCode::UnsupportedCombination,
            "fairness",
            "the parametric sentence encodes EF only",
        )
        .into());
    }
    let (a, _) = a_matrix(inst);
    let a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|v| v.to_integer()).collect())
        .collect();
    let all: Vec<Allocation> = enumerate_allocations(inst, cap)?.collect();
    let lhs: Vec<Vec<BigInt>> = all
        .iter()
        .map(|x| {
            let flat = x.flatten();
            a.iter()
                .map(|row| row.iter().zip(&flat).map(|(c, v)| c * v).sum())
                .collect()
        })
        .collect();
    // Memoize by b: many allocations share a right-hand side.
    let mut answered: BTreeMap<Vec<BigInt>, bool> = BTreeMap::new();
    for z in &all {
        if !crate::fairness::envy_report(inst, z).is_envy_free() {
            continue;
        }
        let b: Vec<BigInt> = induced_b(inst, z)?.iter().map(|v| v.to_integer()).collect();
        let solvable = *answered
            .entry(b.clone())
            .or_insert_with(|| lhs.iter().any(|ax| ax.iter().zip(&b).all(|(l, r)| l <= r)));
        if !solvable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive Pareto check of one allocation.
pub fn brute_is_pareto_efficient(inst: &Instance, alloc: &Allocation, cap: u64) -> Result<bool> {
    let p = inst.profile_of(alloc)?;
    for x in enumerate_allocations(inst, cap)? {
        if inst.profile_unchecked(&x).dominates(&p) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Answer;

    fn inst(mult: &[i64], u: &[Vec<i64>]) -> Instance {
        Instance::from_numbers(mult, u).unwrap()
    }

    #[test]
    fn counts() {
        let two_one = inst(&[1], &[vec![1], vec![1]]);
        let listed: Vec<_> = enumerate_allocations(&two_one, 100).unwrap().collect();
        assert_eq!(
            listed,
            vec![
                Allocation::from_numbers(&[vec![0], vec![0]]).unwrap(),
                Allocation::from_numbers(&[vec![0], vec![1]]).unwrap(),
                Allocation::from_numbers(&[vec![1], vec![0]]).unwrap(),
            ]
        );
        assert_eq!(
            enumerate_allocations(&inst(&[1, 1], &[vec![1, 1], vec![1, 1]]), 100)
                .unwrap()
                .count(),
            9
        );
        let three = inst(&[2], &[vec![1], vec![1], vec![1]]);
        // Stars and bars: C(2 + 3, 3) = 10.
        assert_eq!(allocation_count(&three), BigInt::from(10));
        assert_eq!(enumerate_allocations(&three, 100).unwrap().count(), 10);
    }

    #[test]
    fn cap_reports_count() {
        let big = inst(&[1_000_000_000], &[vec![1], vec![1]]);
        match enumerate_allocations(&big, 1000) {
            Err(Error::EnumerationCap { count, cap }) => {
                assert_eq!(cap, 1000);
                assert_eq!(
                    count,
                    binomial(BigInt::from(1_000_000_002u64), BigInt::from(2))
                );
            }
            _ => panic!("expected cap error"),
        }
    }

    #[test]
    fn census_examples() {
        let r = brute_eef(&inst(&[1], &[vec![1], vec![1]]), 100, 1).unwrap();
        assert_eq!(r.verdict.answer(), Answer::No);
        assert_eq!(
            r.census,
            Census {
                allocations: 3,
                fair: 1,
                pareto: 2,
                intersection: 0
            }
        );

        let r = brute_eef(&inst(&[1, 1], &[vec![1, 1], vec![1, 1]]), 100, 1).unwrap();
        assert_eq!(r.verdict.answer(), Answer::Yes);
        assert!(r.census.intersection >= 2);

        let r = brute_eef(&inst(&[3, 1], &[vec![2, -1]]), 100, 1).unwrap();
        assert_eq!(r.verdict.answer(), Answer::Yes);
        assert_eq!(
            r.verdict.certificate().unwrap(),
            &Allocation::from_numbers(&[vec![3, 0]]).unwrap()
        );
    }

    #[test]
    fn jobs_do_not_change_results() {
        let i = inst(&[2, 3], &[vec![1, 2], vec![2, 1], vec![0, 1]]);
        assert_eq!(
            brute_eef(&i, 10_000, 1).unwrap(),
            brute_eef(&i, 10_000, 4).unwrap()
        );
    }

    #[test]
    fn sentence_examples() {
        assert!(brute_pilp_sentence(&inst(&[1], &[vec![1], vec![1]]), 100).unwrap());
        assert!(!brute_pilp_sentence(&inst(&[1, 1], &[vec![1, 1], vec![1, 1]]), 100).unwrap());
        assert!(!brute_pilp_sentence(&inst(&[4], &[vec![3]]), 100).unwrap());
    }
}
