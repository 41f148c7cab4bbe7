//! Seeded random instances.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64(seed)`. Draws happen
//! in a fixed order: one multiplicity per item type, then the utility
//! matrix row by row, each uniform over its inclusive range. Agents are
//! labelled `a1..an`, items `i1..im`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ErrorCode, InputError};
use crate::instance::{Fairness, Instance, ItemType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub agents: usize,
    pub items: usize,
    pub multiplicity: (u64, u64),
    pub utility: (i64, i64),
    pub seed: u64,
    pub fairness: Fairness,
}

impl GenConfig {
    pub fn new(agents: usize, items: usize, seed: u64) -> Self {
        GenConfig {
            agents,
            items,
            multiplicity: (1, 3),
            utility: (0, 3),
            seed,
            fairness: Fairness::Ef,
        }
    }
}

fn range_error(what: &str, msg: String) -> InputError {
    InputError::new(ErrorCode::Malformed, what, msg)
}

pub fn generate(config: &GenConfig) -> Result<Instance, InputError> {
    let (mlo, mhi) = config.multiplicity;
    let (ulo, uhi) = config.utility;
    if mlo > mhi {
        return Err(range_error("mult", format!("empty range {mlo}..{mhi}")));
    }
    if ulo > uhi {
        return Err(range_error("util", format!("empty range {ulo}..{uhi}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let items = (0..config.items)
        .map(|i| ItemType {
            name: format!("i{}", i + 1),
            multiplicity: BigInt::from(rng.gen_range(mlo..=mhi)),
        })
        .collect();
    let utilities = (0..config.agents)
        .map(|_| {
            (0..config.items)
                .map(|_| BigInt::from(rng.gen_range(ulo..=uhi)))
                .collect()
        })
        .collect();
    let agents = (1..=config.agents).map(|a| format!("a{a}")).collect();
    Instance::new(agents, items, utilities, config.fairness, None)
}
