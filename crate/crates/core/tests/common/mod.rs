#![allow(dead_code)]

use std::io::Write;

use eef::generate::{generate, GenConfig};
use eef::solver::{IlpModel, Relation, Sense};
use eef::{Fairness, Instance};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// n = 2, m = 2, multiplicities in {1, 2}, every utility matrix over
/// `values`.
pub fn exhaustive_family(values: &[i64]) -> Vec<Instance> {
    let k = values.len();
    let mut out = Vec::new();
    for m1 in 1..=2i64 {
        for m2 in 1..=2i64 {
            for code in 0..k.pow(4) {
                let u: Vec<i64> = (0..4).map(|e| values[(code / k.pow(e)) % k]).collect();
                let rows = vec![vec![u[0], u[1]], vec![u[2], u[3]]];
                out.push(Instance::from_numbers(&[m1, m2], &rows).unwrap());
            }
        }
    }
    out
}

/// Seeded instances with n, m ≤ 3 and multiplicities ≤ 3, cycling through
/// EF, EF1, EFX with utilities in [0, 3] and EF with utilities in [-3, 3].
pub fn random_family(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let (fairness, utility) = match k % 4 {
                0 => (Fairness::Ef, (0, 3)),
                1 => (Fairness::Ef1, (0, 3)),
                2 => (Fairness::Efx, (0, 3)),
                _ => (Fairness::Ef, (-3, 3)),
            };
            generate(&GenConfig {
                agents: rng.gen_range(1..=3),
                items: rng.gen_range(1..=3),
                multiplicity: (0, 3),
                utility,
                seed: rng.gen(),
                fairness,
            })
            .unwrap()
        })
        .collect()
}

/// Random bounded model with at most 4 integer variables in [-5, 5] and at
/// most 5 constraints with coefficients in [-3, 3].
pub fn random_model(rng: &mut ChaCha8Rng) -> IlpModel {
    let mut model = IlpModel::new();
    let vars = rng.gen_range(1..=4);
    for j in 0..vars {
        let lo = rng.gen_range(-5..=5i64);
        let hi = rng.gen_range(lo..=5);
        model
            .add_int_var(format!("v{j}"), &BigInt::from(lo), &BigInt::from(hi))
            .unwrap();
    }
    for r in 0..rng.gen_range(0..=5) {
        let coeffs = (0..vars).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let rel = [Relation::Le, Relation::Eq, Relation::Ge][rng.gen_range(0..3)];
        model
            .add_constraint(format!("r{r}"), coeffs, rel, rat(rng.gen_range(-6..=6)))
            .unwrap();
    }
    if rng.gen_bool(0.8) {
        let sense = if rng.gen_bool(0.5) {
            Sense::Maximize
        } else {
            Sense::Minimize
        };
        model
            .set_objective(
                sense,
                (0..vars).map(|_| rat(rng.gen_range(-3..=3))).collect(),
            )
            .unwrap();
    }
    model
}

/// Every lattice point within the variable bounds that satisfies the model.
pub fn lattice_points(model: &IlpModel) -> Vec<Vec<BigRational>> {
    let bounds: Vec<(i64, i64)> = model
        .variables()
        .iter()
        .map(|v| {
            let lo = v.lower.as_ref().unwrap().to_integer().try_into().unwrap();
            let hi = v.upper.as_ref().unwrap().to_integer().try_into().unwrap();
            (lo, hi)
        })
        .collect();
    let mut out = Vec::new();
    let mut point: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        let p: Vec<BigRational> = point.iter().map(|&v| rat(v)).collect();
        if model.is_satisfied_by(&p, true) {
            out.push(p);
        }
        let mut k = 0;
        loop {
            if k == point.len() {
                return out;
            }
            if point[k] < bounds[k].1 {
                point[k] += 1;
                break;
            }
            point[k] = bounds[k].0;
            k += 1;
        }
    }
}

/// One line straight to the terminal, bypassing the test harness capture.
pub fn report(criterion: u32, passed: bool, detail: &str) {
    let line = format!(
        "acceptance criterion {criterion}: {} ({detail})\n",
        if passed { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

/// Runs `f` over `items` on all available cores, keeping input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(1);
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                s.spawn(move || c.iter().map(f).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    })
}
