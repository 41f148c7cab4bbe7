mod common;

use eef::dominance::encode_domination;
use eef::engine::solve_eef_traced;
use eef::fairness::encode_fairness;
use eef::oracle::{brute_eef, enumerate_allocations, DEFAULT_ENUM_CAP};
use eef::solver::text::{parse_model, write_model};
use eef::solver::{
    add_nogood_dominance_cut, ilp_solve, AllocationVars, IlpModel, SolveStatus, SolverLimits,
};
use eef::{
    find_dominator, parse_instance, parse_verdict, satisfies, serialize_instance,
    serialize_verdict, solve_eef, Allocation, Answer, EngineConfig, Fairness, Instance, ItemType,
    UtilityProfile,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn instance_strategy(fairness: Option<Fairness>) -> impl Strategy<Value = Instance> {
    let fairness = match fairness {
        Some(f) => Just(f).boxed(),
        None => prop_oneof![Just(Fairness::Ef), Just(Fairness::Ef1), Just(Fairness::Efx)].boxed(),
    };
    (1usize..=3, 1usize..=3, fairness, any::<bool>()).prop_flat_map(|(n, m, f, negative)| {
        let lo = if f == Fairness::Ef && negative {
            -3i64
        } else {
            0
        };
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .collect();
        (
            prop::collection::vec(0u64..=3, m),
            prop::collection::vec(prop::collection::vec(lo..=3i64, m), n),
            prop::option::of(prop::sample::subsequence(edges.clone(), 0..=edges.len())),
        )
            .prop_map(move |(mult, u, graph)| {
                let items = mult
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| ItemType {
                        name: format!("i{}", i + 1),
                        multiplicity: BigInt::from(k),
                    })
                    .collect();
                let u = u
                    .iter()
                    .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                    .collect();
                let agents = (1..=n).map(|a| format!("a{a}")).collect();
                Instance::new(agents, items, u, f, graph).unwrap()
            })
    })
}

fn pinned(model: &IlpModel, vars: &AllocationVars, z: &Allocation) -> IlpModel {
    let mut model = model.clone();
    for a in 0..vars.n() {
        for i in 0..vars.m() {
            let v = BigRational::from_integer(z.get(a, i).clone());
            model.set_bounds(vars.var(a, i), Some(v.clone()), Some(v));
        }
    }
    model
}

fn feasible(model: &IlpModel) -> bool {
    ilp_solve(model, &SolverLimits::default()).is_solution()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fairness_encoding_matches_predicate(inst in instance_strategy(None)) {
        let mut model = IlpModel::new();
        let mult = inst.multiplicities();
        let vars = AllocationVars::declare(&mut model, inst.n(), &mult);
        vars.add_supply_constraints(&mut model, &mult);
        encode_fairness(&inst, &vars, &mut model).unwrap();
        for z in enumerate_allocations(&inst, DEFAULT_ENUM_CAP).unwrap() {
            prop_assert_eq!(feasible(&pinned(&model, &vars, &z)), satisfies(&inst, &z).unwrap(), "{:?}", z);
        }
    }

    #[test]
    fn domination_encoding_matches_profiles(inst in instance_strategy(Some(Fairness::Ef)), pick in any::<prop::sample::Index>()) {
        let all: Vec<Allocation> = enumerate_allocations(&inst, DEFAULT_ENUM_CAP).unwrap().collect();
        let target = &all[pick.index(all.len())];
        let p = inst.profile_of(target).unwrap();
        let model = encode_domination(&inst, &p);
        for x in &all {
            let point: Vec<BigRational> = x.flatten().into_iter().map(BigRational::from_integer).collect();
            prop_assert_eq!(model.is_satisfied_by(&point, true), inst.profile_of(x).unwrap().dominates(&p));
        }
    }

    #[test]
    fn nogood_cut_removes_exactly_the_dominated(inst in instance_strategy(Some(Fairness::Ef)), pick in any::<prop::sample::Index>()) {
        let all: Vec<Allocation> = enumerate_allocations(&inst, DEFAULT_ENUM_CAP).unwrap().collect();
        let q = inst.profile_of(&all[pick.index(all.len())]).unwrap();
        let mut model = IlpModel::new();
        let mult = inst.multiplicities();
        let vars = AllocationVars::declare(&mut model, inst.n(), &mult);
        vars.add_supply_constraints(&mut model, &mult);
        add_nogood_dominance_cut(&mut model, &vars, inst.utilities(), &q, 0);
        for z in &all {
            let survives = feasible(&pinned(&model, &vars, z));
            prop_assert_eq!(survives, !q.dominates(&inst.profile_of(z).unwrap()));
        }
    }

    #[test]
    fn engine_matches_oracle_with_envy_graphs(inst in instance_strategy(None)) {
        let engine = solve_eef(&inst, &EngineConfig::default()).unwrap();
        let oracle = brute_eef(&inst, DEFAULT_ENUM_CAP, 1).unwrap();
        prop_assert_eq!(engine.answer(), oracle.verdict.answer());
    }

    #[test]
    fn verdict_traces_are_sound(inst in instance_strategy(None)) {
        let (v, trace) = solve_eef_traced(&inst, &EngineConfig::default()).unwrap();
        let limits = SolverLimits::default();
        // Step-one welfare never increases.
        for w in trace.candidates.windows(2) {
            prop_assert!(w[1].welfare() <= w[0].welfare());
        }
        let blocked = v.blocked_profiles();
        for (k, q) in blocked.iter().enumerate() {
            prop_assert!(!blocked[..k].contains(q));
            prop_assert!(find_dominator(&inst, q, &limits).unwrap().is_none());
        }
        match v.answer() {
            Answer::Yes => {
                let z = v.certificate().unwrap();
                prop_assert!(satisfies(&inst, z).unwrap());
                prop_assert_eq!(&inst.profile_of(z).unwrap(), &v.profile);
                prop_assert!(find_dominator(&inst, &v.profile, &limits).unwrap().is_none());
            }
            Answer::No => {
                for z in enumerate_allocations(&inst, DEFAULT_ENUM_CAP).unwrap() {
                    if satisfies(&inst, &z).unwrap() {
                        let p = inst.profile_of(&z).unwrap();
                        prop_assert!(blocked.iter().any(|q| q.dominates(&p)), "{:?} escapes", z);
                    }
                }
            }
        }
    }

    #[test]
    fn engine_is_deterministic(inst in instance_strategy(None)) {
        let a = solve_eef(&inst, &EngineConfig::default()).unwrap();
        let b = solve_eef(&inst, &EngineConfig::default()).unwrap();
        prop_assert_eq!(serialize_verdict(&a), serialize_verdict(&b));
    }

    #[test]
    fn fewer_envy_edges_keep_yes(inst in instance_strategy(None), keep in any::<prop::sample::Index>()) {
        let v = solve_eef(&inst, &EngineConfig::default()).unwrap();
        let edges = inst.envy_edges();
        let sub: Vec<(usize, usize)> = if edges.is_empty() {
            Vec::new()
        } else {
            let k = keep.index(edges.len());
            edges[..k].to_vec()
        };
        let relaxed = inst.with_envy_graph(Some(sub)).unwrap();
        if v.answer() == Answer::Yes {
            prop_assert!(satisfies(&relaxed, v.certificate().unwrap()).unwrap());
            prop_assert_eq!(solve_eef(&relaxed, &EngineConfig::default()).unwrap().answer(), Answer::Yes);
        }
    }

    #[test]
    fn profile_is_linear(inst in instance_strategy(Some(Fairness::Ef)), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let all: Vec<Allocation> = enumerate_allocations(&inst, DEFAULT_ENUM_CAP).unwrap().collect();
        let (x, y) = (&all[i.index(all.len())], &all[j.index(all.len())]);
        let sum: Vec<Vec<BigInt>> = x.rows().iter().zip(y.rows()).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect();
        let sum = Allocation::new(sum).unwrap();
        if inst.check_allocation(&sum).is_ok() {
            let (px, py, ps) = (inst.profile_of(x).unwrap(), inst.profile_of(y).unwrap(), inst.profile_of(&sum).unwrap());
            let added: Vec<BigInt> = px.per_agent().iter().zip(py.per_agent()).map(|(a, b)| a + b).collect();
            prop_assert_eq!(ps, UtilityProfile::new(added));
        }
    }

    #[test]
    fn documents_round_trip(inst in instance_strategy(None)) {
        let text = serialize_instance(&inst);
        prop_assert_eq!(&parse_instance(&text).unwrap(), &inst);
        let v = solve_eef(&inst, &EngineConfig::default()).unwrap();
        let doc = serialize_verdict(&v);
        prop_assert_eq!(&parse_verdict(&doc).unwrap(), &v);
        prop_assert_eq!(serialize_verdict(&parse_verdict(&doc).unwrap()), doc);
    }

    #[test]
    fn model_text_round_trips(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let model = common::random_model(&mut rng);
        let text = write_model(&model);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(write_model(&back), text);
        prop_assert_eq!(back, model);
    }

    #[test]
    fn big_multiplicities_agree_with_parity(k in 1u64..1_000_000_000_000, extra in 0u64..2) {
        let m = BigInt::from(k) * 2u32 + extra;
        let inst = Instance::from_numbers(&[m], &[vec![1], vec![1]]).unwrap();
        let v = solve_eef(&inst, &EngineConfig::default()).unwrap();
        prop_assert_eq!(v.answer() == Answer::Yes, extra == 0);
    }
}

#[test]
fn solver_limits_never_give_wrong_answers() {
    let inst = Instance::from_numbers(&[3, 2], &[vec![2, 1], vec![1, 3]]).unwrap();
    let tight = EngineConfig {
        solver: SolverLimits {
            node_limit: 1,
            pivot_limit: 1,
        },
        ..EngineConfig::default()
    };
    assert!(matches!(
        solve_eef(&inst, &tight),
        Err(eef::Error::Limit { .. })
    ));
    let out = ilp_solve(
        &encode_domination(&inst, &UtilityProfile::from_numbers(&[0, 0])),
        &tight.solver,
    );
    assert_eq!(out.status, SolveStatus::Limit);
    assert!(out.assignment.is_none());
}
