//! The parametric integer program behind the decision problem.
//!
//! For allocation variables `x` (one per agent and item type, column
//! `a·m + i`) the matrix `A` stacks, in canonical `A·x ≤ b` form:
//!
//! | block | rows  | row                                  | pinned rhs        |
//! |-------|-------|--------------------------------------|-------------------|
//! | b1    | m     | `Σ_a x_a^i ≤ b1_i`                   | `b1 = multiplicities` |
//! | b2    | m·n   | `-x_a^i ≤ b2_{a,i}`                  | `b2 = 0`          |
//! | b3    | n     | `-Σ_i u_a(i) x_a^i ≤ b3_a`           | `b3_a = -p_a`     |
//! | b4    | 1     | `-Σ_a Σ_i u_a(i) x_a^i ≤ b4`         | `b4 = -1 - W`     |
//!
//! The polyhedron `Q` over `(b, z)` pins `b1`, `b2`, requires `z` to be an
//! envy-free allocation and binds `b3`, `b4` to `z`'s profile `p` and
//! welfare `W` with the signs above. Then `(b, z) ∈ Q` exactly when `z` is
//! envy-free and `b` is the right-hand side under which `A·x ≤ b` describes
//! the allocations dominating `z`. An envy-free `z` whose `b` admits no
//! integral `x` is therefore an envy-free Pareto-efficient allocation.

use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, ErrorCode, InputError, Result};
use crate::instance::{Allocation, Fairness, Instance};
use crate::solver::{ilp_solve, rat, text, IlpModel, Relation, SolveStatus, SolverLimits};

/// Index ranges of the four right-hand-side blocks inside `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSplit {
    pub b1: Range<usize>,
    pub b2: Range<usize>,
    pub b3: Range<usize>,
    pub b4: usize,
}

impl BSplit {
    fn new(n: usize, m: usize) -> Self {
        let b2_end = m + m * n;
        BSplit {
            b1: 0..m,
            b2: m..b2_end,
            b3: b2_end..b2_end + n,
            b4: b2_end + n,
        }
    }

    pub fn len(&self) -> usize {
        self.b4 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PilpSystem {
    n: usize,
    m: usize,
    multiplicities: Vec<BigInt>,
    a: Vec<Vec<BigRational>>,
    row_names: Vec<String>,
    q: IlpModel,
    b_split: BSplit,
}

/// Left-hand-side matrix with its row names; independent of fairness.
pub fn a_matrix(inst: &Instance) -> (Vec<Vec<BigRational>>, Vec<String>) {
    let (n, m) = (inst.n(), inst.m());
    let cols = n * m;
    let col = |a: usize, i: usize| a * m + i;
    let mut rows = Vec::with_capacity(m + m * n + n + 1);
    let mut names = Vec::with_capacity(rows.capacity());
    for i in 0..m {
        let mut row = vec![BigRational::zero(); cols];
        for a in 0..n {
            row[col(a, i)] = BigRational::one();
        }
        rows.push(row);
        names.push(format!("alloc_{i}"));
    }
    for a in 0..n {
        for i in 0..m {
            let mut row = vec![BigRational::zero(); cols];
            row[col(a, i)] = -BigRational::one();
            rows.push(row);
            names.push(format!("nonneg_{a}_{i}"));
        }
    }
    for a in 0..n {
        let mut row = vec![BigRational::zero(); cols];
        for i in 0..m {
            row[col(a, i)] = -rat(inst.utility(a, i));
        }
        rows.push(row);
        names.push(format!("dominate_{a}"));
    }
    let mut welfare = vec![BigRational::zero(); cols];
    for a in 0..n {
        for i in 0..m {
            welfare[col(a, i)] = -rat(inst.utility(a, i));
        }
    }
    rows.push(welfare);
    names.push("welfare".into());
    (rows, names)
}

/// Builds `A`, `Q` and the `b` split. Only envy-freeness has a polyhedral
/// description here.
pub fn build_system(inst: &Instance) -> Result<PilpSystem, InputError> {
    if inst.fairness() != Fairness::Ef {
        return Err(InputError::new(
            ErrorCode::UnsupportedCombination,
            "fairness",
            format!(
                "the parametric system encodes EF only, not {}",
                inst.fairness()
            ),
        ));
    }
    let (n, m) = (inst.n(), inst.m());
    let (a, row_names) = a_matrix(inst);
    let split = BSplit::new(n, m);
    let k = split.len();

    let mut q = IlpModel::new();
    for j in 0..k {
        q.add_variable(format!("b{j}"), None, None, false)
            .expect("fresh");
    }
    let z = |a: usize, i: usize| k + a * m + i;
    for a in 0..n {
        for i in 0..m {
            q.add_variable(format!("z{a}_{i}"), None, None, true)
                .expect("fresh");
        }
    }
    let one = BigInt::one();
    let neg_one = -BigInt::one();
    for i in 0..m {
        q.add_int_row(
            format!("b1_{i}"),
            [(split.b1.start + i, &one)],
            Relation::Eq,
            inst.multiplicity(i).clone(),
        );
    }
    for a in 0..n {
        for i in 0..m {
            q.add_int_row(
                format!("b2_{a}_{i}"),
                [(split.b2.start + a * m + i, &one)],
                Relation::Eq,
                BigInt::zero(),
            );
        }
    }
    for i in 0..m {
        q.add_int_row(
            format!("alloc_{i}"),
            (0..n).map(|a| (z(a, i), &one)),
            Relation::Le,
            inst.multiplicity(i).clone(),
        );
    }
    for a in 0..n {
        for i in 0..m {
            q.add_int_row(
                format!("nonneg_{a}_{i}"),
                [(z(a, i), &one)],
                Relation::Ge,
                BigInt::zero(),
            );
        }
    }
    for (a, b) in inst.envy_edges() {
        let u = &inst.utilities()[a];
        let neg: Vec<BigInt> = u.iter().map(|v| -v).collect();
        q.add_int_row(
            format!("ef_{a}_{b}"),
            (0..m)
                .map(|i| (z(a, i), &u[i]))
                .chain((0..m).map(|i| (z(b, i), &neg[i]))),
            Relation::Ge,
            BigInt::zero(),
        );
    }
    for a in 0..n {
        q.add_int_row(
            format!("b3_{a}"),
            (0..m)
                .map(|i| (z(a, i), inst.utility(a, i)))
                .chain([(split.b3.start + a, &one)]),
            Relation::Eq,
            BigInt::zero(),
        );
    }
    q.add_int_row(
        "b4",
        (0..n)
            .flat_map(|a| (0..m).map(move |i| (a, i)))
            .map(|(a, i)| (z(a, i), inst.utility(a, i)))
            .chain([(split.b4, &one)]),
        Relation::Eq,
        neg_one,
    );

    Ok(PilpSystem {
        n,
        m,
        multiplicities: inst.multiplicities(),
        a,
        row_names,
        q,
        b_split: split,
    })
}

impl PilpSystem {
    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn columns(&self) -> usize {
        self.n * self.m
    }

    pub fn q_dimension(&self) -> usize {
        self.q.num_vars()
    }

    pub fn a(&self) -> &[Vec<BigRational>] {
        &self.a
    }

    pub fn q(&self) -> &IlpModel {
        &self.q
    }

    pub fn b_split(&self) -> &BSplit {
        &self.b_split
    }

    /// `A·x ≤ b` as a model over integer `x{a}_{i}`. Allocation variables
    /// are free; nonnegativity comes from the b2 rows. With `b = None` the
    /// right-hand side is the template: pinned b1, b2 and zeros in the
    /// parametric b3, b4 rows.
    pub fn a_model(&self, b: Option<&[BigRational]>) -> IlpModel {
        let template;
        let rhs = match b {
            Some(b) => b,
            None => {
                template = self.template_b();
                &template
            }
        };
        let mut model = IlpModel::new();
        for a in 0..self.n {
            for i in 0..self.m {
                model
                    .add_variable(format!("x{a}_{i}"), None, None, true)
                    .expect("fresh");
            }
        }
        for ((row, name), r) in self.a.iter().zip(&self.row_names).zip(rhs) {
            model
                .add_constraint(name.clone(), row.clone(), Relation::Le, r.clone())
                .expect("row width matches");
        }
        model
    }

    fn template_b(&self) -> Vec<BigRational> {
        let mut b = vec![BigRational::zero(); self.b_split.len()];
        for (k, mi) in self.b_split.b1.clone().zip(&self.multiplicities) {
            b[k] = rat(mi);
        }
        b
    }

    fn check_b(&self, b: &[BigRational]) -> Result<(), InputError> {
        if b.len() != self.b_split.len() {
            return Err(InputError::new(
                ErrorCode::DimensionMismatch,
                "b",
                format!("b has {} entries, expected {}", b.len(), self.b_split.len()),
            ));
        }
        Ok(())
    }

    /// JSON manifest describing the b split.
    pub fn manifest(&self, phi: u64) -> Value {
        let range = |r: &Range<usize>| json!([r.start, r.end]);
        let s = &self.b_split;
        json!({
            "rows": self.rows(),
            "columns": self.columns(),
            "q_dimension": self.q_dimension(),
            "b_split": {
                "b1": range(&s.b1),
                "b2": range(&s.b2),
                "b3": range(&s.b3),
                "b4": [s.b4, s.b4 + 1],
            },
            "parametric_rows": s.b3.clone().chain([s.b4]).collect::<Vec<_>>(),
            "phi": phi,
        })
    }
}

/// Right-hand side `b` induced by allocation `z`.
pub fn induced_b(inst: &Instance, z: &Allocation) -> Result<Vec<BigRational>, InputError> {
    let p = inst.profile_of(z)?;
    let split = BSplit::new(inst.n(), inst.m());
    let mut b = vec![BigRational::zero(); split.len()];
    for (k, item) in split.b1.clone().zip(inst.items()) {
        b[k] = rat(&item.multiplicity);
    }
    for (k, pa) in split.b3.clone().zip(p.per_agent()) {
        b[k] = -rat(pa);
    }
    b[split.b4] = -rat(&(p.welfare() + 1));
    Ok(b)
}

/// Whether `(b, z)` satisfies every row of `Q`, with `z` integral.
pub fn q_member(sys: &PilpSystem, b: &[BigRational], z: &Allocation) -> Result<bool, InputError> {
    sys.check_b(b)?;
    if z.n() != sys.n || z.m() != sys.m {
        return Err(InputError::new(
            ErrorCode::DimensionMismatch,
            "z",
            format!("z is {}x{}, expected {}x{}", z.n(), z.m(), sys.n, sys.m),
        ));
    }
    let point: Vec<BigRational> = b
        .iter()
        .cloned()
        .chain(z.flatten().iter().map(rat))
        .collect();
    Ok(sys.q.is_satisfied_by(&point, true))
}

/// Bits of a signed integer: magnitude bits plus a sign bit.
fn encoding_bits(c: &BigInt) -> u64 {
    c.abs().bits() + 1
}

/// Maximum over columns of `A` of Σ (encoding_bits(entry) + 1), the `+1`
/// counting one delimiter per entry.
pub fn compute_phi(inst: &Instance) -> u64 {
    let (a, _) = a_matrix(inst);
    let cols = inst.n() * inst.m();
    (0..cols)
        .map(|j| {
            a.iter()
                .map(|row| encoding_bits(&row[j].to_integer()) + 1)
                .sum()
        })
        .max()
        .unwrap_or(0)
}

/// True iff `b` certifies that the sentence "every envy-free allocation is
/// dominated" fails: `b` lies in the integer projection of `Q` and
/// `A·x ≤ b` has no integral solution.
///
/// Projection membership is checked against `witness` when given, otherwise
/// a matching `z` is searched for.
pub fn verify_certificate(
    sys: &PilpSystem,
    b: &[BigRational],
    witness: Option<&Allocation>,
    limits: &SolverLimits,
) -> Result<bool> {
    sys.check_b(b)?;
    let in_projection = match witness {
        Some(z) => q_member(sys, b, z)?,
        None => {
            let mut search = sys.q.clone();
            for (k, v) in b.iter().enumerate() {
                search.set_bounds(k, Some(v.clone()), Some(v.clone()));
            }
            let k = sys.b_split.len();
            for a in 0..sys.n {
                for i in 0..sys.m {
                    search.set_bounds(
                        k + a * sys.m + i,
                        Some(BigRational::zero()),
                        Some(rat(&sys.multiplicities[i])),
                    );
                }
            }
            ilp_solve(&search, limits)
                .check_limit(limits)?
                .is_solution()
        }
    };
    if !in_projection {
        return Err(Error::Input(InputError::new(
            ErrorCode::NotInProjection,
            "b",
            "no envy-free allocation induces this right-hand side",
        )));
    }
    let mut model = sys.a_model(Some(b));
    for (j, mi) in sys
        .multiplicities
        .iter()
        .cycle()
        .take(sys.columns())
        .enumerate()
    {
        model.set_bounds(j, Some(BigRational::zero()), Some(rat(mi)));
    }
    let out = ilp_solve(&model, limits).check_limit(limits)?;
    Ok(out.status == SolveStatus::Infeasible)
}

/// Canonical text of any model.
pub fn export_model(model: &IlpModel) -> String {
    text::write_model(model)
}

/// Documents produced for a system: the A-template, Q, and the manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemExport {
    pub a_system: String,
    pub q_system: String,
    pub manifest: String,
}

pub fn export_system(inst: &Instance) -> Result<SystemExport, InputError> {
    let sys = build_system(inst)?;
    let mut manifest =
        serde_json::to_string_pretty(&sys.manifest(compute_phi(inst))).expect("serializable");
    manifest.push('\n');
    Ok(SystemExport {
        a_system: export_model(&sys.a_model(None)),
        q_system: export_model(&sys.q),
        manifest,
    })
}
