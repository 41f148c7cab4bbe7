//! Bounded-variable primal simplex over exact rationals.
//!
//! Every row `Σ a_j x_j  rel  b` gets a slack `s` with `Σ a_j x_j + s = b`
//! (`s ≥ 0` for ≤, `s ≤ 0` for ≥, `s = 0` for =). Rows whose slack cannot
//! absorb the starting residual get an artificial variable, driven to zero in
//! phase one. Entering and leaving variables follow Bland's rule, so the
//! pivot sequence is fully determined by the model.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::model::{IlpModel, Relation, Sense};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    PivotLimit,
}

#[derive(Debug, Clone)]
pub(crate) struct LpResult {
    pub status: LpStatus,
    /// Values of the structural variables; meaningful for `Optimal`.
    pub point: Vec<BigRational>,
    pub pivots: u64,
}

type Bound = Option<BigRational>;

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    value: Vec<BigRational>,
    lower: Vec<Bound>,
    upper: Vec<Bound>,
    is_basic: Vec<bool>,
    pivots: u64,
    pivot_budget: u64,
}

enum Step {
    Optimal,
    Unbounded,
    Limit,
}

impl Tableau {
    /// Runs simplex iterations minimizing `cost · x` until optimal.
    fn minimize(&mut self, cost: &[BigRational]) -> Step {
        let ncols = self.value.len();
        loop {
            // Reduced costs d_j = c_j - Σ_r c_B(r) T[r][j], entering by Bland.
            let mut entering = None;
            for j in 0..ncols {
                if self.is_basic[j] {
                    continue;
                }
                let mut d = cost[j].clone();
                for (r, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[r]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        d -= cb * &row[j];
                    }
                }
                if d.is_negative() && self.upper[j].as_ref().is_none_or(|hi| &self.value[j] < hi) {
                    entering = Some((j, true));
                    break;
                }
                if d.is_positive() && self.lower[j].as_ref().is_none_or(|lo| &self.value[j] > lo) {
                    entering = Some((j, false));
                    break;
                }
            }
            let Some((j, increase)) = entering else {
                return Step::Optimal;
            };

            // Ratio test. rate_r is d(x_B(r))/dt for a step t ≥ 0 of x_j.
            let own_limit = if increase {
                self.upper[j].as_ref().map(|hi| hi - &self.value[j])
            } else {
                self.lower[j].as_ref().map(|lo| &self.value[j] - lo)
            };
            let mut best: Option<(BigRational, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[j].is_zero() {
                    continue;
                }
                let rate = if increase { -&row[j] } else { row[j].clone() };
                let b = self.basis[r];
                let limit = if rate.is_negative() {
                    self.lower[b]
                        .as_ref()
                        .map(|lo| (&self.value[b] - lo) / -&rate)
                } else {
                    self.upper[b]
                        .as_ref()
                        .map(|hi| (hi - &self.value[b]) / &rate)
                };
                if let Some(t) = limit {
                    let better = match &best {
                        None => true,
                        Some((bt, br)) => t < *bt || (t == *bt && b < self.basis[*br]),
                    };
                    if better {
                        best = Some((t, r));
                    }
                }
            }

            let (step, leaving_row) = match (own_limit, best) {
                (None, None) => return Step::Unbounded,
                (Some(own), None) => (own, None),
                (None, Some((t, r))) => (t, Some(r)),
                (Some(own), Some((t, r))) => {
                    if own < t {
                        (own, None)
                    } else {
                        (t, Some(r))
                    }
                }
            };

            if !step.is_zero() {
                let delta = if increase {
                    step.clone()
                } else {
                    -step.clone()
                };
                for r in 0..self.rows.len() {
                    let a = &self.rows[r][j];
                    if !a.is_zero() {
                        let b = self.basis[r];
                        self.value[b] -= a * &delta;
                    }
                }
                self.value[j] += &delta;
            }

            if let Some(r) = leaving_row {
                self.pivot(r, j);
            }
            self.pivots += 1;
            if self.pivots > self.pivot_budget {
                return Step::Limit;
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.rows[r][j].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.rows[r] = pivot_row;
        let old = self.basis[r];
        self.is_basic[old] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
        // Snap the leaving variable onto the bound it reached.
        if let Some(lo) = &self.lower[old] {
            if &self.value[old] <= lo {
                self.value[old] = lo.clone();
            }
        }
        if let Some(hi) = &self.upper[old] {
            if &self.value[old] >= hi {
                self.value[old] = hi.clone();
            }
        }
    }
}

/// Solves the LP relaxation of `model` under the given bound overrides.
pub(crate) fn solve_relaxation(
    model: &IlpModel,
    lower: &[Bound],
    upper: &[Bound],
    pivot_budget: u64,
) -> LpResult {
    let nv = model.num_vars();
    let infeasible = |pivots| LpResult {
        status: LpStatus::Infeasible,
        point: Vec::new(),
        pivots,
    };
    for j in 0..nv {
        if let (Some(lo), Some(hi)) = (&lower[j], &upper[j]) {
            if lo > hi {
                return infeasible(0);
            }
        }
    }

    let constraints = model.constraints();
    let nr = constraints.len();
    let start: Vec<BigRational> = (0..nv)
        .map(|j| match (&lower[j], &upper[j]) {
            (Some(lo), _) => lo.clone(),
            (None, Some(hi)) => hi.clone(),
            (None, None) => BigRational::zero(),
        })
        .collect();

    let mut col_lower: Vec<Bound> = lower.to_vec();
    let mut col_upper: Vec<Bound> = upper.to_vec();
    let mut value = start.clone();
    for c in constraints {
        let (lo, hi) = match c.relation {
            Relation::Le => (Some(BigRational::zero()), None),
            Relation::Ge => (None, Some(BigRational::zero())),
            Relation::Eq => (Some(BigRational::zero()), Some(BigRational::zero())),
        };
        col_lower.push(lo);
        col_upper.push(hi);
        value.push(BigRational::zero());
    }

    // Decide per row whether the slack can start basic.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(nr);
    let mut basis = Vec::with_capacity(nr);
    let mut artificials: Vec<(usize, BigRational, BigRational)> = Vec::new();
    for (r, c) in constraints.iter().enumerate() {
        let residual = &c.rhs - c.activity(&start);
        let s = nv + r;
        let lo = &col_lower[s];
        let hi = &col_upper[s];
        let below = lo.as_ref().is_some_and(|lo| &residual < lo);
        let above = hi.as_ref().is_some_and(|hi| &residual > hi);
        let mut row = c.coeffs.clone();
        row.resize(nv + nr, BigRational::zero());
        row[s] = BigRational::one();
        if !below && !above {
            value[s] = residual;
            basis.push(s);
        } else {
            let at = if below {
                lo.clone().unwrap()
            } else {
                hi.clone().unwrap()
            };
            value[s] = at.clone();
            let gap = residual - at;
            artificials.push((r, gap.signum(), gap.abs()));
            basis.push(usize::MAX);
        }
        rows.push(row);
    }

    let ncols = nv + nr + artificials.len();
    for row in rows.iter_mut() {
        row.resize(ncols, BigRational::zero());
    }
    for (k, (r, sign, gap)) in artificials.iter().enumerate() {
        let col = nv + nr + k;
        // Row r reads  Σ a x + s + sign·art = b; normalize so art has coefficient 1.
        rows[*r][col] = sign.clone();
        if sign.is_negative() {
            for v in rows[*r].iter_mut() {
                *v = -&*v;
            }
        }
        basis[*r] = col;
        col_lower.push(Some(BigRational::zero()));
        col_upper.push(None);
        value.push(gap.clone());
    }
    let mut is_basic = vec![false; ncols];
    for &b in &basis {
        is_basic[b] = true;
    }

    let mut tab = Tableau {
        rows,
        basis,
        value,
        lower: col_lower,
        upper: col_upper,
        is_basic,
        pivots: 0,
        pivot_budget,
    };

    if !artificials.is_empty() {
        let mut cost = vec![BigRational::zero(); ncols];
        for c in cost.iter_mut().skip(nv + nr) {
            *c = BigRational::one();
        }
        match tab.minimize(&cost) {
            Step::Optimal => {}
            Step::Limit => return limit(tab.pivots),
            Step::Unbounded => unreachable!("phase one objective is bounded below by zero"),
        }
        if tab.value[nv + nr..].iter().any(|v| !v.is_zero()) {
            return infeasible(tab.pivots);
        }
        for col in nv + nr..ncols {
            tab.upper[col] = Some(BigRational::zero());
        }
    }

    if let Some(obj) = model.objective() {
        let mut cost = vec![BigRational::zero(); ncols];
        for (c, o) in cost.iter_mut().zip(&obj.coeffs) {
            *c = match obj.sense {
                Sense::Minimize => o.clone(),
                Sense::Maximize => -o,
            };
        }
        match tab.minimize(&cost) {
            Step::Optimal => {}
            Step::Limit => return limit(tab.pivots),
            Step::Unbounded => {
                return LpResult {
                    status: LpStatus::Unbounded,
                    point: Vec::new(),
                    pivots: tab.pivots,
                }
            }
        }
    }

    tab.value.truncate(nv);
    LpResult {
        status: LpStatus::Optimal,
        point: tab.value,
        pivots: tab.pivots,
    }
}

fn limit(pivots: u64) -> LpResult {
    LpResult {
        status: LpStatus::PivotLimit,
        point: Vec::new(),
        pivots,
    }
}
