use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    /// `None` means -infinity.
    pub lower: Option<BigRational>,
    /// `None` means +infinity.
    pub upper: Option<BigRational>,
    pub integer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// Dense: one coefficient per model variable.
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn activity(&self, point: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .fold(BigRational::zero(), |acc, v| acc + v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("variable {0:?}: lower bound exceeds upper bound")]
    EmptyDomain(String),
    #[error("integer variable {0:?} has a fractional bound")]
    FractionalBound(String),
    #[error("variable {0:?} is declared twice")]
    DuplicateVariable(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("row {name:?} has {got} coefficients for {expected} variables")]
    RowLength {
        name: String,
        got: usize,
        expected: usize,
    },
}

/// Exact-rational linear model with variable bounds and integrality flags.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IlpModel {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Option<Objective>,
}

impl IlpModel {
    pub fn new() -> Self {
        IlpModel::default()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Appends a variable; existing rows and the objective get a zero
    /// coefficient for it. Returns its index.
    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: Option<BigRational>,
        upper: Option<BigRational>,
        integer: bool,
    ) -> Result<usize, ModelError> {
        let name = name.into();
        if self.var_index(&name).is_some() {
            return Err(ModelError::DuplicateVariable(name));
        }
        if let (Some(lo), Some(hi)) = (&lower, &upper) {
            if lo > hi {
                return Err(ModelError::EmptyDomain(name));
            }
        }
        if integer
            && [&lower, &upper]
                .into_iter()
                .flatten()
                .any(|b| !b.is_integer())
        {
            return Err(ModelError::FractionalBound(name));
        }
        self.variables.push(Variable {
            name,
            lower,
            upper,
            integer,
        });
        for c in &mut self.constraints {
            c.coeffs.push(BigRational::zero());
        }
        if let Some(obj) = &mut self.objective {
            obj.coeffs.push(BigRational::zero());
        }
        Ok(self.variables.len() - 1)
    }

    /// Integer variable with bounds `[lo, hi]`.
    pub fn add_int_var(
        &mut self,
        name: impl Into<String>,
        lo: &BigInt,
        hi: &BigInt,
    ) -> Result<usize, ModelError> {
        self.add_variable(
            name,
            Some(BigRational::from_integer(lo.clone())),
            Some(BigRational::from_integer(hi.clone())),
            true,
        )
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<usize, ModelError> {
        self.add_int_var(name, &BigInt::zero(), &BigInt::from(1))
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<BigRational>,
        relation: Relation,
        rhs: BigRational,
    ) -> Result<(), ModelError> {
        let name = name.into();
        if coeffs.len() != self.variables.len() {
            return Err(ModelError::RowLength {
                name,
                got: coeffs.len(),
                expected: self.variables.len(),
            });
        }
        self.constraints.push(Constraint {
            name,
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    /// Adds a constraint from sparse `(variable, coefficient)` terms with
    /// integer data. Repeated variables accumulate.
    pub fn add_int_row<'a>(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (usize, &'a BigInt)>,
        relation: Relation,
        rhs: BigInt,
    ) {
        let coeffs = self.dense(terms);
        self.add_constraint(name, coeffs, relation, BigRational::from_integer(rhs))
            .expect("dense row has one entry per variable");
    }

    pub fn set_objective(
        &mut self,
        sense: Sense,
        coeffs: Vec<BigRational>,
    ) -> Result<(), ModelError> {
        if coeffs.len() != self.variables.len() {
            return Err(ModelError::RowLength {
                name: "objective".into(),
                got: coeffs.len(),
                expected: self.variables.len(),
            });
        }
        self.objective = Some(Objective { sense, coeffs });
        Ok(())
    }

    pub fn set_int_objective<'a>(
        &mut self,
        sense: Sense,
        terms: impl IntoIterator<Item = (usize, &'a BigInt)>,
    ) {
        let coeffs = self.dense(terms);
        self.set_objective(sense, coeffs).expect("dense objective");
    }

    pub fn clear_objective(&mut self) {
        self.objective = None;
    }

    pub fn set_bounds(
        &mut self,
        var: usize,
        lower: Option<BigRational>,
        upper: Option<BigRational>,
    ) {
        let v = &mut self.variables[var];
        v.lower = lower;
        v.upper = upper;
    }

    fn dense<'a>(&self, terms: impl IntoIterator<Item = (usize, &'a BigInt)>) -> Vec<BigRational> {
        let mut coeffs = vec![BigRational::zero(); self.variables.len()];
        for (j, c) in terms {
            coeffs[j] += BigRational::from_integer(c.clone());
        }
        coeffs
    }

    pub fn objective_value(&self, point: &[BigRational]) -> Option<BigRational> {
        self.objective.as_ref().map(|obj| {
            obj.coeffs
                .iter()
                .zip(point)
                .map(|(c, x)| c * x)
                .fold(BigRational::zero(), |acc, v| acc + v)
        })
    }

    /// Exact check of every bound, constraint and integrality flag.
    pub fn is_satisfied_by(&self, point: &[BigRational], respect_integrality: bool) -> bool {
        if point.len() != self.variables.len() {
            return false;
        }
        let in_bounds = self.variables.iter().zip(point).all(|(v, x)| {
            v.lower.as_ref().is_none_or(|lo| x >= lo)
                && v.upper.as_ref().is_none_or(|hi| x <= hi)
                && (!respect_integrality || !v.integer || x.is_integer())
        });
        in_bounds
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&c.activity(point), &c.rhs))
    }

    /// Largest absolute coefficient, used only for diagnostics.
    pub fn max_abs_coefficient(&self) -> BigRational {
        self.constraints
            .iter()
            .flat_map(|c| c.coeffs.iter())
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for IlpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::write_model(self))
    }
}
