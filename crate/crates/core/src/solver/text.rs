//! Plain-text model format.
//!
//! ```text
//! MAXIMIZE 3 x0_0 + 4 x0_1
//! SUBJECT TO
//! supply_0: 1 x0_0 + 1 x1_0 <= 5
//! BOUNDS
//! 0 <= x0_0 <= 5
//! -inf <= b0 <= inf
//! INTEGER
//! x0_0
//! END
//! ```
//!
//! The first line is `MAXIMIZE <terms>`, `MINIMIZE <terms>` or
//! `FEASIBILITY`. Every variable has exactly one `BOUNDS` line and the order
//! of those lines is the variable order. Empty sections are omitted.
//! Coefficients are exact rationals `p/q` in lowest terms, integers without
//! a denominator. Writing is canonical: parse followed by write reproduces
//! the document byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::model::{IlpModel, ModelError, Relation, Sense};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> TextError {
    TextError {
        line,
        message: message.into(),
    }
}

pub fn format_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let valid_int = |t: &str| {
        let d = t.strip_prefix('-').unwrap_or(t);
        !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        None => valid_int(s)
            .then(|| BigInt::from_str(s).ok().map(BigRational::from_integer))
            .flatten(),
        Some((p, q)) => {
            if !valid_int(p) || !q.bytes().all(|b| b.is_ascii_digit()) || q.is_empty() {
                return None;
            }
            let q = BigInt::from_str(q).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(p).ok()?, q))
        }
    }
}

fn write_terms(out: &mut String, coeffs: &[BigRational], names: &[&str]) {
    let mut first = true;
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if first {
            let _ = write!(out, "{} {name}", format_rational(c));
            first = false;
        } else if c.is_negative() {
            let _ = write!(out, " - {} {name}", format_rational(&-c));
        } else {
            let _ = write!(out, " + {} {name}", format_rational(c));
        }
    }
    if first {
        out.push('0');
    }
}

fn format_bound(b: &Option<BigRational>, infinite: &str) -> String {
    b.as_ref()
        .map_or_else(|| infinite.to_owned(), format_rational)
}

/// Writes `model` in canonical text form.
pub fn write_model(model: &IlpModel) -> String {
    let names: Vec<&str> = model.variables().iter().map(|v| v.name.as_str()).collect();
    let mut out = String::new();
    match model.objective() {
        None => out.push_str("FEASIBILITY"),
        Some(obj) => {
            out.push_str(match obj.sense {
                Sense::Maximize => "MAXIMIZE ",
                Sense::Minimize => "MINIMIZE ",
            });
            write_terms(&mut out, &obj.coeffs, &names);
        }
    }
    out.push('\n');
    if !model.constraints().is_empty() {
        out.push_str("SUBJECT TO\n");
        for c in model.constraints() {
            let _ = write!(out, "{}: ", c.name);
            write_terms(&mut out, &c.coeffs, &names);
            let _ = writeln!(out, " {} {}", c.relation.symbol(), format_rational(&c.rhs));
        }
    }
    if !model.variables().is_empty() {
        out.push_str("BOUNDS\n");
        for v in model.variables() {
            let _ = writeln!(
                out,
                "{} <= {} <= {}",
                format_bound(&v.lower, "-inf"),
                v.name,
                format_bound(&v.upper, "inf")
            );
        }
    }
    if model.variables().iter().any(|v| v.integer) {
        out.push_str("INTEGER\n");
        for v in model.variables().iter().filter(|v| v.integer) {
            let _ = writeln!(out, "{}", v.name);
        }
    }
    out.push_str("END\n");
    out
}

type Terms = Vec<(String, BigRational)>;

fn parse_terms(s: &str, line: usize) -> Result<Terms, TextError> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens == ["0"] {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut k = 0;
    let mut negate = false;
    loop {
        let (Some(coef), Some(name)) = (tokens.get(k), tokens.get(k + 1)) else {
            return Err(err(line, "expected `<coefficient> <variable>`"));
        };
        let mut c =
            parse_rational(coef).ok_or_else(|| err(line, format!("bad coefficient {coef:?}")))?;
        if negate {
            c = -c;
        }
        terms.push(((*name).to_owned(), c));
        k += 2;
        match tokens.get(k) {
            None => return Ok(terms),
            Some(&"+") => negate = false,
            Some(&"-") => negate = true,
            Some(t) => return Err(err(line, format!("expected `+` or `-`, found {t:?}"))),
        }
        k += 1;
    }
}

fn parse_bound(s: &str, line: usize, infinite: &str) -> Result<Option<BigRational>, TextError> {
    if s == infinite {
        return Ok(None);
    }
    parse_rational(s)
        .map(Some)
        .ok_or_else(|| err(line, format!("bad bound {s:?}")))
}

#[derive(PartialEq)]
enum Section {
    Header,
    Constraints,
    Bounds,
    Integer,
    Done,
}

/// Parses a model document.
pub fn parse_model(text: &str) -> Result<IlpModel, TextError> {
    let mut objective: Option<(Sense, Terms, usize)> = None;
    let mut rows: Vec<(String, Terms, Relation, BigRational, usize)> = Vec::new();
    let mut bounds: Vec<(String, Option<BigRational>, Option<BigRational>, usize)> = Vec::new();
    let mut integers: Vec<(String, usize)> = Vec::new();
    let mut section = Section::Header;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if section == Section::Done {
            return Err(err(line, "content after END"));
        }
        if section == Section::Header {
            if l == "FEASIBILITY" {
            } else if let Some(rest) = l.strip_prefix("MAXIMIZE ") {
                objective = Some((Sense::Maximize, parse_terms(rest, line)?, line));
            } else if let Some(rest) = l.strip_prefix("MINIMIZE ") {
                objective = Some((Sense::Minimize, parse_terms(rest, line)?, line));
            } else {
                return Err(err(line, "expected MAXIMIZE, MINIMIZE or FEASIBILITY"));
            }
            section = Section::Constraints;
            continue;
        }
        match l {
            "SUBJECT TO" => {
                section = Section::Constraints;
                continue;
            }
            "BOUNDS" => {
                section = Section::Bounds;
                continue;
            }
            "INTEGER" => {
                section = Section::Integer;
                continue;
            }
            "END" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Constraints => {
                let (name, body) = l
                    .split_once(':')
                    .ok_or_else(|| err(line, "constraint needs a `name:` prefix"))?;
                let tokens: Vec<&str> = body.split_whitespace().collect();
                if tokens.len() < 3 {
                    return Err(err(line, "constraint needs a relation and right-hand side"));
                }
                let rel = match tokens[tokens.len() - 2] {
                    "<=" => Relation::Le,
                    "=" => Relation::Eq,
                    ">=" => Relation::Ge,
                    t => return Err(err(line, format!("unknown relation {t:?}"))),
                };
                let rhs_tok = tokens[tokens.len() - 1];
                let rhs = parse_rational(rhs_tok)
                    .ok_or_else(|| err(line, format!("bad right-hand side {rhs_tok:?}")))?;
                let lhs = tokens[..tokens.len() - 2].join(" ");
                rows.push((
                    name.trim().to_owned(),
                    parse_terms(&lhs, line)?,
                    rel,
                    rhs,
                    line,
                ));
            }
            Section::Bounds => {
                let tokens: Vec<&str> = l.split_whitespace().collect();
                if tokens.len() != 5 || tokens[1] != "<=" || tokens[3] != "<=" {
                    return Err(err(line, "expected `lo <= name <= hi`"));
                }
                bounds.push((
                    tokens[2].to_owned(),
                    parse_bound(tokens[0], line, "-inf")?,
                    parse_bound(tokens[4], line, "inf")?,
                    line,
                ));
            }
            Section::Integer => {
                for name in l.split_whitespace() {
                    integers.push((name.to_owned(), line));
                }
            }
            Section::Header | Section::Done => unreachable!(),
        }
    }
    if section != Section::Done {
        return Err(err(text.lines().count(), "missing END"));
    }

    let mut model = IlpModel::new();
    for (name, lo, hi, line) in &bounds {
        let integer = integers.iter().any(|(n, _)| n == name);
        model
            .add_variable(name.clone(), lo.clone(), hi.clone(), integer)
            .map_err(|e| err(*line, e.to_string()))?;
    }
    for (name, line) in &integers {
        if model.var_index(name).is_none() {
            return Err(err(
                *line,
                ModelError::UnknownVariable(name.clone()).to_string(),
            ));
        }
    }
    let dense = |terms: &Terms, line: usize| -> Result<Vec<BigRational>, TextError> {
        let mut coeffs = vec![BigRational::zero(); model.num_vars()];
        for (name, c) in terms {
            let j = model
                .var_index(name)
                .ok_or_else(|| err(line, ModelError::UnknownVariable(name.clone()).to_string()))?;
            coeffs[j] += c;
        }
        Ok(coeffs)
    };
    let objective = match &objective {
        Some((sense, terms, line)) => Some((*sense, dense(terms, *line)?)),
        None => None,
    };
    let rows = rows
        .iter()
        .map(|(name, terms, rel, rhs, line)| {
            Ok((name.clone(), dense(terms, *line)?, *rel, rhs.clone()))
        })
        .collect::<Result<Vec<_>, TextError>>()?;
    for (name, coeffs, rel, rhs) in rows {
        model
            .add_constraint(name, coeffs, rel, rhs)
            .expect("dense row");
    }
    if let Some((sense, coeffs)) = objective {
        model.set_objective(sense, coeffs).expect("dense objective");
    }
    Ok(model)
}
