use std::collections::BTreeMap;

use super::poly::{Polynomial, Var};
use super::rational::Rational;
use crate::error::Error;

/// One labelled row `Σ coeffs[j]·x_j = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub label: String,
    pub coeffs: Vec<Rational>,
    pub rhs: Polynomial,
}

/// Linear system with rational coefficients and polynomial right-hand sides,
/// solved over the fraction field of ℚ[λ, g, ν, t].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    unknowns: Vec<String>,
    equations: Vec<Equation>,
}

impl LinearSystem {
    pub fn new<S: Into<String>>(unknowns: impl IntoIterator<Item = S>) -> Result<Self, Error> {
        let unknowns: Vec<String> = unknowns.into_iter().map(Into::into).collect();
        for u in &unknowns {
            if Var::from_name(u).is_some() {
                return Err(Error::Domain(format!(
                    "unknown {u:?} collides with a polynomial variable"
                )));
            }
        }
        Ok(LinearSystem {
            unknowns,
            equations: Vec::new(),
        })
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Add a row given as a dense coefficient vector.
    pub fn push_row(&mut self, label: impl Into<String>, coeffs: Vec<Rational>, rhs: Polynomial) -> Result<(), Error> {
        let label = label.into();
        if coeffs.len() != self.unknowns.len() {
            return Err(Error::Domain(format!(
                "equation {label:?} has {} coefficients for {} unknowns",
                coeffs.len(),
                self.unknowns.len()
            )));
        }
        self.equations.push(Equation { label, coeffs, rhs });
        Ok(())
    }

    /// Add a row given sparsely by unknown name.
    pub fn push(&mut self, label: impl Into<String>, lhs: &[(&str, i64)], rhs: Polynomial) -> Result<(), Error> {
        let label = label.into();
        let mut coeffs = vec![Rational::zero(); self.unknowns.len()];
        for (name, c) in lhs {
            let j = self
                .unknowns
                .iter()
                .position(|u| u == name)
                .ok_or_else(|| Error::Domain(format!("equation {label:?} uses undeclared unknown {name:?}")))?;
            coeffs[j] += &Rational::from(*c);
        }
        self.push_row(label, coeffs, rhs)
    }

    /// `A·x − b` for every equation.
    pub fn residuals(&self, solution: &Solution) -> Vec<Polynomial> {
        self.equations
            .iter()
            .map(|eq| {
                let lhs = eq
                    .coeffs
                    .iter()
                    .zip(&solution.values)
                    .fold(Polynomial::zero(), |acc, (a, x)| acc + x.scale(a));
                lhs - &eq.rhs
            })
            .collect()
    }
}

/// Values of the unknowns, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    names: Vec<String>,
    values: Vec<Polynomial>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Option<&Polynomial> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Polynomial)> {
        self.names.iter().map(String::as_str).zip(&self.values)
    }

    pub fn into_map(self) -> BTreeMap<String, Polynomial> {
        self.names.into_iter().zip(self.values).collect()
    }
}

struct Row {
    coeffs: Vec<Rational>,
    rhs: Polynomial,
    origin: usize,
}

/// Exact Gauss–Jordan elimination. The pivot in each column is the nonzero
/// candidate of smallest bit size, ties going to the lowest original row.
#[allow(clippy::needless_range_loop)] // columns index several parallel structures
pub fn solve_linear_system(sys: &LinearSystem) -> Result<Solution, Error> {
    let n = sys.unknowns.len();
    let mut rows: Vec<Row> = sys
        .equations
        .iter()
        .enumerate()
        .map(|(i, e)| Row {
            coeffs: e.coeffs.clone(),
            rhs: e.rhs.clone(),
            origin: i,
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut placed = 0usize;
    for col in 0..n {
        let best = rows[placed..]
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.coeffs[col].is_zero())
            .min_by_key(|(_, r)| (r.coeffs[col].bit_size(), r.origin))
            .map(|(i, _)| i + placed);
        let Some(p) = best else { continue };
        rows.swap(placed, p);
        let inv = rows[placed].coeffs[col].recip()?;
        {
            let row = &mut rows[placed];
            for c in row.coeffs.iter_mut() {
                *c *= &inv;
            }
            row.rhs = row.rhs.scale(&inv);
        }
        let (pivot_coeffs, pivot_rhs) = (rows[placed].coeffs.clone(), rows[placed].rhs.clone());
        for (i, row) in rows.iter_mut().enumerate() {
            if i == placed || row.coeffs[col].is_zero() {
                continue;
            }
            let factor = row.coeffs[col].clone();
            for (c, pc) in row.coeffs.iter_mut().zip(&pivot_coeffs) {
                *c -= &(pc * &factor);
            }
            row.rhs = &row.rhs - &pivot_rhs.scale(&factor);
        }
        pivot_of_col[col] = Some(placed);
        placed += 1;
    }

    let leftovers = &rows[placed..];
    if let Some(bad) = leftovers
        .iter()
        .filter(|r| r.coeffs.iter().all(Rational::is_zero) && !r.rhs.is_zero())
        .min_by_key(|r| r.origin)
    {
        return Err(Error::Inconsistent {
            equation: sys.equations[bad.origin].label.clone(),
            residual: bad.rhs.to_string(),
        });
    }
    if placed < n {
        let first_dependent = leftovers
            .iter()
            .min_by_key(|r| r.origin)
            .map(|r| sys.equations[r.origin].label.clone());
        return Err(Error::Singular {
            rank: placed,
            unknowns: n,
            first_dependent,
        });
    }

    let values: Vec<Polynomial> = pivot_of_col
        .iter()
        .map(|p| rows[p.expect("full rank")].rhs.clone())
        .collect();
    let solution = Solution {
        names: sys.unknowns.clone(),
        values,
    };
    debug_assert!(sys.residuals(&solution).iter().all(Polynomial::is_zero));
    Ok(solution)
}
