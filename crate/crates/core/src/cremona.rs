//! Projective degrees of a Cremona transformation, the admissibility
//! inequalities they must satisfy, and the Diophantine search for types
//! (n, δ₁, δ₂, r, r′) compatible with the dimension formula.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactq::{binomial, Assignment, Polynomial, Var};
use crate::invariants::{InvariantTable, Symbol, TransformationConfig};

/// `n·(δ₁−1)·δ₂ = (δ₁δ₂−1)·r + (δ₁+1)·δ₂ − 2`, checked over the integers.
pub fn dimension_formula_holds(n: i64, delta1: i64, delta2: i64, r: i64) -> bool {
    n * (delta1 - 1) * delta2 == (delta1 * delta2 - 1) * r + (delta1 + 1) * delta2 - 2
}

/// Dimension r′ of the base locus of the inverse, from the dimension formula
/// with the roles of δ₁ and δ₂ exchanged. `None` when it is not an integer.
pub fn inverse_base_dimension(n: i64, delta1: i64, delta2: i64) -> Option<i64> {
    let den = delta1 * delta2 - 1;
    let num = n * (delta2 - 1) * delta1 - (delta2 + 1) * delta1 + 2;
    (den != 0 && num % den == 0).then(|| num / den)
}

/// k₀ = (n − r)·δ₁ − (n + 1): from this twist on, the higher cohomology of
/// the ideal sheaf of the base locus vanishes.
pub fn vanishing_threshold(cfg: &TransformationConfig) -> i64 {
    cfg.codim() * cfg.delta1() - (cfg.n() + 1)
}

/// deg₀, …, deg_n of a rational map, symbolic or evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multidegree {
    degrees: Vec<Polynomial>,
}

impl Multidegree {
    pub fn new(degrees: Vec<Polynomial>) -> Self {
        Multidegree { degrees }
    }

    pub fn degrees(&self) -> &[Polynomial] {
        &self.degrees
    }

    /// deg_k.
    pub fn get(&self, k: usize) -> Option<&Polynomial> {
        self.degrees.get(k)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn evaluate(&self, a: &Assignment) -> Multidegree {
        Multidegree::new(self.degrees.iter().map(|d| d.evaluate(a)).collect())
    }

    /// Integer entries at a point; errors if a variable is left unassigned or
    /// an entry is not integral.
    pub fn at(&self, lambda: i64, genus: i64, nu: Option<i64>) -> Result<Vec<i64>> {
        self.degrees
            .iter()
            .map(|d| {
                let v = d.eval_point(lambda, genus, nu)?;
                v.to_i64()
                    .ok_or_else(|| Error::Domain(format!("projective degree {v} is not a machine integer")))
            })
            .collect()
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// Projective degrees from the degree and normal Segre degrees of the base locus:
///
/// deg_{n−k} = δ₁^{n−k} − C(n−k, r−k)·δ₁^{r−k}·deg − Σ_{i=k}^{r−1} C(n−k, i−k)·δ₁^{i−k}·s_{r−i}
///
/// where `segre[i − 1]` is s_i and binomials out of range vanish.
pub fn projective_degrees(cfg: &TransformationConfig, deg: &Polynomial, segre: &[Polynomial]) -> Result<Multidegree> {
    let (n, r, d1) = (cfg.n(), cfg.r(), cfg.delta1());
    if segre.len() < r as usize {
        return Err(Error::MissingInvariant(format!(
            "{} Segre degrees supplied, {r} needed",
            segre.len()
        )));
    }
    let mut degrees = vec![Polynomial::zero(); (n + 1) as usize];
    for k in 0..=n {
        let mut value = Polynomial::from(d1.pow((n - k) as u32));
        if k <= r {
            value = value - deg.scale(&(binomial(n - k, r - k) * d1.pow((r - k) as u32)).into());
            for i in k..r {
                let c = binomial(n - k, i - k) * d1.pow((i - k) as u32);
                value = value - segre[(r - i - 1) as usize].scale(&c.into());
            }
        }
        degrees[(n - k) as usize] = value;
    }
    Ok(Multidegree::new(degrees))
}

/// Symbolic multidegree of the transformation whose base locus has the given
/// invariant table (a threefold in ℙ⁶ or a fourfold in ℙ⁷).
pub fn multidegree_of(cfg: &TransformationConfig, table: &InvariantTable) -> Result<Multidegree> {
    let segre = (1..=cfg.r() as u8)
        .map(|i| table.get(Symbol::NormalSegre(i)).cloned())
        .collect::<Result<Vec<_>>>()?;
    projective_degrees(cfg, table.get(Symbol::Degree)?, &segre)
}

/// The row of the linear system expressing deg_{n−k} = `value` in terms of
/// s₁, …, s_r: returns (coefficients of s₁..s_r, right-hand side).
pub(crate) fn segre_row(cfg: &TransformationConfig, k: i64, value: i64) -> (Vec<i64>, Polynomial) {
    let (n, r, d1) = (cfg.n(), cfg.r(), cfg.delta1());
    let mut coeffs = vec![0i64; r as usize];
    for i in k..r {
        coeffs[(r - i - 1) as usize] += binomial(n - k, i - k) * d1.pow((i - k) as u32);
    }
    let lambda = Polynomial::var(Var::Lambda);
    let rhs = Polynomial::from(d1.pow((n - k) as u32) - value)
        - lambda.scale(&(binomial(n - k, r - k) * d1.pow((r - k) as u32)).into());
    (coeffs, rhs)
}

/// Which inequality of the admissibility conditions failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Violation {
    /// deg_k ≥ 1.
    Positivity { k: usize, value: i64 },
    /// deg_{i+j} ≤ deg_i·deg_j.
    Product { i: usize, j: usize, lhs: i64, rhs: i64 },
    /// deg_{i−1}·deg_{i+1} ≤ deg_i².
    LogConcavity { i: usize, square: i64, product: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Positivity { k, value } => write!(f, "deg_{k} = {value} < 1"),
            Violation::Product { i, j, lhs, rhs } => {
                write!(f, "deg_{} = {lhs} > deg_{i}*deg_{j} = {rhs}", i + j)
            }
            Violation::LogConcavity { i, square, product } => write!(
                f,
                "violation at i={i} ({square} < {product}): deg_{i}^2 < deg_{}*deg_{}",
                i - 1,
                i + 1
            ),
        }
    }
}

/// All violated restrictions `1 ≤ deg_{i+j} ≤ deg_i·deg_j` and
/// `deg_{i−1}·deg_{i+1} ≤ deg_i²`. Empty iff the sequence is admissible.
pub fn multidegree_admissible(md: &[i64]) -> Vec<Violation> {
    let n = md.len().saturating_sub(1);
    let mut out = Vec::new();
    for (k, &v) in md.iter().enumerate() {
        if v < 1 {
            out.push(Violation::Positivity { k, value: v });
        }
    }
    for i in 1..=n {
        for j in i..=n - i {
            let lhs = md[i + j];
            let rhs = md[i] as i128 * md[j] as i128;
            if (lhs as i128) > rhs {
                out.push(Violation::Product {
                    i,
                    j,
                    lhs,
                    rhs: rhs.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
                });
            }
        }
    }
    for i in 1..n {
        let square = md[i] as i128 * md[i] as i128;
        let product = md[i - 1] as i128 * md[i + 1] as i128;
        if product > square {
            let clamp = |x: i128| x.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
            out.push(Violation::LogConcavity {
                i,
                square: clamp(square),
                product: clamp(product),
            });
        }
    }
    out
}

/// A solution (n, δ₁, δ₂, dim B, dim B′) of the dimension formula within the
/// standing bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdmissibleType {
    pub n: i64,
    pub delta1: i64,
    pub delta2: i64,
    pub r: i64,
    pub inverse_r: i64,
}

impl fmt::Display for AdmissibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n, d1, d2, r, r') = ({}, {}, {}, {}, {})",
            self.n, self.delta1, self.delta2, self.r, self.inverse_r
        )
    }
}

pub const DEFAULT_TYPE_BOUND: i64 = 32;

/// Exhaustive search for admissible types with δ₁, δ₂ ≤ `bound`, optionally
/// fixing the ambient dimension or the base locus dimension. When neither is
/// fixed, r also ranges up to `bound`. Sorted lexicographically.
pub fn admissible_types(n: Option<i64>, r: Option<i64>, bound: i64) -> Vec<AdmissibleType> {
    let mut out = Vec::new();
    for delta1 in 2..=bound {
        for delta2 in 2..=bound {
            let candidates: Vec<(i64, i64)> = match (n, r) {
                (Some(n), Some(r)) => vec![(n, r)],
                (Some(n), None) => (1..=n - 2).map(|r| (n, r)).collect(),
                (None, fixed_r) => {
                    let rs: Vec<i64> = match fixed_r {
                        Some(r) => vec![r],
                        None => (1..=bound).collect(),
                    };
                    // n is determined by the dimension formula.
                    rs.into_iter()
                        .filter_map(|r| {
                            let num = (delta1 * delta2 - 1) * r + (delta1 + 1) * delta2 - 2;
                            let den = (delta1 - 1) * delta2;
                            (num % den == 0).then(|| (num / den, r))
                        })
                        .collect()
                }
            };
            for (n, r) in candidates {
                if let Ok(cfg) = TransformationConfig::new(n, delta1, delta2, r) {
                    out.push(AdmissibleType {
                        n,
                        delta1,
                        delta2,
                        r,
                        inverse_r: cfg.inverse_r(),
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
