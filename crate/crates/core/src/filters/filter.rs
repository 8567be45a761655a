use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactq::{Polynomial, Rational};

/// How a filter's expression is compared with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// expr ≥ 0
    NonNegative,
    /// expr > 0
    Positive,
    /// expr = 0
    Zero,
}

impl Relation {
    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::NonNegative => !value.is_negative(),
            Relation::Positive => value.is_positive(),
            Relation::Zero => value.is_zero(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::NonNegative => ">= 0",
            Relation::Positive => "> 0",
            Relation::Zero => "= 0",
        }
    }
}

/// Coarse classification of a filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    Inequality,
    StrictInequality,
    Equality,
    Conditional,
}

/// A conjunction of atomic conditions deciding whether a conditional filter
/// applies. With `negated`, the filter applies when the conjunction fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Guard {
    pub atoms: Vec<(Polynomial, Relation)>,
    pub negated: bool,
}

impl Guard {
    fn applies(&self, at: &Point) -> Result<bool> {
        let mut all = true;
        for (expr, rel) in &self.atoms {
            if !rel.holds(&at.eval(expr)?) {
                all = false;
                break;
            }
        }
        Ok(all != self.negated)
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conj = self
            .atoms
            .iter()
            .map(|(e, r)| format!("{e} {}", r.symbol()))
            .collect::<Vec<_>>()
            .join(" and ");
        if self.negated {
            write!(f, "not ({conj})")
        } else {
            write!(f, "{conj}")
        }
    }
}

/// Outcome of evaluating a filter at a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A conditional filter whose guard does not apply.
    Vacuous,
}

impl Verdict {
    pub fn excludes(self) -> bool {
        self == Verdict::Fail
    }
}

/// An integer point (λ, g, ν).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub lambda: i64,
    pub genus: i64,
    pub nu: Option<i64>,
}

impl Point {
    pub fn new(lambda: i64, genus: i64, nu: Option<i64>) -> Self {
        Point { lambda, genus, nu }
    }

    pub fn eval(&self, p: &Polynomial) -> Result<Rational> {
        p.eval_point(self.lambda, self.genus, self.nu)
    }
}

/// A named exact predicate `expr ⋈ 0` over tuples (λ, g[, ν]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Filter {
    pub name: String,
    pub expr: Polynomial,
    pub relation: Relation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<Guard>,
    #[serde(default)]
    pub provenance: String,
}

impl Filter {
    pub fn new(name: impl Into<String>, expr: Polynomial, relation: Relation, provenance: impl Into<String>) -> Self {
        Filter {
            name: name.into(),
            expr,
            relation,
            guard: None,
            provenance: provenance.into(),
        }
    }

    pub fn non_negative(name: impl Into<String>, expr: Polynomial, provenance: impl Into<String>) -> Self {
        Filter::new(name, expr, Relation::NonNegative, provenance)
    }

    pub fn equality(name: impl Into<String>, expr: Polynomial, provenance: impl Into<String>) -> Self {
        Filter::new(name, expr, Relation::Zero, provenance)
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = Some(guard);
        self
    }

    pub fn kind(&self) -> FilterKind {
        if self.guard.is_some() {
            return FilterKind::Conditional;
        }
        match self.relation {
            Relation::NonNegative => FilterKind::Inequality,
            Relation::Positive => FilterKind::StrictInequality,
            Relation::Zero => FilterKind::Equality,
        }
    }

    /// Whether the filter (including its guard) mentions ν.
    pub fn uses_nu(&self) -> bool {
        use crate::exactq::Var;
        self.expr.contains_var(Var::Nu)
            || self
                .guard
                .as_ref()
                .is_some_and(|g| g.atoms.iter().any(|(e, _)| e.contains_var(Var::Nu)))
    }

    pub fn evaluate(&self, at: &Point) -> Result<Verdict> {
        if let Some(guard) = &self.guard {
            if !guard.applies(at)? {
                return Ok(Verdict::Vacuous);
            }
        }
        let value = at.eval(&self.expr)?;
        Ok(if self.relation.holds(&value) {
            Verdict::Pass
        } else {
            Verdict::Fail
        })
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {}", self.name, self.expr, self.relation.symbol())?;
        if let Some(g) = &self.guard {
            write!(f, " unless {g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn relations() {
        let f = Filter::non_negative("f", p("7lambda - 2g - 54"), "");
        assert_eq!(f.evaluate(&Point::new(18, 28, None)).unwrap(), Verdict::Pass);
        assert_eq!(f.evaluate(&Point::new(18, 40, None)).unwrap(), Verdict::Fail);
        let strict = Filter::new("s", p("lambda - 3"), Relation::Positive, "");
        assert_eq!(strict.evaluate(&Point::new(3, 0, None)).unwrap(), Verdict::Fail);
        let eq = Filter::equality("e", p("lambda - g"), "");
        assert_eq!(eq.evaluate(&Point::new(3, 3, None)).unwrap(), Verdict::Pass);
        assert_eq!(eq.kind(), FilterKind::Equality);
    }

    #[test]
    fn guard_makes_filter_vacuous() {
        let f = Filter::non_negative("v", p("-1"), "").with_guard(Guard {
            atoms: vec![(p("lambda - 5"), Relation::Zero)],
            negated: true,
        });
        assert_eq!(f.kind(), FilterKind::Conditional);
        assert_eq!(f.evaluate(&Point::new(5, 0, None)).unwrap(), Verdict::Vacuous);
        assert_eq!(f.evaluate(&Point::new(6, 0, None)).unwrap(), Verdict::Fail);
    }

    #[test]
    fn nu_filters_need_nu() {
        let f = Filter::non_negative("n", p("lambda - nu"), "");
        assert!(f.uses_nu());
        assert!(f.evaluate(&Point::new(3, 0, None)).is_err());
        assert_eq!(f.evaluate(&Point::new(3, 0, Some(3))).unwrap(), Verdict::Pass);
    }
}
