use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;
use crate::error::Error;

/// The global symbols every invariant is expressed in, listed in monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// Degree of the base locus.
    Lambda,
    /// Sectional genus.
    Genus,
    /// Number of points blown up by the reduction.
    Nu,
    /// Twist variable of Hilbert polynomials.
    T,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Lambda, Var::Genus, Var::Nu, Var::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Lambda => "lambda",
            Var::Genus => "g",
            Var::Nu => "nu",
            Var::T => "t",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "lambda" | "λ" | "l" => Some(Var::Lambda),
            "g" => Some(Var::Genus),
            "nu" | "ν" => Some(Var::Nu),
            "t" => Some(Var::T),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over `Var::ALL`. The derived ordering is lexicographic in (λ, g, ν, t).
pub type Monomial = [u32; 4];

const ONE_MONOMIAL: Monomial = [0; 4];

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Values for some of the variables; unassigned variables stay symbolic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Var, Polynomial>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: impl Into<Polynomial>) -> Self {
        self.values.insert(var, value.into());
        self
    }

    pub fn set(&mut self, var: Var, value: impl Into<Polynomial>) {
        self.values.insert(var, value.into());
    }

    pub fn get(&self, var: Var) -> Option<&Polynomial> {
        self.values.get(&var)
    }

    /// Integer point (λ, g) or (λ, g, ν).
    pub fn point(lambda: i64, genus: i64, nu: Option<i64>) -> Self {
        let a = Self::new().with(Var::Lambda, lambda).with(Var::Genus, genus);
        match nu {
            Some(nu) => a.with(Var::Nu, nu),
            None => a,
        }
    }
}

/// Sparse multivariate polynomial over ℚ in the global variables.
///
/// Terms are kept in a canonical map without zero coefficients, so derived
/// equality is semantic equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ONE_MONOMIAL, c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Rational::one(), Self::unit_exponent(v, 1))
    }

    pub fn monomial(coeff: Rational, exps: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Polynomial { terms }
    }

    fn unit_exponent(v: Var, e: u32) -> Monomial {
        let mut m = ONE_MONOMIAL;
        m[v.index()] = e;
        m
    }

    /// Build from (coefficient, exponents) pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Monomial)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == ONE_MONOMIAL)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.coefficient(&ONE_MONOMIAL))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Variables that actually occur, in global order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m[v.index()] > 0))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m[v.index()] > 0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v.index()]).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: Var, k: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m[v.index()] == k {
                let mut rest = *m;
                rest[v.index()] = 0;
                out.add_term(rest, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Substitution homomorphism. Variables missing from `a` are left alone.
    pub fn evaluate(&self, a: &Assignment) -> Polynomial {
        let mut cache: BTreeMap<(Var, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::zero();
            let mut kept = ONE_MONOMIAL;
            let mut factor = Polynomial::constant(c.clone());
            for v in Var::ALL {
                let e = m[v.index()];
                if e == 0 {
                    continue;
                }
                match a.get(v) {
                    Some(val) => {
                        let pw = cache.entry((v, e)).or_insert_with(|| val.pow(e));
                        factor = &factor * &*pw;
                    }
                    None => kept[v.index()] = e,
                }
            }
            for (fm, fc) in factor.terms {
                term.add_term(mono_mul(&fm, &kept), &fc);
            }
            out = out + term;
        }
        out
    }

    /// Numeric value at an assignment covering every occurring variable.
    pub fn eval_rational(&self, values: &[(Var, Rational)]) -> Result<Rational, Error> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for v in Var::ALL {
                let e = m[v.index()];
                if e == 0 {
                    continue;
                }
                let x = values
                    .iter()
                    .find(|(w, _)| *w == v)
                    .map(|(_, x)| x)
                    .ok_or_else(|| Error::UnassignedVariable(v.name().to_string()))?;
                term *= &x.pow(e);
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Value at integer (λ, g, ν); ν may be absent when it does not occur.
    pub fn eval_point(&self, lambda: i64, genus: i64, nu: Option<i64>) -> Result<Rational, Error> {
        let mut values = vec![
            (Var::Lambda, Rational::from(lambda)),
            (Var::Genus, Rational::from(genus)),
        ];
        if let Some(nu) = nu {
            values.push((Var::Nu, Rational::from(nu)));
        }
        self.eval_rational(&values)
    }

    /// Polynomial divided by the positive gcd of its (integer) coefficients.
    /// Polynomials with non-integer coefficients are returned unchanged.
    pub fn primitive_part(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() || self.terms.values().any(|c| !c.is_integer()) {
            return self.clone();
        }
        let g = self
            .terms
            .values()
            .fold(num_bigint::BigInt::from(0), |g, c| g.gcd(c.numer()));
        self.scale(&Rational::from(g).recip().expect("nonzero gcd"))
    }
}

impl From<i64> for Polynomial {
    fn from(v: i64) -> Self {
        Polynomial::constant(v)
    }
}

impl From<i32> for Polynomial {
    fn from(v: i32) -> Self {
        Polynomial::constant(v as i64)
    }
}

impl From<Rational> for Polynomial {
    fn from(v: Rational) -> Self {
        Polynomial::constant(v)
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Normal form: descending lexicographic terms, explicit signs, `^` for powers.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for v in Var::ALL {
                match m[v.index()] {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// C(t + shift, k) as a polynomial in `t`.
pub fn binomial_poly(shift: i64, k: i64) -> Result<Polynomial, Error> {
    if k < 0 {
        return Err(Error::Domain(format!("binomial_poly: negative k = {k}")));
    }
    let t = Polynomial::var(Var::T);
    let mut acc = Polynomial::one();
    let mut fact = Rational::one();
    for i in 0..k {
        acc = &acc * &(&t + &Polynomial::constant(shift - i));
        fact *= &Rational::from(i + 1);
    }
    Ok(acc.scale(&fact.recip()?))
}

/// Integer binomial coefficient C(n, k); zero outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}
