use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hilbert::HilbertPolynomial;
use crate::error::{Error, Result};
use crate::exactq::{Assignment, Polynomial};

/// Names of the intersection numbers and Euler characteristics a table can hold.
///
/// Chern and Segre entries are degrees against the complementary power of H:
/// `C2` is c₂(T)·H, `NormalSegre(2)` is s₂(N)·H^{r−2}, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// H^r, the degree.
    Degree,
    /// K·H^{r−1}.
    KH,
    /// K²·H^{r−2} (threefolds only).
    K2H,
    /// K³ (threefolds only).
    K3,
    /// c_i(T)·H^{r−i}.
    TangentChern(u8),
    /// s_i(N)·H^{r−i}.
    NormalSegre(u8),
    /// c_i(N)·H^{r−i}.
    NormalChern(u8),
    /// s_i(T)·H^{r−i}.
    TangentSegre(u8),
    /// K_S·H_S of a smooth hyperplane-section surface.
    SectionKH,
    /// K_S².
    SectionK2,
    /// c₂(T_S).
    SectionC2,
    /// χ(O).
    Chi0,
    /// χ(O(H)).
    ChiH,
    /// χ(O(−H)).
    ChiMinusH,
    /// χ(O(−2H)).
    ChiMinus2H,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Degree => f.write_str("deg"),
            Symbol::KH => f.write_str("K.H^(r-1)"),
            Symbol::K2H => f.write_str("K^2.H"),
            Symbol::K3 => f.write_str("K^3"),
            Symbol::TangentChern(i) => write!(f, "c{i}(T)"),
            Symbol::NormalSegre(i) => write!(f, "s{i}(N)"),
            Symbol::NormalChern(i) => write!(f, "c{i}(N)"),
            Symbol::TangentSegre(i) => write!(f, "s{i}(T)"),
            Symbol::SectionKH => f.write_str("K_S.H_S"),
            Symbol::SectionK2 => f.write_str("K_S^2"),
            Symbol::SectionC2 => f.write_str("c2(T_S)"),
            Symbol::Chi0 => f.write_str("chi(O)"),
            Symbol::ChiH => f.write_str("chi(O(H))"),
            Symbol::ChiMinusH => f.write_str("chi(O(-H))"),
            Symbol::ChiMinus2H => f.write_str("chi(O(-2H))"),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indexed =
            |prefix: &str, suffix: &str| -> Option<u8> { s.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok() };
        let sym = match s {
            "deg" => Symbol::Degree,
            "K.H^(r-1)" => Symbol::KH,
            "K^2.H" => Symbol::K2H,
            "K^3" => Symbol::K3,
            "K_S.H_S" => Symbol::SectionKH,
            "K_S^2" => Symbol::SectionK2,
            "c2(T_S)" => Symbol::SectionC2,
            "chi(O)" => Symbol::Chi0,
            "chi(O(H))" => Symbol::ChiH,
            "chi(O(-H))" => Symbol::ChiMinusH,
            "chi(O(-2H))" => Symbol::ChiMinus2H,
            _ => {
                if let Some(i) = indexed("c", "(T)") {
                    Symbol::TangentChern(i)
                } else if let Some(i) = indexed("s", "(N)") {
                    Symbol::NormalSegre(i)
                } else if let Some(i) = indexed("c", "(N)") {
                    Symbol::NormalChern(i)
                } else if let Some(i) = indexed("s", "(T)") {
                    Symbol::TangentSegre(i)
                } else {
                    return Err(Error::Parse(format!("unknown invariant symbol {s:?}")));
                }
            }
        };
        Ok(sym)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Solved invariants of an r-dimensional base locus as polynomials in λ, g
/// (and ν for reductions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantTable {
    dim: u8,
    entries: BTreeMap<Symbol, Polynomial>,
    hilbert: HilbertPolynomial,
    /// For a fourfold: the table of its general hyperplane section.
    section: Option<Box<InvariantTable>>,
}

impl InvariantTable {
    pub(crate) fn new(dim: u8, hilbert: HilbertPolynomial) -> Self {
        let chi = hilbert.chi_values();
        let mut entries = BTreeMap::new();
        entries.insert(Symbol::Chi0, chi.chi0);
        entries.insert(Symbol::ChiH, chi.chi_h);
        entries.insert(Symbol::ChiMinusH, chi.chi_minus_h);
        entries.insert(Symbol::ChiMinus2H, chi.chi_minus_2h);
        InvariantTable {
            dim,
            entries,
            hilbert,
            section: None,
        }
    }

    pub(crate) fn insert(&mut self, sym: Symbol, value: Polynomial) {
        self.entries.insert(sym, value);
    }

    pub(crate) fn with_section(mut self, section: InvariantTable) -> Self {
        self.section = Some(Box::new(section));
        self
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn hilbert(&self) -> &HilbertPolynomial {
        &self.hilbert
    }

    pub fn section(&self) -> Option<&InvariantTable> {
        self.section.as_deref()
    }

    /// The threefold the numerical filters act on: the table itself, or the
    /// hyperplane section of a fourfold.
    pub fn threefold(&self) -> Result<&InvariantTable> {
        match self.dim {
            3 => Ok(self),
            _ => self
                .section()
                .filter(|s| s.dim == 3)
                .ok_or_else(|| Error::MissingInvariant("threefold section table".into())),
        }
    }

    pub fn get(&self, sym: Symbol) -> Result<&Polynomial> {
        self.entries
            .get(&sym)
            .ok_or_else(|| Error::MissingInvariant(format!("{sym} in {}-dimensional table", self.dim)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Symbol, &Polynomial)> {
        self.entries.iter().map(|(s, p)| (*s, p))
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        self.entries.contains_key(&sym)
    }

    /// Substitute into every entry, the Hilbert polynomial and the section table.
    pub fn evaluate(&self, a: &Assignment) -> InvariantTable {
        let coeffs = self.hilbert.basis_coeffs().iter().map(|c| c.evaluate(a)).collect();
        InvariantTable {
            dim: self.dim,
            entries: self.entries.iter().map(|(s, p)| (*s, p.evaluate(a))).collect(),
            hilbert: HilbertPolynomial::from_basis(coeffs, self.hilbert.constraints().to_vec()),
            section: self.section.as_ref().map(|s| Box::new(s.evaluate(a))),
        }
    }

    /// Entries keyed by display name.
    pub fn named_entries(&self) -> BTreeMap<String, Polynomial> {
        self.entries.iter().map(|(s, p)| (s.to_string(), p.clone())).collect()
    }
}
