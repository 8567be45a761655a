use serde::{Deserialize, Serialize};

use crate::cremona::{dimension_formula_holds, inverse_base_dimension};
use crate::error::{Error, Result};

/// Which invariant engine applies to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Threefold base locus in ℙ⁶.
    ThreefoldInP6,
    /// Fourfold base locus in ℙ⁷, studied through its hyperplane section.
    FourfoldInP7,
}

/// Ambient data of a special Cremona transformation of type (δ₁, δ₂) of ℙⁿ
/// whose base locus has dimension `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct TransformationConfig {
    n: i64,
    delta1: i64,
    delta2: i64,
    r: i64,
    inverse_r: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: i64,
    delta1: i64,
    delta2: i64,
    r: i64,
}

impl TryFrom<RawConfig> for TransformationConfig {
    type Error = Error;
    fn try_from(raw: RawConfig) -> Result<Self> {
        TransformationConfig::new(raw.n, raw.delta1, raw.delta2, raw.r)
    }
}

impl From<TransformationConfig> for RawConfig {
    fn from(c: TransformationConfig) -> Self {
        RawConfig {
            n: c.n,
            delta1: c.delta1,
            delta2: c.delta2,
            r: c.r,
        }
    }
}

impl TransformationConfig {
    pub fn new(n: i64, delta1: i64, delta2: i64, r: i64) -> Result<Self> {
        let bad = |why: &str| {
            Err(Error::InvalidConfig(format!(
                "(n, δ1, δ2, r) = ({n}, {delta1}, {delta2}, {r}): {why}"
            )))
        };
        if !(2..=n).contains(&delta1) || !(2..=n).contains(&delta2) {
            return bad("need 2 ≤ δ1, δ2 ≤ n");
        }
        if r < 1 || r > n - 2 {
            return bad("need 1 ≤ r ≤ n − 2");
        }
        if n >= 6 && (delta1 > n - 1 || r > n - 3) {
            return bad("for n ≥ 6 need δ1 ≤ n − 1 and r ≤ n − 3");
        }
        if !dimension_formula_holds(n, delta1, delta2, r) {
            return bad("dimension formula fails");
        }
        let Some(inverse_r) = inverse_base_dimension(n, delta1, delta2) else {
            return bad("no integral dimension for the inverse base locus");
        };
        if inverse_r < 1 || inverse_r > n - 2 {
            return bad("inverse base locus dimension out of range");
        }
        Ok(TransformationConfig {
            n,
            delta1,
            delta2,
            r,
            inverse_r,
        })
    }

    /// Cubo-quintic transformations of ℙ⁶ with threefold base locus.
    pub fn cubic_p6() -> Self {
        Self::new(6, 3, 5, 3).expect("valid builtin")
    }

    /// Cubo-cubic transformations of ℙ⁷ with fourfold base locus.
    pub fn cubo_cubic_p7() -> Self {
        Self::new(7, 3, 3, 4).expect("valid builtin")
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn delta1(&self) -> i64 {
        self.delta1
    }

    pub fn delta2(&self) -> i64 {
        self.delta2
    }

    /// Dimension of the base locus.
    pub fn r(&self) -> i64 {
        self.r
    }

    /// Dimension of the base locus of the inverse.
    pub fn inverse_r(&self) -> i64 {
        self.inverse_r
    }

    pub fn codim(&self) -> i64 {
        self.n - self.r
    }

    /// Upper bound δ₁^codim on the degree of a base locus cut out by forms of degree δ₁.
    pub fn degree_bound(&self) -> i64 {
        self.delta1.pow(self.codim() as u32)
    }

    /// Ambient dimension of a general curve section.
    pub fn curve_ambient_dim(&self) -> i64 {
        self.codim() + 1
    }

    pub fn mode(&self) -> Result<Mode> {
        match (self.n, self.r) {
            (6, 3) => Ok(Mode::ThreefoldInP6),
            (7, 4) => Ok(Mode::FourfoldInP7),
            _ => Err(Error::InvalidConfig(format!(
                "no invariant engine for base loci of dimension {} in P^{}",
                self.r, self.n
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_derive_constants() {
        let p6 = TransformationConfig::cubic_p6();
        assert_eq!((p6.codim(), p6.degree_bound(), p6.inverse_r()), (3, 27, 4));
        assert_eq!(p6.mode().unwrap(), Mode::ThreefoldInP6);
        let p7 = TransformationConfig::cubo_cubic_p7();
        assert_eq!((p7.codim(), p7.degree_bound(), p7.inverse_r()), (3, 27, 4));
        assert_eq!(p7.curve_ambient_dim(), 4);
    }

    #[test]
    fn rejects_types_off_the_dimension_formula() {
        assert!(TransformationConfig::new(6, 3, 4, 3).is_err());
        assert!(TransformationConfig::new(6, 6, 6, 3).is_err());
        assert!(TransformationConfig::new(5, 5, 5, 3).unwrap().mode().is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: TransformationConfig = serde_json::from_str(r#"{"n":6,"delta1":3,"delta2":5,"r":3}"#).unwrap();
        assert_eq!(ok, TransformationConfig::cubic_p6());
        assert!(serde_json::from_str::<TransformationConfig>(r#"{"n":6,"delta1":3,"delta2":3,"r":3}"#).is_err());
    }
}
