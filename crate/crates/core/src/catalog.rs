//! Catalogue of the known special Cremona transformations of ℙⁿ with n ≤ 7 or base locus
//! of dimension at most 3, shipped as static data, and their verification.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cremona::{multidegree_admissible, multidegree_of};
use crate::error::{Error, Result};
use crate::invariants::{solve_invariants, TransformationConfig};

const DATA: &str = include_str!("../data/known_transformations.json");

#[derive(Deserialize)]
struct RawRow {
    row: String,
    r: i64,
    n: i64,
    degrees: Vec<i64>,
    description: String,
    #[serde(default)]
    lambda: Option<i64>,
    #[serde(default)]
    genus: Option<i64>,
}

/// One row of the table. `multidegree` is the full sequence deg₀..deg_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownTransformation {
    pub row: String,
    pub r: i64,
    pub n: i64,
    pub multidegree: Vec<i64>,
    pub description: String,
    pub lambda: Option<i64>,
    pub genus: Option<i64>,
}

impl KnownTransformation {
    /// Degrees of the defining forms of the map and of its inverse.
    pub fn delta(&self) -> (i64, i64) {
        let n = self.n as usize;
        (self.multidegree[1], self.multidegree[n - 1])
    }

    pub fn config(&self) -> Result<TransformationConfig> {
        let (d1, d2) = self.delta();
        TransformationConfig::new(self.n, d1, d2, self.r)
    }
}

fn parse(src: &str) -> Result<Vec<KnownTransformation>> {
    let raw: Vec<RawRow> = serde_json::from_str(src).map_err(|e| Error::Parse(format!("catalog data: {e}")))?;
    raw.into_iter()
        .map(|r| {
            if r.degrees.len() as i64 != r.n - 1 {
                return Err(Error::Parse(format!(
                    "row {}: {} inner degrees for n = {}",
                    r.row,
                    r.degrees.len(),
                    r.n
                )));
            }
            let mut multidegree = Vec::with_capacity(r.degrees.len() + 2);
            multidegree.push(1);
            multidegree.extend(r.degrees);
            multidegree.push(1);
            Ok(KnownTransformation {
                row: r.row,
                r: r.r,
                n: r.n,
                multidegree,
                description: r.description,
                lambda: r.lambda,
                genus: r.genus,
            })
        })
        .collect()
}

/// The thirteen known transformations, in order.
pub fn known_transformations() -> &'static [KnownTransformation] {
    static ROWS: OnceLock<Vec<KnownTransformation>> = OnceLock::new();
    ROWS.get_or_init(|| parse(DATA).expect("embedded catalog data is well formed"))
}

/// Verification outcome for one row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub row: String,
    pub multidegree: Vec<i64>,
    /// Violated multidegree restrictions, rendered.
    pub violations: Vec<String>,
    /// Multidegree recomputed from (λ, g), for rows where these are known.
    pub recomputed: Option<Vec<i64>>,
    pub pass: bool,
}

/// Check one row: admissibility always, and recomputation through the
/// invariant engine when (λ, g) is recorded.
pub fn verify_row(row: &KnownTransformation) -> Result<RowCheck> {
    let violations: Vec<String> = multidegree_admissible(&row.multidegree)
        .iter()
        .map(|v| v.to_string())
        .collect();
    let recomputed = match (row.lambda, row.genus) {
        (Some(lambda), Some(genus)) => {
            let cfg = row.config()?;
            let table = solve_invariants(&cfg)?;
            Some(multidegree_of(&cfg, &table)?.at(lambda, genus, None)?)
        }
        _ => None,
    };
    let pass = violations.is_empty() && recomputed.as_ref().is_none_or(|m| m == &row.multidegree);
    Ok(RowCheck {
        row: row.row.clone(),
        multidegree: row.multidegree.clone(),
        violations,
        recomputed,
        pass,
    })
}

pub fn verify_table() -> Result<Vec<RowCheck>> {
    known_transformations().iter().map(verify_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_rows_with_full_sequences() {
        let rows = known_transformations();
        assert_eq!(rows.len(), 13);
        assert_eq!(rows[0].multidegree, vec![1, 3, 3, 1]);
        assert_eq!(rows[12].multidegree, vec![1, 3, 9, 15, 15, 9, 3, 1]);
        assert_eq!(rows[10].delta(), (3, 5));
    }

    #[test]
    fn every_row_verifies() {
        let checks = verify_table().unwrap();
        for c in &checks {
            assert!(c.pass, "row {} failed: {:?}", c.row, c);
        }
        let recomputed: Vec<&str> = checks
            .iter()
            .filter(|c| c.recomputed.is_some())
            .map(|c| c.row.as_str())
            .collect();
        assert_eq!(recomputed, vec!["XI", "XII", "XIII"]);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(parse(r#"[{"row":"Z","r":1,"n":4,"degrees":[2],"description":""}]"#).is_err());
    }
}
