use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Candidate, StageReport};
use crate::cremona::AdmissibleType;
use crate::error::{Error, Result};
use crate::exactq::Rational;
use crate::invariants::TransformationConfig;

/// Header describing the producer; ignored by golden comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub generator: String,
    pub version: String,
}

impl Default for ReportMeta {
    fn default() -> Self {
        ReportMeta {
            generator: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Stages and final tuples of one branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub name: String,
    pub label: String,
    pub expect_empty: bool,
    pub stages: Vec<StageReport>,
    pub survivors: Vec<Candidate>,
}

/// A tuple that survived a branch, with its recomputed invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finalist {
    pub tuple: Candidate,
    pub branch: String,
    pub label: String,
    /// Pluridegrees d₀..d₃ of the reduction, when ν is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pluridegrees: Option<[i64; 4]>,
    pub multidegree: Vec<i64>,
    /// Violated multidegree restrictions (empty for a consistent finalist).
    pub violations: Vec<String>,
    /// Numbers established by the branch annotations.
    pub facts: BTreeMap<String, i64>,
    /// Entries of the threefold table at the tuple.
    pub invariants: BTreeMap<String, Rational>,
}

/// Complete, deterministic record of a pipeline run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(default)]
    pub meta: ReportMeta,
    pub pipeline: String,
    pub config: TransformationConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<AdmissibleType>,
    pub stages: Vec<StageReport>,
    pub branches: Vec<BranchReport>,
    pub finalists: Vec<Finalist>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Parse(format!("report JSON: {e}")))
    }

    /// Every stage with a path: main stages by name, branch stages as
    /// `branch/stage`.
    pub fn all_stages(&self) -> Vec<(String, &StageReport)> {
        let mut out: Vec<(String, &StageReport)> = self.stages.iter().map(|s| (s.name.clone(), s)).collect();
        for b in &self.branches {
            for s in &b.stages {
                out.push((format!("{}/{}", b.name, s.name), s));
            }
        }
        out
    }

    /// Look up a stage by index into the main stages (0 is the domain), by
    /// main stage name, or by `branch/stage` path.
    pub fn stage(&self, selector: &str) -> Option<&StageReport> {
        if let Ok(i) = selector.parse::<usize>() {
            return self.stages.get(i);
        }
        self.all_stages()
            .into_iter()
            .find(|(path, _)| path == selector)
            .map(|(_, s)| s)
    }

    pub fn branch(&self, name: &str) -> Option<&BranchReport> {
        self.branches.iter().find(|b| b.name == name)
    }

    /// Which stage excluded a tuple, and by which filters.
    pub fn history(&self, tuple: &Candidate) -> Vec<(String, Vec<String>)> {
        self.all_stages()
            .into_iter()
            .filter_map(|(path, s)| {
                s.exclusions
                    .iter()
                    .find(|e| &e.tuple == tuple)
                    .map(|e| (path, e.filters.clone()))
            })
            .collect()
    }

    /// One survivor per line, with the stage path in the first column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,lambda,genus,nu\n");
        for (path, s) in self.all_stages() {
            push_csv_rows(&mut out, &path, &s.survivors);
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "pipeline {}  (n = {}, type ({}, {}), base locus dimension {})",
            self.pipeline,
            c.n(),
            c.delta1(),
            c.delta2(),
            c.r()
        );
        for t in &self.types {
            let _ = writeln!(out, "admissible type {t}");
        }
        let _ = writeln!(out, "\n{:>3}  {:<28} {:>6} {:>6}  filters", "#", "stage", "in", "out");
        for (i, s) in self.stages.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i:>3}  {:<28} {:>6} {:>6}  {}",
                s.name,
                s.input,
                s.output,
                s.filters.join(", ")
            );
        }
        for b in &self.branches {
            let _ = writeln!(out, "\nbranch {} ({})", b.name, b.label);
            for s in &b.stages {
                let _ = writeln!(
                    out,
                    "     {:<28} {:>6} {:>6}  {}",
                    s.name,
                    s.input,
                    s.output,
                    s.filters.join(", ")
                );
            }
            let _ = writeln!(out, "     survivors: {}", join_tuples(&b.survivors));
        }
        let _ = writeln!(out, "\nfinalists");
        if self.finalists.is_empty() {
            let _ = writeln!(out, "  none");
        }
        for f in &self.finalists {
            let _ = writeln!(out, "  {}  {}: {}", f.tuple, f.branch, f.label);
            if let Some(d) = f.pluridegrees {
                let _ = writeln!(out, "      pluridegrees ({}, {}, {}, {})", d[0], d[1], d[2], d[3]);
            }
            let md: Vec<String> = f.multidegree.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "      multidegree ({})", md.join(", "));
            for (k, v) in &f.facts {
                let _ = writeln!(out, "      {k} = {v}");
            }
            for v in &f.violations {
                let _ = writeln!(out, "      violation: {v}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn join_tuples(ts: &[Candidate]) -> String {
    if ts.is_empty() {
        return "none".to_string();
    }
    ts.iter().map(Candidate::to_string).collect::<Vec<_>>().join(" ")
}

fn push_csv_rows(out: &mut String, path: &str, survivors: &[Candidate]) {
    for t in survivors {
        let nu = t.nu.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{path},{},{},{nu}", t.lambda, t.genus);
    }
}

impl StageReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,lambda,genus,nu\n");
        push_csv_rows(&mut out, &self.name, &self.survivors);
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "stage {}: {} in, {} out", self.name, self.input, self.output);
        let _ = writeln!(out, "filters: {}", self.filters.join(", "));
        let _ = writeln!(out, "survivors: {}", join_tuples(&self.survivors));
        out
    }
}
