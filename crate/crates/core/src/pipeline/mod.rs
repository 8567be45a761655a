//! Staged enumeration of candidate tuples (λ, g[, ν]) with a complete
//! exclusion ledger, and the built-in classification pipelines.

mod bank;
mod report;
mod run;
mod spec;

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use bank::FilterBank;
pub use report::{BranchReport, ClassificationReport, Finalist, ReportMeta};
pub use run::{run_pipeline, run_pipeline_with};
pub use spec::{
    builtin_names, builtin_pipeline, Annotation, BranchSpec, CustomFilter, DomainSpec, GenusRule, NuRule, PipelineSpec,
    StageSpec, TypeCheckSpec,
};

use crate::error::Result;
use crate::filters::{Filter, Point};

/// A tuple (λ, g) or (λ, g, ν). Ordered lexicographically; serialized as a
/// JSON array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub lambda: i64,
    pub genus: i64,
    pub nu: Option<i64>,
}

impl Candidate {
    pub fn pair(lambda: i64, genus: i64) -> Self {
        Candidate {
            lambda,
            genus,
            nu: None,
        }
    }

    pub fn triple(lambda: i64, genus: i64, nu: i64) -> Self {
        Candidate {
            lambda,
            genus,
            nu: Some(nu),
        }
    }

    pub fn point(&self) -> Point {
        Point::new(self.lambda, self.genus, self.nu)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.nu {
            Some(nu) => write!(f, "({}, {}, {nu})", self.lambda, self.genus),
            None => write!(f, "({}, {})", self.lambda, self.genus),
        }
    }
}

impl Serialize for Candidate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let len = if self.nu.is_some() { 3 } else { 2 };
        let mut seq = serializer.serialize_seq(Some(len))?;
        seq.serialize_element(&self.lambda)?;
        seq.serialize_element(&self.genus)?;
        if let Some(nu) = self.nu {
            seq.serialize_element(&nu)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Candidate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct TupleVisitor;
        impl<'de> Visitor<'de> for TupleVisitor {
            type Value = Candidate;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array [lambda, genus] or [lambda, genus, nu]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Candidate, A::Error> {
                let lambda = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let genus = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let nu = seq.next_element()?;
                if seq.next_element::<i64>()?.is_some() {
                    return Err(de::Error::invalid_length(4, &self));
                }
                Ok(Candidate { lambda, genus, nu })
            }
        }
        deserializer.deserialize_seq(TupleVisitor)
    }
}

/// Excluded tuple together with every filter it violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub tuple: Candidate,
    pub filters: Vec<String>,
}

/// Outcome of one sieve stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub filters: Vec<String>,
    #[serde(rename = "in")]
    pub input: usize,
    #[serde(rename = "out")]
    pub output: usize,
    pub survivors: Vec<Candidate>,
    pub exclusions: Vec<Exclusion>,
}

/// How tuple evaluation is scheduled. Both schedules produce identical reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    Sequential,
    /// Data-parallel over tuples; falls back to sequential without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Schedule {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Schedule::Parallel
        } else {
            Schedule::Sequential
        }
    }
}

/// Apply `f` to every item, preserving order.
pub(crate) fn map_tuples<T, R, F>(items: &[T], schedule: Schedule, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Evaluate every filter on every tuple. A tuple survives iff no filter fails;
/// excluded tuples record all failing filters in filter order. Survivors and
/// exclusions are sorted by tuple.
pub fn enumerate(name: &str, domain: &[Candidate], filters: &[Filter], schedule: Schedule) -> Result<StageReport> {
    let verdicts = map_tuples(domain, schedule, |c| {
        let at = c.point();
        let mut failed = Vec::new();
        for f in filters {
            if f.evaluate(&at)?.excludes() {
                failed.push(f.name.clone());
            }
        }
        Ok((*c, failed))
    })?;
    let mut survivors = Vec::new();
    let mut exclusions = Vec::new();
    for (tuple, failed) in verdicts {
        if failed.is_empty() {
            survivors.push(tuple);
        } else {
            exclusions.push(Exclusion { tuple, filters: failed });
        }
    }
    survivors.sort();
    exclusions.sort_by_key(|e| e.tuple);
    Ok(StageReport {
        name: name.to_string(),
        filters: filters.iter().map(|f| f.name.clone()).collect(),
        input: domain.len(),
        output: survivors.len(),
        survivors,
        exclusions,
    })
}
