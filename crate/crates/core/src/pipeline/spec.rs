use serde::{Deserialize, Serialize};

use crate::cremona::DEFAULT_TYPE_BOUND;
use crate::error::{Error, Result};
use crate::filters::{Relation, DEFAULT_D2_THRESHOLD};
use crate::invariants::TransformationConfig;

/// Upper bound on the sectional genus for each degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum GenusRule {
    /// Castelnuovo's bound for the curve section.
    #[default]
    Castelnuovo,
    /// A fixed maximum.
    Fixed { max: i64 },
}

/// The initial (λ, g) grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default = "default_lambda_min")]
    pub lambda_min: i64,
    /// Defaults to δ₁^codim.
    #[serde(default)]
    pub lambda_max: Option<i64>,
    #[serde(default)]
    pub genus: GenusRule,
}

fn default_lambda_min() -> i64 {
    3
}

impl Default for DomainSpec {
    fn default() -> Self {
        DomainSpec {
            lambda_min: default_lambda_min(),
            lambda_max: None,
            genus: GenusRule::Castelnuovo,
        }
    }
}

/// How pairs (λ, g) are lifted to triples (λ, g, ν).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuRule {
    /// ν from 0 up to the least upper bound implied by the named filters,
    /// each linear in ν with negative ν coefficient.
    Range { bounds: Vec<String> },
    /// ν solved from the first filter of the named equality system, which
    /// must be linear in ν; kept when it is a non-negative integer.
    Solve { equation: String },
}

/// Post-hoc checks attached to a branch's final tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Annotation {
    /// All pluridegrees equal: K′ is numerically trivial.
    NumericallyTrivialCanonical,
    /// Conic bundle whose base is (ℙ², O(1)): h⁰(K′+H′) = 3 and d₂ = 2.
    ConicBundleBase,
    /// Del Pezzo fibration over a curve C: g(C) = 1 − χ(O),
    /// deg H_C = h⁰(K′+H′) − 1 + g(C), fibre degree d₁ / deg H_C.
    DelPezzoFibration,
}

/// A stage in a pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StageSpec {
    /// Keep the tuples passing every named filter.
    Sieve { name: String, filters: Vec<String> },
    /// Remove the tuples satisfying every filter of any named system
    /// (typically equality systems describing special cases).
    CaseCheck {
        name: String,
        systems: Vec<String>,
        #[serde(default)]
        expect_empty: bool,
    },
    /// Turn pairs into triples.
    LiftNu { name: String, rule: NuRule },
    /// An alternative analysis of the current tuples; the main flow continues
    /// with the same tuples afterwards.
    Branch(BranchSpec),
}

impl StageSpec {
    pub fn name(&self) -> &str {
        match self {
            StageSpec::Sieve { name, .. } | StageSpec::CaseCheck { name, .. } | StageSpec::LiftNu { name, .. } => name,
            StageSpec::Branch(b) => &b.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub name: String,
    pub label: String,
    #[serde(default)]
    pub expect_empty: bool,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
    pub stages: Vec<StageSpec>,
}

/// A filter defined in the pipeline file itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomFilter {
    pub name: String,
    pub expr: String,
    #[serde(default = "default_relation")]
    pub relation: Relation,
}

fn default_relation() -> Relation {
    Relation::NonNegative
}

/// Require the configuration to be among the admissible types found by the
/// Diophantine search with these constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeCheckSpec {
    #[serde(default)]
    pub n: Option<i64>,
    #[serde(default)]
    pub r: Option<i64>,
    #[serde(default = "default_type_bound")]
    pub bound: i64,
}

fn default_type_bound() -> i64 {
    DEFAULT_TYPE_BOUND
}

/// A complete pipeline: configuration, initial domain and stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    pub name: String,
    pub config: TransformationConfig,
    #[serde(default)]
    pub domain: DomainSpec,
    #[serde(default = "default_d2_threshold")]
    pub d2_threshold: i64,
    #[serde(default)]
    pub type_check: Option<TypeCheckSpec>,
    #[serde(default)]
    pub filters: Vec<CustomFilter>,
    pub stages: Vec<StageSpec>,
}

fn default_d2_threshold() -> i64 {
    DEFAULT_D2_THRESHOLD
}

impl PipelineSpec {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::InvalidConfig(format!("pipeline JSON: {e}")))
    }

    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::InvalidConfig(format!("pipeline TOML: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pipeline specs serialize")
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

fn sieve(name: &str, filters: &[&str]) -> StageSpec {
    StageSpec::Sieve {
        name: s(name),
        filters: filters.iter().map(|f| s(f)).collect(),
    }
}

fn reduction_existence() -> StageSpec {
    StageSpec::CaseCheck {
        name: s("reduction-existence"),
        systems: vec![s("base-case:scroll-over-curve"), s("base-case:pre-reduction")],
        expect_empty: true,
    }
}

fn solve_nu(case: &str) -> StageSpec {
    StageSpec::LiftNu {
        name: s("solve-nu"),
        rule: NuRule::Solve {
            equation: format!("case:{case}"),
        },
    }
}

fn equality_branch(
    case: &str,
    label: &str,
    extra: &[StageSpec],
    expect_empty: bool,
    annotations: &[Annotation],
) -> StageSpec {
    let mut stages = vec![solve_nu(case), sieve(case, &[&format!("case:{case}")])];
    stages.extend_from_slice(extra);
    stages.push(sieve("lebarz", &["lebarz"]));
    StageSpec::Branch(BranchSpec {
        name: s(case),
        label: s(label),
        expect_empty,
        annotations: annotations.to_vec(),
        stages,
    })
}

/// Cubo-quintic transformations of ℙ⁶: threefold base locus.
fn cubic_p6() -> PipelineSpec {
    PipelineSpec {
        name: s("cubic-p6"),
        config: TransformationConfig::cubic_p6(),
        domain: DomainSpec::default(),
        d2_threshold: DEFAULT_D2_THRESHOLD,
        type_check: None,
        filters: Vec::new(),
        stages: vec![
            sieve("livorni-sommese", &["liso"]),
            sieve("cremona-degrees", &["cremona"]),
            reduction_existence(),
            StageSpec::Branch(BranchSpec {
                name: s("log-general"),
                label: s("log-general type"),
                expect_empty: false,
                annotations: vec![Annotation::NumericallyTrivialCanonical],
                stages: vec![
                    StageSpec::LiftNu {
                        name: s("nu-range"),
                        rule: NuRule::Range {
                            bounds: vec![s("log-general.i.d1")],
                        },
                    },
                    sieve("hodge", &["log-general.ii.a"]),
                    sieve("log-general", &["log-general"]),
                    sieve("lebarz", &["lebarz"]),
                ],
            }),
            equality_branch("veronese-fibration", "Veronese fibration", &[], true, &[]),
            equality_branch("mukai", "Mukai variety", &[], true, &[]),
            equality_branch("del-pezzo-fibration", "del Pezzo fibration", &[], true, &[]),
            equality_branch(
                "conic-bundle",
                "conic bundle",
                &[sieve("d2-positive", &["d2-positive"])],
                false,
                &[Annotation::ConicBundleBase],
            ),
        ],
    }
}

/// Cubo-cubic transformations of ℙ⁷: fourfold base locus, studied through
/// its hyperplane section.
fn cubo_cubic_p7() -> PipelineSpec {
    PipelineSpec {
        name: s("cubo-cubic-p7"),
        config: TransformationConfig::cubo_cubic_p7(),
        domain: DomainSpec::default(),
        d2_threshold: DEFAULT_D2_THRESHOLD,
        type_check: Some(TypeCheckSpec {
            n: Some(7),
            r: None,
            bound: DEFAULT_TYPE_BOUND,
        }),
        filters: Vec::new(),
        stages: vec![
            sieve("livorni-sommese", &["liso"]),
            sieve("cremona-degrees", &["cremona"]),
            reduction_existence(),
            StageSpec::LiftNu {
                name: s("nu-range"),
                rule: NuRule::Range {
                    bounds: vec![s("lebarz")],
                },
            },
            StageSpec::Branch(BranchSpec {
                name: s("log-general"),
                label: s("log-general type"),
                expect_empty: true,
                annotations: Vec::new(),
                stages: vec![
                    sieve("hodge", &["log-general.ii.a"]),
                    sieve("log-general", &["log-general"]),
                    sieve("hodge-propagation", &["hodge-propagation"]),
                ],
            }),
            StageSpec::Branch(BranchSpec {
                name: s("del-pezzo-fibration"),
                label: s("del Pezzo fibration"),
                expect_empty: false,
                annotations: vec![Annotation::DelPezzoFibration],
                stages: vec![sieve("del-pezzo-fibration", &["case:del-pezzo-fibration"])],
            }),
            StageSpec::Branch(BranchSpec {
                name: s("conic-bundle"),
                label: s("conic bundle"),
                expect_empty: true,
                annotations: Vec::new(),
                stages: vec![
                    sieve("conic-bundle", &["case:conic-bundle"]),
                    sieve("d2-positive", &["d2-positive"]),
                ],
            }),
        ],
    }
}

pub fn builtin_names() -> [&'static str; 2] {
    ["cubic-p6", "cubo-cubic-p7"]
}

/// The hard-wired classification pipelines.
pub fn builtin_pipeline(name: &str) -> Result<PipelineSpec> {
    match name {
        "cubic-p6" => Ok(cubic_p6()),
        "cubo-cubic-p7" => Ok(cubo_cubic_p7()),
        other => Err(Error::UnknownPipeline(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip_through_json_and_toml() {
        for name in builtin_names() {
            let spec = builtin_pipeline(name).unwrap();
            let json = spec.to_json();
            assert_eq!(PipelineSpec::from_json(&json).unwrap(), spec);
            let toml_src = toml::to_string(&spec).unwrap();
            assert_eq!(PipelineSpec::from_toml(&toml_src).unwrap(), spec);
        }
        assert!(matches!(builtin_pipeline("p9"), Err(Error::UnknownPipeline(_))));
    }

    #[test]
    fn minimal_spec_uses_defaults() {
        let spec = PipelineSpec::from_json(
            r#"{"name":"t","config":{"n":6,"delta1":3,"delta2":5,"r":3},
                "stages":[{"kind":"sieve","name":"all","filters":["liso"]}]}"#,
        )
        .unwrap();
        assert_eq!(spec.domain, DomainSpec::default());
        assert_eq!(spec.d2_threshold, 3);
        assert!(PipelineSpec::from_json(r#"{"name":"t"}"#).is_err());
    }
}
