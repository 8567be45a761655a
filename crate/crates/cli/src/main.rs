//! `cremona`: run the classification sieves, query invariants, check
//! multidegrees and verify the catalogue of known transformations.
//!
//! Exit codes: 0 success, 1 failed check or golden mismatch, 2 usage or
//! configuration error.

mod golden;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use special_cremona::catalog::verify_table;
use special_cremona::cremona::{admissible_types, multidegree_admissible, DEFAULT_TYPE_BOUND};
use special_cremona::filters::curve_genus_bound;
use special_cremona::pipeline::{builtin_names, builtin_pipeline, run_pipeline, PipelineSpec};
use special_cremona::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "cremona",
    version,
    about = "Numerical classification sieves for special Cremona transformations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Compare the output with this golden file; exit 1 on mismatch. JSON
    /// output is compared structurally, ignoring the `meta` header.
    #[arg(long, global = true, value_name = "PATH")]
    expect: Option<PathBuf>,
    /// Lower bound for d2 in the log-general inequalities.
    #[arg(long, global = true, value_parser = ["1", "3"])]
    d2_threshold: Option<String>,
    /// Search bound for δ1 and δ2 in the admissible-type search.
    #[arg(long, global = true, value_name = "INT", value_parser = clap::value_parser!(i64).range(2..=4096))]
    bound_delta: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a classification pipeline and print its report.
    Classify {
        /// Built-in pipeline name or path to a JSON/TOML pipeline file.
        #[arg(long)]
        pipeline: String,
        /// Print a single stage: main-stage index, stage name or `branch/stage`.
        #[arg(long)]
        stage: Option<String>,
    },
    /// Print the invariant table, symbolically or at a point.
    Invariants {
        #[arg(long)]
        pipeline: String,
        #[arg(long, allow_negative_numbers = true, requires = "genus")]
        lambda: Option<i64>,
        #[arg(long, allow_negative_numbers = true, requires = "lambda")]
        genus: Option<i64>,
        #[arg(long, requires = "lambda")]
        nu: Option<i64>,
    },
    /// Check a multidegree such as 1,3,9,13,11,5,1 against the admissibility rules.
    CheckMultidegree {
        #[arg(allow_hyphen_values = true)]
        sequence: String,
    },
    /// Verify the embedded catalogue of known transformations.
    VerifyTable,
    /// List the admissible types (n, δ1, δ2, r, r′).
    AdmissibleTypes {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
    },
}

/// Command outcome before golden comparison.
struct Output {
    text: String,
    passed: bool,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let g = &cli.global;
    let out = match &cli.command {
        Command::Classify { pipeline, stage } => {
            let spec = load_pipeline(pipeline, g)?;
            let report = run_pipeline(&spec)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = match stage {
                Some(sel) => {
                    let s = report
                        .stage(sel)
                        .ok_or_else(|| Failure::Usage(format!("no stage {sel:?} in pipeline {}", report.pipeline)))?;
                    render::stage(s, g.format)
                }
                None => render::report(&report, g.format),
            };
            Output { text, passed: true }
        }
        Command::Invariants {
            pipeline,
            lambda,
            genus,
            nu,
        } => {
            let spec = load_pipeline(pipeline, g)?;
            let point = lambda.zip(*genus);
            if let Some((l, gen)) = point {
                let bound = spec.domain.lambda_max.unwrap_or_else(|| spec.config.degree_bound());
                let in_domain = l >= spec.domain.lambda_min
                    && l <= bound
                    && gen >= 0
                    && curve_genus_bound(l, spec.config.curve_ambient_dim()).is_ok_and(|b| gen <= b);
                if !in_domain {
                    eprintln!(
                        "warning: ({l}, {gen}) is outside the enumeration domain of {}",
                        spec.name
                    );
                }
            }
            Output {
                text: render::invariants(&spec, point, *nu, g.format)?,
                passed: true,
            }
        }
        Command::CheckMultidegree { sequence } => {
            let md = parse_sequence(sequence)?;
            let violations = multidegree_admissible(&md);
            Output {
                text: render::multidegree_check(&md, &violations, g.format),
                passed: violations.is_empty(),
            }
        }
        Command::VerifyTable => {
            let checks = verify_table()?;
            Output {
                passed: checks.iter().all(|c| c.pass),
                text: render::catalog(&checks, g.format),
            }
        }
        Command::AdmissibleTypes { n, r } => {
            let types = admissible_types(*n, *r, g.bound_delta.unwrap_or(DEFAULT_TYPE_BOUND));
            Output {
                text: render::types(&types, g.format),
                passed: true,
            }
        }
    };
    print!("{}", out.text);
    if let Some(path) = &g.expect {
        golden::compare(path, &out.text, g.format)?;
    }
    Ok(out.passed)
}

/// A built-in name, or a JSON/TOML file chosen by extension (JSON first when
/// the extension is unknown). Global flags override the file.
fn load_pipeline(arg: &str, g: &Global) -> Result<PipelineSpec, Failure> {
    let mut spec = if builtin_names().contains(&arg) {
        builtin_pipeline(arg)?
    } else {
        let path = Path::new(arg);
        if !path.exists() {
            return Err(Failure::Usage(format!(
                "unknown pipeline {arg:?}: not a built-in ({}) and no such file",
                builtin_names().join(", ")
            )));
        }
        let src = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => PipelineSpec::from_toml(&src)?,
            Some("json") => PipelineSpec::from_json(&src)?,
            _ => PipelineSpec::from_json(&src).or_else(|_| PipelineSpec::from_toml(&src))?,
        }
    };
    if let Some(t) = &g.d2_threshold {
        spec.d2_threshold = t.parse().expect("restricted by clap");
    }
    if let (Some(bound), Some(tc)) = (g.bound_delta, spec.type_check.as_mut()) {
        tc.bound = bound;
    }
    Ok(spec)
}

fn parse_sequence(s: &str) -> Result<Vec<i64>, Failure> {
    let md: Vec<i64> = s
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse()
                .map_err(|_| Failure::Usage(format!("{tok:?} is not an integer")))
        })
        .collect::<Result<_, _>>()?;
    if md.len() < 2 {
        return Err(Failure::Usage("a multidegree needs at least two entries".into()));
    }
    Ok(md)
}
