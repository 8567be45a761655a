//! Output in the three formats. Every renderer returns text ending in a newline.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use special_cremona::catalog::{known_transformations, RowCheck};
use special_cremona::cremona::{multidegree_of, AdmissibleType, Violation};
use special_cremona::exactq::{Assignment, Polynomial};
use special_cremona::invariants::{pluridegrees, reduction_table, solve_invariants, InvariantTable};
use special_cremona::pipeline::{ClassificationReport, PipelineSpec, StageReport};
use special_cremona::Result;

use crate::Format;

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn report(r: &ClassificationReport, format: Format) -> String {
    match format {
        Format::Table => r.to_table(),
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
    }
}

pub fn stage(s: &StageReport, format: Format) -> String {
    match format {
        Format::Table => s.to_table(),
        Format::Json => s.to_json(),
        Format::Csv => s.to_csv(),
    }
}

/// A constant integer becomes a JSON number; anything else its normal-form string.
fn poly_value(p: &Polynomial) -> Value {
    match p.constant_value().filter(|c| c.is_integer()).and_then(|c| c.to_i64()) {
        Some(v) => json!(v),
        None => json!(p.to_string()),
    }
}

fn entries(t: &InvariantTable, a: &Assignment) -> Vec<(String, Polynomial)> {
    t.entries().map(|(s, p)| (s.to_string(), p.evaluate(a))).collect()
}

pub fn invariants(spec: &PipelineSpec, point: Option<(i64, i64)>, nu: Option<i64>, format: Format) -> Result<String> {
    let cfg = &spec.config;
    let table = solve_invariants(cfg)?;
    let a = match point {
        Some((l, g)) => Assignment::point(l, g, nu),
        None => Assignment::new(),
    };
    let base = entries(&table, &a);
    let section = table.section().map(|s| entries(s, &a));
    let hilbert = table.hilbert().poly().evaluate(&a);
    let md: Vec<Polynomial> = multidegree_of(cfg, &table)?.evaluate(&a).degrees().to_vec();
    let d: Vec<Polynomial> = pluridegrees(&reduction_table(table.threefold()?, true)?)?
        .iter()
        .map(|p| p.evaluate(&a))
        .collect();

    Ok(match format {
        Format::Json => {
            let obj = |xs: &[(String, Polynomial)]| -> Value {
                Value::Object(
                    xs.iter()
                        .map(|(k, v)| (k.clone(), poly_value(v)))
                        .collect::<Map<_, _>>(),
                )
            };
            let mut out = json!({
                "pipeline": spec.name,
                "config": cfg,
                "point": point.map(|(l, g)| match nu {
                    Some(n) => json!([l, g, n]),
                    None => json!([l, g]),
                }),
                "hilbert_polynomial": hilbert.to_string(),
                "invariants": obj(&base),
                "multidegree": md.iter().map(poly_value).collect::<Vec<_>>(),
                "pluridegrees": d.iter().map(poly_value).collect::<Vec<_>>(),
            });
            if let Some(s) = &section {
                out["section"] = obj(s);
            }
            pretty(&out)
        }
        Format::Csv => {
            let mut out = String::from("entry,value\n");
            let mut row = |k: &str, v: &Polynomial| {
                let _ = writeln!(out, "{},{}", csv_field(k), csv_field(&v.to_string()));
            };
            row("hilbert polynomial", &hilbert);
            for (k, v) in &base {
                row(k, v);
            }
            for (k, v) in section.iter().flatten() {
                row(&format!("section {k}"), v);
            }
            for (i, v) in md.iter().enumerate() {
                row(&format!("deg_{i}"), v);
            }
            for (j, v) in d.iter().enumerate() {
                row(&format!("d_{j}"), v);
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            let at = match (point, nu) {
                (Some((l, g)), Some(n)) => format!(" at (lambda, g, nu) = ({l}, {g}, {n})"),
                (Some((l, g)), None) => format!(" at (lambda, g) = ({l}, {g})"),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "invariants of {} (n = {}, type ({}, {}), r = {}){at}",
                spec.name,
                cfg.n(),
                cfg.delta1(),
                cfg.delta2(),
                cfg.r()
            );
            let _ = writeln!(out, "  Hilbert polynomial = {hilbert}");
            let width = base
                .iter()
                .chain(section.iter().flatten())
                .map(|(k, _)| k.len())
                .max()
                .unwrap_or(0);
            for (k, v) in &base {
                let _ = writeln!(out, "  {k:<width$} = {v}");
            }
            if let Some(s) = &section {
                let _ = writeln!(out, "hyperplane section");
                for (k, v) in s {
                    let _ = writeln!(out, "  {k:<width$} = {v}");
                }
            }
            let _ = writeln!(out, "multidegree ({})", join(&md, ", "));
            let _ = writeln!(out, "pluridegrees d = ({})", join(&d, ", "));
            out
        }
    })
}

pub fn multidegree_check(md: &[i64], violations: &[Violation], format: Format) -> String {
    let verdict = if violations.is_empty() { "pass" } else { "fail" };
    match format {
        Format::Json => pretty(&json!({
            "multidegree": md,
            "verdict": verdict,
            "violations": violations,
            "messages": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })),
        Format::Csv => format!(
            "multidegree,verdict,violations\n{},{verdict},{}\n",
            join(md, ";"),
            csv_field(&join(violations, "; "))
        ),
        Format::Table => {
            let mut out = format!("multidegree ({}): {verdict}\n", join(md, ", "));
            for v in violations {
                let _ = writeln!(out, "  {v}");
            }
            out
        }
    }
}

pub fn catalog(checks: &[RowCheck], format: Format) -> String {
    let rows = known_transformations();
    let verdict = |c: &RowCheck| if c.pass { "pass" } else { "fail" };
    match format {
        Format::Json => {
            let items: Vec<Value> = checks
                .iter()
                .zip(rows)
                .map(|(c, row)| {
                    let mut v = serde_json::to_value(c).expect("row checks serialize");
                    v["n"] = json!(row.n);
                    v["r"] = json!(row.r);
                    v["description"] = json!(row.description);
                    v
                })
                .collect();
            pretty(&json!({
                "rows": items,
                "verdict": if checks.iter().all(|c| c.pass) { "pass" } else { "fail" },
            }))
        }
        Format::Csv => {
            let mut out = String::from("row,n,r,multidegree,recomputed,verdict,description\n");
            for (c, row) in checks.iter().zip(rows) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    c.row,
                    row.n,
                    row.r,
                    join(&c.multidegree, ";"),
                    c.recomputed.as_ref().map(|m| join(m, ";")).unwrap_or_default(),
                    verdict(c),
                    csv_field(&row.description)
                );
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for (c, row) in checks.iter().zip(rows) {
                let _ = writeln!(
                    out,
                    "{:<5} n={} r={}  ({})  {}",
                    c.row,
                    row.n,
                    row.r,
                    join(&c.multidegree, ", "),
                    row.description
                );
                if c.violations.is_empty() {
                    let _ = writeln!(out, "      admissible");
                }
                for v in &c.violations {
                    let _ = writeln!(out, "      {v}");
                }
                if let (Some(m), Some(l), Some(g)) = (&c.recomputed, row.lambda, row.genus) {
                    let matches = if m == &c.multidegree { "matches" } else { "DIFFERS" };
                    let _ = writeln!(out, "      recomputed from ({l}, {g}): ({}) {matches}", join(m, ", "));
                }
                let _ = writeln!(out, "      {}", verdict(c));
            }
            let passed = checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(out, "{passed} of {} rows pass", checks.len());
            out
        }
    }
}

pub fn types(types: &[AdmissibleType], format: Format) -> String {
    match format {
        Format::Json => pretty(&json!(types)),
        Format::Csv => {
            let mut out = String::from("n,delta1,delta2,r,inverse_r\n");
            for t in types {
                let _ = writeln!(out, "{},{},{},{},{}", t.n, t.delta1, t.delta2, t.r, t.inverse_r);
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for t in types {
                let _ = writeln!(out, "{t}");
            }
            let _ = writeln!(out, "{} types", types.len());
            out
        }
    }
}
