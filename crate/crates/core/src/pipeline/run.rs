use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::report::{BranchReport, ClassificationReport, Finalist, ReportMeta};
use super::spec::{Annotation, BranchSpec, GenusRule, NuRule, PipelineSpec, StageSpec};
use super::{enumerate, map_tuples, Candidate, Exclusion, FilterBank, Schedule, StageReport};
use crate::cremona::{admissible_types, multidegree_admissible};
use crate::error::{Error, Result};
use crate::exactq::{Polynomial, Rational, Var};
use crate::filters::{curve_genus_bound, Filter, Relation};
use crate::invariants::{pluridegrees, Symbol};

/// Run a pipeline with the default schedule.
pub fn run_pipeline(spec: &PipelineSpec) -> Result<ClassificationReport> {
    run_pipeline_with(spec, Schedule::default())
}

/// Run a pipeline. The report does not depend on the schedule.
pub fn run_pipeline_with(spec: &PipelineSpec, schedule: Schedule) -> Result<ClassificationReport> {
    let cfg = spec.config;
    let mut bank = FilterBank::new(&cfg, spec.d2_threshold)?;
    for custom in &spec.filters {
        let expr: Polynomial = custom.expr.parse()?;
        if expr.contains_var(Var::T) {
            return Err(Error::InvalidConfig(format!(
                "custom filter {:?} uses the Hilbert variable t",
                custom.name
            )));
        }
        bank.add_custom(Filter::new(&custom.name, expr, custom.relation, "pipeline file"))?;
    }

    let types = match spec.type_check {
        Some(tc) => {
            let types = admissible_types(tc.n, tc.r, tc.bound);
            let found = types
                .iter()
                .any(|t| (t.n, t.delta1, t.delta2, t.r) == (cfg.n(), cfg.delta1(), cfg.delta2(), cfg.r()));
            if !found {
                return Err(Error::InvalidConfig(format!(
                    "type ({}, {}) with base locus dimension {} is not admissible in P^{}",
                    cfg.delta1(),
                    cfg.delta2(),
                    cfg.r(),
                    cfg.n()
                )));
            }
            types
        }
        None => Vec::new(),
    };

    validate_stages(&bank, &spec.stages, false, false)?;

    let domain = initial_domain(spec)?;
    let mut stages = vec![StageReport {
        name: "domain".to_string(),
        filters: vec![match spec.domain.genus {
            GenusRule::Castelnuovo => "castelnuovo".to_string(),
            GenusRule::Fixed { max } => format!("genus<={max}"),
        }],
        input: domain.len(),
        output: domain.len(),
        survivors: domain.clone(),
        exclusions: Vec::new(),
    }];

    let mut ctx = Runner {
        bank: &bank,
        schedule,
        warnings: Vec::new(),
        branches: Vec::new(),
    };
    let mut current = domain;
    for stage in &spec.stages {
        if let StageSpec::Branch(branch) = stage {
            ctx.run_branch(branch, &current)?;
            continue;
        }
        let report = ctx.run_stage(stage, &current)?;
        current = report.survivors.clone();
        stages.push(report);
    }

    let mut finalists = Vec::new();
    for (branch, report) in spec.stages.iter().filter_map(as_branch).zip(&ctx.branches) {
        for tuple in &report.survivors {
            finalists.push(finalist(&bank, branch, tuple, &mut ctx.warnings)?);
        }
    }

    Ok(ClassificationReport {
        meta: ReportMeta::default(),
        pipeline: spec.name.clone(),
        config: cfg,
        types,
        stages,
        branches: ctx.branches,
        finalists,
        warnings: ctx.warnings,
    })
}

fn as_branch(stage: &StageSpec) -> Option<&BranchSpec> {
    match stage {
        StageSpec::Branch(b) => Some(b),
        _ => None,
    }
}

/// All pairs (λ, g) with λ in range and 0 ≤ g ≤ the genus bound.
fn initial_domain(spec: &PipelineSpec) -> Result<Vec<Candidate>> {
    let cfg = &spec.config;
    let lo = spec.domain.lambda_min;
    let hi = spec.domain.lambda_max.unwrap_or_else(|| cfg.degree_bound());
    if lo < 1 {
        return Err(Error::InvalidConfig(format!("lambda_min must be positive, got {lo}")));
    }
    let mut out = Vec::new();
    for lambda in lo..=hi {
        let max = match spec.domain.genus {
            GenusRule::Castelnuovo => curve_genus_bound(lambda, cfg.curve_ambient_dim())?,
            GenusRule::Fixed { max } => max,
        };
        out.extend((0..=max).map(|g| Candidate::pair(lambda, g)));
    }
    Ok(out)
}

/// Reject pipelines that cannot run before any enumeration happens.
fn validate_stages(bank: &FilterBank, stages: &[StageSpec], lifted: bool, nested: bool) -> Result<bool> {
    let mut lifted = lifted;
    let arity = |stage: &str, filters: &[Filter], lifted: bool| -> Result<()> {
        match filters.iter().find(|f| f.uses_nu()) {
            Some(f) if !lifted => Err(Error::InvalidConfig(format!(
                "stage {stage:?}: filter {:?} needs ν but tuples are still pairs",
                f.name
            ))),
            _ => Ok(()),
        }
    };
    for stage in stages {
        match stage {
            StageSpec::Sieve { name, filters } => arity(name, &bank.resolve_all(filters)?, lifted)?,
            StageSpec::CaseCheck { name, systems, .. } => {
                for system in systems {
                    arity(name, bank.resolve(system)?, lifted)?;
                }
            }
            StageSpec::LiftNu { name, rule } => {
                if lifted {
                    return Err(Error::InvalidConfig(format!(
                        "stage {name:?}: ν has already been lifted"
                    )));
                }
                match rule {
                    NuRule::Range { bounds } => {
                        if bounds.is_empty() {
                            return Err(Error::InvalidConfig(format!("stage {name:?}: no ν bounds given")));
                        }
                        for f in bank.resolve_all(bounds)? {
                            range_bound(&f)?;
                        }
                    }
                    NuRule::Solve { equation } => {
                        let f = solve_equation(bank, equation)?;
                        linear_in_nu(f)?;
                    }
                }
                lifted = true;
            }
            StageSpec::Branch(b) => {
                if nested {
                    return Err(Error::InvalidConfig(format!(
                        "branch {:?} is nested in another branch",
                        b.name
                    )));
                }
                validate_stages(bank, &b.stages, lifted, true)?;
            }
        }
    }
    Ok(lifted)
}

/// Split `a(λ, g) + c(λ, g)·ν` into (a, c); errors unless linear in ν and unguarded.
fn linear_in_nu(f: &Filter) -> Result<(Polynomial, Polynomial)> {
    if f.guard.is_some() || f.expr.degree_in(Var::Nu) != 1 {
        return Err(Error::InvalidConfig(format!(
            "filter {:?} must be unguarded and linear in ν to lift pairs",
            f.name
        )));
    }
    Ok((f.expr.coefficient_of(Var::Nu, 0), f.expr.coefficient_of(Var::Nu, 1)))
}

/// A range bound `a(λ, g) − c·ν ⋈ 0` with a positive constant c.
fn range_bound(f: &Filter) -> Result<(Polynomial, Rational)> {
    let (a, c) = linear_in_nu(f)?;
    match c.constant_value() {
        Some(c) if c.is_negative() && f.relation != Relation::Zero => Ok((a, -c)),
        _ => Err(Error::InvalidConfig(format!(
            "filter {:?} must be an inequality with a negative constant ν coefficient to bound ν",
            f.name
        ))),
    }
}

fn solve_equation<'b>(bank: &'b FilterBank, name: &str) -> Result<&'b Filter> {
    bank.resolve(name)?
        .first()
        .ok_or_else(|| Error::InvalidConfig(format!("equation {name:?} is an empty system")))
}

struct Runner<'b> {
    bank: &'b FilterBank,
    schedule: Schedule,
    warnings: Vec<String>,
    branches: Vec<BranchReport>,
}

impl Runner<'_> {
    fn run_stage(&mut self, stage: &StageSpec, input: &[Candidate]) -> Result<StageReport> {
        match stage {
            StageSpec::Sieve { name, filters } => {
                let filters = self.bank.resolve_all(filters)?;
                enumerate(name, input, &filters, self.schedule)
            }
            StageSpec::CaseCheck {
                name,
                systems,
                expect_empty,
            } => {
                let report = self.case_check(name, systems, input)?;
                if *expect_empty && !report.exclusions.is_empty() {
                    self.warnings.push(format!(
                        "stage {name:?} was expected to match nothing but matched {} tuples",
                        report.exclusions.len()
                    ));
                }
                Ok(report)
            }
            StageSpec::LiftNu { name, rule } => self.lift(name, rule, input),
            StageSpec::Branch(b) => Err(Error::InvalidConfig(format!(
                "branch {:?} is nested in another branch",
                b.name
            ))),
        }
    }

    fn run_branch(&mut self, branch: &BranchSpec, input: &[Candidate]) -> Result<()> {
        let mut stages = Vec::new();
        let mut current = input.to_vec();
        for stage in &branch.stages {
            let report = self.run_stage(stage, &current)?;
            current = report.survivors.clone();
            stages.push(report);
        }
        if branch.expect_empty && !current.is_empty() {
            let tuples: Vec<String> = current.iter().map(Candidate::to_string).collect();
            self.warnings.push(format!(
                "branch {:?} was expected to be empty but kept {}",
                branch.name,
                tuples.join(" ")
            ));
        }
        self.branches.push(BranchReport {
            name: branch.name.clone(),
            label: branch.label.clone(),
            expect_empty: branch.expect_empty,
            stages,
            survivors: current,
        });
        Ok(())
    }

    /// Remove the tuples satisfying every filter of some system.
    fn case_check(&self, name: &str, systems: &[String], input: &[Candidate]) -> Result<StageReport> {
        let resolved: Vec<(&String, &[Filter])> = systems
            .iter()
            .map(|s| Ok((s, self.bank.resolve(s)?)))
            .collect::<Result<_>>()?;
        let hits = map_tuples(input, self.schedule, |c| {
            let at = c.point();
            let mut matched = Vec::new();
            for (system, filters) in &resolved {
                let mut all = true;
                for f in filters.iter() {
                    if f.evaluate(&at)?.excludes() {
                        all = false;
                        break;
                    }
                }
                if all {
                    matched.push((*system).clone());
                }
            }
            Ok((*c, matched))
        })?;
        let mut survivors = Vec::new();
        let mut exclusions = Vec::new();
        for (tuple, matched) in hits {
            if matched.is_empty() {
                survivors.push(tuple);
            } else {
                exclusions.push(Exclusion {
                    tuple,
                    filters: matched,
                });
            }
        }
        Ok(StageReport {
            name: name.to_string(),
            filters: systems.to_vec(),
            input: input.len(),
            output: survivors.len(),
            survivors,
            exclusions,
        })
    }

    fn lift(&self, name: &str, rule: &NuRule, input: &[Candidate]) -> Result<StageReport> {
        let (filter_names, lifted) = match rule {
            NuRule::Range { bounds } => {
                let filters = self.bank.resolve_all(bounds)?;
                let parts: Vec<(String, Polynomial, Rational, bool)> = filters
                    .iter()
                    .map(|f| {
                        let (a, c) = range_bound(f)?;
                        Ok((f.name.clone(), a, c, f.relation == Relation::Positive))
                    })
                    .collect::<Result<_>>()?;
                let lifted = map_tuples(input, self.schedule, |c| {
                    let at = c.point();
                    let mut max: Option<i64> = None;
                    let mut blocking = Vec::new();
                    for (fname, a, coef, strict) in &parts {
                        let bound = nu_max(&at.eval(a)?, coef, *strict)?;
                        if bound < 0 {
                            blocking.push(fname.clone());
                        }
                        max = Some(max.map_or(bound, |m| m.min(bound)));
                    }
                    let nus: Vec<i64> = match max {
                        Some(m) if m >= 0 => (0..=m).collect(),
                        _ => Vec::new(),
                    };
                    Ok((*c, nus, blocking))
                })?;
                (filters.iter().map(|f| f.name.clone()).collect::<Vec<_>>(), lifted)
            }
            NuRule::Solve { equation } => {
                let f = solve_equation(self.bank, equation)?;
                let (a, c) = linear_in_nu(f)?;
                let lifted = map_tuples(input, self.schedule, |t| {
                    let at = t.point();
                    let (a, c) = (at.eval(&a)?, at.eval(&c)?);
                    let nus = match solve_linear(&a, &c) {
                        Some(nu) if nu >= 0 => vec![nu],
                        _ => Vec::new(),
                    };
                    Ok((*t, nus, vec![f.name.clone()]))
                })?;
                (vec![f.name.clone()], lifted)
            }
        };
        let mut survivors = Vec::new();
        let mut exclusions = Vec::new();
        for (pair, nus, blocking) in lifted {
            if pair.nu.is_some() {
                return Err(Error::InvalidConfig(format!("stage {name:?}: tuples already carry ν")));
            }
            if nus.is_empty() {
                exclusions.push(Exclusion {
                    tuple: pair,
                    filters: blocking,
                });
            }
            survivors.extend(nus.into_iter().map(|nu| Candidate::triple(pair.lambda, pair.genus, nu)));
        }
        survivors.sort();
        Ok(StageReport {
            name: name.to_string(),
            filters: filter_names,
            input: input.len(),
            output: survivors.len(),
            survivors,
            exclusions,
        })
    }
}

/// Largest integer ν with a − c·ν ≥ 0 (or > 0 when `strict`), c > 0.
fn nu_max(a: &Rational, c: &Rational, strict: bool) -> Result<i64> {
    let q = {
        let mut q = a.clone();
        q *= &c.recip()?;
        q
    };
    let floor = q.floor();
    let floor = if strict && q.is_integer() { floor - 1 } else { floor };
    floor
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("ν bound {q} is out of range")))
}

/// The integer root of a + c·ν, if there is exactly one.
fn solve_linear(a: &Rational, c: &Rational) -> Option<i64> {
    if c.is_zero() {
        return None;
    }
    let mut nu = -a;
    nu *= &c.recip().ok()?;
    if nu.is_integer() {
        nu.to_i64()
    } else {
        None
    }
}

fn to_int(v: &Rational, what: &str) -> Result<i64> {
    v.to_i64()
        .filter(|_| v.is_integer())
        .ok_or_else(|| Error::Domain(format!("{what} = {v} is not an integer")))
}

/// Recompute everything known about a final tuple and apply the branch annotations.
fn finalist(bank: &FilterBank, branch: &BranchSpec, tuple: &Candidate, warnings: &mut Vec<String>) -> Result<Finalist> {
    let at = tuple.point();
    let multidegree = bank.multidegree().at(tuple.lambda, tuple.genus, None)?;
    let violations: Vec<String> = multidegree_admissible(&multidegree)
        .iter()
        .map(|v| v.to_string())
        .collect();
    if !violations.is_empty() {
        warnings.push(format!(
            "finalist {tuple} of branch {:?} has an inadmissible multidegree",
            branch.name
        ));
    }

    let mut invariants = BTreeMap::new();
    for (sym, p) in bank.table().entries() {
        invariants.insert(sym.to_string(), at.eval(p)?);
    }
    if let Some(section) = bank.table().section() {
        for (sym, p) in section.entries() {
            invariants.insert(format!("section {sym}"), at.eval(p)?);
        }
    }

    let mut facts = BTreeMap::new();
    let mut label = branch.label.clone();
    let mut plurideg = None;
    if tuple.nu.is_some() {
        let d = pluridegrees(bank.reduction())?;
        let d: [i64; 4] = [
            to_int(&at.eval(&d[0])?, "d0")?,
            to_int(&at.eval(&d[1])?, "d1")?,
            to_int(&at.eval(&d[2])?, "d2")?,
            to_int(&at.eval(&d[3])?, "d3")?,
        ];
        plurideg = Some(d);
        let red = |sym: Symbol| -> Result<i64> { to_int(&at.eval(bank.reduction().get(sym)?)?, &sym.to_string()) };
        for annotation in &branch.annotations {
            let mut fail = |why: String| warnings.push(format!("finalist {tuple} of branch {:?}: {why}", branch.name));
            match annotation {
                Annotation::NumericallyTrivialCanonical => {
                    let kh2 = red(Symbol::KH)?;
                    let k2h = red(Symbol::K2H)?;
                    let k3 = red(Symbol::K3)?;
                    facts.insert("K'.H'^2".to_string(), kh2);
                    facts.insert("K'^2.H'".to_string(), k2h);
                    facts.insert("K'^3".to_string(), k3);
                    if kh2 == 0 && k2h == 0 && k3 == 0 {
                        label.push_str(", K numerically trivial");
                    } else {
                        fail("K' is not numerically trivial".to_string());
                    }
                }
                Annotation::ConicBundleBase => {
                    let h0 = -red(Symbol::ChiMinusH)?;
                    facts.insert("h0(K'+H')".to_string(), h0);
                    facts.insert("d2".to_string(), d[2]);
                    if h0 == 3 && d[2] == 2 {
                        label = "conic bundle over P^2".to_string();
                    } else {
                        fail(format!("base is not (P^2, O(1)): h0(K'+H') = {h0}, d2 = {}", d[2]));
                    }
                }
                Annotation::DelPezzoFibration => {
                    let g_c = 1 - red(Symbol::Chi0)?;
                    let h0 = -red(Symbol::ChiMinusH)?;
                    let deg_hc = h0 - 1 + g_c;
                    facts.insert("g(C)".to_string(), g_c);
                    facts.insert("h0(K'+H')".to_string(), h0);
                    facts.insert("deg H_C".to_string(), deg_hc);
                    if deg_hc > 0 && d[1] % deg_hc == 0 {
                        let fibre = d[1] / deg_hc;
                        facts.insert("fibre degree".to_string(), fibre);
                        let base = if g_c == 0 {
                            "P^1".to_string()
                        } else {
                            format!("a curve of genus {g_c}")
                        };
                        label = format!("del Pezzo fibration over {base}, fibre degree {fibre}");
                    } else {
                        fail(format!("deg H_C = {deg_hc} does not divide d1 = {}", d[1]));
                    }
                }
            }
        }
    } else if !branch.annotations.is_empty() {
        warnings.push(format!(
            "branch {:?} has annotations but its tuples carry no ν",
            branch.name
        ));
    }

    Ok(Finalist {
        tuple: *tuple,
        branch: branch.name.clone(),
        label,
        pluridegrees: plurideg,
        multidegree,
        violations,
        facts,
        invariants,
    })
}
