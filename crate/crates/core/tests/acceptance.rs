//! Acceptance harness: one PASS/FAIL line per primary criterion, all checks by
//! exact equality. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use special_cremona::catalog::{known_transformations, verify_table};
use special_cremona::cremona::{admissible_types, multidegree_of};
use special_cremona::exactq::{solve_linear_system, Assignment, LinearSystem, Polynomial, Rational, Var};
use special_cremona::filters::lebarz_bound_polynomial;
use special_cremona::invariants::{
    hilbert_polynomial, pluridegrees, reduction_table, solve_invariants, Symbol, TransformationConfig,
};
use special_cremona::pipeline::{
    builtin_pipeline, enumerate, run_pipeline_with, Candidate, ClassificationReport, FilterBank, Schedule, StageSpec,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn p(s: &str) -> Polynomial {
    s.parse().unwrap_or_else(|e| panic!("bad polynomial {s:?}: {e}"))
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn pairs(list: &[(i64, i64)]) -> Vec<Candidate> {
    list.iter().map(|&(l, g)| Candidate::pair(l, g)).collect()
}

fn run(name: &str, schedule: Schedule) -> ClassificationReport {
    run_pipeline_with(&builtin_pipeline(name).unwrap(), schedule).unwrap()
}

fn symbolic_threefold_suite() -> Check {
    let cfg = TransformationConfig::cubic_p6();
    let t = solve_invariants(&cfg).map_err(|e| e.to_string())?;
    let closed_forms = [
        (Symbol::TangentChern(1), "2lambda - 2g + 2"),
        (Symbol::TangentChern(2), "-29lambda + 16g + 222"),
        (Symbol::TangentChern(3), "230lambda - 102g - 1788"),
        (Symbol::NormalSegre(1), "-5lambda - 2g + 2"),
        (Symbol::NormalSegre(2), "-15lambda + 30g + 208"),
        (Symbol::NormalSegre(3), "405lambda - 270g - 3286"),
        (Symbol::NormalChern(1), "5lambda + 2g - 2"),
        (Symbol::NormalChern(2), "-3lambda + 12g + 100"),
        (Symbol::NormalChern(3), "lambda^2"),
        (Symbol::TangentSegre(1), "-2lambda + 2g - 2"),
        (Symbol::TangentSegre(2), "-10lambda - 2g + 114"),
        (Symbol::TangentSegre(3), "lambda^2 + 77lambda - 28g - 756"),
        (Symbol::KH, "-2lambda + 2g - 2"),
        (Symbol::K2H, "-39lambda + 14g + 336"),
        (Symbol::K3, "lambda^2 - 77lambda + 14g + 672"),
        (Symbol::SectionKH, "-lambda + 2g - 2"),
        (Symbol::SectionK2, "-42lambda + 18g + 332"),
        (Symbol::SectionC2, "-30lambda + 18g + 220"),
    ];
    for (sym, want) in closed_forms {
        expect_eq(&sym.to_string(), t.get(sym).map_err(|e| e.to_string())?, &p(want))?;
    }
    let h = hilbert_polynomial(&cfg).map_err(|e| e.to_string())?;
    expect_eq(
        "Hilbert polynomial",
        h.basis_coeffs().to_vec(),
        vec![
            p("lambda"),
            p("-lambda - g + 1"),
            p("-6lambda + 4g + 45"),
            p("14lambda - 6g - 113"),
        ],
    )?;
    let md = multidegree_of(&cfg, &t).map_err(|e| e.to_string())?;
    let want: Vec<Polynomial> = ["1", "3", "9", "27 - lambda", "-7lambda + 2g + 79", "5", "1"]
        .iter()
        .map(|s| p(s))
        .collect();
    expect_eq("multidegree", md.degrees().to_vec(), want)
}

fn symbolic_fourfold_suite() -> Check {
    let cfg = TransformationConfig::cubo_cubic_p7();
    let t = solve_invariants(&cfg).map_err(|e| e.to_string())?;
    let x = t.threefold().map_err(|e| e.to_string())?;
    for (sym, want) in [
        (Symbol::K2H, "-39lambda + 14g + 328"),
        (Symbol::SectionK2, "-42lambda + 18g + 324"),
        (Symbol::SectionC2, "-30lambda + 18g + 216"),
    ] {
        expect_eq(&sym.to_string(), x.get(sym).map_err(|e| e.to_string())?, &p(want))?;
    }
    let md = multidegree_of(&cfg, &t).map_err(|e| e.to_string())?;
    let want: Vec<Polynomial> = ["3", "9", "-lambda + 27", "-7lambda + 2g + 79", "9", "3"]
        .iter()
        .map(|s| p(s))
        .collect();
    expect_eq("multidegree 1..6", md.degrees()[1..7].to_vec(), want)
}

fn lebarz_suite() -> Check {
    let bound = |cfg: TransformationConfig| -> Result<Polynomial, String> {
        let t = solve_invariants(&cfg).map_err(|e| e.to_string())?;
        lebarz_bound_polynomial(t.threefold().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    expect_eq(
        "cubic-p6 bound",
        bound(TransformationConfig::cubic_p6())?,
        p("1/8lambda^4 + 3/4lambda^3 - 3lambda^2 g - 453/8lambda^2 + 20lambda g + 13g^2 + 2835/4lambda - 73g - 2894"),
    )?;
    expect_eq(
        "cubo-cubic-p7 bound",
        bound(TransformationConfig::cubo_cubic_p7())?,
        p("1/8lambda^4 + 3/4lambda^3 - 3lambda^2 g - 445/8lambda^2 + 20lambda g + 13g^2 + 2815/4lambda - 83g - 2873"),
    )
}

fn cubic_p6_counts() -> Check {
    let r = run("cubic-p6", Schedule::default());
    let counts: Vec<usize> = r.stages.iter().take(3).map(|s| s.output).collect();
    expect_eq("main counts", counts, vec![889, 312, 33])?;
    #[rustfmt::skip]
    let listed = pairs(&[
        (8, 1), (9, 3), (9, 4), (10, 5), (10, 6), (11, 7), (11, 8), (11, 9), (12, 9), (12, 10), (12, 11),
        (12, 12), (13, 12), (13, 13), (13, 14), (13, 15), (14, 14), (14, 15), (14, 16), (14, 17), (14, 18),
        (15, 17), (15, 18), (15, 19), (15, 20), (15, 21), (16, 21), (16, 22), (16, 23), (17, 24), (17, 25),
        (18, 27), (18, 28),
    ]);
    expect_eq("33 pairs", r.stages[2].survivors.clone(), listed)?;
    let reduction = r
        .stage("reduction-existence")
        .ok_or("missing reduction-existence stage")?;
    expect_eq("reduction-existence hits", reduction.exclusions.len(), 0)?;

    let lg = r.branch("log-general").ok_or("missing log-general branch")?;
    let outs: Vec<usize> = lg.stages.iter().map(|s| s.output).collect();
    expect_eq("log-general counts", outs[..2].to_vec(), vec![478, 18])?;
    let before_lebarz = r.stage("log-general/log-general").ok_or("missing log-general stage")?;
    expect_eq(
        "log-general survivors",
        before_lebarz.survivors.clone(),
        vec![Candidate::triple(14, 15, 0), Candidate::triple(18, 27, 0)],
    )?;
    for case in ["veronese-fibration", "mukai", "del-pezzo-fibration"] {
        let b = r.branch(case).ok_or(format!("missing {case} branch"))?;
        let solutions = b.stages.get(1).map_or(0, |s| s.output);
        expect_eq(&format!("{case} solutions"), solutions, 0)?;
    }
    let finalists: Vec<(Candidate, &str)> = r.finalists.iter().map(|f| (f.tuple, f.branch.as_str())).collect();
    expect_eq(
        "finalists",
        finalists,
        vec![
            (Candidate::triple(14, 15, 0), "log-general"),
            (Candidate::triple(13, 12, 0), "conic-bundle"),
        ],
    )
}

fn cubo_cubic_p7_counts() -> Check {
    let r = run("cubo-cubic-p7", Schedule::default());
    #[rustfmt::skip]
    let listed = pairs(&[
        (8, 2), (9, 4), (10, 6), (10, 7), (11, 8), (11, 9), (11, 10), (12, 10), (12, 11), (12, 12), (12, 13),
        (13, 12), (13, 13), (13, 14), (13, 15), (13, 16), (14, 15), (14, 16), (14, 17), (14, 18), (15, 19),
        (15, 20), (15, 21), (16, 22), (16, 23), (17, 25), (18, 28),
    ]);
    expect_eq(
        "27 pairs",
        r.stage("cremona-degrees").ok_or("missing stage")?.survivors.clone(),
        listed,
    )?;
    expect_eq("triples", r.stage("nu-range").ok_or("missing nu-range")?.output, 859)?;

    let log_general = r.stage("log-general/log-general").ok_or("missing log-general stage")?;
    let unique = Candidate::triple(18, 28, 0);
    expect_eq("log-general triples", log_general.survivors.clone(), vec![unique])?;
    let bank = FilterBank::new(&TransformationConfig::cubo_cubic_p7(), 3).map_err(|e| e.to_string())?;
    let d = pluridegrees(bank.reduction()).map_err(|e| e.to_string())?;
    let at: Vec<Rational> = d.iter().map(|q| q.eval_point(18, 28, Some(0)).unwrap()).collect();
    let want: Vec<Rational> = [18, 36, 72, 102].iter().map(|&v| Rational::from(v as i64)).collect();
    expect_eq("pluridegrees at (18,28,0)", at, want)?;
    let hodge = r
        .stage("log-general/hodge-propagation")
        .ok_or("missing hodge-propagation")?;
    expect_eq(
        "excluded by hodge-propagation",
        hodge
            .exclusions
            .iter()
            .map(|e| (e.tuple, e.filters.clone()))
            .collect::<Vec<_>>(),
        vec![(unique, vec!["hodge-propagation".to_string()])],
    )?;

    expect_eq("finalist count", r.finalists.len(), 1)?;
    let f = &r.finalists[0];
    expect_eq(
        "finalist",
        (f.tuple, f.branch.as_str()),
        (Candidate::triple(12, 10, 0), "del-pezzo-fibration"),
    )?;
    expect_eq("finalist pluridegrees", f.pluridegrees, Some([12, 6, 0, 0]))?;
    let fact = |k: &str| f.facts.get(k).copied();
    expect_eq(
        "fibration invariants",
        (fact("g(C)"), fact("deg H_C"), fact("fibre degree")),
        (Some(0), Some(1), Some(6)),
    )
}

fn type_solver() -> Check {
    let triples = |n: Option<i64>, r: Option<i64>, bound: i64| -> BTreeSet<(i64, i64, i64, i64)> {
        admissible_types(n, r, bound)
            .into_iter()
            .map(|t| (t.n, t.delta1, t.delta2, t.r))
            .collect()
    };
    let cases = [
        (None, Some(3), vec![(5, 5, 5, 3), (6, 3, 5, 3), (8, 2, 5, 3)]),
        (Some(7), None, vec![(7, 3, 3, 4)]),
        (None, Some(1), vec![(3, 3, 3, 1), (4, 2, 3, 1)]),
    ];
    for (n, r, want) in cases {
        let want: BTreeSet<_> = want.into_iter().collect();
        expect_eq(&format!("types n={n:?} r={r:?}"), triples(n, r, 32), want.clone())?;
        expect_eq(&format!("types n={n:?} r={r:?} doubled bound"), triples(n, r, 64), want)?;
    }
    Ok(())
}

fn catalog_verification() -> Check {
    let checks = verify_table().map_err(|e| e.to_string())?;
    expect_eq("rows", checks.len(), 13)?;
    for c in &checks {
        if !c.violations.is_empty() {
            return Err(format!("row {} violates {:?}", c.row, c.violations));
        }
    }
    let rows = known_transformations();
    for (row, point) in [("XI", (14, 15)), ("XII", (13, 12)), ("XIII", (12, 10))] {
        let known = rows.iter().find(|r| r.row == row).ok_or(format!("missing row {row}"))?;
        expect_eq(
            &format!("row {row} point"),
            (known.lambda, known.genus),
            (Some(point.0), Some(point.1)),
        )?;
        let c = checks.iter().find(|c| c.row == row).unwrap();
        expect_eq(
            &format!("row {row} recomputed"),
            c.recomputed.as_ref(),
            Some(&known.multidegree),
        )?;
    }
    Ok(())
}

fn random_poly(rng: &mut StdRng) -> Polynomial {
    let terms = (0..rng.gen_range(1..5)).map(|_| {
        let c = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)).unwrap();
        (c, [rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..2), 0])
    });
    Polynomial::from_terms(terms)
}

fn property_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);

    // Monotonicity and determinism of every builtin pipeline.
    for name in ["cubic-p6", "cubo-cubic-p7"] {
        let seq = run(name, Schedule::Sequential);
        let par = run(name, Schedule::Parallel);
        expect_eq(&format!("{name} schedules agree"), &seq, &par)?;
        for (path, s) in seq.all_stages() {
            let lifts = path.ends_with("nu-range") || path.ends_with("solve-nu");
            if !lifts && s.output > s.input {
                return Err(format!("{name}: stage {path} grew from {} to {}", s.input, s.output));
            }
        }
        let mut spec = builtin_pipeline(name).unwrap();
        let bank = FilterBank::new(&spec.config, spec.d2_threshold).map_err(|e| e.to_string())?;
        for stage in spec.stages.iter_mut() {
            if let StageSpec::Sieve { filters, .. } = stage {
                let mut flat: Vec<String> = bank
                    .resolve_all(filters)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|f| f.name)
                    .collect();
                flat.shuffle(&mut rng);
                *filters = flat;
            }
        }
        let shuffled = run_pipeline_with(&spec, Schedule::Parallel).map_err(|e| e.to_string())?;
        let survivors = |r: &ClassificationReport| -> Vec<Vec<Candidate>> {
            r.all_stages().into_iter().map(|(_, s)| s.survivors.clone()).collect()
        };
        expect_eq(
            &format!("{name} shuffled filters"),
            survivors(&shuffled),
            survivors(&seq),
        )?;
    }

    // A single stage on a random domain.
    let bank = FilterBank::new(&TransformationConfig::cubic_p6(), 3).map_err(|e| e.to_string())?;
    let liso = bank.resolve("liso").map_err(|e| e.to_string())?.to_vec();
    let domain: Vec<Candidate> = (0..200)
        .map(|_| Candidate::pair(rng.gen_range(3..30), rng.gen_range(0..40)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let a = enumerate("s", &domain, &liso, Schedule::Sequential).map_err(|e| e.to_string())?;
    let b = enumerate("s", &domain, &liso, Schedule::Parallel).map_err(|e| e.to_string())?;
    expect_eq("random-domain stage", &a, &b)?;

    // Reduction at ν = 0 is the identity on shared entries.
    for cfg in [TransformationConfig::cubic_p6(), TransformationConfig::cubo_cubic_p7()] {
        let base = solve_invariants(&cfg).map_err(|e| e.to_string())?;
        let x = base.threefold().map_err(|e| e.to_string())?;
        let rt = reduction_table(x, true).map_err(|e| e.to_string())?.at_nu(0);
        for (sym, v) in rt.table().entries() {
            expect_eq(
                &format!("reduction {sym} at nu=0"),
                v,
                x.get(sym).map_err(|e| e.to_string())?,
            )?;
        }
    }

    // Solver back-substitution on random nonsingular systems.
    let mut solved = 0;
    while solved < 25 {
        let n = rng.gen_range(1..6);
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut sys = LinearSystem::new(names).map_err(|e| e.to_string())?;
        for i in 0..n {
            let coeffs = (0..n).map(|_| Rational::from(rng.gen_range(-5i64..=5))).collect();
            sys.push_row(format!("row{i}"), coeffs, random_poly(&mut rng))
                .map_err(|e| e.to_string())?;
        }
        if let Ok(sol) = solve_linear_system(&sys) {
            for r in sys.residuals(&sol) {
                if !r.is_zero() {
                    return Err(format!("non-zero residual {r}"));
                }
            }
            solved += 1;
        }
    }

    // Evaluation is a ring homomorphism.
    for _ in 0..200 {
        let (f, g) = (random_poly(&mut rng), random_poly(&mut rng));
        let a = Assignment::new()
            .with(Var::Lambda, rng.gen_range(-20i64..=20))
            .with(Var::Genus, rng.gen_range(-20i64..=20))
            .with(Var::Nu, rng.gen_range(-5i64..=5));
        expect_eq("eval(f+g)", (&f + &g).evaluate(&a), &f.evaluate(&a) + &g.evaluate(&a))?;
        expect_eq("eval(f*g)", (&f * &g).evaluate(&a), &f.evaluate(&a) * &g.evaluate(&a))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("symbolic identity suite (threefold in P^6)", symbolic_threefold_suite),
        ("symbolic suite (fourfold in P^7)", symbolic_fourfold_suite),
        ("Le Barz expansion suite", lebarz_suite),
        ("count regression, cubic-p6", cubic_p6_counts),
        ("count regression, cubo-cubic-p7", cubo_cubic_p7_counts),
        ("Diophantine type solver", type_solver),
        ("catalogue verification", catalog_verification),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
