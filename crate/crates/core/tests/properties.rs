use proptest::prelude::*;

use special_cremona::exactq::{
    binomial, binomial_poly, solve_linear_system, Assignment, LinearSystem, Polynomial, Rational, Var,
};
use special_cremona::invariants::{reduction_table, solve_invariants, TransformationConfig};
use special_cremona::pipeline::{builtin_pipeline, enumerate, run_pipeline_with, Candidate, FilterBank, Schedule};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((rational(), 0u32..3, 0u32..3, 0u32..2, 0u32..2), 0..6)
        .prop_map(|terms| Polynomial::from_terms(terms.into_iter().map(|(c, a, b, n, t)| (c, [a, b, n, t]))))
}

fn assignment() -> impl Strategy<Value = Assignment> {
    (-15i64..=15, -15i64..=15, -4i64..=4, -4i64..=4).prop_map(|(l, g, n, t)| {
        Assignment::new()
            .with(Var::Lambda, l)
            .with(Var::Genus, g)
            .with(Var::Nu, n)
            .with(Var::T, t)
    })
}

proptest! {
    #[test]
    fn ring_axioms(f in polynomial(), g in polynomial(), h in polynomial()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Polynomial::one(), f.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in polynomial(), g in polynomial(), a in assignment()) {
        prop_assert_eq!((&f + &g).evaluate(&a), &f.evaluate(&a) + &g.evaluate(&a));
        prop_assert_eq!((&f * &g).evaluate(&a), &f.evaluate(&a) * &g.evaluate(&a));
        prop_assert!(f.evaluate(&a).is_constant());
    }

    #[test]
    fn display_round_trips(f in polynomial()) {
        let back: Polynomial = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn binomial_polynomials_take_integer_values(shift in -3i64..=3, k in 0i64..=5, t in -10i64..=10) {
        let b = binomial_poly(shift, k).unwrap();
        let v = b.eval_rational(&[(Var::T, Rational::from(t))]).unwrap();
        prop_assert!(v.is_integer());
        if t + shift >= 0 {
            prop_assert_eq!(v, Rational::from(binomial(t + shift, k)));
        }
    }

    #[test]
    fn solutions_satisfy_their_systems(
        coeffs in prop::collection::vec(-6i64..=6, 9),
        rhs in prop::collection::vec(polynomial(), 3),
    ) {
        let mut sys = LinearSystem::new(["x", "y", "z"]).unwrap();
        for (i, b) in rhs.into_iter().enumerate() {
            let row = coeffs[3 * i..3 * i + 3].iter().map(|&c| Rational::from(c)).collect();
            sys.push_row(format!("r{i}"), row, b).unwrap();
        }
        if let Ok(sol) = solve_linear_system(&sys) {
            prop_assert!(sys.residuals(&sol).iter().all(Polynomial::is_zero));
        }
    }

    #[test]
    fn stages_never_grow_and_schedules_agree(
        picks in prop::collection::vec((3i64..28, 0i64..40), 0..80),
        mask in prop::collection::vec(any::<bool>(), 9),
    ) {
        let bank = FilterBank::new(&TransformationConfig::cubic_p6(), 3).unwrap();
        let mut all = bank.resolve("liso").unwrap().to_vec();
        all.extend_from_slice(bank.resolve("cremona").unwrap());
        let filters: Vec<_> = all.into_iter().zip(&mask).filter(|(_, keep)| **keep).map(|(f, _)| f).collect();
        let domain: Vec<Candidate> = picks.iter().map(|&(l, g)| Candidate::pair(l, g)).collect();
        let seq = enumerate("s", &domain, &filters, Schedule::Sequential).unwrap();
        prop_assert!(seq.output <= seq.input);
        prop_assert_eq!(seq.output + seq.exclusions.len(), seq.input);
        let par = enumerate("s", &domain, &filters, Schedule::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        let mut reversed = filters.clone();
        reversed.reverse();
        let rev = enumerate("s", &domain, &reversed, Schedule::Parallel).unwrap();
        prop_assert_eq!(&rev.survivors, &seq.survivors);
    }
}

#[test]
fn reduction_without_blowups_is_the_identity() {
    for cfg in [TransformationConfig::cubic_p6(), TransformationConfig::cubo_cubic_p7()] {
        let table = solve_invariants(&cfg).unwrap();
        let base = table.threefold().unwrap();
        for rt in [
            reduction_table(base, true).unwrap().at_nu(0),
            reduction_table(base, false).unwrap(),
        ] {
            for (sym, v) in rt.table().entries() {
                assert_eq!(v, base.get(sym).unwrap(), "{sym}");
            }
        }
    }
}

#[test]
fn d2_threshold_does_not_change_the_classification() {
    for name in ["cubic-p6", "cubo-cubic-p7"] {
        let strict = builtin_pipeline(name).unwrap();
        let mut loose = strict.clone();
        loose.d2_threshold = 1;
        let a = run_pipeline_with(&strict, Schedule::Sequential).unwrap();
        let b = run_pipeline_with(&loose, Schedule::Sequential).unwrap();
        let finalists = |r: &special_cremona::pipeline::ClassificationReport| -> Vec<Candidate> {
            r.finalists.iter().map(|f| f.tuple).collect()
        };
        assert_eq!(finalists(&a), finalists(&b), "{name}");
        for (x, y) in a.branches.iter().zip(&b.branches) {
            assert_eq!(x.survivors, y.survivors, "{name}/{}", x.name);
        }
    }
}
