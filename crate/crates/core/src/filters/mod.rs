//! Exact constraints on (λ, g[, ν]) derived from an invariant table: genus
//! bounds, adjunction inequalities, multidegree restrictions, the quadrisecant
//! count and the adjunction-theoretic case equations.

mod filter;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use filter::{Filter, FilterKind, Guard, Point, Relation, Verdict};

use crate::cremona::Multidegree;
use crate::error::{Error, Result};
use crate::exactq::{binomial, Polynomial, Rational, Var};
use crate::invariants::{adjoint_power, pluridegrees, InvariantTable, ReductionTable, Symbol};

fn genus() -> Polynomial {
    Polynomial::var(Var::Genus)
}

fn int(c: i64) -> Polynomial {
    Polynomial::from(c)
}

/// Castelnuovo's bound on the genus of a nondegenerate irreducible curve of
/// degree `d` in ℙ^`s`: with m = ⌊(d−1)/(s−1)⌋ and ε = d−1−m(s−1),
/// the genus is at most C(m,2)·(s−1) + m·ε.
pub fn castelnuovo_bound(d: i64, s: i64) -> Result<i64> {
    if s < 3 || d < s {
        return Err(Error::Domain(format!(
            "Castelnuovo bound needs d ≥ s ≥ 3, got d = {d}, s = {s}"
        )));
    }
    let m = (d - 1) / (s - 1);
    let eps = d - 1 - m * (s - 1);
    Ok(binomial(m, 2) * (s - 1) + m * eps)
}

/// Genus bound for a curve section of degree `d` whose span has dimension at
/// most `s`. A curve of degree d < s spans at most ℙ^d, so the bound is taken
/// in ℙ^{min(s, d)}.
pub fn curve_genus_bound(d: i64, s: i64) -> Result<i64> {
    castelnuovo_bound(d, s.min(d))
}

/// The four adjunction-theoretic inequalities valid on any smooth polarized
/// threefold (Livorni–Sommese), instantiated on a threefold table.
pub fn livorni_sommese_filters(table: &InvariantTable) -> Result<Vec<Filter>> {
    let t = table.threefold()?;
    let get = |s: Symbol| t.get(s).cloned();
    let (kh2, k2h, k3) = (get(Symbol::KH)?, get(Symbol::K2H)?, get(Symbol::K3)?);
    let (c2, c3) = (get(Symbol::TangentChern(2))?, get(Symbol::TangentChern(3))?);
    let chi0 = get(Symbol::Chi0)?;
    let (kshs, ks2, c2s) = (
        get(Symbol::SectionKH)?,
        get(Symbol::SectionK2)?,
        get(Symbol::SectionC2)?,
    );
    let l = get(Symbol::Degree)?;
    let sc = |p: &Polynomial, c: i64| p.scale(&c.into());

    let e1 = &k3 + &sc(&k2h, 6) + sc(&kh2, 15) + sc(&l, 20) - &c3 + sc(&chi0, 48) - sc(&c2, 6);
    let e2 = &ks2 + &sc(&kshs, 4) + sc(&l, 6) - &c2s;
    let e3 = sc(&c2s, 2) - &c3 + genus().scale(&2.into()) - int(2);
    let e4 = sc(&chi0, -24) + sc(&k2h, 3) + sc(&kh2, 15) + sc(&c2, 2) + sc(&l, 20) + &c3;
    let prov = "adjunction inequalities for smooth threefolds (Livorni-Sommese)";
    Ok(vec![
        Filter::non_negative("liso.1", e1, prov),
        Filter::non_negative("liso.2", e2, prov),
        Filter::non_negative("liso.3", e3, prov),
        Filter::non_negative("liso.4", e4, prov),
    ])
}

fn deg(md: &Multidegree, k: usize) -> Result<Polynomial> {
    md.get(k)
        .cloned()
        .ok_or_else(|| Error::MissingInvariant(format!("projective degree deg_{k}")))
}

/// The five restrictions on the middle projective degrees that carry
/// information for the cubic transformations: deg₁deg₃ ≥ deg₄,
/// deg₁deg₄ ≥ deg₅, and log-concavity at 3, 4, 5.
pub fn cremona_degree_filters(md: &Multidegree) -> Result<Vec<Filter>> {
    let d = |k| deg(md, k);
    let prov = "restrictions on projective degrees";
    Ok(vec![
        Filter::non_negative("cremona.d1d3-d4", &d(1)? * &d(3)? - d(4)?, prov),
        Filter::non_negative("cremona.d1d4-d5", &d(1)? * &d(4)? - d(5)?, prov),
        Filter::non_negative("cremona.d3^2-d2d4", d(3)?.pow(2) - &d(2)? * &d(4)?, prov),
        Filter::non_negative("cremona.d4^2-d3d5", d(4)?.pow(2) - &d(3)? * &d(5)?, prov),
        Filter::non_negative("cremona.d5^2-d4d6", d(5)?.pow(2) - &d(4)? * &d(6)?, prov),
    ])
}

/// Every product and log-concavity restriction on the multidegree that is
/// not a constant (constant ones are checked on the evaluated sequence).
pub fn cremona_all_filters(md: &Multidegree) -> Result<Vec<Filter>> {
    let n = md.len() - 1;
    let d = |k| deg(md, k);
    let prov = "restrictions on projective degrees";
    let mut out = Vec::new();
    for k in 0..=n {
        out.push(Filter::non_negative(format!("cremona.d{k}>=1"), d(k)? - int(1), prov));
    }
    for i in 1..=n {
        for j in i..=n - i {
            out.push(Filter::non_negative(
                format!("cremona.d{i}d{j}-d{}", i + j),
                &d(i)? * &d(j)? - d(i + j)?,
                prov,
            ));
        }
    }
    for i in 1..n {
        out.push(Filter::non_negative(
            format!("cremona.d{i}^2-d{}d{}", i - 1, i + 1),
            d(i)?.pow(2) - &d(i - 1)? * &d(i + 1)?,
            prov,
        ));
    }
    out.retain(|f| !f.expr.is_constant());
    Ok(out)
}

/// Invariants of a smooth surface S ⊂ ℙ⁴ entering the quadrisecant count:
/// κ = K_S·H_S, ζ = K_S², θ = c₂(T_S), λ = H_S².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionInvariants {
    pub kappa: Polynomial,
    pub zeta: Polynomial,
    pub theta: Polynomial,
    pub lambda: Polynomial,
}

impl SectionInvariants {
    pub fn numeric(lambda: i64, kappa: i64, zeta: i64, theta: i64) -> Self {
        SectionInvariants {
            kappa: kappa.into(),
            zeta: zeta.into(),
            theta: theta.into(),
            lambda: lambda.into(),
        }
    }

    /// Section entries of a threefold table (or of the section of a fourfold).
    pub fn from_table(table: &InvariantTable) -> Result<Self> {
        let t = table.threefold()?;
        Ok(SectionInvariants {
            kappa: t.get(Symbol::SectionKH)?.clone(),
            zeta: t.get(Symbol::SectionK2)?.clone(),
            theta: t.get(Symbol::SectionC2)?.clone(),
            lambda: t.get(Symbol::Degree)?.clone(),
        })
    }

    /// Le Barz's count of 4-secant lines of S, without the correction for
    /// lines on S, as a polynomial in whatever the invariants depend on.
    pub fn quadrisecant_polynomial(&self) -> Polynomial {
        let (k, z, t, l) = (&self.kappa, &self.zeta, &self.theta, &self.lambda);
        let c = |x: i64| Rational::from(x);
        let l2 = l.pow(2);
        let terms: [(i64, Polynomial); 19] = [
            (3, l.pow(4)),
            (-36, k * &l2),
            (-6, z * &l2),
            (6, t * &l2),
            (-90, l.pow(3)),
            (78, k.pow(2)),
            (30, k * z),
            (3, z.pow(2)),
            (-30, k * t),
            (-6, z * t),
            (3, t.pow(2)),
            (612, k * l),
            (116, z * l),
            (-100, t * l),
            (855, l2.clone()),
            (-1980, k.clone()),
            (-510, z.clone()),
            (294, t.clone()),
            (-2466, l.clone()),
        ];
        let sum = terms
            .into_iter()
            .fold(Polynomial::zero(), |acc, (coef, term)| acc + term.scale(&c(coef)));
        sum.scale(&Rational::new(1, 24).expect("nonzero"))
    }
}

/// Le Barz's quadrisecant number of a surface with numeric invariants.
pub fn lebarz_quadrisecant_count(si: &SectionInvariants) -> Result<Rational> {
    let p = si.quadrisecant_polynomial();
    p.constant_value()
        .ok_or_else(|| Error::Domain(format!("section invariants are not numeric: count is {p}")))
}

/// The quadrisecant count of the hyperplane section as a polynomial in λ, g.
pub fn lebarz_bound_polynomial(table: &InvariantTable) -> Result<Polynomial> {
    Ok(SectionInvariants::from_table(table)?.quadrisecant_polynomial())
}

/// Each blown-up point gives a line on the section surface, so ν cannot
/// exceed the quadrisecant count: bound(λ, g) − ν ≥ 0.
pub fn lebarz_nu_bound(table: &InvariantTable) -> Result<Filter> {
    let bound = lebarz_bound_polynomial(table)?;
    Ok(Filter::non_negative(
        "lebarz",
        bound - Polynomial::var(Var::Nu),
        "number of exceptional lines bounded by the Le Barz quadrisecant count",
    ))
}

/// Default lower bound for d₂ in the log-general inequalities.
pub const DEFAULT_D2_THRESHOLD: i64 = 3;

/// Inequalities valid when K′+H′ is nef and big on the reduction,
/// instantiated on a reduction table. `d2_threshold` is the lower bound for d₂.
pub fn log_general_filters(rt: &ReductionTable, d2_threshold: i64) -> Result<Vec<Filter>> {
    let d = pluridegrees(rt)?;
    let t = rt.table();
    let chi0 = t.get(Symbol::Chi0)?.clone();
    let chi_m = t.get(Symbol::ChiMinusH)?.clone();
    let c3 = t.get(Symbol::TangentChern(3))?.clone();
    let x = &chi0 - &chi_m;
    let sc = |p: &Polynomial, c: i64| p.scale(&c.into());
    let prov = "inequalities for K'+H' nef and big";
    let f = |name: &str, e: Polynomial| Filter::non_negative(format!("log-general.{name}"), e, prov);

    let ladder_guard = Guard {
        atoms: vec![
            (&d[3] - &int(1), Relation::Zero),
            (&d[2] - &int(5), Relation::Zero),
            (int(25) - d[1].clone(), Relation::NonNegative),
        ],
        negated: true,
    };

    let mut out = vec![
        f("i.d1", &d[1] - &int(1)),
        f("i.d2", &d[2] - &int(d2_threshold)),
        f("i.d3", &d[3] - &int(1)),
        f("ii.a", d[1].pow(2) - &d[2] * &d[0]),
        f("ii.b", d[2].pow(2) - &d[3] * &d[1]),
        f("iii.a", d[1].pow(3) - &d[3] * &d[0].pow(2)),
        f("iii.b", d[2].pow(3) - &d[3].pow(2) * &d[0]),
    ];
    for j in 1..=3 {
        out.push(f(&format!("iv.{j}"), sc(&d[j], 5) - d[j - 1].clone()));
    }
    for j in 1..=3 {
        out.push(f(&format!("v.{j}"), sc(&d[j], 4) - d[j - 1].clone()).with_guard(ladder_guard.clone()));
    }
    out.push(f("vi.a", &d[2] - &(sc(&x, 2) - int(6))));
    out.push(Filter::new(
        "log-general.vi.b",
        sc(&x, 9) - d[2].clone(),
        Relation::Positive,
        prov,
    ));
    out.push(f(
        "vii",
        sc(&d[2], 3) + sc(&d[1], 2) - d[0].clone() + sc(&x, 12) - sc(&chi0, 32),
    ));
    out.push(f(
        "viii",
        sc(&d[3], 2) + sc(&d[2], 7) + sc(&d[1], 12) - sc(&d[0], 3) + sc(&chi0, 30) + sc(&chi_m, 18),
    ));
    out.push(f(
        "ix",
        sc(&x, 24) + genus().scale(&2.into()) - int(2) - sc(&d[2], 2) - c3,
    ));
    Ok(out)
}

/// Hodge-index consistency: d₁² = d₂d₀ forces d₂² = d₃d₁.
pub fn hodge_propagation_filter(rt: &ReductionTable) -> Result<Filter> {
    let d = pluridegrees(rt)?;
    Ok(Filter::equality(
        "hodge-propagation",
        d[2].pow(2) - &d[3] * &d[1],
        "Hodge index equality case",
    )
    .with_guard(Guard {
        atoms: vec![(d[1].pow(2) - &d[2] * &d[0], Relation::Zero)],
        negated: false,
    }))
}

/// d₂ > 0: for a conic bundle K′+H′ is the pull-back of an ample class on
/// the base surface.
pub fn d2_positive_filter(rt: &ReductionTable) -> Result<Filter> {
    let d = pluridegrees(rt)?;
    Ok(Filter::new(
        "d2-positive",
        d[2].clone(),
        Relation::Positive,
        "conic bundle: K'+H' pulled back from a surface",
    ))
}

/// Adjunction-theoretic structures on which K+H (or K+2H) fails to be nef
/// and big.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjunctionCase {
    /// Scroll over a curve: (K+3H)³ = 0.
    ScrollOverCurve,
    /// Scroll over a surface, quadric fibration or del Pezzo: (K+2H)³ = 0.
    PreReduction,
    /// Fibration in Veronese surfaces: (2K+3H)³ = (2K+3H)²H = 0.
    VeroneseFibration,
    /// Mukai variety: K = −H numerically.
    Mukai,
    /// Del Pezzo fibration over a curve: d₃ = d₂ = 0.
    DelPezzoFibration,
    /// Conic bundle over a surface: d₃ = 0.
    ConicBundle,
}

impl AdjunctionCase {
    pub const ALL: [AdjunctionCase; 6] = [
        AdjunctionCase::ScrollOverCurve,
        AdjunctionCase::PreReduction,
        AdjunctionCase::VeroneseFibration,
        AdjunctionCase::Mukai,
        AdjunctionCase::DelPezzoFibration,
        AdjunctionCase::ConicBundle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdjunctionCase::ScrollOverCurve => "scroll-over-curve",
            AdjunctionCase::PreReduction => "pre-reduction",
            AdjunctionCase::VeroneseFibration => "veronese-fibration",
            AdjunctionCase::Mukai => "mukai",
            AdjunctionCase::DelPezzoFibration => "del-pezzo-fibration",
            AdjunctionCase::ConicBundle => "conic-bundle",
        }
    }
}

impl fmt::Display for AdjunctionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdjunctionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AdjunctionCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// The defining equalities of an adjunction case on a threefold table (the
/// base locus or its reduction).
pub fn adjunction_case_system(case: AdjunctionCase, table: &InvariantTable) -> Result<Vec<Filter>> {
    let eq = |suffix: &str, e: Polynomial| {
        let name = if suffix.is_empty() {
            case.name().to_string()
        } else {
            format!("{}.{suffix}", case.name())
        };
        Filter::equality(name, e, format!("adjunction case: {}", case.name()))
    };
    let get = |s: Symbol| table.get(s).cloned();
    Ok(match case {
        AdjunctionCase::ScrollOverCurve => vec![eq("", adjoint_power(table, 1, 3, 3)?)],
        AdjunctionCase::PreReduction => vec![eq("", adjoint_power(table, 1, 2, 3)?)],
        AdjunctionCase::VeroneseFibration => vec![
            eq("cube", adjoint_power(table, 2, 3, 3)?),
            eq("square", adjoint_power(table, 2, 3, 2)?),
        ],
        AdjunctionCase::Mukai => {
            let h3 = get(Symbol::Degree)?;
            vec![
                eq("k3", get(Symbol::K3)? + h3.clone()),
                eq("k2h", get(Symbol::K2H)? - h3.clone()),
                eq("kh2", get(Symbol::KH)? + h3),
            ]
        }
        AdjunctionCase::DelPezzoFibration => vec![
            eq("d3", adjoint_power(table, 1, 1, 3)?),
            eq("d2", adjoint_power(table, 1, 1, 2)?),
        ],
        AdjunctionCase::ConicBundle => vec![eq("d3", adjoint_power(table, 1, 1, 3)?)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{reduction_table, solve_invariants, TransformationConfig};

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn castelnuovo_examples() {
        assert_eq!(castelnuovo_bound(27, 4).unwrap(), 100);
        assert_eq!(castelnuovo_bound(5, 4).unwrap(), 1);
        assert!(castelnuovo_bound(3, 4).is_err());
        let total: i64 = (3..=27).map(|d| curve_genus_bound(d, 4).unwrap() + 1).sum();
        assert_eq!(total, 889);
    }

    #[test]
    fn quadrisecant_counts_vanish_on_known_surfaces() {
        for (l, k, z, t) in [(4, -6, 9, 3), (14, 14, 14, 70), (13, 9, 2, 46)] {
            let count = lebarz_quadrisecant_count(&SectionInvariants::numeric(l, k, z, t)).unwrap();
            assert!(count.is_zero(), "({l},{k},{z},{t}) -> {count}");
        }
    }

    #[test]
    fn p6_filters() {
        let base = solve_invariants(&TransformationConfig::cubic_p6()).unwrap();
        let liso = livorni_sommese_filters(&base).unwrap();
        assert_eq!(liso[0].expr, p("lambda^2 + 7lambda - 10g - 102"));
        assert!(liso
            .iter()
            .all(|f| f.evaluate(&Point::new(8, 1, None)).unwrap() == Verdict::Pass));

        let bound = lebarz_bound_polynomial(&base).unwrap();
        assert_eq!(
            bound,
            p("1/8lambda^4 + 3/4lambda^3 - 3lambda^2 g - 453/8lambda^2 + 20lambda g + 2835/4lambda + 13g^2 - 73g - 2894")
        );
        assert_eq!(bound.eval_point(18, 27, None).unwrap(), (-5).into());

        let rt = reduction_table(&base, true).unwrap();
        let lg = log_general_filters(&rt, DEFAULT_D2_THRESHOLD).unwrap();
        assert_eq!(lg[0].expr, p("-lambda + 2g - nu - 3"));
        assert_eq!(
            lg[3].expr,
            p("43lambda^2 - 22lambda g + 4g^2 + 43lambda nu - 22g nu - 328lambda - 8g - 328nu + 4")
        );
        let at = Point::new(14, 15, Some(0));
        assert!(lg.iter().all(|f| !f.evaluate(&at).unwrap().excludes()));
    }

    #[test]
    fn case_systems() {
        let base = solve_invariants(&TransformationConfig::cubic_p6()).unwrap();
        let scroll = adjunction_case_system(AdjunctionCase::ScrollOverCurve, &base).unwrap();
        assert_eq!(scroll[0].expr, p("lambda^2 - 455lambda + 194g + 3642"));
        let rt = reduction_table(&base, true).unwrap();
        let mukai = adjunction_case_system(AdjunctionCase::Mukai, rt.table()).unwrap();
        let exprs: Vec<_> = mukai.iter().map(|f| f.expr.clone()).collect();
        assert_eq!(
            exprs,
            vec![
                p("lambda^2 - 76lambda + 14g - 7nu + 672"),
                p("-40lambda + 14g + 3nu + 336"),
                p("-lambda + 2g - nu - 2"),
            ]
        );
        assert_eq!(
            "conic-bundle".parse::<AdjunctionCase>().unwrap(),
            AdjunctionCase::ConicBundle
        );
        assert!(matches!(
            "quadric".parse::<AdjunctionCase>(),
            Err(Error::UnknownCase(_))
        ));
    }
}
