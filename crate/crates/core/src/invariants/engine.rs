use super::config::{Mode, TransformationConfig};
use super::hilbert::{hilbert_polynomial, ChiValues, HilbertPolynomial};
use super::table::{InvariantTable, Symbol};
use crate::cremona::segre_row;
use crate::error::{Error, Result};
use crate::exactq::{binomial, solve_linear_system, LinearSystem, Polynomial, Rational, Var};

/// Unknowns of the threefold system, in elimination order.
const THREEFOLD_UNKNOWNS: [&str; 16] = [
    "KH2", "K2H", "K3", "c2", "c3", "s1", "s2", "s3", "ts2", "ts3", "nc1", "nc2", "nc3", "KSHS", "KS2", "c2S",
];

/// Where the normal Segre degrees of a threefold come from.
enum SegreSource<'a> {
    /// Solved from the projective degrees forced by the inverse type.
    Multidegree(&'a TransformationConfig),
    /// Already known (restricted from a fourfold).
    Known(&'a [Polynomial]),
}

fn lambda() -> Polynomial {
    Polynomial::var(Var::Lambda)
}

fn genus() -> Polynomial {
    Polynomial::var(Var::Genus)
}

/// K·H^{r−1} from the sectional genus: 2g − 2 = (K + (r−1)H)·H^{r−1}.
fn canonical_degree(r: i64) -> Polynomial {
    genus().scale(&2.into()) - Polynomial::from(2) - lambda().scale(&(r - 1).into())
}

/// Assemble and solve the intersection-theoretic system of a smooth threefold
/// of degree λ and sectional genus g in ℙ^`n`.
///
/// Relations: the genus formula, Riemann–Roch for χ(O(H)) and χ(O), the
/// double point formula (codimension 3 only), the two Whitney ladders
/// c(T)·c(N) = (1+H)^{n+1} read through Segre classes, inversion of c(T),
/// adjunction on a hyperplane section, and the Segre degrees.
fn solve_threefold(n: i64, chi: &ChiValues, segre: SegreSource<'_>) -> Result<Vec<(Symbol, Polynomial)>> {
    if n != 6 {
        return Err(Error::InvalidConfig(format!(
            "the double point formula used for threefolds needs ambient dimension 6, got {n}"
        )));
    }
    let l = lambda();
    let b = |j: i64| binomial(n + 1, j);
    let lam = |c: i64| l.scale(&c.into());
    let mut sys = LinearSystem::new(THREEFOLD_UNKNOWNS)?;

    sys.push("sectional genus", &[("KH2", 1)], canonical_degree(3))?;
    // 12·(χ(O(H)) − χ(O)) = 2H³ − 3KH² + K²H + c₂H.
    sys.push(
        "Riemann-Roch for chi(O(H))",
        &[("K2H", 1), ("KH2", -3), ("c2", 1)],
        (&chi.chi_h - &chi.chi0).scale(&12.into()) - lam(2),
    )?;
    // Double point formula for a threefold in ℙ⁶, with K·c₂ = −24χ(O).
    sys.push(
        "double point formula",
        &[("K3", 1), ("c3", -1), ("c2", -b(1)), ("KH2", b(2)), ("K2H", b(1))],
        chi.chi0.scale(&(-48).into()) + l.pow(2) - lam(b(3)),
    )?;

    // c(T) = s(N)·(1+H)^{n+1}
    sys.push("normal ladder 1", &[("KH2", -1), ("s1", -1)], lam(b(1)))?;
    sys.push("normal ladder 2", &[("c2", 1), ("s1", -b(1)), ("s2", -1)], lam(b(2)))?;
    sys.push(
        "normal ladder 3",
        &[("c3", 1), ("s1", -b(2)), ("s2", -b(1)), ("s3", -1)],
        lam(b(3)),
    )?;

    // s(T) = c(T)⁻¹, with s₁(T) = KH² substituted.
    sys.push(
        "tangent Segre 2",
        &[("ts2", 1), ("K2H", -1), ("c2", 1)],
        Polynomial::zero(),
    )?;
    sys.push(
        "tangent Segre 3",
        &[("ts3", 1), ("K3", -1), ("c3", 1)],
        chi.chi0.scale(&48.into()),
    )?;

    // c(N) = s(T)·(1+H)^{n+1}
    sys.push("tangent ladder 1", &[("nc1", 1), ("KH2", -1)], lam(b(1)))?;
    sys.push(
        "tangent ladder 2",
        &[("nc2", 1), ("KH2", -b(1)), ("ts2", -1)],
        lam(b(2)),
    )?;
    sys.push(
        "tangent ladder 3",
        &[("nc3", 1), ("KH2", -b(2)), ("ts2", -b(1)), ("ts3", -1)],
        lam(b(3)),
    )?;

    // Smooth hyperplane section S: K_S = (K+H)|_S, c(T_S) = c(T)|_S / (1+H).
    sys.push("section c2", &[("c2S", 1), ("c2", -1), ("KH2", -1)], l.clone())?;
    sys.push(
        "Noether formula",
        &[("KS2", 1), ("c2S", 1)],
        (&chi.chi0 - &chi.chi_minus_h).scale(&12.into()),
    )?;
    sys.push("section adjunction", &[("KSHS", 1), ("KH2", -1)], l.clone())?;

    let s_cols = |coeffs: Vec<i64>| {
        let mut row = vec![Rational::zero(); THREEFOLD_UNKNOWNS.len()];
        for (i, c) in coeffs.into_iter().enumerate() {
            row[5 + i] = c.into();
        }
        row
    };
    match segre {
        SegreSource::Multidegree(cfg) => {
            for k in 0..(cfg.n() - cfg.inverse_r()) {
                let value = cfg.delta2().pow(k as u32);
                let (coeffs, rhs) = segre_row(cfg, k, value);
                sys.push_row(format!("deg_{} = {value}", cfg.n() - k), s_cols(coeffs), rhs)?;
            }
        }
        SegreSource::Known(values) => {
            for (i, v) in values.iter().take(3).enumerate() {
                let mut coeffs = vec![0; 3];
                coeffs[i] = 1;
                sys.push_row(format!("s{} restricted", i + 1), s_cols(coeffs), v.clone())?;
            }
        }
    }

    let sol = solve_linear_system(&sys)?;
    let get = |name: &str| sol.get(name).expect("declared unknown").clone();
    let kh2 = get("KH2");
    Ok(vec![
        (Symbol::Degree, l.clone()),
        (Symbol::KH, kh2.clone()),
        (Symbol::K2H, get("K2H")),
        (Symbol::K3, get("K3")),
        (Symbol::TangentChern(1), -&kh2),
        (Symbol::TangentChern(2), get("c2")),
        (Symbol::TangentChern(3), get("c3")),
        (Symbol::NormalSegre(1), get("s1")),
        (Symbol::NormalSegre(2), get("s2")),
        (Symbol::NormalSegre(3), get("s3")),
        (Symbol::TangentSegre(1), kh2),
        (Symbol::TangentSegre(2), get("ts2")),
        (Symbol::TangentSegre(3), get("ts3")),
        (Symbol::NormalChern(1), get("nc1")),
        (Symbol::NormalChern(2), get("nc2")),
        (Symbol::NormalChern(3), get("nc3")),
        (Symbol::SectionKH, get("KSHS")),
        (Symbol::SectionK2, get("KS2")),
        (Symbol::SectionC2, get("c2S")),
    ])
}

fn threefold_table(n: i64, hilbert: HilbertPolynomial, segre: SegreSource<'_>) -> Result<InvariantTable> {
    let entries = solve_threefold(n, &hilbert.chi_values(), segre)?;
    let mut table = InvariantTable::new(3, hilbert);
    for (sym, value) in entries {
        table.insert(sym, value);
    }
    Ok(table)
}

/// Normal Segre degrees s₁, …, s₄ of a fourfold in ℙⁿ from the genus and the
/// projective degrees forced by the inverse type.
fn fourfold_segre(cfg: &TransformationConfig) -> Result<Vec<Polynomial>> {
    let r = cfg.r();
    let names: Vec<String> = (1..=r).map(|i| format!("s{i}")).collect();
    let mut sys = LinearSystem::new(names)?;
    // c₁(T)·H³ = (n+1)λ + s₁ and c₁ = −K.
    sys.push(
        "sectional genus",
        &[("s1", 1)],
        -canonical_degree(r) - lambda().scale(&(cfg.n() + 1).into()),
    )?;
    for k in 0..(cfg.n() - cfg.inverse_r()) {
        let value = cfg.delta2().pow(k as u32);
        let (coeffs, rhs) = segre_row(cfg, k, value);
        sys.push_row(
            format!("deg_{} = {value}", cfg.n() - k),
            coeffs.into_iter().map(Rational::from).collect(),
            rhs,
        )?;
    }
    let sol = solve_linear_system(&sys)?;
    Ok((1..=r)
        .map(|i| sol.get(&format!("s{i}")).expect("declared").clone())
        .collect())
}

/// Solve every invariant of the base locus as a polynomial in λ and g.
///
/// For a threefold in ℙ⁶ this is one combined linear system. For a fourfold
/// in ℙ⁷ the Segre degrees come from the multidegree, and the threefold table
/// of a general hyperplane section (whose normal bundle is the restriction) is
/// attached as the section.
pub fn solve_invariants(cfg: &TransformationConfig) -> Result<InvariantTable> {
    let hilbert = hilbert_polynomial(cfg)?;
    match cfg.mode()? {
        Mode::ThreefoldInP6 => threefold_table(cfg.n(), hilbert, SegreSource::Multidegree(cfg)),
        Mode::FourfoldInP7 => {
            let segre = fourfold_segre(cfg)?;
            let section_hilbert = hilbert.hyperplane_section()?;
            let section = threefold_table(cfg.n() - 1, section_hilbert, SegreSource::Known(&segre))?;
            let kh = canonical_degree(cfg.r());
            let mut table = InvariantTable::new(cfg.r() as u8, hilbert);
            table.insert(Symbol::Degree, lambda());
            table.insert(Symbol::TangentChern(1), -&kh);
            table.insert(Symbol::KH, kh);
            for (i, s) in segre.into_iter().enumerate() {
                table.insert(Symbol::NormalSegre(i as u8 + 1), s);
            }
            Ok(table.with_section(section))
        }
    }
}

/// Invariants of the first reduction (X′, H′) of a threefold: X is X′ blown
/// up at ν points and H = H′ − E.
///
/// Normal-bundle entries are dropped (the reduction is not embedded); every
/// other entry is shifted by the blow-up rules, and section entries are
/// recomputed from the same relations as for the base.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReductionTable {
    table: InvariantTable,
}

impl ReductionTable {
    pub fn table(&self) -> &InvariantTable {
        &self.table
    }

    pub fn get(&self, sym: Symbol) -> Result<&Polynomial> {
        self.table.get(sym)
    }

    /// Fix ν to a number, leaving λ and g symbolic.
    pub fn at_nu(&self, nu: i64) -> ReductionTable {
        ReductionTable {
            table: self.table.evaluate(&crate::exactq::Assignment::new().with(Var::Nu, nu)),
        }
    }
}

/// Build the reduction table of a threefold table. With `with_nu = false` the
/// number of blown-up points is fixed to zero.
pub fn reduction_table(base: &InvariantTable, with_nu: bool) -> Result<ReductionTable> {
    if base.dim() != 3 {
        return Err(Error::Domain(format!(
            "reductions are defined for threefold tables, got dimension {}",
            base.dim()
        )));
    }
    let nu = if with_nu {
        Polynomial::var(Var::Nu)
    } else {
        Polynomial::zero()
    };
    let shift = |sym: Symbol, k: i64| -> Result<Polynomial> { Ok(base.get(sym)? + &nu.scale(&k.into())) };

    let hilbert = if with_nu {
        base.hilbert().blown_down()
    } else {
        base.hilbert().clone()
    };
    let mut table = InvariantTable::new(3, hilbert);
    for (sym, k) in [
        (Symbol::Degree, 1),
        (Symbol::KH, -2),
        (Symbol::K2H, 4),
        (Symbol::K3, -8),
        (Symbol::TangentChern(1), 2),
        (Symbol::TangentChern(2), 0),
        (Symbol::TangentChern(3), -2),
        (Symbol::TangentSegre(1), -2),
        (Symbol::TangentSegre(2), 4),
        (Symbol::TangentSegre(3), -6),
        (Symbol::SectionKH, -1),
        (Symbol::SectionK2, 1),
        (Symbol::SectionC2, -1),
    ] {
        table.insert(sym, shift(sym, k)?);
    }
    Ok(ReductionTable { table })
}

/// (aK + bH)^j · H^{3−j} on a threefold table.
pub fn adjoint_power(table: &InvariantTable, a: i64, b: i64, j: u32) -> Result<Polynomial> {
    if j > 3 {
        return Err(Error::Domain(format!("adjoint power exponent {j} outside 0..=3")));
    }
    if table.dim() != 3 {
        return Err(Error::Domain(format!(
            "adjoint powers need a threefold table, got dimension {}",
            table.dim()
        )));
    }
    let k_power = [Symbol::Degree, Symbol::KH, Symbol::K2H, Symbol::K3];
    let mut out = Polynomial::zero();
    for i in 0..=j {
        let c = binomial(j as i64, i as i64) * a.pow(i) * b.pow(j - i);
        out = out + table.get(k_power[i as usize])?.scale(&c.into());
    }
    Ok(out)
}

/// Pluridegrees d_j = (K′ + H′)^j·H′^{3−j}, j = 0..3.
pub fn pluridegrees(rt: &ReductionTable) -> Result<[Polynomial; 4]> {
    Ok([
        adjoint_power(&rt.table, 1, 1, 0)?,
        adjoint_power(&rt.table, 1, 1, 1)?,
        adjoint_power(&rt.table, 1, 1, 2)?,
        adjoint_power(&rt.table, 1, 1, 3)?,
    ])
}

/// χ(O), χ(O(H)), χ(O(−H)), χ(O(−2H)).
pub fn chi_values(hp: &HilbertPolynomial) -> ChiValues {
    hp.chi_values()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn threefold_table_closed_forms() {
        let t = solve_invariants(&TransformationConfig::cubic_p6()).unwrap();
        assert_eq!(t.get(Symbol::TangentChern(2)).unwrap(), &p("-29lambda + 16g + 222"));
        assert_eq!(t.get(Symbol::TangentChern(3)).unwrap(), &p("230lambda - 102g - 1788"));
        assert_eq!(t.get(Symbol::NormalSegre(2)).unwrap(), &p("-15lambda + 30g + 208"));
        assert_eq!(t.get(Symbol::NormalChern(3)).unwrap(), &p("lambda^2"));
        assert_eq!(t.get(Symbol::K3).unwrap(), &p("lambda^2 - 77lambda + 14g + 672"));
    }

    #[test]
    fn fourfold_section_table() {
        let t = solve_invariants(&TransformationConfig::cubo_cubic_p7()).unwrap();
        assert_eq!(t.dim(), 4);
        let x = t.threefold().unwrap();
        assert_eq!(x.get(Symbol::K2H).unwrap(), &p("-39lambda + 14g + 328"));
        assert_eq!(x.get(Symbol::SectionK2).unwrap(), &p("-42lambda + 18g + 324"));
        assert_eq!(x.get(Symbol::SectionC2).unwrap(), &p("-30lambda + 18g + 216"));
        assert_eq!(x.get(Symbol::K3).unwrap(), &p("lambda^2 - 77lambda + 14g + 646"));
    }

    #[test]
    fn reduction_rules() {
        let base = solve_invariants(&TransformationConfig::cubic_p6()).unwrap();
        let rt = reduction_table(&base, true).unwrap();
        assert_eq!(rt.get(Symbol::K3).unwrap(), &p("lambda^2 - 77lambda + 14g - 8nu + 672"));
        assert_eq!(
            rt.get(Symbol::TangentChern(3)).unwrap(),
            &p("230lambda - 102g - 2nu - 1788")
        );
        assert_eq!(rt.get(Symbol::KH).unwrap(), &p("-2lambda + 2g - 2nu - 2"));
        let zero = rt.at_nu(0);
        for (sym, value) in zero.table().entries() {
            assert_eq!(value, base.get(sym).unwrap(), "{sym}");
        }
    }

    #[test]
    fn adjoint_expansions() {
        let base = solve_invariants(&TransformationConfig::cubic_p6()).unwrap();
        assert_eq!(
            adjoint_power(&base, 1, 3, 3).unwrap(),
            p("lambda^2 - 455lambda + 194g + 3642")
        );
        let rt = reduction_table(&base, true).unwrap();
        assert_eq!(
            adjoint_power(rt.table(), 2, 3, 3).unwrap(),
            p("8lambda^2 - 2101lambda + 724g - nu + 17364")
        );
        let d = pluridegrees(&rt).unwrap();
        assert_eq!(d[0], p("lambda + nu"));
        assert_eq!(d[2], p("-42lambda + 18g + nu + 332"));
        assert_eq!(d[3], p("lambda^2 - 199lambda + 62g - nu + 1674"));
        assert!(adjoint_power(&base, 1, 1, 4).is_err());
    }
}
