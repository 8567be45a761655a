use serde::{Deserialize, Serialize};

use super::config::TransformationConfig;
use crate::cremona::vanishing_threshold;
use crate::error::{Error, Result};
use crate::exactq::{binomial, binomial_poly, solve_linear_system, Assignment, LinearSystem, Polynomial, Var};

/// χ(O(tH)) of an r-dimensional polarized variety, written in the basis
/// C(t+r, r), C(t+r−1, r−1), …, C(t, 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "HilbertRepr", into = "HilbertRepr")]
pub struct HilbertPolynomial {
    /// Coefficients on the binomial basis, top degree first.
    basis_coeffs: Vec<Polynomial>,
    /// Evaluation constraints (t, χ) the free coefficients were solved from.
    constraints: Vec<(i64, i64)>,
    poly: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct HilbertRepr {
    basis_coeffs: Vec<Polynomial>,
    constraints: Vec<(i64, i64)>,
}

impl From<HilbertRepr> for HilbertPolynomial {
    fn from(r: HilbertRepr) -> Self {
        HilbertPolynomial::from_basis(r.basis_coeffs, r.constraints)
    }
}

impl From<HilbertPolynomial> for HilbertRepr {
    fn from(h: HilbertPolynomial) -> Self {
        HilbertRepr {
            basis_coeffs: h.basis_coeffs,
            constraints: h.constraints,
        }
    }
}

fn basis(r: usize, i: usize) -> Polynomial {
    let k = (r - i) as i64;
    binomial_poly(k, k).expect("k ≥ 0")
}

impl HilbertPolynomial {
    pub fn from_basis(basis_coeffs: Vec<Polynomial>, constraints: Vec<(i64, i64)>) -> Self {
        let r = basis_coeffs.len() - 1;
        let poly = basis_coeffs
            .iter()
            .enumerate()
            .fold(Polynomial::zero(), |acc, (i, c)| acc + c * &basis(r, i));
        HilbertPolynomial {
            basis_coeffs,
            constraints,
            poly,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_coeffs.len() - 1
    }

    pub fn basis_coeffs(&self) -> &[Polynomial] {
        &self.basis_coeffs
    }

    pub fn constraints(&self) -> &[(i64, i64)] {
        &self.constraints
    }

    /// The expanded polynomial in t (and λ, g, ν).
    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// χ(O(tH)) at an integer twist.
    pub fn at(&self, t: i64) -> Polynomial {
        self.poly.evaluate(&Assignment::new().with(Var::T, t))
    }

    /// Hilbert polynomial of a general hyperplane section: P(t) − P(t−1).
    pub fn hyperplane_section(&self) -> Result<HilbertPolynomial> {
        if self.dim() == 0 {
            return Err(Error::Domain(
                "a zero-dimensional scheme has no hyperplane section".into(),
            ));
        }
        let coeffs = self.basis_coeffs[..self.dim()].to_vec();
        Ok(HilbertPolynomial::from_basis(coeffs, Vec::new()))
    }

    /// Effect of blowing up ν points: χ gains ν·C(t+r−1, r).
    pub fn blown_down(&self) -> HilbertPolynomial {
        let nu = Polynomial::var(Var::Nu);
        let mut coeffs = self.basis_coeffs.clone();
        coeffs[0] = &coeffs[0] + &nu;
        coeffs[1] = &coeffs[1] - &nu;
        HilbertPolynomial::from_basis(coeffs, self.constraints.clone())
    }

    /// χ(O), χ(O(H)), χ(O(−H)), χ(O(−2H)).
    pub fn chi_values(&self) -> ChiValues {
        ChiValues {
            chi0: self.at(0),
            chi_h: self.at(1),
            chi_minus_h: self.at(-1),
            chi_minus_2h: self.at(-2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiValues {
    pub chi0: Polynomial,
    pub chi_h: Polynomial,
    pub chi_minus_h: Polynomial,
    pub chi_minus_2h: Polynomial,
}

/// Exact values χ(O_B(k)) = C(n+k, n) − h⁰(I_B(k)) for twists where the
/// higher cohomology of the ideal sheaf vanishes.
///
/// h⁰(I_B(k)) is 0 below δ₁ and n+1 at δ₁; vanishing holds from k₀ on.
/// The highest r−1 such twists are used.
pub fn interpolation_constraints(cfg: &TransformationConfig) -> Result<Vec<(i64, i64)>> {
    let n = cfg.n();
    let needed = (cfg.r() - 1) as usize;
    let first = vanishing_threshold(cfg).max(0);
    let all: Vec<(i64, i64)> = (first..=cfg.delta1())
        .map(|k| {
            let sections = if k == cfg.delta1() { n + 1 } else { 0 };
            (k, binomial(n + k, n) - sections)
        })
        .collect();
    if all.len() < needed {
        return Err(Error::InvalidConfig(format!(
            "only {} interpolation twists available, {} needed",
            all.len(),
            needed
        )));
    }
    Ok(all[all.len() - needed..].to_vec())
}

/// Hilbert polynomial of the base locus in terms of λ and g.
pub fn hilbert_polynomial(cfg: &TransformationConfig) -> Result<HilbertPolynomial> {
    let r = cfg.r() as usize;
    let constraints = interpolation_constraints(cfg)?;
    let lambda = Polynomial::var(Var::Lambda);
    let genus = Polynomial::var(Var::Genus);
    let lead = lambda.clone();
    let second = &(&Polynomial::one() - &lambda) - &genus;

    let unknowns: Vec<String> = (2..=r).map(|i| format!("a{i}")).collect();
    let mut sys = LinearSystem::new(unknowns.clone())?;
    for &(t, value) in &constraints {
        let at = |i: usize| basis(r, i).evaluate(&Assignment::new().with(Var::T, t));
        let row = (2..=r).map(|i| at(i).constant_value().expect("constant")).collect();
        let rhs = &(&Polynomial::from(value) - &(&lead * &at(0))) - &(&second * &at(1));
        sys.push_row(format!("chi(O({t})) = {value}"), row, rhs)?;
    }
    let sol = solve_linear_system(&sys)?;
    let mut coeffs = vec![lead, second];
    coeffs.extend(unknowns.iter().map(|u| sol.get(u).expect("solved").clone()));
    Ok(HilbertPolynomial::from_basis(coeffs, constraints))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn constraints_for_builtins() {
        assert_eq!(
            interpolation_constraints(&TransformationConfig::cubic_p6()).unwrap(),
            vec![(2, 28), (3, 77)]
        );
        assert_eq!(
            interpolation_constraints(&TransformationConfig::cubo_cubic_p7()).unwrap(),
            vec![(1, 8), (2, 36), (3, 112)]
        );
    }

    #[test]
    fn just_below_delta1_is_the_full_space() {
        for cfg in [TransformationConfig::cubic_p6(), TransformationConfig::cubo_cubic_p7()] {
            let cs = interpolation_constraints(&cfg).unwrap();
            let k = cfg.delta1() - 1;
            let (_, v) = cs.iter().find(|(t, _)| *t == k).unwrap();
            assert_eq!(*v, binomial(cfg.n() + k, cfg.n()));
        }
    }

    #[test]
    fn threefold_hilbert_polynomial() {
        let h = hilbert_polynomial(&TransformationConfig::cubic_p6()).unwrap();
        assert_eq!(
            h.basis_coeffs(),
            &[
                p("lambda"),
                p("-lambda - g + 1"),
                p("-6lambda + 4g + 45"),
                p("14lambda - 6g - 113")
            ]
        );
        assert_eq!(h.at(3), p("77"));
        assert_eq!(h.at(2), p("28"));
        assert_eq!(h.at(0), p("8lambda - 3g - 67"));
        assert_eq!(h.at(0).eval_point(14, 15, None).unwrap(), 0.into());
        assert_eq!(h.at(-1), p("14lambda - 6g - 113"));
    }

    #[test]
    fn fourfold_hilbert_polynomial() {
        let h = hilbert_polynomial(&TransformationConfig::cubo_cubic_p7()).unwrap();
        assert_eq!(h.basis_coeffs()[2], p("-6lambda + 4g + 44"));
        assert_eq!(h.basis_coeffs()[3], p("14lambda - 6g - 110"));
        assert_eq!(h.basis_coeffs()[4], p("-11lambda + 4g + 92"));
        assert_eq!(h.at(1), p("8"));
        let section = h.hyperplane_section().unwrap();
        assert_eq!(section.at(0).eval_point(12, 10, None).unwrap(), 1.into());
        // first difference
        for t in -3..5 {
            assert_eq!(section.at(t), &h.at(t) - &h.at(t - 1));
        }
    }

    #[test]
    fn blow_down_shifts_by_points() {
        let h = hilbert_polynomial(&TransformationConfig::cubic_p6()).unwrap();
        let r = h.blown_down();
        let t = Polynomial::var(Var::T);
        let shift = (&(&t.pow(3) + &t.pow(2).scale(&3.into())) + &t.scale(&2.into()))
            .scale(&crate::exactq::Rational::new(1, 6).unwrap());
        assert_eq!(r.poly() - h.poly(), &Polynomial::var(Var::Nu) * &shift);
        for t in [0, -1, -2] {
            assert_eq!(r.at(t), h.at(t));
        }
        assert_eq!(r.at(-1).eval_point(13, 12, Some(0)).unwrap(), (-3).into());
    }
}
