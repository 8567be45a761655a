//! Exact rational arithmetic, sparse polynomials in the global variables
//! (λ, g, ν, t), and linear solving over their fraction field.

mod linsys;
mod parse;
mod poly;
mod rational;

pub use linsys::{solve_linear_system, Equation, LinearSystem, Solution};
pub use poly::{binomial, binomial_poly, Assignment, Monomial, Polynomial, Var};
pub use rational::Rational;
