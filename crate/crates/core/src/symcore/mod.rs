//! Exact arithmetic substrate: rationals, Laurent polynomials over a fixed symbol table,
//! and rational functions.

pub mod gcd;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod symbol;

pub use num_rational::BigRational as Rational;
pub use parse::{parse_poly, parse_rational};
pub use poly::{int, rat, rat_to_f64, Bindings, Monomial, MultiPoly};
pub use ratfunc::{univariate_gcd_reduce, RatFunc};
pub use symbol::{Symbol, N_SYMBOLS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative power of `{0}` requires a single-term replacement")]
    NonMonomialInverse(Symbol),
    #[error("polynomial is not a unit of the Laurent ring")]
    NotAUnit,
    #[error("symbol `{0}` is unbound")]
    Unbound(Symbol),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience: the variable `sym` as a polynomial.
pub fn var(sym: Symbol) -> MultiPoly {
    MultiPoly::var(sym)
}

/// Builds a binding table from `(symbol, value)` pairs.
pub fn bindings(pairs: &[(Symbol, Rational)]) -> Bindings {
    pairs.iter().cloned().collect()
}
