use std::fmt;

use serde::Serialize;

use super::AlgebraSpec;
use crate::symcore::{int, var, MultiPoly, Rational, Symbol};

/// `K = C² − δ B² + f(A)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirExpr {
    pub delta: MultiPoly,
    /// `f(A)`, a polynomial in `A` with `f(0) = 0`.
    pub a_part: MultiPoly,
}

impl fmt::Display for CasimirExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^2 - ({})*B^2 + ({})", self.delta, self.a_part)
    }
}

fn binomial(n: i32, k: i32) -> Rational {
    let mut acc = int(1);
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// Solves `f(A + s) − f(A) = s (F(A) + F(A + s))` for `f` with `f(0) = 0`, where `F` is the
/// `[B,C]` polynomial and `s² = δ`.
///
/// This is the condition for `C² − δB² + f(A)` to commute with `B`; the result contains only
/// even powers of `s`, which are rewritten in terms of `δ`.
pub fn casimir_a_polynomial(spec: &AlgebraSpec) -> MultiPoly {
    casimir_a_polynomial_formal(spec).reduce_radical(Symbol::SqrtDelta, &spec.delta)
}

/// As [`casimir_a_polynomial`] but with `s` left as the formal symbol `sqrt_delta`.
pub fn casimir_a_polynomial_formal(spec: &AlgebraSpec) -> MultiPoly {
    let a = Symbol::A;
    let s = var(Symbol::SqrtDelta);
    let s_inv = s.inverse_monomial().expect("a symbol is a unit");
    let big_f = spec.rhs();
    let shifted = big_f
        .shift(a, &s)
        .expect("polynomial shift");
    let r = &s * &(&big_f + &shifted);
    let r_coeffs = r.coefficients_in(a);
    let mut f: Vec<MultiPoly> = vec![MultiPoly::zero(); 9];
    for j in (0..8).rev() {
        let mut rhs = r_coeffs.get(&(j as i32)).cloned().unwrap_or_default();
        for (i, fi) in f.iter().enumerate().skip(j + 2) {
            if fi.is_zero() {
                continue;
            }
            let term = (fi * &s.pow((i - j) as u32)).scale(&binomial(i as i32, j as i32));
            rhs -= &term;
        }
        let denom = int((j + 1) as i64).recip();
        f[j + 1] = (&rhs * &s_inv).scale(&denom);
    }
    let mut out = MultiPoly::zero();
    for (i, fi) in f.iter().enumerate() {
        out += &(fi * &var(a).pow(i as u32));
    }
    out
}

pub fn casimir(spec: &AlgebraSpec) -> CasimirExpr {
    CasimirExpr {
        delta: spec.delta.clone(),
        a_part: casimir_a_polynomial(spec),
    }
}
