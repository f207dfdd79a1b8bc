//! Multivariate polynomial gcd over the rationals via the recursive primitive
//! pseudo-remainder sequence, plus exact division.
//!
//! All routines here expect ordinary polynomials (non-negative exponents); Laurent inputs are
//! first shifted by their monomial content, which is a unit.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly};
use super::symbol::Symbol;
use super::Rational;

/// Splits `p = m * q` with `m` the monomial content; `q` has no monomial factor.
pub fn strip_monomial(p: &MultiPoly) -> (Monomial, MultiPoly) {
    let m = p.monomial_content();
    (m, p.mul_monomial(&m.inverse()))
}

/// Exact division of ordinary polynomials; `None` when `g` does not divide `f`.
pub fn exact_div(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    if g.is_zero() {
        return None;
    }
    if f.is_zero() {
        return Some(MultiPoly::zero());
    }
    if let Some(c) = g.as_constant() {
        return Some(f.scale(&c.recip()));
    }
    let (glm, glc) = {
        let (m, c) = g.leading_term().unwrap();
        (*m, c.clone())
    };
    let mut rem = f.clone();
    let mut quot = MultiPoly::zero();
    while let Some((lm, lc)) = rem.leading_term().map(|(m, c)| (*m, c.clone())) {
        if !glm.divides(&lm) {
            return None;
        }
        let tm = lm.div(&glm);
        let tc = lc / &glc;
        let t = MultiPoly::monomial(tc, tm);
        rem -= &(&t * g);
        quot += &t;
    }
    Some(quot)
}

fn main_variable(f: &MultiPoly, g: &MultiPoly) -> Option<Symbol> {
    let mut syms = f.symbols();
    syms.extend(g.symbols());
    syms.into_iter().next_back()
}

fn univariate(p: &MultiPoly, v: Symbol) -> BTreeMap<i32, MultiPoly> {
    p.coefficients_in(v)
}

fn lead_coeff(p: &MultiPoly, v: Symbol) -> (i32, MultiPoly) {
    let d = p.degree(v).unwrap_or(0);
    (d, p.coeff(v, d))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &MultiPoly, v: Symbol) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for c in univariate(p, v).into_values() {
        acc = gcd_poly(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    acc
}

fn primitive_part(p: &MultiPoly, v: Symbol) -> MultiPoly {
    if p.is_zero() {
        return MultiPoly::zero();
    }
    let c = content(p, v);
    exact_div(p, &c).expect("content divides its polynomial")
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: Symbol) -> MultiPoly {
    let (db, lb) = lead_coeff(b, v);
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let (dr, lr) = lead_coeff(&r, v);
        if dr < db {
            return r;
        }
        let shift = MultiPoly::monomial(Rational::one(), Monomial::var(v, dr - db));
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
}

/// Normalizes a gcd candidate so its lex-leading coefficient is one.
fn make_monic(p: MultiPoly) -> MultiPoly {
    match p.leading_term() {
        Some((_, c)) if !c.is_one() => {
            let inv = c.recip();
            p.scale(&inv)
        }
        _ => p,
    }
}

/// Gcd of two ordinary polynomials over the rationals, normalized to leading coefficient one.
pub fn gcd_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return make_monic(g.clone());
    }
    if g.is_zero() {
        return make_monic(f.clone());
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one();
    }
    if f == g {
        return make_monic(f.clone());
    }
    let v = match main_variable(f, g) {
        Some(v) => v,
        None => return MultiPoly::one(),
    };
    let f_in = f.depends_on(v);
    let g_in = g.depends_on(v);
    if !f_in && !g_in {
        unreachable!("main variable appears in at least one operand");
    }
    if !f_in {
        // gcd(f, g) = gcd(f, content_v(g)) when f is free of v
        return gcd_poly(f, &content(g, v));
    }
    if !g_in {
        return gcd_poly(&content(f, v), g);
    }
    let cf = content(f, v);
    let cg = content(g, v);
    let c = gcd_poly(&cf, &cg);
    let mut a = exact_div(f, &cf).expect("content divides");
    let mut b = exact_div(g, &cg).expect("content divides");
    if a.degree(v) < b.degree(v) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() && b.degree(v).unwrap_or(0) > 0 {
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = primitive_part(&r, v);
    }
    let g_v = if b.is_zero() {
        a
    } else {
        // b is a non-zero constant in v: the primitive parts are coprime
        MultiPoly::one()
    };
    let g_v = primitive_part(&g_v, v);
    make_monic(&c * &g_v)
}

/// Gcd over the Laurent ring: monomial factors are units and are discarded.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (_, f0) = strip_monomial(f);
    let (_, g0) = strip_monomial(g);
    gcd_poly(&f0, &g0)
}

/// True when `p` has a non-constant factor in common with `q`.
pub fn shares_factor(p: &MultiPoly, q: &MultiPoly) -> bool {
    !gcd(p, q).is_constant()
}

#[allow(dead_code)]
pub(crate) fn is_unit(p: &MultiPoly) -> bool {
    p.as_monomial().is_some() && !p.is_zero()
}

#[allow(dead_code)]
pub(crate) fn zero_check(p: &MultiPoly) -> bool {
    p.terms().all(|(_, c)| c.is_zero())
}
