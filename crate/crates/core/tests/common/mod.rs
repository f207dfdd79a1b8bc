//! Generators and oracles shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;

use siqs_core::catalog;
use siqs_core::diffop::DiffOp;
use siqs_core::oscalg::{derive_phi, ladder_phi_for, reduce_casimir, NOExpr, StructureFn};
use siqs_core::polyalgebra::{algebra_for, AlgebraSpec};
use siqs_core::symcore::{bindings, int, rat, var, Bindings, Monomial, MultiPoly, Rational, Symbol};

pub const SYMS: [Symbol; 5] = [Symbol::X, Symbol::Y, Symbol::E, Symbol::Hbar, Symbol::Alpha];

pub fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Up to `max_terms` terms over the given symbols, each exponent at most 2 and total degree ≤ 6.
pub fn poly_in(syms: &'static [Symbol], max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((small_rat(), prop::collection::vec(0i32..=2, syms.len())), 0..=max_terms).prop_map(
        move |terms| {
            let mut p = MultiPoly::zero();
            for (c, exps) in terms {
                if exps.iter().sum::<i32>() > 6 {
                    continue;
                }
                let pairs: Vec<(Symbol, i32)> = syms.iter().copied().zip(exps).collect();
                p.add_term(Monomial::from_pairs(&pairs), c);
            }
            p
        },
    )
}

pub fn poly() -> impl Strategy<Value = MultiPoly> {
    poly_in(&SYMS, 4)
}

/// Operator in `x` of order ≤ 2 with polynomial coefficients of degree ≤ 2 in `x`.
pub fn operator() -> impl Strategy<Value = DiffOp> {
    let c = || poly_in(&[Symbol::X, Symbol::Alpha], 3);
    (c(), c(), c()).prop_map(|(c0, c1, c2)| {
        DiffOp::from_terms(Symbol::X, [(0, c0.into()), (1, c1.into()), (2, c2.into())])
    })
}

/// Symbolic structure function in `N` with coefficients in `b` and `c`.
pub fn structure_fn() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((small_rat(), 0i32..=1, 0i32..=1), 1..=4).prop_map(|cs| {
        let mut p = MultiPoly::zero();
        for (k, (r, eb, ec)) in cs.into_iter().enumerate() {
            let m = Monomial::from_pairs(&[(Symbol::N, k as i32), (Symbol::B, eb), (Symbol::C, ec)]);
            p.add_term(m, r);
        }
        p
    })
}

/// A word over `b`, `b†` and `N`.
pub fn word(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 1..=max_len)
}

pub fn letter_expr(l: u8) -> NOExpr {
    match l {
        0 => NOExpr::b(),
        1 => NOExpr::bdag(),
        _ => NOExpr::scalar(var(Symbol::N)),
    }
}

/// Product of the letters, multiplied left to right.
pub fn word_expr(ls: &[u8], phi: &MultiPoly) -> NOExpr {
    ls.iter()
        .fold(NOExpr::scalar(MultiPoly::one()), |acc, l| acc.mul(&letter_expr(*l), phi))
}

/// The same product multiplied right to left.
pub fn word_expr_rev(ls: &[u8], phi: &MultiPoly) -> NOExpr {
    ls.iter()
        .rev()
        .fold(NOExpr::scalar(MultiPoly::one()), |acc, l| letter_expr(*l).mul(&acc, phi))
}

/// Algebra with `δ = 4` and random coefficients `c_k = r_k + r'_k E`, degree at most 7, plus a
/// Casimir value `k0 + k1 E`.
pub fn algebra() -> impl Strategy<Value = (AlgebraSpec, MultiPoly)> {
    (
        prop::collection::vec((small_rat(), small_rat()), 8),
        0usize..=7,
        small_rat(),
        small_rat(),
    )
        .prop_map(|(cs, top, k0, k1)| {
            let mut coeffs: [MultiPoly; 8] = Default::default();
            for (k, (a, b)) in cs.into_iter().enumerate().take(top + 1) {
                coeffs[k] = &MultiPoly::constant(a) + &var(Symbol::E).scale(&b);
            }
            let k = &MultiPoly::constant(k0) + &var(Symbol::E).scale(&k1);
            (AlgebraSpec::new(MultiPoly::int(4), coeffs), k)
        })
}

pub fn unit_params(alpha: i64) -> Bindings {
    bindings(&[(Symbol::Hbar, int(1)), (Symbol::Alpha, int(alpha))])
}

/// Structure function of a catalogued potential, the energy scale `s`, and whether the
/// conventional integral carries a factor `i`.
pub fn phi_of(name: &str) -> (StructureFn, MultiPoly, bool) {
    let spec = catalog::get(name).unwrap();
    let (triple, alg) = algebra_for(spec).unwrap();
    let k = reduce_casimir(&alg, &ladder_phi_for(spec, &triple)).unwrap();
    (derive_phi(&alg, &k).unwrap(), triple.s.clone(), spec.scaling.imaginary)
}

/// `σΦ` at bound parameters, expanded in `t = x + u` with one polynomial in `E` per power.
/// Only the expanded polynomial is used, never its factorisation.
pub struct ExpandedPhi {
    coeffs: Vec<MultiPoly>,
    sigma: Rational,
}

impl ExpandedPhi {
    pub fn new(name: &str, params: &Bindings) -> Self {
        let (phi, _, imaginary) = phi_of(name);
        let bound = phi.phi_t.bind(params).unwrap();
        let deg = bound.degree(Symbol::N).unwrap();
        ExpandedPhi {
            coeffs: (0..=deg).map(|k| bound.coeff(Symbol::N, k)).collect(),
            sigma: int(if imaginary { 1 } else { -1 }),
        }
    }

    pub fn at_energy(&self, e: &Rational) -> Vec<Rational> {
        let b = bindings(&[(Symbol::E, e.clone())]);
        self.coeffs
            .iter()
            .map(|c| c.eval_rational(&b).unwrap() * &self.sigma)
            .collect()
    }

    /// `Φ(0) = 0`, `Φ(p+1) = 0` and `σΦ(x) > 0` for `x = 1..p`, exactly.
    pub fn closes(&self, e: &Rational, u: &Rational, p: i64) -> bool {
        closes_with(&self.at_energy(e), u, p)
    }
}

pub fn horner(c: &[Rational], t: &Rational) -> Rational {
    c.iter().rev().fold(int(0), |acc, k| acc * t + k)
}

pub fn closes_with(c: &[Rational], u: &Rational, p: i64) -> bool {
    horner(c, u) == int(0)
        && horner(c, &(u + int(p + 1))) == int(0)
        && (1..=p).all(|x| horner(c, &(u + int(x))) > int(0))
}
