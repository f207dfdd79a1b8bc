//! Linear differential operators `Σ r_k(var) D^k` with rational-function coefficients.

mod ladder;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::symcore::{MultiPoly, RatFunc, Rational, Symbol};

pub use ladder::{derive_q, verify_ladder, verify_tensor_integral, LadderCert, LadderChecks};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiffOpError {
    #[error("commutator with the Hamiltonian is not proportional to the operator")]
    NotALadder,
    #[error("deformed-oscillator relation `{relation}` fails; residual has order {residual_order}")]
    QMismatch {
        relation: &'static str,
        residual_order: usize,
        residual: String,
    },
    #[error("operators act on different variables ({0} and {1})")]
    VariableMismatch(Symbol, Symbol),
}

/// `Σ_k terms[k] · D^k` acting on functions of `var`.
#[derive(Clone, PartialEq)]
pub struct DiffOp {
    var: Symbol,
    terms: BTreeMap<usize, RatFunc>,
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    acc
}

impl DiffOp {
    pub fn zero(var: Symbol) -> Self {
        DiffOp {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(var: Symbol) -> Self {
        Self::mul(var, RatFunc::one())
    }

    /// Multiplication by `f`.
    pub fn mul(var: Symbol, f: RatFunc) -> Self {
        Self::from_terms(var, [(0, f)])
    }

    /// The derivative `d/dvar`.
    pub fn d(var: Symbol) -> Self {
        Self::from_terms(var, [(1, RatFunc::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, RatFunc)>>(var: Symbol, it: I) -> Self {
        let mut out = DiffOp::zero(var);
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// The Schrödinger operator `-(hbar^2/2) D^2 + potential`.
    pub fn hamiltonian(var: Symbol, potential: RatFunc) -> Self {
        let hbar2 = MultiPoly::var(Symbol::Hbar).pow(2);
        let kinetic = RatFunc::from_poly(hbar2.scale(&Rational::new((-1).into(), 2.into())));
        Self::from_terms(var, [(2, kinetic), (0, potential)])
    }

    fn add_term(&mut self, k: usize, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(RatFunc::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn var(&self) -> Symbol {
        self.var
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order; zero for the zero operator.
    pub fn order(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> RatFunc {
        self.terms.values().next_back().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &RatFunc) -> DiffOp {
        let mut out = DiffOp::zero(self.var);
        for (k, r) in &self.terms {
            out.add_term(*k, r * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rational) -> DiffOp {
        self.scale(&RatFunc::constant(c.clone()))
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.var, other.var, "operators on different variables");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            var: self.var,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    /// `self + c·identity`.
    pub fn shift(&self, c: &MultiPoly) -> DiffOp {
        self.add(&DiffOp::mul(self.var, RatFunc::from_poly(c.clone())))
    }

    /// Renames the active variable (coefficients are renamed along with it).
    pub fn rename(&self, to: Symbol) -> DiffOp {
        let from = self.var;
        let ren = |p: &MultiPoly| p.rename(from, to);
        DiffOp {
            var: to,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let r = RatFunc::new(ren(c.num()), ren(c.den())).expect("renaming keeps den");
                    (*k, r)
                })
                .collect(),
        }
    }

    /// Substitutes parameters inside every coefficient.
    pub fn substitute(&self, bindings: &[(Symbol, MultiPoly)]) -> Result<DiffOp, crate::symcore::SymError> {
        let mut out = DiffOp::zero(self.var);
        for (k, c) in &self.terms {
            out.add_term(*k, c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Applies the operator to a function of `var`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut deriv = f.clone();
        let mut k = 0;
        for (&ord, c) in &self.terms {
            while k < ord {
                deriv = deriv.derivative(self.var);
                k += 1;
            }
            acc = &acc + &(c * &deriv);
        }
        acc
    }
}

/// Operator product `f ∘ g` via the Leibniz rule.
pub fn compose(f: &DiffOp, g: &DiffOp) -> DiffOp {
    assert_eq!(f.var, g.var, "operators on different variables");
    let var = f.var;
    let max_k = f.order();
    let mut out: BTreeMap<usize, Vec<RatFunc>> = BTreeMap::new();
    for (&j, s) in &g.terms {
        // derivatives of s up to the order of f
        let mut ds = Vec::with_capacity(max_k + 1);
        ds.push(s.clone());
        for i in 1..=max_k {
            let next = ds[i - 1].derivative(var);
            ds.push(next);
        }
        for (&k, r) in &f.terms {
            for (i, dsi) in ds.iter().enumerate().take(k + 1) {
                if dsi.is_zero() {
                    continue;
                }
                let c = (r * dsi).scale(&binomial(k, i));
                out.entry(k - i + j).or_default().push(c);
            }
        }
    }
    let mut res = DiffOp::zero(var);
    for (ord, parts) in out {
        res.add_term(ord, sum_ratfuncs(parts));
    }
    res
}

/// Sums rational functions, grouping equal denominators first to limit gcd work.
fn sum_ratfuncs(parts: Vec<RatFunc>) -> RatFunc {
    let mut by_den: Vec<(MultiPoly, MultiPoly)> = Vec::new();
    for p in parts {
        match by_den.iter_mut().find(|(d, _)| d == p.den()) {
            Some((_, n)) => *n += p.num(),
            None => by_den.push((p.den().clone(), p.num().clone())),
        }
    }
    let mut acc = RatFunc::zero();
    for (d, n) in by_den {
        if n.is_zero() {
            continue;
        }
        let term = RatFunc::new(n, d).expect("non-zero denominator");
        acc = &acc + &term;
    }
    acc
}

/// `f∘g − g∘f`.
pub fn commutator(f: &DiffOp, g: &DiffOp) -> DiffOp {
    compose(f, g).sub(&compose(g, f))
}

/// Formal adjoint `Σ (−1)^k D^k ∘ r_k` for real coefficients.
pub fn adjoint(f: &DiffOp) -> DiffOp {
    let mut out = DiffOp::zero(f.var);
    let mut dk = DiffOp::identity(f.var);
    let d = DiffOp::d(f.var);
    let mut k = 0;
    for (&ord, r) in &f.terms {
        while k < ord {
            dk = compose(&d, &dk);
            k += 1;
        }
        let term = compose(&dk, &DiffOp::mul(f.var, r.clone()));
        out = if ord % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// Integer power by repeated composition.
pub fn power(f: &DiffOp, e: usize) -> DiffOp {
    let mut acc = DiffOp::identity(f.var);
    for _ in 0..e {
        acc = compose(&acc, f);
    }
    acc
}

/// Evaluates the univariate polynomial `q(energy)` at the operator `h`.
pub fn poly_of_operator(q: &MultiPoly, energy: Symbol, h: &DiffOp) -> DiffOp {
    let coeffs = q.coefficients_in(energy);
    let mut out = DiffOp::zero(h.var);
    let mut hk = DiffOp::identity(h.var);
    let mut k = 0;
    for (e, c) in coeffs {
        assert!(e >= 0, "negative power of the energy symbol");
        while k < e {
            hk = compose(&hk, h);
            k += 1;
        }
        out = out.add(&hk.scale(&RatFunc::from_poly(c)));
    }
    out
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{}]", c)?,
                1 => write!(f, "[{}]*D", c)?,
                _ => write!(f, "[{}]*D^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp<{}>({})", self.var, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{int, var};
    use Symbol::*;

    fn xmul() -> DiffOp {
        DiffOp::mul(X, RatFunc::from_poly(var(X)))
    }

    #[test]
    fn leibniz_on_multiplication() {
        let d = DiffOp::d(X);
        let lhs = compose(&d, &xmul());
        let expect = DiffOp::from_terms(X, [(1, RatFunc::from_poly(var(X))), (0, RatFunc::one())]);
        assert_eq!(lhs, expect);
        assert_eq!(compose(&xmul(), &d), DiffOp::from_terms(X, [(1, RatFunc::from_poly(var(X)))]));
    }

    #[test]
    fn canonical_pair() {
        assert_eq!(commutator(&DiffOp::d(X), &xmul()), DiffOp::identity(X));
        let h = DiffOp::hamiltonian(X, RatFunc::from_poly(var(X).pow(2)));
        assert!(commutator(&h, &h).is_zero());
    }

    #[test]
    fn adjoint_is_an_involution() {
        let f = DiffOp::from_terms(
            X,
            [
                (2, RatFunc::from_poly(var(X))),
                (1, RatFunc::new(MultiPoly::one(), &var(X).pow(2) - &var(Alpha)).unwrap()),
                (0, RatFunc::constant(int(3))),
            ],
        );
        assert_eq!(adjoint(&adjoint(&f)), f);
        // (x D)^+ = -D x = -x D - 1
        let xd = DiffOp::from_terms(X, [(1, RatFunc::from_poly(var(X)))]);
        let expect = DiffOp::from_terms(X, [(1, RatFunc::from_poly(-var(X))), (0, RatFunc::constant(int(-1)))]);
        assert_eq!(adjoint(&xd), expect);
    }

    #[test]
    fn polynomial_of_hamiltonian_has_additive_order() {
        let h = DiffOp::hamiltonian(X, RatFunc::from_poly(var(X).pow(2)));
        assert!(poly_of_operator(&MultiPoly::one(), E, &h) == DiffOp::identity(X));
        assert_eq!(poly_of_operator(&var(E).pow(2), E, &h).order(), 4);
    }

    #[test]
    fn apply_matches_direct_derivative() {
        let op = DiffOp::from_terms(X, [(2, RatFunc::one()), (0, RatFunc::from_poly(var(X)))]);
        let f = RatFunc::from_poly(var(X).pow(3));
        let expect = RatFunc::from_poly(&var(X).scale(&int(6)) + &var(X).pow(4));
        assert_eq!(op.apply(&f), expect);
    }
}
