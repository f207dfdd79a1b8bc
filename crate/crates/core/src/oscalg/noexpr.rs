use std::collections::BTreeMap;
use std::fmt;

use crate::symcore::{MultiPoly, Symbol};

/// Normal-ordered element `Σ f_{p,q}(N) · b†^p · b^q` of a deformed oscillator algebra.
///
/// Since `b†b = Φ(N)`, a fully reduced word never has both `p > 0` and `q > 0`; products are
/// always returned in that form.
#[derive(Clone, PartialEq, Default)]
pub struct NOExpr {
    terms: BTreeMap<(u32, u32), MultiPoly>,
}

fn shift_n(f: &MultiPoly, by: i64) -> MultiPoly {
    if by == 0 {
        return f.clone();
    }
    f.shift(Symbol::N, &MultiPoly::int(by))
        .expect("shift by a constant")
}

/// `b†^p b^q = Φ(N−p+1) · b†^{p−1} b^{q−1}`, repeated until one side is exhausted.
fn collapse((p, q): (u32, u32), mut coef: MultiPoly, phi: &MultiPoly) -> ((u32, u32), MultiPoly) {
    let r = p.min(q);
    for j in 0..r as i64 {
        coef = &coef * &shift_n(phi, 1 - p as i64 + j);
    }
    ((p - r, q - r), coef)
}

impl NOExpr {
    pub fn zero() -> Self {
        NOExpr::default()
    }

    /// A function of `N` alone.
    pub fn scalar(f: MultiPoly) -> Self {
        Self::word(f, 0, 0)
    }

    pub fn word(f: MultiPoly, p: u32, q: u32) -> Self {
        let mut out = NOExpr::zero();
        out.add_term((p, q), f);
        out
    }

    pub fn b() -> Self {
        Self::word(MultiPoly::one(), 0, 1)
    }

    pub fn bdag() -> Self {
        Self::word(MultiPoly::one(), 1, 0)
    }

    fn add_term(&mut self, key: (u32, u32), f: MultiPoly) {
        if f.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot += &f;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &MultiPoly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The `N`-function if no ladder words remain.
    pub fn as_scalar(&self) -> Option<MultiPoly> {
        match self.terms.len() {
            0 => Some(MultiPoly::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &NOExpr) -> NOExpr {
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.add_term(*k, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &NOExpr) -> NOExpr {
        self.add(&other.scale(&MultiPoly::int(-1)))
    }

    /// Left multiplication by a coefficient free of `N`.
    pub fn scale(&self, c: &MultiPoly) -> NOExpr {
        let mut out = NOExpr::zero();
        for (k, f) in &self.terms {
            out.add_term(*k, f * c);
        }
        out
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> NOExpr {
        let mut out = NOExpr::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, f(c));
        }
        out
    }

    /// Product in normal order given the structure function `phi(N)`.
    ///
    /// `(f b†^p b^q)(g b†^r b^s) = f · g(N − p + q) · (b†^p b^q b†^r b^s)`, and the middle
    /// `b^q b†^r` collapses to a product of shifted `phi` values.
    pub fn mul(&self, other: &NOExpr, phi: &MultiPoly) -> NOExpr {
        let mut out = NOExpr::zero();
        for (&(p, q), f) in &self.terms {
            for (&(r, s), g) in &other.terms {
                let g_moved = shift_n(g, q as i64 - p as i64);
                let mut coef = f * &g_moved;
                let key = if q >= r {
                    for k in 1..=r as i64 {
                        coef = &coef * &shift_n(phi, k - p as i64 + q as i64 - r as i64);
                    }
                    (p, q - r + s)
                } else {
                    for k in 1..=q as i64 {
                        coef = &coef * &shift_n(phi, k - p as i64);
                    }
                    (p + r - q, s)
                };
                let (key, coef) = collapse(key, coef, phi);
                out.add_term(key, coef);
            }
        }
        out
    }

    pub fn commutator(&self, other: &NOExpr, phi: &MultiPoly) -> NOExpr {
        self.mul(other, phi).sub(&other.mul(self, phi))
    }
}

/// `b†^p` as a normal-ordered word; `b^q` likewise.
pub fn ladder_power(raise: bool, k: u32) -> NOExpr {
    if raise {
        NOExpr::word(MultiPoly::one(), k, 0)
    } else {
        NOExpr::word(MultiPoly::one(), 0, k)
    }
}

impl fmt::Display for NOExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((p, q), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if *p > 0 {
                write!(f, "*bdag^{}", p)?;
            }
            if *q > 0 {
                write!(f, "*b^{}", q)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NOExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NOExpr({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{int, var};

    fn phi() -> MultiPoly {
        // a generic cubic in N
        &(&var(Symbol::N).pow(3) - &var(Symbol::N).scale(&int(2))) + &MultiPoly::int(5)
    }

    #[test]
    fn b_moves_past_functions_of_n() {
        let lhs = NOExpr::b().mul(&NOExpr::scalar(var(Symbol::N)), &phi());
        let expect = NOExpr::word(&var(Symbol::N) + &MultiPoly::one(), 0, 1);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn products_of_ladders_give_phi() {
        let bdb = NOExpr::bdag().mul(&NOExpr::b(), &phi());
        assert_eq!(bdb.as_scalar().unwrap(), phi());
        let bbd = NOExpr::b().mul(&NOExpr::bdag(), &phi());
        assert_eq!(bbd.as_scalar().unwrap(), shift_n(&phi(), 1));
    }

    #[test]
    fn b_bdag_commutator_is_phi_difference() {
        let c = NOExpr::b().commutator(&NOExpr::bdag(), &phi());
        let expect = &shift_n(&phi(), 1) - &phi();
        assert_eq!(c.as_scalar().unwrap(), expect);
    }

    #[test]
    fn mixed_words_collapse() {
        // b†² b² = Φ(N−1) Φ(N)
        let w = ladder_power(true, 2).mul(&ladder_power(false, 2), &phi());
        assert_eq!(w.as_scalar().unwrap(), &shift_n(&phi(), -1) * &phi());
    }
}
