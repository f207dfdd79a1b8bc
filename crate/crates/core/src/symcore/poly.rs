use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::symbol::{Symbol, N_SYMBOLS};
use super::{Rational, SymError};

pub type Bindings = BTreeMap<Symbol, Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector with one signed slot per registered symbol.
///
/// Negative exponents are allowed: the coefficient ring is the Laurent ring over the symbol
/// table, in which every monomial is a unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub [i32; N_SYMBOLS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; N_SYMBOLS])
    }

    pub fn var(sym: Symbol, exp: i32) -> Self {
        let mut m = Self::one();
        m.0[sym.index()] = exp;
        m
    }

    pub fn from_pairs(pairs: &[(Symbol, i32)]) -> Self {
        let mut m = Self::one();
        for &(s, e) in pairs {
            m.0[s.index()] += e;
        }
        m
    }

    #[inline]
    pub fn exp(&self, sym: Symbol) -> i32 {
        self.0[sym.index()]
    }

    #[inline]
    pub fn with_exp(mut self, sym: Symbol, e: i32) -> Self {
        self.0[sym.index()] = e;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o += e;
        }
        out
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o -= e;
        }
        out
    }

    pub fn inverse(&self) -> Monomial {
        Monomial::one().div(self)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o = (*o).min(*e);
        }
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// True when `self` divides `other` inside the ordinary (non-Laurent) polynomial ring.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for sym in Symbol::ALL {
            let e = self.exp(sym);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", sym)?;
            } else {
                write!(f, "{}^{}", sym, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn rat(n: i64, d: i64) -> Self {
        Self::constant(rat(n, d))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::monomial(Rational::one(), Monomial::var(sym, 1))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// `c * prod(sym^e)`.
    pub fn term(c: Rational, pairs: &[(Symbol, i32)]) -> Self {
        Self::monomial(c, Monomial::from_pairs(pairs))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// `Some((c, m))` when the polynomial is a single non-zero term.
    pub fn as_monomial(&self) -> Option<(Rational, Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *m))
        } else {
            None
        }
    }

    /// Lex-largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse in the Laurent ring; defined only for single-term polynomials.
    pub fn inverse_monomial(&self) -> Option<MultiPoly> {
        let (c, m) = self.as_monomial()?;
        Some(MultiPoly::monomial(c.recip(), m.inverse()))
    }

    /// Exact division by a unit of the Laurent ring (single non-zero term).
    pub fn div_monomial(&self, divisor: &MultiPoly) -> Result<MultiPoly, SymError> {
        let inv = divisor
            .inverse_monomial()
            .ok_or(SymError::NotAUnit)?;
        Ok(self * &inv)
    }

    pub fn depends_on(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|m| m.exp(sym) != 0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for sym in Symbol::ALL {
                if m.exp(sym) != 0 {
                    out.insert(sym);
                }
            }
        }
        out
    }

    /// Largest exponent of `sym`, `None` for the zero polynomial.
    pub fn degree(&self, sym: Symbol) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(sym)).max()
    }

    pub fn min_degree(&self, sym: Symbol) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(sym)).min()
    }

    /// Coefficient of `sym^k`, as a polynomial in the remaining symbols.
    pub fn coeff(&self, sym: Symbol, k: i32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(sym) == k)
                .map(|(m, c)| (m.with_exp(sym, 0), c.clone()))
                .collect(),
        }
    }

    /// Collects by powers of `sym`.
    pub fn coefficients_in(&self, sym: Symbol) -> BTreeMap<i32, MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(sym))
                .or_default()
                .add_term(m.with_exp(sym, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients(sym: Symbol, coeffs: &BTreeMap<i32, MultiPoly>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (&k, c) in coeffs {
            for (m, v) in c.terms() {
                out.add_term(m.mul(&Monomial::var(sym, k)), v.clone());
            }
        }
        out
    }

    pub fn derivative(&self, sym: Symbol) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(sym);
            if e != 0 {
                out.add_term(m.with_exp(sym, e - 1), c * int(e as i64));
            }
        }
        out
    }

    pub fn rename(&self, from: Symbol, to: Symbol) -> MultiPoly {
        if from == to {
            return self.clone();
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(from);
            let nm = m.with_exp(from, 0);
            let nm = nm.with_exp(to, nm.exp(to) + e);
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Simultaneous substitution `sym -> replacement`.
    ///
    /// A negative power of a substituted symbol is only allowed when its replacement is a
    /// single term (a unit of the Laurent ring).
    pub fn substitute(&self, bindings: &[(Symbol, MultiPoly)]) -> Result<MultiPoly, SymError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut power_cache: Vec<BTreeMap<i32, MultiPoly>> = vec![BTreeMap::new(); bindings.len()];
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut factor = MultiPoly::constant(c.clone());
            for (slot, (sym, rep)) in bindings.iter().enumerate() {
                let e = m.exp(*sym);
                if e == 0 {
                    continue;
                }
                rest = rest.with_exp(*sym, 0);
                let p = match power_cache[slot].get(&e) {
                    Some(p) => p.clone(),
                    None => {
                        let p = if e > 0 {
                            rep.pow(e as u32)
                        } else {
                            rep.inverse_monomial()
                                .ok_or(SymError::NonMonomialInverse(*sym))?
                                .pow((-e) as u32)
                        };
                        power_cache[slot].insert(e, p.clone());
                        p
                    }
                };
                factor = &factor * &p;
            }
            out += &factor.mul_monomial(&rest);
        }
        Ok(out)
    }

    /// `sym -> sym + by`.
    pub fn shift(&self, sym: Symbol, by: &MultiPoly) -> Result<MultiPoly, SymError> {
        self.substitute(&[(sym, &MultiPoly::var(sym) + by)])
    }

    /// Partial numeric evaluation: every bound symbol is replaced by its rational value.
    pub fn bind(&self, values: &Bindings) -> Result<MultiPoly, SymError> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = *m;
            for (&sym, v) in values {
                let e = m.exp(sym);
                if e == 0 {
                    continue;
                }
                rest = rest.with_exp(sym, 0);
                coeff *= rat_pow(v, e)?;
            }
            out.add_term(rest, coeff);
        }
        Ok(out)
    }

    pub fn eval_rational(&self, values: &Bindings) -> Result<Rational, SymError> {
        let bound = self.bind(values)?;
        match bound.as_constant() {
            Some(c) => Ok(c),
            None => Err(SymError::Unbound(
                bound.symbols().into_iter().next().unwrap_or(Symbol::E),
            )),
        }
    }

    /// Floating-point evaluation. Unset slots are treated as unbound and yield NaN.
    pub fn eval_f64(&self, values: &[Option<f64>; N_SYMBOLS]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c);
            for sym in Symbol::ALL {
                let e = m.exp(sym);
                if e != 0 {
                    match values[sym.index()] {
                        Some(v) => t *= v.powi(e),
                        None => return f64::NAN,
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// Applies `sym^2 -> square` repeatedly, leaving at most a linear power of `sym`.
    pub fn reduce_radical(&self, sym: Symbol, square: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut cache: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(sym);
            if (0..=1).contains(&e) {
                out.add_term(*m, c.clone());
                continue;
            }
            // e = 2k + r with r in {0, 1}; negative powers are left alone
            if e < 0 {
                out.add_term(*m, c.clone());
                continue;
            }
            let k = e / 2;
            let r = e % 2;
            let pow = cache.entry(k).or_insert_with(|| square.pow(k as u32)).clone();
            let rest = m.with_exp(sym, r);
            out += &pow.mul_monomial(&rest).scale(c);
        }
        out
    }

    /// Minimum exponent per symbol across all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(*first, |acc, m| acc.gcd(m)),
        }
    }

    /// Total degree of the polynomial in the listed symbols.
    pub fn total_degree_in(&self, syms: &[Symbol]) -> i32 {
        self.terms
            .keys()
            .map(|m| syms.iter().map(|s| m.exp(*s)).sum::<i32>())
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn rat_pow(v: &Rational, e: i32) -> Result<Rational, SymError> {
    if e >= 0 {
        Ok(num_traits::pow(v.clone(), e as usize))
    } else if v.is_zero() {
        Err(SymError::DivisionByZero)
    } else {
        Ok(num_traits::pow(v.recip(), (-e) as usize))
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down huge operands before dividing
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &'a MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &'a MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Symbol> for MultiPoly {
    fn from(s: Symbol) -> Self {
        MultiPoly::var(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::*;

    fn v(s: Symbol) -> MultiPoly {
        MultiPoly::var(s)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&v(X) + &MultiPoly::one()) * &(&v(X) - &MultiPoly::one());
        let expect = &v(X).pow(2) - &MultiPoly::one();
        assert_eq!(p, expect);
    }

    #[test]
    fn zero_annihilates() {
        let p = &v(X).pow(3) + &v(Hbar).scale(&rat(3, 7));
        assert!((&p * &MultiPoly::zero()).is_zero());
    }

    #[test]
    fn linear_shift_substitution() {
        // 2H - lambda with H -> H + lambda
        let lam = v(E);
        let p = &v(H).scale(&int(2)) - &lam;
        let shifted = p.shift(H, &lam).unwrap();
        assert_eq!(shifted, &v(H).scale(&int(2)) + &lam);
    }

    #[test]
    fn evaluation_at_zero() {
        let p = &(&v(X) * &v(P)) + &MultiPoly::int(7);
        let q = p.substitute(&[(X, MultiPoly::zero())]).unwrap();
        assert_eq!(q, MultiPoly::int(7));
    }

    #[test]
    fn identity_substitution_is_noop() {
        let p = &v(X).pow(3) - &(&v(Alpha) * &v(Y));
        assert_eq!(p.substitute(&[(X, v(X)), (Y, v(Y))]).unwrap(), p);
    }

    #[test]
    fn laurent_inverse_and_radical() {
        let a = v(Alpha);
        let inv = a.inverse_monomial().unwrap();
        assert!((&a * &inv).is_one());
        let s = v(SqrtDelta);
        let delta = MultiPoly::int(4);
        assert_eq!(s.pow(5).reduce_radical(SqrtDelta, &delta), s.scale(&int(16)));
    }

    #[test]
    fn negative_power_needs_monomial_replacement() {
        let p = v(Alpha).inverse_monomial().unwrap();
        let err = p.substitute(&[(Alpha, &v(Alpha) + &MultiPoly::one())]);
        assert!(matches!(err, Err(SymError::NonMonomialInverse(Alpha))));
    }

    #[test]
    fn display_is_readable() {
        let p = &v(E).pow(2).scale(&rat(-3, 2)) + &MultiPoly::int(1);
        assert_eq!(p.to_string(), "-3/2*E^2 + 1");
    }
}

impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        super::parse::parse_poly(&s).map_err(serde::de::Error::custom)
    }
}
