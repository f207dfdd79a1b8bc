use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::{exact_div, gcd, strip_monomial};
use super::poly::{Bindings, MultiPoly};
use super::symbol::{Symbol, N_SYMBOLS};
use super::{Rational, SymError};

/// Quotient of two Laurent polynomials.
///
/// Canonical form: the denominator carries no monomial factor and has lex-leading coefficient
/// one; numerator and denominator are coprime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    /// Builds `num / den` and reduces to canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // move monomial content of den into num (it is a unit)
        let (dm, den) = strip_monomial(&den);
        let num = num.mul_monomial(&dm.inverse());
        if let Some(c) = den.as_constant() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: MultiPoly::one(),
            };
        }
        let (nm, num_core) = strip_monomial(&num);
        let g = gcd(&num_core, &den);
        let (num_core, den) = if g.is_constant() {
            (num_core, den)
        } else {
            (
                exact_div(&num_core, &g).expect("gcd divides numerator"),
                exact_div(&den, &g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_term().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.recip();
        RatFunc {
            num: num_core.mul_monomial(&nm).scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn depends_on(&self, sym: Symbol) -> bool {
        self.num.depends_on(sym) || self.den.depends_on(sym)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> RatFunc {
        if p.as_monomial().is_some() {
            return RatFunc {
                num: &self.num * p,
                den: self.den.clone(),
            };
        }
        Self::canonical(&self.num * p, self.den.clone())
    }

    pub fn recip(&self) -> Result<RatFunc, SymError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self, sym: Symbol) -> RatFunc {
        if !self.den.depends_on(sym) {
            return RatFunc {
                num: self.num.derivative(sym),
                den: self.den.clone(),
            };
        }
        let n = &(&self.num.derivative(sym) * &self.den) - &(&self.num * &self.den.derivative(sym));
        Self::canonical(n, &self.den * &self.den)
    }

    /// Exact equality by cross-multiplication.
    pub fn value_eq(&self, other: &RatFunc) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    pub fn substitute(&self, bindings: &[(Symbol, MultiPoly)]) -> Result<RatFunc, SymError> {
        let n = self.num.substitute(bindings)?;
        let d = self.den.substitute(bindings)?;
        RatFunc::new(n, d)
    }

    pub fn bind(&self, values: &Bindings) -> Result<RatFunc, SymError> {
        RatFunc::new(self.num.bind(values)?, self.den.bind(values)?)
    }

    pub fn eval_f64(&self, values: &[Option<f64>; N_SYMBOLS]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }
}

/// Reduces `f` so numerator and denominator are coprime as polynomials in `var`.
///
/// The gcd used here is the full multivariate one, which in particular removes every common
/// factor involving `var`.
pub fn univariate_gcd_reduce(f: &RatFunc, var: Symbol) -> RatFunc {
    let _ = var;
    RatFunc::canonical(f.num.clone(), f.den.clone())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::canonical(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::canonical(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = Result<RatFunc, SymError>;
    fn div(self, rhs: &'a RatFunc) -> Result<RatFunc, SymError> {
        if rhs.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
