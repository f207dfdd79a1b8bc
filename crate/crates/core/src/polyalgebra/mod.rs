//! Integrals built from ladder products and the polynomial algebra they close into.
//!
//! With `W = X†^m Y^n` (raising on x, lowering on y) and `s = 2(m λx + n λy)`:
//! `[A, W] = s W`, `I1 = c (W − W†)`, `I2 = [A, I1] = c s (W + W†)`, `[A, I2] = s² I1`,
//! and `[I1, I2] = ±2 s c² (W W† − W† W)`, where both products are polynomials in `Hx`, `Hy`.

mod casimir;
mod spec;

use serde::Serialize;

use crate::catalog::{PotentialSpec, Scaling};
use crate::diffop::{verify_tensor_integral, DiffOpError};
use crate::symcore::{int, var, MultiPoly, Rational, Symbol};

pub use casimir::{casimir, casimir_a_polynomial, casimir_a_polynomial_formal, CasimirExpr};
pub use spec::{monomial_sqrt, AlgebraSpec, SpecError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("resonance ({0}, {1}) is not supported; only (1,1) and (2,1) close into an algebra here")]
    UnsupportedResonance(usize, usize),
    #[error("ladder products do not commute with the Hamiltonian at resonance ({0}, {1})")]
    NotAnIntegral(usize, usize),
    #[error(transparent)]
    Ladder(#[from] DiffOpError),
    #[error("[B,C] has degree {0} in A; at most 7 is supported")]
    DegreeTooHigh(i32),
    #[error("[B,C] contains a negative power of A")]
    NegativePower,
}

/// `w·W + w_dag·W†`, a formal element of the span of the two ladder words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bilinear {
    pub w: MultiPoly,
    pub w_dag: MultiPoly,
}

impl Bilinear {
    /// `[A, ·]` using `[A, W] = s W` and `[A, W†] = −s W†`.
    pub fn commute_with_a(&self, s: &MultiPoly) -> Bilinear {
        Bilinear {
            w: s * &self.w,
            w_dag: -(s * &self.w_dag),
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> Bilinear {
        Bilinear {
            w: c * &self.w,
            w_dag: c * &self.w_dag,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegralTriple {
    pub m: usize,
    pub n: usize,
    pub lambda_x: MultiPoly,
    pub lambda_y: MultiPoly,
    /// Eigenvalue of `[A, ·]` on `W`.
    pub s: MultiPoly,
    pub delta: MultiPoly,
    pub scaling: Scaling,
    pub i1: Bilinear,
    pub i2: Bilinear,
}

impl IntegralTriple {
    /// Whether `[A, I1] = I2` and `[A, I2] = δ I1` hold as formal identities.
    pub fn relations_hold(&self) -> bool {
        self.i1.commute_with_a(&self.s) == self.i2
            && self.i2.commute_with_a(&self.s) == self.i1.scale(&self.delta)
    }

    /// Sign picked up by `c²` when the scaling carries `i`.
    pub fn scaling_sign(&self) -> Rational {
        if self.scaling.imaginary {
            int(-1)
        } else {
            int(1)
        }
    }
}

/// Builds `A`, `I1`, `I2` for a catalogued potential after certifying that the ladder product
/// commutes with the Hamiltonian.
pub fn build_integrals(spec: &PotentialSpec) -> Result<IntegralTriple, AlgebraError> {
    let (m, n) = spec.resonance;
    if !matches!((m, n), (1, 1) | (2, 1)) {
        return Err(AlgebraError::UnsupportedResonance(m, n));
    }
    let hx = spec.x_axis.hamiltonian();
    let hy = spec.y_axis.hamiltonian();
    if !verify_tensor_integral(&hx, &hy, &spec.x_axis.aplus, &spec.y_axis.aplus, m, n)? {
        return Err(AlgebraError::NotAnIntegral(m, n));
    }
    Ok(triple_from_ladders(
        &spec.x_axis.lambda,
        &spec.y_axis.lambda,
        m,
        n,
        spec.scaling.clone(),
    ))
}

/// The formal integrals for given ladder eigenvalues; no certification.
pub fn triple_from_ladders(
    lambda_x: &MultiPoly,
    lambda_y: &MultiPoly,
    m: usize,
    n: usize,
    scaling: Scaling,
) -> IntegralTriple {
    let mi = int(m as i64);
    let ni = int(n as i64);
    let s = (&lambda_x.scale(&mi) + &lambda_y.scale(&ni)).scale(&int(2));
    let c = scaling.factor.clone();
    let i1 = Bilinear {
        w: c.clone(),
        w_dag: -&c,
    };
    let i2 = i1.commute_with_a(&s);
    IntegralTriple {
        m,
        n,
        lambda_x: lambda_x.clone(),
        lambda_y: lambda_y.clone(),
        delta: s.pow(2),
        s,
        scaling,
        i1,
        i2,
    }
}

/// `Π_{k in ks} q(e + k·λ)`.
fn shifted_product(q: &MultiPoly, e: Symbol, at: &MultiPoly, lambda: &MultiPoly, ks: &[i64]) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for &k in ks {
        let point = at + &lambda.scale(&int(k));
        let v = q.substitute(&[(e, point)]).expect("polynomial substitution");
        acc = &acc * &v;
    }
    acc
}

/// `W W†` and `W† W` as polynomials in `hx`, `hy` (arbitrary expressions).
pub fn ladder_products(
    q: &MultiPoly,
    s_poly: &MultiPoly,
    lambda_x: &MultiPoly,
    lambda_y: &MultiPoly,
    m: usize,
    n: usize,
    hx: &MultiPoly,
    hy: &MultiPoly,
) -> (MultiPoly, MultiPoly) {
    let e = Symbol::E;
    let (m, n) = (m as i64, n as i64);
    let down_x: Vec<i64> = (0..m).map(|k| -k).collect();
    let up_x: Vec<i64> = (1..=m).collect();
    let up_y: Vec<i64> = (1..=n).collect();
    let down_y: Vec<i64> = (0..n).map(|k| -k).collect();
    // W W† = X†^m X^m · Y^n Y†^n
    let wwd = &shifted_product(q, e, hx, lambda_x, &down_x) * &shifted_product(s_poly, e, hy, lambda_y, &up_y);
    // W† W = X^m X†^m · Y†^n Y^n
    let wdw = &shifted_product(q, e, hx, lambda_x, &up_x) * &shifted_product(s_poly, e, hy, lambda_y, &down_y);
    (wwd, wdw)
}

/// `Hx = (H + A/2)/2`, `Hy = (H − A/2)/2`.
pub fn axis_energies_in_h_a() -> (MultiPoly, MultiPoly) {
    let h = var(Symbol::H);
    let a_half = var(Symbol::A).scale(&crate::symcore::rat(1, 2));
    let half = crate::symcore::rat(1, 2);
    ((&h + &a_half).scale(&half), (&h - &a_half).scale(&half))
}

/// `[I1, I2]` in the conventional normalization as a polynomial in `H`, `A` and parameters.
pub fn commutator_rhs(spec: &PotentialSpec) -> Result<MultiPoly, AlgebraError> {
    let t = build_integrals(spec)?;
    Ok(rhs_from_data(&t, &spec.x_axis.q, &spec.y_axis.q))
}

/// As [`commutator_rhs`] but from raw ladder data.
pub fn rhs_from_data(t: &IntegralTriple, q: &MultiPoly, s_poly: &MultiPoly) -> MultiPoly {
    let (hx, hy) = axis_energies_in_h_a();
    let (wwd, wdw) = ladder_products(q, s_poly, &t.lambda_x, &t.lambda_y, t.m, t.n, &hx, &hy);
    let c2 = t.scaling.factor.pow(2).scale(&t.scaling_sign());
    let pref = (&c2 * &t.s).scale(&int(2));
    &pref * &(&wwd - &wdw)
}

/// Collects `rhs` into the `[B,C] = Σ c_k A^k` template, renaming `H` to `E`.
pub fn to_algebra_spec(rhs: &MultiPoly, delta: &MultiPoly, sqrt_delta: Option<MultiPoly>) -> Result<AlgebraSpec, AlgebraError> {
    if let Some(d) = rhs.degree(Symbol::A) {
        if d > 7 {
            return Err(AlgebraError::DegreeTooHigh(d));
        }
    }
    if rhs.min_degree(Symbol::A).unwrap_or(0) < 0 {
        return Err(AlgebraError::NegativePower);
    }
    let mut coefficients: [MultiPoly; 8] = Default::default();
    for (k, c) in rhs.coefficients_in(Symbol::A) {
        coefficients[k as usize] = c.rename(Symbol::H, Symbol::E);
    }
    Ok(AlgebraSpec {
        delta: delta.clone(),
        sqrt_delta,
        coefficients,
        casimir: None,
    })
}

/// Full pipeline for a catalogued potential: integrals, right-hand side and template.
pub fn algebra_for(spec: &PotentialSpec) -> Result<(IntegralTriple, AlgebraSpec), AlgebraError> {
    let t = build_integrals(spec)?;
    let rhs = rhs_from_data(&t, &spec.x_axis.q, &spec.y_axis.q);
    let alg = to_algebra_spec(&rhs, &t.delta, Some(t.s.clone()))?;
    Ok((t, alg))
}
