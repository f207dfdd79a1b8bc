use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::symcore::{var, MultiPoly, SymError, Symbol};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("coefficient key `{0}` is not one of A0..A7")]
    BadKey(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("sqrt_delta squared does not equal delta")]
    InconsistentRoot,
}

/// `[A,B] = C`, `[A,C] = δ B`, `[B,C] = Σ_k c_k A^k` with `k ≤ 7`.
///
/// Coefficients are polynomials in `E` (the Hamiltonian) and the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    pub delta: MultiPoly,
    /// A square root of `delta` in the Laurent ring, when one is known.
    pub sqrt_delta: Option<MultiPoly>,
    pub coefficients: [MultiPoly; 8],
    /// Casimir value as a polynomial in `E`, when known.
    pub casimir: Option<MultiPoly>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    delta: MultiPoly,
    #[serde(default)]
    sqrt_delta: Option<MultiPoly>,
    coefficients: BTreeMap<String, MultiPoly>,
    #[serde(default)]
    casimir: Option<MultiPoly>,
}

impl AlgebraSpec {
    pub fn new(delta: MultiPoly, coefficients: [MultiPoly; 8]) -> Self {
        let sqrt_delta = monomial_sqrt(&delta);
        AlgebraSpec {
            delta,
            sqrt_delta,
            coefficients,
            casimir: None,
        }
    }

    /// Highest `k` with `c_k ≠ 0`, or `None` for the zero algebra.
    pub fn degree(&self) -> Option<usize> {
        (0..8).rev().find(|k| !self.coefficients[*k].is_zero())
    }

    /// `√δ` as a polynomial; the formal symbol `sqrt_delta` when no root is known.
    pub fn root(&self) -> MultiPoly {
        self.sqrt_delta.clone().unwrap_or_else(|| var(Symbol::SqrtDelta))
    }

    /// `Σ c_k A^k`.
    pub fn rhs(&self) -> MultiPoly {
        let a = var(Symbol::A);
        let mut acc = MultiPoly::zero();
        for (k, c) in self.coefficients.iter().enumerate() {
            acc += &(c * &a.pow(k as u32));
        }
        acc
    }

    pub fn with_casimir(mut self, k: MultiPoly) -> Self {
        self.casimir = Some(k);
        self
    }

    pub fn to_json(&self) -> String {
        let wire = Wire {
            delta: self.delta.clone(),
            sqrt_delta: self.sqrt_delta.clone(),
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| (format!("A{}", k), c.clone()))
                .collect(),
            casimir: self.casimir.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("plain data serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("round trip through our own output")
    }

    pub fn from_json(s: &str) -> Result<Self, SpecError> {
        let wire: Wire = serde_json::from_str(s)?;
        let mut coefficients: [MultiPoly; 8] = Default::default();
        for (key, c) in wire.coefficients {
            let k: usize = key
                .strip_prefix('A')
                .and_then(|d| d.parse().ok())
                .filter(|k| *k < 8)
                .ok_or_else(|| SpecError::BadKey(key.clone()))?;
            coefficients[k] = c;
        }
        let sqrt_delta = match wire.sqrt_delta {
            Some(r) => {
                if r.pow(2) != wire.delta {
                    return Err(SpecError::InconsistentRoot);
                }
                Some(r)
            }
            None => monomial_sqrt(&wire.delta),
        };
        Ok(AlgebraSpec {
            delta: wire.delta,
            sqrt_delta,
            coefficients,
            casimir: wire.casimir,
        })
    }
}

/// Square root of a single-term polynomial with a square rational coefficient and even
/// exponents. The positive root is chosen.
pub fn monomial_sqrt(p: &MultiPoly) -> Option<MultiPoly> {
    let (c, m) = p.as_monomial()?;
    if c <= num_traits::Zero::zero() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) != c.numer() || &(&d * &d) != c.denom() {
        return None;
    }
    let mut half = m;
    for e in half.0.iter_mut() {
        if *e % 2 != 0 {
            return None;
        }
        *e /= 2;
    }
    Some(MultiPoly::monomial(crate::symcore::Rational::new(n, d), half))
}
