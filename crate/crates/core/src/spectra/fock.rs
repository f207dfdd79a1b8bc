use serde::Serialize;

use super::roots::real_roots_f64;
use super::SpectraError;
use crate::catalog::AxisSpec;
use crate::symcore::{rat_to_f64, Bindings, Rational, Symbol};

/// Ladder chain of one axis: `bottom + k·|λ|` for `k < len` (`len = None` for unbounded).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockChain {
    pub bottom: f64,
    pub step: f64,
    pub len: Option<usize>,
}

impl FockChain {
    pub fn levels(&self, cap: usize) -> Vec<f64> {
        let n = self.len.map_or(cap, |l| l.min(cap));
        (0..n).map(|k| self.bottom + k as f64 * self.step).collect()
    }
}

fn univariate_in_e(axis: &AxisSpec, params: &Bindings) -> Result<(Vec<Rational>, Rational), SpectraError> {
    let q = axis.q.bind(params)?;
    let lambda = axis.lambda.eval_rational(params)?;
    let coeffs = q.coefficients_in(Symbol::E);
    let top = coeffs.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut out = vec![Rational::from_integer(0.into()); top + 1];
    for (k, c) in coeffs {
        let v = c.as_constant().ok_or_else(|| {
            SpectraError::Unbound(c.symbols().into_iter().next().unwrap_or(Symbol::E))
        })?;
        out[k as usize] = v;
    }
    Ok((out, lambda))
}

/// Fock chains of one axis from its factorization polynomial.
///
/// With raising step `λ`, the link weight `w(e) = Q(e + max(λ, 0))` is the squared norm of the
/// raised state. A chain bottom solves `w(E0 − |λ|) = 0` and is kept when `w(E0) ≥ 0`; the
/// chain stops at the first level with `w = 0`.
pub fn axis_fock_chains(axis: &AxisSpec, params: &Bindings, max_len: usize) -> Result<Vec<FockChain>, SpectraError> {
    let (q, lambda) = univariate_in_e(axis, params)?;
    let lam = rat_to_f64(&lambda);
    let step = lam.abs();
    let up = lam.max(0.0);
    let roots = real_roots_f64(&q).ok_or(SpectraError::AxisRoots(axis.var))?;
    let qf: Vec<f64> = q.iter().map(rat_to_f64).collect();
    let w = |e: f64| qf.iter().rev().fold(0.0, |acc, c| acc * (e + up) + c);
    let tol = 1e-9 * (1.0 + qf.iter().map(|c| c.abs()).fold(0.0, f64::max));
    let mut out: Vec<FockChain> = Vec::new();
    for r in roots {
        let bottom = r - lam.min(0.0);
        if out.iter().any(|c| (c.bottom - bottom).abs() < 1e-12) {
            continue;
        }
        if w(bottom) < -tol {
            continue;
        }
        let mut len = None;
        for k in 0..max_len {
            let e = bottom + k as f64 * step;
            let wk = w(e);
            if wk.abs() <= tol {
                len = Some(k + 1);
                break;
            }
            if wk < 0.0 {
                len = Some(k + 1);
                break;
            }
        }
        out.push(FockChain { bottom, step, len });
    }
    out.sort_by(|a, b| a.bottom.partial_cmp(&b.bottom).expect("finite"));
    Ok(out)
}

/// Sorted levels of one axis, at most `cap` from each chain.
pub fn axis_levels(axis: &AxisSpec, params: &Bindings, cap: usize) -> Result<Vec<f64>, SpectraError> {
    let mut v: Vec<f64> = axis_fock_chains(axis, params, cap)?
        .iter()
        .flat_map(|c| c.levels(cap))
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(v)
}

/// Lowest `count` two-dimensional levels `E_x + E_y`, with multiplicity.
pub fn separable_levels(x: &[f64], y: &[f64], count: usize) -> Vec<f64> {
    let mut all: Vec<f64> = x.iter().flat_map(|a| y.iter().map(move |b| a + b)).collect();
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    all.truncate(count);
    all
}
