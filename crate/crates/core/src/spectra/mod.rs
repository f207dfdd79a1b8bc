//! Finite-dimensional unitary representations of the oscillator realization and the energy
//! levels they carry.
//!
//! With `Φ(x) = L·Π(x + u − r_i(E))`, a representation of dimension `p + 1` needs `Φ(0) = 0`,
//! `Φ(p+1) = 0` and positive norms `σΦ(x) > 0` at `x = 1..p`. Setting `u = r_i(E)` gives the
//! first condition and `r_j(E) − r_i(E) = p + 1` the second.

mod fock;
mod printed;
mod report;
pub mod roots;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogError;
use crate::oscalg::{OscError, StructureFn};
use crate::polyalgebra::AlgebraError;
use crate::symcore::gcd::exact_div;
use crate::symcore::{int, rat_to_f64, var, Bindings, MultiPoly, Rational, SymError, Symbol};

pub use fock::{axis_fock_chains, axis_levels, separable_levels, FockChain};
pub use printed::{printed_branches, PRange, PrintedBranch};
pub use report::{build_report, ReportOptions, SpectrumReport};
use roots::rational_roots;

#[derive(Debug, thiserror::Error)]
pub enum SpectraError {
    #[error("structure function does not split into factors linear in E: {0}")]
    NotLinearlyFactorable(String),
    #[error("parameter `{0}` must be bound")]
    Unbound(Symbol),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("could not locate the ladder roots of the {0} axis")]
    AxisRoots(Symbol),
    #[error("the real-parameter branch needs alpha > 0, got {0}")]
    WrongAlphaSign(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Osc(#[from] OscError),
    #[error("structure function from the Casimir disagrees with the ladder one")]
    PhiMismatch,
}

/// `r(E) = κ·E/scale + ρ`, a root of `Φ` as a value of `x + u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearRoot {
    pub kappa: Rational,
    pub rho: Rational,
}

/// `Φ = leading · Π (t − r_i(E))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootList {
    pub leading: MultiPoly,
    /// Energy unit: roots are rational-linear in `E/scale`.
    pub scale: MultiPoly,
    pub roots: Vec<LinearRoot>,
}

impl RootList {
    /// `r_i(E)` as a polynomial in `E` and the parameters.
    pub fn root_expr(&self, i: usize) -> MultiPoly {
        let r = &self.roots[i];
        let inv = self.scale.inverse_monomial().expect("scale is a monomial");
        &(&var(Symbol::E) * &inv).scale(&r.kappa) + &MultiPoly::constant(r.rho.clone())
    }

    /// `leading · Π(t − r_i)` with `t` carried by `N`.
    pub fn expand(&self) -> MultiPoly {
        let t = var(Symbol::N);
        (0..self.roots.len()).fold(self.leading.clone(), |acc, i| &acc * &(&t - &self.root_expr(i)))
    }

    /// Human-readable product form.
    pub fn factored(&self) -> String {
        let mut s = format!("({})", self.leading);
        for i in 0..self.roots.len() {
            s.push_str(&format!("*(x+u-({}))", self.root_expr(i)));
        }
        s
    }
}

/// Splits `Φ` into factors linear in `E/scale` with rational coefficients.
pub fn factor_phi(phi: &StructureFn, scale: &MultiPoly) -> Result<RootList, SpectraError> {
    let t = Symbol::N;
    let eps = Symbol::X;
    let d = phi.degree();
    if d <= 0 {
        return Ok(RootList {
            leading: phi.phi_t.clone(),
            scale: scale.clone(),
            roots: Vec::new(),
        });
    }
    let leading = phi.coeff(d);
    let fail = |why: &str| SpectraError::NotLinearlyFactorable(why.to_string());
    if leading.as_monomial().is_none() {
        return Err(fail("leading coefficient is not a single term"));
    }
    if scale.inverse_monomial().is_none() {
        return Err(fail("energy scale is not a single term"));
    }
    let monic = phi.phi_t.div_monomial(&leading)?;
    let p = monic.substitute(&[(Symbol::E, &var(eps) * scale)])?;
    if let Some(s) = p.symbols().into_iter().find(|s| *s != t && *s != eps) {
        return Err(fail(&format!("coefficients depend on {s}")));
    }
    // slopes from the top homogeneous part, offsets from E = 0
    let mut top = vec![Rational::from_integer(0.into()); d as usize + 1];
    for (m, c) in p.terms() {
        if m.exp(t) + m.exp(eps) == d {
            top[m.exp(t) as usize] = c.clone();
        }
    }
    let at_zero = p.substitute(&[(eps, MultiPoly::zero())])?;
    let mut base = vec![Rational::from_integer(0.into()); d as usize + 1];
    for (k, c) in at_zero.coefficients_in(t) {
        base[k as usize] = c.as_constant().unwrap_or_default();
    }
    let (kappas, _) = rational_roots(&top);
    let (mut rhos, _) = rational_roots(&base);
    if kappas.len() != d as usize || rhos.len() != d as usize {
        return Err(fail("missing rational roots"));
    }
    let mut rem = p.clone();
    let mut roots = Vec::new();
    for kappa in kappas {
        let hit = rhos.iter().enumerate().find_map(|(idx, rho)| {
            let f = &(&var(t) - &var(eps).scale(&kappa)) - &MultiPoly::constant(rho.clone());
            exact_div(&rem, &f).map(|q| (idx, q))
        });
        let (idx, q) = hit.ok_or_else(|| fail("no matching offset for a slope"))?;
        roots.push(LinearRoot {
            kappa: kappa.clone(),
            rho: rhos.remove(idx),
        });
        rem = q;
    }
    if !rem.is_one() {
        return Err(fail("residual factor after division"));
    }
    roots.sort();
    let out = RootList {
        leading,
        scale: scale.clone(),
        roots,
    };
    debug_assert_eq!(out.expand(), phi.phi_t);
    Ok(out)
}

/// `E(p) = slope·p + intercept` (also used for `u(p)`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Law {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Law {
    pub fn at(&self, p: u32) -> Rational {
        &self.slope * int(p as i64) + &self.intercept
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_integer::Integer;
        let den = self.slope.denom().lcm(self.intercept.denom());
        let a = (&self.slope * Rational::from(den.clone())).to_integer();
        let b = (&self.intercept * Rational::from(den.clone())).to_integer();
        let mut num = String::new();
        let zero = num_bigint::BigInt::from(0);
        let one = num_bigint::BigInt::from(1);
        if a == one {
            num.push('p');
        } else if a == -one.clone() {
            num.push_str("-p");
        } else if a != zero {
            num.push_str(&format!("{a}p"));
        }
        if b != zero {
            if num.is_empty() {
                num = b.to_string();
            } else if b > zero {
                num.push_str(&format!("+{b}"));
            } else {
                num.push_str(&b.to_string());
            }
        }
        if num.is_empty() {
            num.push('0');
        }
        if den == one {
            write!(f, "{num}")
        } else if a != zero && b != zero {
            write!(f, "({num})/{den}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

impl Serialize for Law {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A root list with every parameter bound: `r_i(E) = k_i E + ρ_i`.
#[derive(Debug, Clone)]
pub struct BoundRoots {
    pub leading: Rational,
    /// `+1` when the realization's `B` is Hermitian, `−1` when `−b` is the adjoint of `b†`.
    pub sigma: Rational,
    pub slopes: Vec<Rational>,
    pub offsets: Vec<Rational>,
    pub exprs: Vec<String>,
}

impl BoundRoots {
    pub fn new(list: &RootList, params: &Bindings, sigma: Rational) -> Result<Self, SpectraError> {
        let scale = list.scale.eval_rational(params)?;
        let leading = list.leading.eval_rational(params)?;
        Ok(BoundRoots {
            leading,
            sigma,
            slopes: list.roots.iter().map(|r| &r.kappa / &scale).collect(),
            offsets: list.roots.iter().map(|r| r.rho.clone()).collect(),
            exprs: (0..list.roots.len()).map(|i| list.root_expr(i).to_string()).collect(),
        })
    }

    fn root_at(&self, i: usize, e: &Rational) -> Rational {
        &self.slopes[i] * e + &self.offsets[i]
    }

    /// `σΦ(x)` at energy `e` and shift `u`.
    pub fn norm(&self, x: &Rational, u: &Rational, e: &Rational) -> Rational {
        let mut acc = &self.sigma * &self.leading;
        for i in 0..self.slopes.len() {
            acc *= x + u - self.root_at(i, e);
        }
        acc
    }

    fn norm_f64(&self, x: f64, u: f64, e: f64) -> f64 {
        let mut acc = rat_to_f64(&self.sigma) * rat_to_f64(&self.leading);
        for i in 0..self.slopes.len() {
            acc *= x + u - (rat_to_f64(&self.slopes[i]) * e + rat_to_f64(&self.offsets[i]));
        }
        acc
    }

    /// Factors of `σΦ(x)` at a representation point, as `(coefficient of x, constant)`.
    fn factored_at(&self, u: &Rational, e: &Rational) -> String {
        let mut s = format!("{}", &self.sigma * &self.leading);
        for i in 0..self.slopes.len() {
            let c = u - self.root_at(i, e);
            let zero = Rational::from_integer(0.into());
            if c == zero {
                s.push_str("*x");
            } else if c > zero {
                s.push_str(&format!("*(x+{c})"));
            } else {
                s.push_str(&format!("*(x-{})", -c));
            }
        }
        s
    }
}

/// One `(u, E)` branch of representations.
#[derive(Debug, Clone, Serialize)]
pub struct RepSolution {
    pub u_root: usize,
    pub target_root: usize,
    /// `u = r_i(E)` as an expression.
    pub u_branch: String,
    pub energy: Law,
    pub u_law: Law,
    /// `p` with `σΦ(x) > 0` at `x = 1..p`.
    pub p_validity: Vec<u32>,
    /// `p` with `σΦ > 0` on the whole open interval `(0, p+1)`.
    pub strict_validity: Vec<u32>,
    /// `p_validity` after the minimum-potential filter.
    pub admitted: Vec<u32>,
    /// `σΦ(x)` in product form for the first admitted dimensions.
    pub phi_p: BTreeMap<u32, String>,
}

impl RepSolution {
    pub fn energy_at(&self, p: u32) -> Rational {
        self.energy.at(p)
    }
}

/// Root pair with equal slopes: `r_j − r_i` is a constant `p + 1`, so every energy closes a
/// representation of that dimension and the algebra alone does not fix `E`.
#[derive(Debug, Clone, Serialize)]
pub struct DegenerateFamily {
    pub u_root: usize,
    pub target_root: usize,
    pub u_branch: String,
    pub p: u32,
    /// Energies from the axis ladder spectra that pass the norm test, when available.
    pub resolved: Vec<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Enumeration {
    pub branches: Vec<RepSolution>,
    pub families: Vec<DegenerateFamily>,
}

/// Positivity of `σΦ` on `(0, p+1)` via its sign between consecutive real zeros.
fn strictly_positive(b: &BoundRoots, u: &Rational, e: &Rational, p: u32) -> bool {
    let zero = Rational::from_integer(0.into());
    let hi = int(p as i64 + 1);
    let mut cuts: Vec<Rational> = (0..b.slopes.len())
        .map(|i| b.root_at(i, e) - u)
        .filter(|z| *z > zero && *z < hi)
        .collect();
    cuts.push(zero.clone());
    cuts.push(hi);
    cuts.sort();
    cuts.dedup();
    cuts.windows(2).all(|w| {
        let mid = (&w[0] + &w[1]) / int(2);
        b.norm(&mid, u, e) > zero
    })
}

fn branch(b: &BoundRoots, i: usize, j: usize, p_max: u32) -> Option<RepSolution> {
    let dk = &b.slopes[j] - &b.slopes[i];
    let zero = Rational::from_integer(0.into());
    if dk == zero {
        return None;
    }
    let d_rho = &b.offsets[j] - &b.offsets[i];
    let energy = Law {
        slope: dk.recip(),
        intercept: (int(1) - d_rho) / &dk,
    };
    let u_law = Law {
        slope: &b.slopes[i] * &energy.slope,
        intercept: &b.slopes[i] * &energy.intercept + &b.offsets[i],
    };
    let mut p_validity = Vec::new();
    let mut strict_validity = Vec::new();
    let mut phi_p = BTreeMap::new();
    for p in 0..=p_max {
        let e = energy.at(p);
        let u = u_law.at(p);
        let ok = (1..=p).all(|x| b.norm(&int(x as i64), &u, &e) > zero);
        if ok {
            p_validity.push(p);
            if phi_p.len() < 4 {
                phi_p.insert(p, b.factored_at(&u, &e));
            }
        }
        if strictly_positive(b, &u, &e, p) {
            strict_validity.push(p);
        }
    }
    Some(RepSolution {
        u_root: i,
        target_root: j,
        u_branch: b.exprs[i].clone(),
        energy,
        u_law,
        admitted: p_validity.clone(),
        p_validity,
        strict_validity,
        phi_p,
    })
}

/// All branches over ordered root pairs, deduplicated by `(E(p), u(p))`; branches with no
/// admissible `p` are dropped.
pub fn enumerate_reps(b: &BoundRoots, p_max: u32) -> Enumeration {
    let n = b.slopes.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
        .collect();
    let found: Vec<RepSolution> = pairs
        .par_iter()
        .filter_map(|&(i, j)| branch(b, i, j, p_max))
        .filter(|r| !r.p_validity.is_empty())
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut branches = Vec::new();
    for r in found {
        if seen.insert((r.energy.clone(), r.u_law.clone())) {
            branches.push(r);
        }
    }
    branches.sort_by(|a, b| (&a.energy, &a.u_law).cmp(&(&b.energy, &b.u_law)));

    let mut families = Vec::new();
    let mut fam_seen = std::collections::HashSet::new();
    for &(i, j) in &pairs {
        if b.slopes[i] != b.slopes[j] {
            continue;
        }
        let gap = &b.offsets[j] - &b.offsets[i] - int(1);
        if let Some(p) = roots::as_small_int(&gap) {
            if p >= 0 && p as u32 <= p_max && fam_seen.insert((b.slopes[i].clone(), b.offsets[i].clone(), p)) {
                families.push(DegenerateFamily {
                    u_root: i,
                    target_root: j,
                    u_branch: b.exprs[i].clone(),
                    p: p as u32,
                    resolved: Vec::new(),
                });
            }
        }
    }
    Enumeration { branches, families }
}

/// Fixes family energies from a list of candidate levels (for example the separable axis
/// spectrum): keeps those with positive norms at `x = 1..p`.
pub fn resolve_families(b: &BoundRoots, families: &mut [DegenerateFamily], candidates: &[f64]) {
    for fam in families.iter_mut() {
        let i = fam.u_root;
        let mut out: Vec<f64> = candidates
            .iter()
            .copied()
            .filter(|&e| {
                let u = rat_to_f64(&b.slopes[i]) * e + rat_to_f64(&b.offsets[i]);
                (1..=fam.p).all(|x| b.norm_f64(x as f64, u, e) > 0.0)
            })
            .collect();
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        fam.resolved = out;
    }
}

/// A representation removed by the minimum-potential filter.
#[derive(Debug, Clone, Serialize)]
pub struct Dropped {
    pub energy_law: Law,
    pub u_law: Law,
    pub p: u32,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterOutcome {
    pub dropped: Vec<Dropped>,
    /// Set when no minimum was available and nothing was filtered.
    pub skipped: bool,
}

/// Drops representations with `E < vmin − tol`; branches left without any `p` are removed.
pub fn spurious_filter(reps: &mut Vec<RepSolution>, vmin: Option<f64>, tol: f64) -> FilterOutcome {
    let Some(vmin) = vmin else {
        return FilterOutcome {
            dropped: Vec::new(),
            skipped: true,
        };
    };
    let mut dropped = Vec::new();
    for r in reps.iter_mut() {
        let mut keep = Vec::new();
        for &p in &r.admitted {
            let e = rat_to_f64(&r.energy.at(p));
            if e < vmin - tol {
                dropped.push(Dropped {
                    energy_law: r.energy.clone(),
                    u_law: r.u_law.clone(),
                    p,
                    energy: e,
                });
            } else {
                keep.push(p);
            }
        }
        r.admitted = keep;
        r.phi_p.retain(|p, _| r.admitted.contains(p));
    }
    reps.retain(|r| !r.admitted.is_empty());
    FilterOutcome {
        dropped,
        skipped: false,
    }
}

/// [`enumerate_reps`] for real `a`, i.e. `alpha > 0`.
pub fn real_a_branch(list: &RootList, params: &Bindings, sigma: Rational, p_max: u32) -> Result<Enumeration, SpectraError> {
    let alpha = params.get(&Symbol::Alpha).ok_or(SpectraError::Unbound(Symbol::Alpha))?;
    if *alpha <= Rational::from_integer(0.into()) {
        return Err(SpectraError::WrongAlphaSign(alpha.to_string()));
    }
    Ok(enumerate_reps(&BoundRoots::new(list, params, sigma)?, p_max))
}
