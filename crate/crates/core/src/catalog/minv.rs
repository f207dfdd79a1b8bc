//! Numeric minimum of a separable potential by dense sampling plus golden-section refinement.

use super::{AxisSpec, CatalogError, Domain, PotentialSpec};
use crate::symcore::gcd::{exact_div, gcd};
use crate::symcore::{Bindings, MultiPoly, RatFunc, Symbol, N_SYMBOLS};

#[derive(Debug, Clone)]
pub struct MinVOptions {
    /// Sampling covers `[-half_width, half_width]` (or `(0, half_width]` on a half-line).
    pub half_width: f64,
    pub samples: usize,
    /// Restrict to the singularity-free cell around the origin instead of failing.
    pub central_cell: bool,
}

impl Default for MinVOptions {
    fn default() -> Self {
        MinVOptions {
            half_width: 50.0,
            samples: 10_000,
            central_cell: false,
        }
    }
}

struct Univariate {
    var: Symbol,
    f: RatFunc,
}

impl Univariate {
    fn eval(&self, t: f64) -> f64 {
        let mut vals = [None; N_SYMBOLS];
        vals[self.var.index()] = Some(t);
        self.f.eval_f64(&vals)
    }
}

fn eval_poly(p: &MultiPoly, var: Symbol, t: f64) -> f64 {
    let mut vals = [None; N_SYMBOLS];
    vals[var.index()] = Some(t);
    p.eval_f64(&vals)
}

/// Real roots of `p` in `[lo, hi]` located by sign changes of its square-free part.
pub(crate) fn real_roots(p: &MultiPoly, var: Symbol, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    if p.degree(var).unwrap_or(0) == 0 {
        return vec![];
    }
    let g = gcd(p, &p.derivative(var));
    let sf = exact_div(p, &g).unwrap_or_else(|| p.clone());
    let f = |t: f64| eval_poly(&sf, var, t);
    let mut roots = Vec::new();
    let step = (hi - lo) / samples as f64;
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=samples {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let (mut l, mut r, mut fl) = (a, b, fa);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                let fm = f(m);
                if fm == 0.0 || (r - l) < 1e-15 * (1.0 + m.abs()) {
                    l = m;
                    r = m;
                    break;
                }
                if fm.signum() == fl.signum() {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(a);
    }
    roots
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-12 * (1.0 + c.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Minimum of one axis potential: `(argmin, value)`.
pub fn axis_minimum(axis: &AxisSpec, params: &Bindings, opts: &MinVOptions) -> Result<(f64, f64), CatalogError> {
    let var = axis.var;
    let bound = axis
        .potential
        .bind(params)
        .map_err(|_| CatalogError::SingularOnDomain(var))?;
    for s in bound.num().symbols().into_iter().chain(bound.den().symbols()) {
        if s != var {
            return Err(CatalogError::Unbound(s));
        }
    }
    let pole_at_origin = bound.num().min_degree(var).unwrap_or(0) < 0;
    let w = opts.half_width;
    let (mut lo, mut hi) = match axis.domain {
        Domain::FullLine => (-w, w),
        Domain::HalfLinePositive => (0.0, w),
    };
    let roots = real_roots(bound.den(), var, -w, w, opts.samples.max(1000));
    let inside: Vec<f64> = roots.iter().copied().filter(|r| *r > lo && *r < hi).collect();
    let origin_inside = axis.domain == Domain::FullLine && pole_at_origin;
    if !inside.is_empty() || origin_inside {
        if !opts.central_cell || origin_inside {
            return Err(CatalogError::SingularOnDomain(var));
        }
        let left = inside.iter().copied().filter(|r| *r < 0.0).fold(lo, f64::max);
        let right = inside.iter().copied().filter(|r| *r > 0.0).fold(hi, f64::min);
        lo = left;
        hi = right;
    }
    let u = Univariate { var, f: bound };
    let n = opts.samples.max(10);
    let step = (hi - lo) / n as f64;
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..n {
        let t = lo + step * (i as f64 + 0.5);
        let v = u.eval(t);
        if v.is_finite() && v < best.0 {
            best = (v, i);
        }
    }
    if !best.0.is_finite() {
        return Err(CatalogError::SingularOnDomain(var));
    }
    let center = lo + step * (best.1 as f64 + 0.5);
    let a = (center - step).max(lo + 1e-12 * step);
    let b = (center + step).min(hi - 1e-12 * step);
    let (x, v) = golden_section(|t| u.eval(t), a, b);
    if v <= best.0 {
        Ok((x, v))
    } else {
        Ok((center, best.0))
    }
}

/// `min V = min g1 + min g2` for the separable potential.
pub fn min_potential(spec: &PotentialSpec, params: &Bindings, opts: &MinVOptions) -> Result<f64, CatalogError> {
    let (_, vx) = axis_minimum(&spec.x_axis, params, opts)?;
    let (_, vy) = axis_minimum(&spec.y_axis, params, opts)?;
    Ok(vx + vy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get;
    use crate::symcore::{bindings, int};

    #[test]
    fn oscillator_minimum_is_zero() {
        let s = get("ho2d").unwrap();
        let v = min_potential(s, &bindings(&[(Symbol::Hbar, int(1)), (Symbol::Omega, int(1))]), &MinVOptions::default())
            .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn real_alpha_is_singular_without_central_cell() {
        let s = get("p6").unwrap();
        let p = bindings(&[(Symbol::Hbar, int(1)), (Symbol::Alpha, int(1))]);
        assert!(matches!(
            min_potential(s, &p, &MinVOptions::default()),
            Err(CatalogError::SingularOnDomain(_))
        ));
        let opts = MinVOptions {
            central_cell: true,
            ..MinVOptions::default()
        };
        let v = min_potential(s, &p, &opts).unwrap();
        assert!((v - 4.0).abs() < 1e-9, "{v}");
    }
}
