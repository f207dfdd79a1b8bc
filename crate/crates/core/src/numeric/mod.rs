//! Finite-difference spectra of the one-dimensional factors and their separable sums.

mod tridiag;

use serde::Serialize;

use crate::catalog::minv::real_roots;
use crate::catalog::{AxisSpec, Domain};
use crate::symcore::{rat_to_f64, Bindings, Symbol, N_SYMBOLS};

pub use tridiag::{count_below, lowest_eigenvalues};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("potential is singular on the grid near x = {0}")]
    SingularPotentialOnGrid(f64),
    #[error("eigenvalue {index} moved by {shift:e} under refinement; grid too coarse")]
    ConvergenceFailure { index: usize, shift: f64 },
    #[error("grid needs at least 200 interior points, got {0}")]
    TooFewPoints(usize),
    #[error("parameter `{0}` must be bound")]
    Unbound(Symbol),
}

/// Uniform interior grid with Dirichlet ends at `lo` and `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self, NumericError> {
        if n_points < 200 {
            return Err(NumericError::TooFewPoints(n_points));
        }
        Ok(Grid1D { lo, hi, n_points })
    }

    /// Symmetric box for full-line axes, `(0, half_width]` for half-line ones.
    pub fn for_domain(domain: Domain, half_width: f64, n_points: usize) -> Result<Self, NumericError> {
        match domain {
            Domain::FullLine => Self::new(-half_width, half_width, n_points),
            Domain::HalfLinePositive => Self::new(0.0, half_width, n_points),
        }
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points + 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..=self.n_points).map(move |k| self.lo + h * k as f64)
    }

    /// Same box with the spacing halved.
    pub fn refined(&self) -> Grid1D {
        Grid1D {
            n_points: 2 * self.n_points + 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    /// Best estimates: extrapolated when available, raw otherwise.
    pub eigenvalues: Vec<f64>,
    pub raw: Vec<f64>,
    pub extrapolated: Option<Vec<f64>>,
    pub grid: Grid1D,
}

pub struct SolveOptions {
    pub richardson: bool,
    /// Largest tolerated change of an eigenvalue between the two grids.
    pub max_shift: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            richardson: true,
            max_shift: 1e-2,
        }
    }
}

fn param_values(params: &Bindings) -> [Option<f64>; N_SYMBOLS] {
    let mut v = [None; N_SYMBOLS];
    for (s, r) in params {
        v[s.index()] = Some(rat_to_f64(r));
    }
    v
}

/// Potential samples on the grid; fails on a pole inside the box.
fn sample_potential(axis: &AxisSpec, params: &Bindings, grid: &Grid1D) -> Result<Vec<f64>, NumericError> {
    let mut vals = param_values(params);
    let pot = &axis.potential;
    for s in pot.num().symbols().into_iter().chain(pot.den().symbols()) {
        if s != axis.var && vals[s.index()].is_none() {
            return Err(NumericError::Unbound(s));
        }
    }
    let den = pot.den().bind(params).map_err(|_| NumericError::Unbound(axis.var))?;
    let h = grid.spacing();
    let poles = real_roots(&den, axis.var, grid.lo + 0.5 * h, grid.hi - 0.5 * h, 4 * grid.n_points);
    if let Some(x) = poles.first() {
        return Err(NumericError::SingularPotentialOnGrid(*x));
    }
    let mut out = Vec::with_capacity(grid.n_points);
    for x in grid.points() {
        vals[axis.var.index()] = Some(x);
        let v = pot.eval_f64(&vals);
        if !v.is_finite() {
            return Err(NumericError::SingularPotentialOnGrid(x));
        }
        out.push(v);
    }
    Ok(out)
}

fn solve_on(axis: &AxisSpec, params: &Bindings, grid: &Grid1D, k: usize) -> Result<Vec<f64>, NumericError> {
    let hbar = params.get(&Symbol::Hbar).map(rat_to_f64).unwrap_or(1.0);
    let h = grid.spacing();
    let kin = hbar * hbar / (h * h);
    let diag: Vec<f64> = sample_potential(axis, params, grid)?
        .into_iter()
        .map(|v| v + kin)
        .collect();
    let off = vec![-0.5 * kin; grid.n_points - 1];
    Ok(lowest_eigenvalues(&diag, &off, k))
}

/// Lowest `k` eigenvalues of `−(ħ²/2) d²/dx² + V` with second-order central differences.
pub fn solve_1d(axis: &AxisSpec, params: &Bindings, grid: Grid1D, k: usize, opts: &SolveOptions) -> Result<EigenResult, NumericError> {
    let raw = solve_on(axis, params, &grid, k)?;
    if !opts.richardson {
        return Ok(EigenResult {
            eigenvalues: raw.clone(),
            raw,
            extrapolated: None,
            grid,
        });
    }
    let fine = solve_on(axis, params, &grid.refined(), k)?;
    let mut ext = Vec::with_capacity(raw.len());
    for (i, (c, f)) in raw.iter().zip(&fine).enumerate() {
        let shift = (f - c).abs();
        if shift > opts.max_shift {
            return Err(NumericError::ConvergenceFailure { index: i, shift });
        }
        ext.push((4.0 * f - c) / 3.0);
    }
    Ok(EigenResult {
        eigenvalues: ext.clone(),
        raw,
        extrapolated: Some(ext),
        grid,
    })
}

/// A two-dimensional level `E = E_x[i] + E_y[j]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub i: usize,
    pub j: usize,
}

/// All sums up to `e_max`, ascending.
pub fn assemble_2d(ex: &[f64], ey: &[f64], e_max: f64) -> Vec<Level> {
    let mut out: Vec<Level> = ex
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            ey.iter().enumerate().map(move |(j, b)| Level {
                energy: a + b,
                i,
                j,
            })
        })
        .filter(|l| l.energy <= e_max)
        .collect();
    out.sort_by(|a, b| a.energy.partial_cmp(&b.energy).expect("finite").then(a.i.cmp(&b.i)));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub numeric: f64,
    pub algebraic: Option<f64>,
    pub residual: f64,
    pub branch: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumComparison {
    pub rows: Vec<ComparisonRow>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Algebraic energies inside the numeric window that no numeric level matched.
    pub unmatched_algebraic: Vec<(f64, String)>,
}

/// Nearest algebraic energy for every numeric one; passes iff every residual is below `tol`.
pub fn compare_spectra(numeric: &[f64], algebraic: &[(f64, String)], tol: f64) -> SpectrumComparison {
    let mut rows = Vec::with_capacity(numeric.len());
    let mut max_residual: f64 = 0.0;
    for &e in numeric {
        let best = algebraic
            .iter()
            .min_by(|a, b| (a.0 - e).abs().partial_cmp(&(b.0 - e).abs()).expect("finite"));
        let (alg, res, branch) = match best {
            Some((a, label)) => (Some(*a), (a - e).abs(), Some(label.clone())),
            None => (None, f64::INFINITY, None),
        };
        max_residual = max_residual.max(res);
        rows.push(ComparisonRow {
            numeric: e,
            algebraic: alg,
            residual: res,
            branch,
        });
    }
    let top = numeric.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let unmatched_algebraic = algebraic
        .iter()
        .filter(|(a, _)| *a <= top + tol)
        .filter(|(a, _)| numeric.iter().all(|e| (e - a).abs() >= tol))
        .cloned()
        .collect();
    SpectrumComparison {
        rows,
        max_residual,
        tol,
        pass: !numeric.is_empty() && max_residual < tol,
        unmatched_algebraic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assembly_counts_multiplicity() {
        let l = assemble_2d(&[0.5, 1.5], &[0.5, 1.5], 2.5);
        let e: Vec<f64> = l.iter().map(|x| x.energy).collect();
        assert_eq!(e, vec![1.0, 2.0, 2.0]);
        assert!(assemble_2d(&[0.5], &[], 10.0).is_empty());
    }

    #[test]
    fn comparison_reports_shift() {
        let alg: Vec<(f64, String)> = [1.0, 2.0].iter().map(|e| (*e, "b".to_string())).collect();
        let same = compare_spectra(&[1.0, 2.0], &alg, 1e-3);
        assert!(same.pass);
        assert_eq!(same.max_residual, 0.0);
        let shifted = compare_spectra(&[1.1, 2.1], &alg, 1e-3);
        assert!(!shifted.pass);
        assert!((shifted.max_residual - 0.1).abs() < 1e-12);
    }

    #[test]
    fn small_grids_are_rejected() {
        assert_eq!(Grid1D::new(0.0, 1.0, 10), Err(NumericError::TooFewPoints(10)));
    }
}
