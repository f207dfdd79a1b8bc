use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::Serialize;

use super::printed::{printed_branches, printed_structure_constants};
use super::{
    axis_levels, enumerate_reps, factor_phi, resolve_families, separable_levels, spurious_filter, BoundRoots,
    DegenerateFamily, FilterOutcome, RepSolution, SpectraError,
};
use crate::catalog::{self, min_potential, CatalogError, MinVOptions, TypoEntry};
use crate::numeric::SpectrumComparison;
use crate::oscalg::{closed_form_slots_with, compare_slots, derive_phi, ladder_phi_for, reduce_casimir, StructureFn};
use crate::polyalgebra::algebra_for;
use crate::symcore::{int, parse_poly, rat_to_f64, Bindings, Rational, Symbol};

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub p_max: u32,
    pub vmin_tol: f64,
    pub min_v: MinVOptions,
    /// Axis levels per chain used to resolve degenerate families.
    pub family_levels: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            p_max: 8,
            vmin_tol: 1e-9,
            min_v: MinVOptions::default(),
            family_levels: 24,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiBlock {
    pub coefficients: StructureFn,
    pub factors: String,
    pub roots: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub potential: String,
    pub params: BTreeMap<String, String>,
    pub algebra: serde_json::Value,
    pub casimir: String,
    pub phi: PhiBlock,
    /// Sign relating `Φ` to the Fock norms.
    pub sigma: i32,
    pub min_v: Option<f64>,
    /// `"domain"` or `"central-cell"` when the potential has poles on the line.
    pub min_v_region: Option<String>,
    pub representations: Vec<RepSolution>,
    pub families: Vec<DegenerateFamily>,
    pub filter: FilterOutcome,
    pub typo_ledger: Vec<TypoEntry>,
    pub numeric: Option<SpectrumComparison>,
}

impl SpectrumReport {
    /// Every admitted energy with a label naming its branch.
    pub fn algebraic_energies(&self) -> Vec<(f64, String)> {
        let mut out = Vec::new();
        for r in &self.representations {
            for &p in &r.admitted {
                out.push((
                    rat_to_f64(&r.energy_at(p)),
                    format!("E={} u-root={} p={}", r.energy, r.u_root, p),
                ));
            }
        }
        for f in &self.families {
            for e in &f.resolved {
                out.push((*e, format!("family u-root={} p={}", f.u_root, f.p)));
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(a.1.cmp(&b.1)));
        out
    }
}

fn is_unit_point(params: &Bindings) -> Option<bool> {
    let hbar = params.get(&Symbol::Hbar)?;
    let alpha = params.get(&Symbol::Alpha)?;
    if hbar.is_one() && alpha.abs().is_one() {
        Some(alpha.is_positive())
    } else {
        None
    }
}

fn compare_printed(name: &str, params: &Bindings, p_max: u32, reps: &[RepSolution]) -> Vec<TypoEntry> {
    let Some(positive) = is_unit_point(params) else {
        return Vec::new();
    };
    let sector = if positive { "real_a" } else { "imaginary_a" };
    let mut out = Vec::new();
    for pb in printed_branches(name, positive) {
        let label = format!("{name}.{sector}.{}", pb.label);
        let same_e: Vec<&RepSolution> = reps.iter().filter(|r| r.energy == pb.energy).collect();
        if same_e.is_empty() {
            out.push(TypoEntry::new(
                &format!("{label}.energy"),
                format!("E={}", pb.energy),
                "no admitted branch",
            ));
            continue;
        }
        let u = pb.u_law();
        let hit = match same_e.iter().find(|r| r.u_law == u) {
            Some(r) => *r,
            None => {
                let derived: Vec<String> = same_e.iter().map(|r| format!("u={}", r.u_law)).collect();
                out.push(TypoEntry::new(&format!("{label}.u"), format!("u={u}"), derived.join(" | ")));
                same_e[0]
            }
        };
        let want = pb.range.members(p_max);
        if hit.admitted != want {
            out.push(TypoEntry::new(
                &format!("{label}.p_range"),
                format!("{} (p<={p_max}: {want:?})", pb.range.describe()),
                format!("{:?}", hit.admitted),
            ));
        }
    }
    out
}

/// Minimum of the potential over the domain, or over the cell around the origin when the
/// potential has real poles.
fn minimum(spec: &catalog::PotentialSpec, params: &Bindings, opts: &MinVOptions) -> (Option<f64>, Option<String>) {
    match min_potential(spec, params, opts) {
        Ok(v) => (Some(v), Some("domain".into())),
        Err(CatalogError::SingularOnDomain(_)) => {
            let cell = MinVOptions {
                central_cell: true,
                ..opts.clone()
            };
            match min_potential(spec, params, &cell) {
                Ok(v) => (Some(v), Some("central-cell".into())),
                Err(_) => (None, None),
            }
        }
        Err(_) => (None, None),
    }
}

/// The whole spectral pipeline for a catalogued potential at rational parameter values.
pub fn build_report(name: &str, params: &Bindings, opts: &ReportOptions) -> Result<SpectrumReport, SpectraError> {
    let spec = catalog::get(name)?;
    let (triple, alg) = algebra_for(spec)?;
    let ladder = ladder_phi_for(spec, &triple);
    let k = reduce_casimir(&alg, &ladder)?;
    let phi = derive_phi(&alg, &k)?;
    if phi != ladder {
        return Err(SpectraError::PhiMismatch);
    }

    let mut ledger = spec.corrections.clone();
    ledger.push(TypoEntry::new("realization.A", "delta*(N+u)", "sqrt_delta*(N+u)"));
    for (slot, printed) in printed_structure_constants(name) {
        let derived = &alg.coefficients[slot];
        if parse_poly(printed).ok().as_ref() != Some(derived) {
            ledger.push(TypoEntry::new(
                &format!("{name}.structure_constant.A{slot}"),
                printed,
                derived.to_string(),
            ));
        }
    }
    let printed_closed = closed_form_slots_with(&alg, &k, int(-1))?;
    ledger.extend(compare_slots(&format!("{name}.phi.closed_form"), &printed_closed, &phi));

    // roots that are irrational in the parameters can still be rational at a parameter point
    let roots = match factor_phi(&phi, &triple.s) {
        Err(SpectraError::NotLinearlyFactorable(_)) => {
            factor_phi(&StructureFn::new(phi.phi_t.bind(params)?), &triple.s.bind(params)?)?
        }
        other => other?,
    };
    let sigma = if spec.scaling.imaginary { 1 } else { -1 };
    let bound = BoundRoots::new(&roots, params, Rational::from_integer(sigma.into()))?;
    let mut en = enumerate_reps(&bound, opts.p_max);

    let (min_v, region) = minimum(spec, params, &opts.min_v);
    let filter = spurious_filter(&mut en.branches, min_v, opts.vmin_tol);
    if region.as_deref() == Some("domain") {
        let cap = opts.family_levels;
        let ex = axis_levels(&spec.x_axis, params, cap)?;
        let ey = axis_levels(&spec.y_axis, params, cap)?;
        // sums are complete only below the first pairing that involves a truncated level
        let limit = match (ex.first(), ex.last(), ey.first(), ey.last()) {
            (Some(x0), Some(x1), Some(y0), Some(y1)) => (x0 + y1).min(y0 + x1),
            _ => f64::NEG_INFINITY,
        };
        let sums: Vec<f64> = separable_levels(&ex, &ey, cap * cap)
            .into_iter()
            .filter(|e| *e <= limit)
            .collect();
        resolve_families(&bound, &mut en.families, &sums);
    }

    ledger.extend(compare_printed(name, params, opts.p_max, &en.branches));
    ledger.sort();
    ledger.dedup();

    Ok(SpectrumReport {
        potential: name.to_string(),
        params: params.iter().map(|(s, v)| (s.name().to_string(), v.to_string())).collect(),
        algebra: alg.with_casimir(k.clone()).to_value(),
        casimir: k.to_string(),
        phi: PhiBlock {
            factors: roots.factored(),
            roots: (0..roots.roots.len()).map(|i| roots.root_expr(i).to_string()).collect(),
            coefficients: phi,
        },
        sigma,
        min_v,
        min_v_region: region,
        representations: en.branches,
        families: en.families,
        filter,
        typo_ledger: ledger,
        numeric: None,
    })
}
