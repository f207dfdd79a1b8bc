use std::path::Path;

use serde_json::{json, Value};
use siqs_core::catalog::{self, AxisSpec, CatalogError, PotentialSpec};
use siqs_core::numeric::{assemble_2d, compare_spectra, solve_1d, Grid1D, SolveOptions, SpectrumComparison};
use siqs_core::oscalg::{check_relations, derive_phi, ladder_phi_for, reduce_casimir};
use siqs_core::polyalgebra::{algebra_for, casimir as casimir_expr, AlgebraSpec};
use siqs_core::spectra::{build_report, factor_phi, ReportOptions, SpectraError, SpectrumReport};
use siqs_core::symcore::{Bindings, MultiPoly};

use crate::params::parse_params;
use crate::{CliError, GridArgs, SpectrumArgs};

pub const SCHEMA: u32 = 1;
const MAX_PMAX: u32 = 64;
const MAX_GRID: usize = 1_000_000;

/// A report plus the reason it failed verification, if it did.
pub struct Outcome {
    pub report: Value,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, failure: None }
    }

    /// Module error serialised into the report.
    fn error(source: &str, err: impl std::fmt::Display) -> Self {
        let msg = err.to_string();
        Outcome {
            report: json!({ "schema": SCHEMA, "source": source, "error": msg }),
            failure: Some(msg),
        }
    }
}

fn lookup(name: &str) -> Result<&'static PotentialSpec, CliError> {
    catalog::get(name).map_err(|e| match e {
        CatalogError::UnknownPotential(_) => CliError::Usage(e.to_string()),
        other => CliError::Verification(other.to_string()),
    })
}

fn default_params(name: &str) -> &'static str {
    match name {
        "ho2d" => "hbar=1,omega=1",
        "sw1" => "hbar=1,omega=1,b=1,c=1",
        _ => "hbar=1,alpha=-1",
    }
}

fn bindings_for(args: &SpectrumArgs) -> Result<Bindings, CliError> {
    if args.pmax > MAX_PMAX {
        return Err(CliError::Usage(format!("--pmax must be at most {MAX_PMAX}")));
    }
    parse_params(args.params.as_deref().unwrap_or(default_params(&args.potential)))
}

fn axis_json(axis: &AxisSpec) -> Value {
    json!({
        "var": axis.var.name(),
        "potential": axis.potential.to_string(),
        "raising": axis.aplus.to_string(),
        "lambda": axis.lambda.to_string(),
        "q": axis.q.to_string(),
        "domain": axis.domain,
        "checks": axis.cert.checks,
    })
}

fn ladder_json(spec: &PotentialSpec) -> (Value, bool) {
    let all = |a: &AxisSpec| {
        let c = a.cert.checks;
        c.commutator && c.lowering_product && c.raising_product && c.deformed_commutator
    };
    let pass = all(&spec.x_axis) && all(&spec.y_axis);
    (
        json!({ "x": axis_json(&spec.x_axis), "y": axis_json(&spec.y_axis), "pass": pass }),
        pass,
    )
}

pub fn ladder_check(name: &str) -> Result<Outcome, CliError> {
    let spec = lookup(name)?;
    let (ladder, pass) = ladder_json(spec);
    Ok(Outcome {
        report: json!({ "schema": SCHEMA, "potential": name, "ladder": ladder }),
        failure: (!pass).then(|| format!("ladder relations of `{name}` do not hold")),
    })
}

/// Algebra with its Casimir for a catalogued potential.
fn catalog_algebra(spec: &PotentialSpec) -> Result<AlgebraSpec, SpectraError> {
    let (triple, alg) = algebra_for(spec)?;
    let k = reduce_casimir(&alg, &ladder_phi_for(spec, &triple))?;
    Ok(alg.with_casimir(k))
}

fn read_algebra(path: &Path) -> Result<AlgebraSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    AlgebraSpec::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn is_file(target: &str) -> bool {
    catalog::get(target).is_err() && Path::new(target).is_file()
}

pub fn algebra(target: &str) -> Result<Outcome, CliError> {
    let alg = if is_file(target) {
        read_algebra(Path::new(target))?
    } else {
        match catalog_algebra(lookup(target)?) {
            Ok(a) => a,
            Err(e) => return Ok(Outcome::error(target, e)),
        }
    };
    Ok(Outcome::ok(alg.to_value()))
}

pub fn casimir(name: &str) -> Result<Outcome, CliError> {
    let spec = lookup(name)?;
    let alg = match catalog_algebra(spec) {
        Ok(a) => a,
        Err(e) => return Ok(Outcome::error(name, e)),
    };
    let k = alg.casimir.clone().expect("catalog algebras carry their Casimir");
    Ok(Outcome::ok(json!({
        "schema": SCHEMA,
        "potential": name,
        "casimir": k.to_string(),
        "casimir_in_generators": casimir_expr(&alg).to_string(),
    })))
}

fn phi_json(alg: &AlgebraSpec, k: &MultiPoly) -> Result<Value, String> {
    let phi = derive_phi(alg, k).map_err(|e| e.to_string())?;
    let relations = check_relations(alg, &phi).map_err(|e| e.to_string())?;
    let coeffs: Vec<String> = (0..=phi.degree().max(0)).map(|i| phi.coeff(i).to_string()).collect();
    let (factors, roots) = match factor_phi(&phi, &alg.root()) {
        Ok(list) => (
            Value::String(list.factored()),
            json!((0..list.roots.len()).map(|i| list.root_expr(i).to_string()).collect::<Vec<_>>()),
        ),
        Err(e) => (Value::Null, json!({ "unfactored": e.to_string() })),
    };
    Ok(json!({ "coeffs": coeffs, "factors": factors, "roots": roots, "relations": relations }))
}

pub fn phi(target: &str) -> Result<Outcome, CliError> {
    let alg = if is_file(target) {
        read_algebra(Path::new(target))?
    } else {
        match catalog_algebra(lookup(target)?) {
            Ok(a) => a,
            Err(e) => return Ok(Outcome::error(target, e)),
        }
    };
    let Some(k) = alg.casimir.clone() else {
        return Err(CliError::Usage(format!("`{target}` carries no casimir; the structure function needs one")));
    };
    Ok(match phi_json(&alg, &k) {
        Ok(phi) => Outcome::ok(json!({
            "schema": SCHEMA,
            "source": target,
            "casimir": k.to_string(),
            "phi": phi,
        })),
        Err(e) => Outcome::error(target, e),
    })
}

fn report_value(report: &SpectrumReport) -> Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["schema"] = json!(SCHEMA);
    v
}

pub fn spectrum(name: &str, params: Option<&str>, pmax: u32) -> Result<Outcome, CliError> {
    let args = SpectrumArgs {
        potential: name.to_string(),
        params: params.map(str::to_string),
        pmax,
    };
    lookup(name)?;
    let b = bindings_for(&args)?;
    let opts = ReportOptions {
        p_max: pmax,
        ..ReportOptions::default()
    };
    Ok(match build_report(name, &b, &opts) {
        Ok(r) => Outcome::ok(report_value(&r)),
        Err(e) => Outcome::error(name, e),
    })
}

struct NumericRun {
    comparison: SpectrumComparison,
    value: Value,
}

fn check_grid(g: &GridArgs) -> Result<(), CliError> {
    if !(200..=MAX_GRID).contains(&g.grid) {
        return Err(CliError::Usage(format!("--grid must lie in 200..={MAX_GRID}")));
    }
    if !(g.half_width > 0.0 && g.tol > 0.0 && g.emax.is_finite()) {
        return Err(CliError::Usage("--box and --tol must be positive".into()));
    }
    Ok(())
}

fn numeric_run(spec: &PotentialSpec, b: &Bindings, report: &SpectrumReport, g: &GridArgs) -> Result<NumericRun, String> {
    let solve = |axis: &AxisSpec| -> Result<_, String> {
        let grid = Grid1D::for_domain(axis.domain, g.half_width, g.grid).map_err(|e| e.to_string())?;
        solve_1d(axis, b, grid, g.levels, &SolveOptions::default()).map_err(|e| format!("{} axis: {e}", axis.var))
    };
    let (ex, ey) = rayon::join(|| solve(&spec.x_axis), || solve(&spec.y_axis));
    let (ex, ey) = (ex?, ey?);
    let levels = assemble_2d(&ex.eigenvalues, &ey.eigenvalues, g.emax);
    let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    let comparison = compare_spectra(&energies, &report.algebraic_energies(), g.tol);
    let value = json!({ "x": ex, "y": ey, "levels": levels, "comparison": comparison });
    Ok(NumericRun { comparison, value })
}

fn write_csv(path: &Path, cmp: &SpectrumComparison) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.into()))?;
    w.write_record(["E_numeric", "E_algebraic", "residual", "branch_id"])
        .map_err(|e| CliError::Io(e.into()))?;
    for row in &cmp.rows {
        let alg = row.algebraic.map(|a| a.to_string()).unwrap_or_default();
        w.write_record([
            row.numeric.to_string(),
            alg,
            row.residual.to_string(),
            row.branch.clone().unwrap_or_default(),
        ])
        .map_err(|e| CliError::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// Spectrum report plus the numeric section; `Err` carries an already serialised failure.
fn spectrum_and_numeric(args: &SpectrumArgs, g: &GridArgs) -> Result<Result<(SpectrumReport, Value, Option<String>), Outcome>, CliError> {
    let spec = lookup(&args.potential)?;
    let b = bindings_for(args)?;
    check_grid(g)?;
    let opts = ReportOptions {
        p_max: args.pmax,
        ..ReportOptions::default()
    };
    let report = match build_report(&args.potential, &b, &opts) {
        Ok(r) => r,
        Err(e) => return Ok(Err(Outcome::error(&args.potential, e))),
    };
    let (numeric, failure) = match numeric_run(spec, &b, &report, g) {
        Ok(run) => {
            if let Some(path) = &g.csv {
                write_csv(path, &run.comparison)?;
            }
            let failure = (!run.comparison.pass).then(|| {
                format!(
                    "finite-difference levels differ from the algebraic ones by up to {:e}",
                    run.comparison.max_residual
                )
            });
            (run.value, failure)
        }
        Err(e) => (json!({ "error": e }), Some(e)),
    };
    Ok(Ok((report, numeric, failure)))
}

pub fn numeric_check(args: &SpectrumArgs, g: &GridArgs) -> Result<Outcome, CliError> {
    Ok(match spectrum_and_numeric(args, g)? {
        Ok((report, numeric, failure)) => Outcome {
            report: json!({
                "schema": SCHEMA,
                "potential": args.potential,
                "params": report.params,
                "numeric": numeric,
            }),
            failure,
        },
        Err(o) => o,
    })
}

pub fn full_report(args: &SpectrumArgs, g: &GridArgs) -> Result<Outcome, CliError> {
    let spec = lookup(&args.potential)?;
    let (ladder, ladder_ok) = ladder_json(spec);
    Ok(match spectrum_and_numeric(args, g)? {
        Ok((report, numeric, numeric_failure)) => {
            let mut v = report_value(&report);
            v["ladder"] = ladder;
            v["numeric"] = numeric;
            let failure = if ladder_ok {
                numeric_failure
            } else {
                Some("ladder relations do not hold".into())
            };
            Outcome { report: v, failure }
        }
        Err(o) => o,
    })
}
