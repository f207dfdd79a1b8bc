//! Registry of the separable Hamiltonians with their certified ladder data.

pub(crate) mod minv;

use std::sync::OnceLock;

use serde::Serialize;

use crate::diffop::{compose, verify_ladder, DiffOp, DiffOpError, LadderCert};
use crate::symcore::{int, rat, var, MultiPoly, RatFunc, Rational, Symbol};

pub use minv::{axis_minimum, min_potential, MinVOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown potential `{0}` (known: ho2d, sw1, p1, p5, p6)")]
    UnknownPotential(String),
    #[error("potential is singular inside the requested domain of `{0}`")]
    SingularOnDomain(Symbol),
    #[error("parameter `{0}` must be bound to evaluate the potential")]
    Unbound(Symbol),
    #[error("ladder certificate failed for the {axis} axis: {source}")]
    Ladder {
        axis: Symbol,
        #[source]
        source: DiffOpError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    FullLine,
    HalfLinePositive,
}

/// One printed formula that had to be corrected for the certificates to hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize, PartialOrd, Ord)]
pub struct TypoEntry {
    pub equation_label: String,
    pub printed: String,
    pub derived: String,
}

impl TypoEntry {
    pub fn new(label: &str, printed: impl Into<String>, derived: impl Into<String>) -> Self {
        TypoEntry {
            equation_label: label.to_string(),
            printed: printed.into(),
            derived: derived.into(),
        }
    }
}

/// A one-dimensional factor of a separable Hamiltonian.
#[derive(Debug, Clone)]
pub struct AxisSpec {
    pub var: Symbol,
    pub potential: RatFunc,
    pub aplus: DiffOp,
    pub lambda: MultiPoly,
    /// Factorization polynomial of the ladder, in the energy symbol `E`.
    pub q: MultiPoly,
    pub domain: Domain,
    pub cert: LadderCert,
}

impl AxisSpec {
    /// Builds the axis and certifies its ladder; the certificate is the constructor's gate.
    pub fn new(
        var: Symbol,
        potential: RatFunc,
        aplus: DiffOp,
        q: MultiPoly,
        domain: Domain,
    ) -> Result<Self, CatalogError> {
        let h = DiffOp::hamiltonian(var, potential.clone());
        let cert = verify_ladder(&h, &aplus, &q, Symbol::E)
            .map_err(|source| CatalogError::Ladder { axis: var, source })?;
        Ok(AxisSpec {
            var,
            potential,
            aplus,
            lambda: cert.lambda.clone(),
            q,
            domain,
            cert,
        })
    }

    pub fn hamiltonian(&self) -> DiffOp {
        DiffOp::hamiltonian(self.var, self.potential.clone())
    }

    /// The same axis acting on another variable.
    pub fn renamed(&self, to: Symbol) -> AxisSpec {
        let from = self.var;
        let pot = RatFunc::new(self.potential.num().rename(from, to), self.potential.den().rename(from, to))
            .expect("renaming keeps the denominator");
        AxisSpec {
            var: to,
            potential: pot,
            aplus: self.aplus.rename(to),
            lambda: self.lambda.clone(),
            q: self.q.clone(),
            domain: self.domain,
            cert: self.cert.clone(),
        }
    }
}

/// Factor relating the bilinear integral `I1 = W − W†` to the conventional one, `c·I1`.
///
/// `imaginary` marks a factor of `i`; it makes the conventional integral Hermitian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scaling {
    pub factor: MultiPoly,
    pub imaginary: bool,
}

#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub name: &'static str,
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    pub resonance: (usize, usize),
    pub scaling: Scaling,
    /// Printed formulas replaced by certified ones while building this entry.
    pub corrections: Vec<TypoEntry>,
}

impl PotentialSpec {
    /// `V(x, y) = g1(x) + g2(y)`.
    pub fn potential(&self) -> (RatFunc, RatFunc) {
        (self.x_axis.potential.clone(), self.y_axis.potential.clone())
    }
}

pub const NAMES: [&str; 5] = ["ho2d", "sw1", "p1", "p5", "p6"];

fn half() -> Rational {
    rat(1, 2)
}

fn rf(p: MultiPoly) -> RatFunc {
    RatFunc::from_poly(p)
}

fn hbar() -> MultiPoly {
    var(Symbol::Hbar)
}

fn alpha() -> MultiPoly {
    var(Symbol::Alpha)
}

fn inv(p: &MultiPoly) -> MultiPoly {
    p.inverse_monomial().expect("catalog parameters are monomials")
}

/// Harmonic axis `ω²v²/2` with the first-order ladder `ω v − ħ D`.
fn harmonic_axis(v: Symbol, omega: &MultiPoly) -> Result<AxisSpec, CatalogError> {
    let pot = (&omega.pow(2) * &var(v).pow(2)).scale(&half());
    let aplus = DiffOp::from_terms(v, [(1, rf(-hbar())), (0, rf(omega * &var(v)))]);
    let q = &var(Symbol::E).scale(&int(2)) - &(&hbar() * omega);
    AxisSpec::new(v, rf(pot), aplus, q, Domain::FullLine)
}

/// Isotonic axis `ω²v²/2 + β/v²` with the second-order ladder.
fn isotonic_axis(v: Symbol, omega: &MultiPoly, beta: &MultiPoly) -> Result<AxisSpec, CatalogError> {
    let (h, w, x) = (hbar(), omega.clone(), var(v));
    let vinv2 = MultiPoly::term(int(1), &[(v, -2)]);
    let pot = &(&w.pow(2) * &x.pow(2)).scale(&half()) + &(beta * &vinv2);
    let c0 = &(&(&(&w * &inv(&h)) * &x.pow(2)) - &(&(&beta.scale(&int(2)) * &inv(&(&w * &h))) * &vinv2))
        - &MultiPoly::one();
    let quarter = rat(-1, 4);
    let aplus = DiffOp::from_terms(
        v,
        [
            (2, rf((&h * &inv(&w)).scale(&quarter))),
            (1, rf(x.scale(&int(-2)).scale(&quarter))),
            (0, rf(c0.scale(&quarter))),
        ],
    );
    let e = var(Symbol::E);
    let q = &(&(&e.pow(2) * &inv(&(&h.pow(2) * &w.pow(2)))).scale(&rat(1, 4))
        - &(&e * &inv(&(&h * &w))).scale(&half()))
        + &(&MultiPoly::rat(3, 16) - &(beta * &inv(&h.pow(2))).scale(&half()));
    AxisSpec::new(v, rf(pot), aplus, q, Domain::HalfLinePositive)
}

/// `x² − α`.
fn x2_minus_alpha(v: Symbol) -> MultiPoly {
    &var(v).pow(2) - &alpha()
}

/// Third-order axis: `ħ²(v²/(8α²) + (2v² + 2α)/(v² − α)²)`.
fn third_order_axis(v: Symbol) -> Result<AxisSpec, CatalogError> {
    let (h, a, x) = (hbar(), alpha(), var(v));
    let d = x2_minus_alpha(v);
    let harmonic = (&(&h.pow(2) * &x.pow(2)) * &inv(&a.pow(2))).scale(&rat(1, 8));
    let well = RatFunc::new(
        &h.pow(2) * &(&x.pow(2).scale(&int(2)) + &a.scale(&int(2))),
        d.pow(2),
    )
    .unwrap();
    let pot = &rf(harmonic) + &well;
    // W = 2v/(v² − α); drift = −v/(2α) + W
    let w = RatFunc::new(x.scale(&int(2)), d).unwrap();
    let drift = &rf((&x * &inv(&a)).scale(&rat(-1, 2))) + &w;
    let f1 = DiffOp::from_terms(v, [(1, RatFunc::constant(int(-1))), (0, drift.clone())]);
    let f2 = DiffOp::from_terms(v, [(1, rf(a.scale(&int(-2)))), (0, rf(x.clone()))]);
    let f3 = DiffOp::from_terms(v, [(1, RatFunc::one()), (0, drift)]);
    let prefactor = (&h.pow(3) * &inv(&a)).scale(&rat(1, 4));
    let aplus = compose(&f1, &compose(&f2, &f3)).scale(&rf(prefactor));
    let e = var(Symbol::E);
    let q = &(&(&e.pow(3).scale(&int(2)) - &(&(&e.pow(2) * &h.pow(2)) * &inv(&a)).scale(&rat(7, 2)))
        + &(&(&e * &h.pow(4)) * &inv(&a.pow(2))).scale(&rat(7, 8)))
        + &(&h.pow(6) * &inv(&a.pow(3))).scale(&rat(15, 32));
    AxisSpec::new(v, pot, aplus, q, Domain::FullLine)
}

fn build(name: &str) -> Result<PotentialSpec, CatalogError> {
    let (h, a, w) = (hbar(), alpha(), var(Symbol::Omega));
    let with_i = |f: MultiPoly| Scaling {
        factor: f,
        imaginary: true,
    };
    let spec = match name {
        "ho2d" => PotentialSpec {
            name: "ho2d",
            x_axis: harmonic_axis(Symbol::X, &w)?,
            y_axis: harmonic_axis(Symbol::Y, &w)?,
            resonance: (1, 1),
            scaling: with_i(MultiPoly::one()),
            corrections: vec![],
        },
        "sw1" => PotentialSpec {
            name: "sw1",
            x_axis: isotonic_axis(Symbol::X, &w, &var(Symbol::B))?,
            y_axis: isotonic_axis(Symbol::Y, &w, &var(Symbol::C))?,
            resonance: (1, 1),
            scaling: with_i(MultiPoly::one()),
            corrections: vec![TypoEntry::new(
                "sw1.potential.harmonic",
                "omega/2*(x^2 + y^2)",
                "omega^2/2*(x^2 + y^2)",
            )],
        },
        "p1" => {
            let omega_y = (&h * &inv(&a)).scale(&half());
            PotentialSpec {
                name: "p1",
                x_axis: third_order_axis(Symbol::X)?,
                y_axis: harmonic_axis(Symbol::Y, &omega_y)?,
                resonance: (1, 1),
                scaling: with_i((&a * &inv(&h)).scale(&int(-2))),
                corrections: vec![TypoEntry::new(
                    "p1.x.ladder.prefactor",
                    "1/4*hbar^2*alpha^-1",
                    "1/4*hbar^3*alpha^-1",
                )],
            }
        }
        "p6" => {
            let x_axis = third_order_axis(Symbol::X)?;
            let y_axis = x_axis.renamed(Symbol::Y);
            PotentialSpec {
                name: "p6",
                x_axis,
                y_axis,
                resonance: (1, 1),
                scaling: with_i((&a * &inv(&h)).scale(&int(-2))),
                corrections: vec![TypoEntry::new(
                    "p6.x.ladder.prefactor",
                    "1/4*hbar^2*alpha^-1",
                    "1/4*hbar^3*alpha^-1",
                )],
            }
        }
        "p5" => {
            let omega_y = (&h * &inv(&a)).scale(&half());
            PotentialSpec {
                name: "p5",
                x_axis: third_order_axis(Symbol::X)?,
                y_axis: isotonic_axis(Symbol::Y, &omega_y, &h.pow(2))?,
                resonance: (2, 1),
                scaling: Scaling {
                    factor: a.clone(),
                    imaginary: false,
                },
                corrections: vec![TypoEntry::new(
                    "p5.x.ladder.prefactor",
                    "1/4*hbar^2*alpha^-1",
                    "1/4*hbar^3*alpha^-1",
                )],
            }
        }
        other => return Err(CatalogError::UnknownPotential(other.to_string())),
    };
    Ok(spec)
}

/// Looks up a catalogued potential; every entry is certified on first access.
pub fn get(name: &str) -> Result<&'static PotentialSpec, CatalogError> {
    static CELLS: [OnceLock<PotentialSpec>; 5] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    let idx = NAMES
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| CatalogError::UnknownPotential(name.to_string()))?;
    if let Some(spec) = CELLS[idx].get() {
        return Ok(spec);
    }
    let spec = build(name)?;
    Ok(CELLS[idx].get_or_init(|| spec))
}
