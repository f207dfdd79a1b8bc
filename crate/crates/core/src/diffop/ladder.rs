use serde::Serialize;

use super::{adjoint, commutator, compose, poly_of_operator, power, DiffOp, DiffOpError};
use crate::symcore::{MultiPoly, RatFunc, Rational, Symbol};

/// Which relations a ladder certificate confirmed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LadderChecks {
    /// `[h, a†] = λ a†`
    pub commutator: bool,
    /// `a† a = Q(h)`
    pub lowering_product: bool,
    /// `a a† = Q(h + λ)`
    pub raising_product: bool,
    /// `[a, a†] = Q(h + λ) − Q(h)`
    pub deformed_commutator: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderCert {
    pub lambda: MultiPoly,
    pub q: MultiPoly,
    pub energy: Symbol,
    pub checks: LadderChecks,
}

/// Returns `λ` with `[h, aplus] = λ·aplus`, or `NotALadder`.
pub fn ladder_eigenvalue(h: &DiffOp, aplus: &DiffOp) -> Result<MultiPoly, DiffOpError> {
    if h.var() != aplus.var() {
        return Err(DiffOpError::VariableMismatch(h.var(), aplus.var()));
    }
    if aplus.is_zero() {
        return Err(DiffOpError::NotALadder);
    }
    let c = commutator(h, aplus);
    eigen_ratio(&c, aplus).ok_or(DiffOpError::NotALadder)
}

/// The constant `r` (free of the operator variable) with `lhs = r·rhs`, if any.
fn eigen_ratio(lhs: &DiffOp, rhs: &DiffOp) -> Option<MultiPoly> {
    let top = rhs.order();
    let ratio = (&lhs.coeff(top) / &rhs.leading_coeff()).ok()?;
    let r = ratio.as_poly()?.clone();
    if r.depends_on(rhs.var()) {
        return None;
    }
    (*lhs == rhs.scale(&RatFunc::from_poly(r.clone()))).then_some(r)
}

fn mismatch(relation: &'static str, residual: DiffOp) -> DiffOpError {
    DiffOpError::QMismatch {
        relation,
        residual_order: residual.order(),
        residual: residual.to_string(),
    }
}

/// Certifies `aplus` as a raising operator for `h` whose products factor through `q`.
pub fn verify_ladder(
    h: &DiffOp,
    aplus: &DiffOp,
    q: &MultiPoly,
    energy: Symbol,
) -> Result<LadderCert, DiffOpError> {
    let lambda = ladder_eigenvalue(h, aplus)?;
    let a = adjoint(aplus);

    let lower = compose(aplus, &a);
    let q_h = poly_of_operator(q, energy, h);
    let r = lower.sub(&q_h);
    if !r.is_zero() {
        return Err(mismatch("a+ a = Q(h)", r));
    }

    let q_shift = q
        .shift(energy, &lambda)
        .expect("shift by a polynomial never divides");
    let raise = compose(&a, aplus);
    let q_hl = poly_of_operator(&q_shift, energy, h);
    let r = raise.sub(&q_hl);
    if !r.is_zero() {
        return Err(mismatch("a a+ = Q(h + lambda)", r));
    }

    let comm = commutator(&a, aplus);
    let r = comm.sub(&q_hl.sub(&q_h));
    if !r.is_zero() {
        return Err(mismatch("[a, a+] = Q(h + lambda) - Q(h)", r));
    }

    Ok(LadderCert {
        lambda,
        q: q.clone(),
        energy,
        checks: LadderChecks {
            commutator: true,
            lowering_product: true,
            raising_product: true,
            deformed_commutator: true,
        },
    })
}

/// Recovers `Q` from `a† a = Q(h)` by peeling off powers of `h` from the top order down.
///
/// Returns `None` when `a† a` is not a polynomial in `h` with coefficients free of the
/// operator variable.
pub fn derive_q(h: &DiffOp, aplus: &DiffOp, energy: Symbol) -> Option<MultiPoly> {
    let var = h.var();
    let hbar2 = MultiPoly::var(Symbol::Hbar).pow(2);
    // leading coefficient of h is -hbar^2/2
    let inv_lead = RatFunc::new(MultiPoly::int(-2), hbar2).ok()?;
    let mut rest = compose(aplus, &adjoint(aplus));
    let mut q = MultiPoly::zero();
    let mut guard = 0;
    while !rest.is_zero() {
        guard += 1;
        if guard > 64 {
            return None;
        }
        let ord = rest.order();
        if ord % 2 != 0 {
            return None;
        }
        let k = ord / 2;
        let mut c = rest.leading_coeff();
        for _ in 0..k {
            c = &c * &inv_lead;
        }
        let c = c.as_poly()?.clone();
        if c.depends_on(var) {
            return None;
        }
        q += &(&c * &MultiPoly::var(energy).pow(k as u32));
        rest = rest.sub(&power(h, k).scale(&RatFunc::from_poly(c)));
    }
    Some(q)
}

/// Checks that `aplus_x^m · a_y^n` commutes with `hx + hy`.
///
/// Each axis factor is checked separately (x- and y-operators commute); returns whether the
/// resonance `m λ_x = n λ_y` holds.
pub fn verify_tensor_integral(
    hx: &DiffOp,
    hy: &DiffOp,
    ax_plus: &DiffOp,
    ay_plus: &DiffOp,
    m: usize,
    n: usize,
) -> Result<bool, DiffOpError> {
    let lx = ladder_eigenvalue(hx, ax_plus)?;
    let ly = ladder_eigenvalue(hy, ay_plus)?;
    let xm = power(ax_plus, m);
    let yn = power(&adjoint(ay_plus), n);
    let mx = lx.scale(&Rational::from_integer(m.into()));
    let ny = ly.scale(&Rational::from_integer(n.into()));
    if eigen_ratio(&commutator(hx, &xm), &xm) != Some(mx.clone()) {
        return Err(DiffOpError::NotALadder);
    }
    if eigen_ratio(&commutator(hy, &yn), &yn) != Some(-&ny) {
        return Err(DiffOpError::NotALadder);
    }
    Ok((&mx - &ny).is_zero())
}
