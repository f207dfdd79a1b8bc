use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::symcore::Rational;

/// Trial-division bound; integers with a larger cofactor are treated as having it prime.
const TRIAL_LIMIT: u64 = 1_000_000;

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for base in &out {
            let mut acc = base.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = &acc * &p;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out
}

/// Horner evaluation; `coeffs[k]` multiplies `x^k`.
pub fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x − r)`, assuming `r` is a root.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        carry = &carry * r + &coeffs[k + 1];
        out[k] = carry.clone();
    }
    out
}

fn trim(mut coeffs: Vec<Rational>) -> Vec<Rational> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Rational roots with multiplicity, and the remaining cofactor with no rational roots.
pub fn rational_roots(coeffs: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut p = trim(coeffs.to_vec());
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        roots.push(Rational::zero());
    }
    if p.len() <= 1 {
        return (roots, p);
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from(lcm.clone())).to_integer()).collect();
    let num_divs = divisors(&ints[0]);
    let den_divs = divisors(ints.last().expect("non-empty"));
    let mut candidates: Vec<Rational> = Vec::new();
    for n in &num_divs {
        for d in &den_divs {
            let r = Rational::new(n.clone(), d.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        while p.len() > 1 && eval(&p, &r).is_zero() {
            p = deflate(&p, &r);
            roots.push(r.clone());
        }
        if p.len() <= 1 {
            break;
        }
    }
    roots.sort();
    (roots, p)
}

/// Real roots of a polynomial: exact rational ones, then a closed form for a leftover
/// quadratic or linear factor. Higher leftovers are reported as `None`.
pub fn real_roots_f64(coeffs: &[Rational]) -> Option<Vec<f64>> {
    let (rats, rest) = rational_roots(coeffs);
    let mut out: Vec<f64> = rats.iter().map(crate::symcore::rat_to_f64).collect();
    let f: Vec<f64> = rest.iter().map(crate::symcore::rat_to_f64).collect();
    match f.len() {
        0 | 1 => {}
        2 => out.push(-f[0] / f[1]),
        3 => {
            let (c, b, a) = (f[0], f[1], f[2]);
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                out.push((-b - sq) / (2.0 * a));
                out.push((-b + sq) / (2.0 * a));
            }
        }
        _ => return None,
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Some(out)
}

/// `p` as a small integer, if it is one.
pub fn as_small_int(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}
