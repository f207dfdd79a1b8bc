use crate::symcore::{int, rat, Rational};

use super::Law;

/// Published `p`-range of a branch.
#[derive(Debug, Clone, PartialEq)]
pub enum PRange {
    All,
    AtLeast(u32),
    Only(Vec<u32>),
}

impl PRange {
    pub fn members(&self, p_max: u32) -> Vec<u32> {
        match self {
            PRange::All => (0..=p_max).collect(),
            PRange::AtLeast(n) => (*n..=p_max).collect(),
            PRange::Only(v) => v.iter().copied().filter(|p| *p <= p_max).collect(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            PRange::All => "p>=0".to_string(),
            PRange::AtLeast(n) => format!("p>={n}"),
            PRange::Only(v) => format!("p in {v:?}"),
        }
    }
}

/// A published representation branch at `hbar = 1`, `|alpha| = 1`.
#[derive(Debug, Clone)]
pub struct PrintedBranch {
    pub label: &'static str,
    pub energy: Law,
    /// `u = a·E + b` as published.
    pub u_of_e: (Rational, Rational),
    pub range: PRange,
}

impl PrintedBranch {
    pub fn u_law(&self) -> Law {
        let (a, b) = &self.u_of_e;
        Law {
            slope: a * &self.energy.slope,
            intercept: a * &self.energy.intercept + b,
        }
    }
}

fn law(slope: Rational, intercept: Rational) -> Law {
    Law { slope, intercept }
}

fn branch(label: &'static str, energy: Law, u_of_e: (Rational, Rational), range: PRange) -> PrintedBranch {
    PrintedBranch {
        label,
        energy,
        u_of_e,
        range,
    }
}

/// Published branches for a catalogued potential and sign of `alpha`.
pub fn printed_branches(name: &str, alpha_positive: bool) -> Vec<PrintedBranch> {
    match (name, alpha_positive) {
        ("p6", false) => vec![
            branch("E1", law(rat(1, 2), rat(3, 2)), (int(-1), rat(3, 2)), PRange::All),
            branch("E2", law(rat(1, 2), rat(1, 2)), (int(-1), rat(-1, 2)), PRange::Only(vec![0, 1])),
            branch("E3", law(rat(1, 2), int(0)), (int(-1), rat(-3, 2)), PRange::Only(vec![0, 1, 2])),
            branch("E4", law(rat(1, 2), rat(-3, 2)), (int(-1), rat(-3, 2)), PRange::Only(vec![0])),
        ],
        ("p6", true) => vec![branch("E1", law(rat(1, 2), rat(5, 2)), (int(-1), rat(5, 2)), PRange::AtLeast(3))],
        ("p5", false) => vec![
            branch("E1", law(int(1), rat(5, 2)), (rat(-1, 2), rat(5, 4)), PRange::All),
            branch("E2", law(int(1), int(1)), (rat(-1, 2), rat(5, 4)), PRange::Only(vec![0])),
        ],
        ("p5", true) => vec![branch("E1", law(int(1), int(3)), (int(-1), int(2)), PRange::All)],
        _ => Vec::new(),
    }
}

/// Published structure constants `(slot, value)` in the `alpha` notation.
pub fn printed_structure_constants(name: &str) -> Vec<(usize, &'static str)> {
    match name {
        "p6" => vec![
            (5, "-3/16*hbar^2"),
            (3, "3/2*hbar^2*E^2 + 2*hbar^4/alpha*E + 19/8*hbar^6/alpha^2"),
            (1, "-3*hbar^2*E^4 + 8*hbar^4/alpha*E^3 - 13/2*hbar^6/alpha^2*E^2 + 6*hbar^8/alpha^3*E - 99/16*hbar^10/alpha^4"),
        ],
        _ => Vec::new(),
    }
}
