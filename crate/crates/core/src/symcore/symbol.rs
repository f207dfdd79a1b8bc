use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Number of registered symbols. Every monomial carries one exponent slot per symbol.
pub const N_SYMBOLS: usize = 14;

/// The fixed symbol table shared by every polynomial in the engine.
///
/// The geometric parameter `a` is never stored; `Alpha` stands for `a^2` so that both the
/// real (`alpha > 0`) and imaginary (`alpha < 0`) cases stay in rational arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    E,
    Hbar,
    Alpha,
    Omega,
    B,
    C,
    X,
    Y,
    A,
    H,
    N,
    U,
    P,
    SqrtDelta,
}

impl Symbol {
    pub const ALL: [Symbol; N_SYMBOLS] = [
        Symbol::E,
        Symbol::Hbar,
        Symbol::Alpha,
        Symbol::Omega,
        Symbol::B,
        Symbol::C,
        Symbol::X,
        Symbol::Y,
        Symbol::A,
        Symbol::H,
        Symbol::N,
        Symbol::U,
        Symbol::P,
        Symbol::SqrtDelta,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::E => "E",
            Symbol::Hbar => "hbar",
            Symbol::Alpha => "alpha",
            Symbol::Omega => "omega",
            Symbol::B => "b",
            Symbol::C => "c",
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::A => "A",
            Symbol::H => "H",
            Symbol::N => "N",
            Symbol::U => "u",
            Symbol::P => "p",
            Symbol::SqrtDelta => "sqrt_delta",
        }
    }

    /// Physical parameters that may be bound to numbers on the command line.
    pub fn is_parameter(self) -> bool {
        matches!(
            self,
            Symbol::Hbar | Symbol::Alpha | Symbol::Omega | Symbol::B | Symbol::C
        )
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown symbol `{0}`")]
pub struct UnknownSymbol(pub String);

impl FromStr for Symbol {
    type Err = UnknownSymbol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::ALL
            .iter()
            .copied()
            .find(|sym| sym.name() == s)
            .ok_or_else(|| UnknownSymbol(s.to_string()))
    }
}
