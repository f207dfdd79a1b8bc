//! Exact-arithmetic engine for two-dimensional superintegrable Hamiltonians separable in
//! Cartesian coordinates: ladder certificates, polynomial symmetry algebras, Casimir
//! reduction, deformed-oscillator structure functions, finite unitary representations and a
//! finite-difference cross-check of the resulting spectra.

pub mod symcore;
pub mod diffop;
pub mod catalog;
pub mod polyalgebra;
pub mod oscalg;
pub mod spectra;
pub mod numeric;
