//! Numerical verification of fractional Ostrowski inequalities for functions
//! whose derivative is h-convex in absolute value.
//!
//! * [`specfun`]: Gamma and Beta.
//! * [`funcs`]: h-functions, test functions and grid property checkers.
//! * [`fracint`]: adaptive quadrature and Riemann–Liouville integrals.
//! * [`bounds`]: the Ostrowski quantity, its identity and the bound families.
//! * [`verify`]: sweeps, tightness search and classical comparisons.
//! * [`cli`]: the `frac-ostrowski` command line.

pub mod bounds;
pub mod cli;
pub mod fracint;
pub mod funcs;
pub mod specfun;
pub mod verify;
