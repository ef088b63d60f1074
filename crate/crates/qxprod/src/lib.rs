//! Exact and numeric verification workbench for cross product *-algebras.
//!
//! The library has three layers:
//!
//! * an exact symbolic layer ([`scalars`], [`ncalg`], [`hopf`], [`actions`],
//!   [`catalog`]) that works over the field of rational functions in
//!   `s = q^(1/2)` and rewrites words in noncommutative generators to a
//!   normal form, so algebraic identities are decided exactly;
//! * a numeric layer ([`represent`], [`functionals`], [`heisenberg`]) that
//!   instantiates infinite-dimensional series of Hilbert space operators on
//!   finite index windows and checks relations, adjoints, invariant
//!   functionals and unitary equivalences up to pinned tolerances;
//! * a thin report/CLI layer ([`report`], `src/bin/qxprod.rs`) that runs the
//!   same checks from the command line and emits JSON.

pub mod actions;
pub mod catalog;
pub mod functionals;
pub mod heisenberg;
pub mod hopf;
pub mod ncalg;
pub mod report;
pub mod represent;
pub mod scalars;
