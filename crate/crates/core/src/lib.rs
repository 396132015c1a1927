//! Exact rational polyhedral toolkit for Chvátal-Gomory closures.
//!
//! Every computation is carried out in arbitrary-precision rational or
//! integer arithmetic. The crate covers polyhedra in H- and V-representation
//! ([`polytope`]), integer points and lattice widths ([`lattice`]), the
//! Chvátal-Gomory closure operator and the ranks built on it ([`cg`]), the
//! explicit polytope families and bound formulas from the theory of
//! affine-hull convergence ([`constructions`]), and the reduction from 3SAT to
//! affine-hull membership of integer hulls ([`sat`]).

pub mod cg;
pub mod constructions;
pub mod error;
pub mod hnf;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod rational;
pub mod sat;
pub mod unimodular;

pub use error::{Error, Result};
