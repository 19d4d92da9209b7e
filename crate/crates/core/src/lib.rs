//! Exact arithmetic for real quadratic fields and the 2-class groups of
//! multiquadratic families built from prime triples (q, r, s).
//!
//! Everything here is integer or rational arithmetic; no floating point is
//! used anywhere. The crate is organized as:
//!
//! - [`arith`]: primality, residue symbols, exact square roots, Smith normal form;
//! - [`quadfield`]: fundamental units by continued fractions, narrow and
//!   ordinary class groups by binary quadratic forms, prime splitting;
//! - [`family`]: the hypothesis checks, unit square trichotomy/dichotomy and
//!   class number formulas for the (q, r, s, η) families;
//! - [`groups`]: concrete metacyclic and modular 2-groups, their distinguished
//!   subgroups and abelianizations, table verification;
//! - [`predict`]: the prediction engine assembling 2-class-group structures and
//!   Galois classifications from the family data.

pub mod abelian;
pub mod arith;
pub mod family;
pub mod groups;
pub mod predict;
pub mod quadfield;

pub use abelian::AbelianType;
