//! Exact computations on the algebraic Brieskorn module of a polynomial in
//! two variables: dimensions of `Coker(t - c)` and `Ker(t - c)`, Picard-Fuchs
//! operators, the critical spectrum, and derived invariants of the fibers.

pub mod linalg;
pub mod poly;
pub mod local_algebra;
pub mod brieskorn;
pub mod picard_fuchs;
pub mod invariants;
pub mod report;
pub mod corpus;
