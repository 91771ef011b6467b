//! Interacting Fock spaces, Jacobi sequences and their classical limits.
//!
//! The crate computes moments of Jacobi operators on one- and two-sided
//! interacting Fock spaces, classifies sequences by whether their normalized
//! level-`k` variables converge as `k -> inf`, and evaluates the limiting
//! laws (Gaussian, arcsine and the discrete arcsine family).

pub mod arcsine;
pub mod dd;
pub mod fock;
pub mod jacobi;
pub mod orthopoly;
pub mod rac;
pub mod scalar;
pub mod seqexpr;
pub mod verify;
