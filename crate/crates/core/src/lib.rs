//! Exact decision procedures for factoriality-style closure conditions on
//! two carriers: polynomial rings over Q (Jacobian-minor gcd criterion,
//! square-freeness) and monomial subrings modeled as affine semigroups with
//! units (irreducibles, square-free elements, primes, radical-principal
//! generators, and the closure-condition catalog), plus a property harness
//! that replays every implication and equivalence on bounded instances.

pub mod conditions;
pub mod harness;
pub mod jacobian;
pub mod lattice;
pub mod poly;
pub mod verdict;
