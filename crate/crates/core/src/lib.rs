//! Exact solver for the symmetric two-stripe circulant traveling salesman
//! problem.
//!
//! An instance has `n` cities on a circle where only two edge lengths
//! (stripes) `a1` and `a2` carry a finite cost. The optimal tour cost is
//! determined in `O(log^2 n)` arithmetic by reducing the problem to
//! Hamiltonian paths on an `r x c` cylinder grid and locating the row of the
//! vertex `-a2` among the rows that GG paths can reach.
//!
//! Module map:
//! - [`congruence`]: gcd, extended Euclid and linear congruences.
//! - [`instance`]: instances, the cylinder decomposition, coordinates.
//! - [`ggpath`]: the reachable-row sets `A(r, c, m)` and GG path enumeration.
//! - [`solver`]: optimal cost, decision variant, and the Gerace-Greco cross-check.
//! - [`materialize`]: explicit tours and a tour validator.
//! - [`oracle`]: brute-force ground truth (Held-Karp, cylinder search).

pub mod congruence;
pub mod error;
pub mod ggpath;
pub mod instance;
pub mod materialize;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
pub use ggpath::{a_set_contains, a_set_enumerate, enumerate_gg_paths, min_extra_pairs};
pub use instance::{CylinderCoord, Decomposition, Triviality, TwoStripeInstance};
pub use materialize::{
    emit_gg_path, emit_tour, emit_upper_bound_tour, gg_tour_params, validate_tour, Direction,
    GgParams, TourCheck, TourSequence,
};
pub use solver::{
    compute_m_star, decide, solve, solve_via_gg_formula, Branch, MStarResult, SolveResult,
    TourDescriptor,
};
