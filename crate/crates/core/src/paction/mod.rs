//! Finite abelian p-groups with coprime automorphism actions.
//!
//! Everything is exhaustive: groups are capped at order `2^20`, so orbits,
//! stabilizers and subgroups are computed by listing elements.

mod action;
mod group;
mod models;
mod ops;
mod transversal;

pub use action::{ActionGroup, ActionMatrix, MAX_ACTION_ORDER};
pub use group::{AbelianPGroup, Subgroup, MAX_GROUP_ORDER};
pub use models::{companion_matrix, frobenius_matrix, galois_model, teichmuller_generator};
pub use ops::{
    acts_freely_on, commutator_part, commutator_part_of, coprime_split_check, fixed_points, fixed_points_of, frattini,
    has_free_action, omega, orbit_representative, orbits, regular_orbit_hypothesis, regular_orbit_search,
    restrict_to_omega2, Omega2Restriction, Orbit, SplitCheck,
};
pub use transversal::{invariant_transversal, regular_point_via_transversal, verify, Transversal};
