//! Subsection inventories, `k(B)` / `l(B)` arithmetic and Cartan matrix enumeration.

mod arith;
mod checks;
mod decomposition;
mod scenario;

pub use arith::{
    free_case_cartan, ibr_bound_check, kb_check_min, kb_check_min_with_budget, l_candidates_mod8, l_from_mod8,
    IbrCheck, KbCheck,
};
pub use checks::{find_good_element, rank_two_criterion, GoodElement, MainCheck};
pub use decomposition::{decomposition_enumerate, decomposition_enumerate_with, DecompositionSet, EnumerateOptions};
pub use scenario::{
    k_bar_from_subsections, k_from_subsections, orbit_total, subsection_inventory, BlockScenario, LRule,
    SubsectionDatum,
};
