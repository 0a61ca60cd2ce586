//! Exact enumeration: indicators, pairwise coprime counts, the family count
//! `N'(B)` by several routes, `N_loc(B)`, triple decompositions and character sums.

mod characters;
mod coprime;
mod indicators;
mod nbr;
mod nloc;
mod sums;
mod triple;

pub use characters::{CharacterTable, CyclotomicInteger};
pub use coprime::{coprime_triple_count, count_with, PrimeTable};
pub use indicators::{
    alpha_table, beta_moebius, delta_rewrite, indicator_alpha, indicator_beta, indicator_delta,
    indicator_epsilon, indicator_s, indicator_s_characters, s_set,
};
pub use nbr::{
    count_nbr_characters, count_nbr_direct, count_nbr_rearranged, intermediate_u_chi, CountReport,
    Route,
};
pub use nloc::count_nloc;
pub use sums::sum_s_direct;
pub use triple::{decompose_triple, recompose_triple, TripleDecomposition};
