//! Parikh-de-Bruijn grids and covering words.
//!
//! The order-`k` grid over `σ` letters has one vertex per Parikh vector of
//! order `k`; sliding a length-`k` window along a word walks the grid. This
//! crate builds the grid, translates between words and walks, decides which
//! sets of vectors some word realizes, checks covering and Parikh-de-Bruijn
//! words, and searches exhaustively for shortest covering words.

pub mod covering;
pub mod error;
pub mod export;
pub mod grid;
pub mod parikh;
pub mod realize;
pub mod search;
pub mod walks;

pub use covering::{
    bounds, construct_family, covset, is_universal_cycle, k2_shortest_length, mincov_explore, verify, wrap_cycle,
    BoundsReport, CoverReport, Family, MincovEstimate, Verdict, VerdictReason,
};
pub use error::{Error, Result};
pub use grid::{classify_clique, CliqueClassification, CliqueKind, DirectedEdge, EdgeLabel, PdbGrid};
pub use parikh::{
    binomial, enumerate_pv, join, meet, parikh_set, parse_vector_list, pv_count, pv_of, rank, rank_counts, unrank,
    Alphabet, Letter, ParikhSet, ParikhVector, Shape,
};
pub use realize::{is_realizable, is_realizable_set, realizable_pair_witness, RealizabilityResult};
pub use search::{
    canonical_form, enumerate_all_pdb, enumerate_covering, normalize_letters, search, search_pdb_existence,
    search_shortest_covering, Enumeration, PdbEnumeration, Pruning, SearchConfig, SearchOutcome, SearchStats,
    SearchStatus, Target,
};
pub use walks::{
    check_bowfree_consequences, is_realizable_walk, spell, step_incidences, string_from_itinerary, walk_of,
    BowfreeReport, Itinerary, Realizability, Refutation, RefutationKind, StepIncidence, Walk,
};
