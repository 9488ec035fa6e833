//! Evolutionary diversity optimisation for the Traveling Thief Problem.
//!
//! Given a TTP instance and one high-quality solution, the bi-level EA in
//! [`engine`] evolves a population of solutions that all stay within a
//! factor `1 - alpha` of the best known objective while maximising the
//! entropy of the edges and items they use.
//!
//! Cities and items are 0-based everywhere in this crate. Benchmark files,
//! solution snapshots and [`Instance::distance`] use the 1-based numbering
//! of the benchmark suite.

pub mod diversity;
pub mod engine;
pub mod error;
pub mod instance;
pub mod packing;
pub mod robustness;
pub mod solution;
pub mod tour_ops;

pub use diversity::{select_removal, DiversityIndex, EdgeDenominator, Entropies, FitnessMode};
pub use engine::{
    init_population, quality_threshold, run_edo, EdoConfig, EdoRun, KpOperator, Population,
    Trajectory, TrajectoryRecord,
};
pub use error::{ParseError, ParseErrorKind, Result, TtpError};
pub use instance::{parse_instance, Instance, Item};
pub use packing::{
    bit_flip, dp_pack, item_visit_order, one_plus_one_ea, run_one_plus_one_ea, DpTable, EaRun,
    PackingBudget, PackingContext,
};
pub use robustness::{edge_robustness, item_robustness, robustness, RobustnessReport};
pub use solution::{
    cumulative_weights, evaluate, Edge, PackingList, SolutionSnapshot, Tour, TtpSolution,
};
pub use tour_ops::{
    apply_ab_cycle, build_ab_cycle, eax_1ab, merge_subtours, merge_subtours_traced,
    two_opt_local_search, two_opt_mutation, AbCycle, IntermediateSolution, MergeStep,
};
