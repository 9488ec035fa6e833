//! Shared inputs for the benchmarks.

use ttp_edo::{parse_instance, Instance, SolutionSnapshot, TtpSolution};

const INSTANCE: &str =
    include_str!("../../core/tests/fixtures/eil51_n50_bounded-strongly-corr_surrogate.ttp");
const SEED: &str =
    include_str!("../../core/tests/fixtures/eil51_n50_bounded-strongly-corr_surrogate.seed.json");

/// The 51-city, 50-item fixture instance.
pub fn eil51_instance() -> Instance {
    parse_instance(INSTANCE).expect("fixture parses")
}

/// Its stored seed solution.
pub fn eil51_seed(inst: &Instance) -> TtpSolution {
    let snap: SolutionSnapshot = serde_json::from_str(SEED).expect("seed parses");
    TtpSolution::from_snapshot(inst, &snap).expect("seed is valid")
}
