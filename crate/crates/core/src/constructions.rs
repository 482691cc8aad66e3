//! Executable counterexample constructions, each verified by direct
//! re-evaluation of its defining inequalities.

use crate::error::Result;

pub mod block_gap;
pub mod mixed_instance;
pub mod reordered_assembly;

pub use block_gap::{build_e1, E1Instance, E1Report};
pub use mixed_instance::{build_mixed_instance, verify_intervals_plus_1dim, MixedInstance};
pub use reordered_assembly::{
    assemble_t3, search_t3_witness, AssemblyStatus, BlockWitness, ExplicitWitnessSource,
    SearchWitnessSource, T3Assembly, WitnessSource,
};

/// Convenience: the l1 oracle every construction report defaults to.
pub(crate) fn l1() -> Result<crate::spaces::NormOracle> {
    crate::spaces::NormOracle::lp(1.0)
}
