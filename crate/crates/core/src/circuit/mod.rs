//! Circuit netlists and their compilation to penalty Hamiltonians.

mod compile;
mod netlist;

pub use compile::{
    check_embedding, clamp, compile, default_delta, gap_check, AppliedClamp, CompiledModel, EmbeddingCheck, GapReport,
    Mode, PlacedGadget, LEMMA_CHECK_QUBITS,
};
pub use netlist::{Arg, Circuit, Clamp, Gate, GateOp};
