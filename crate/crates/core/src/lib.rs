//! Speed-oriented quantum circuit generation.
//!
//! Circuits are stored as layers of gates on disjoint qubits together with
//! two lookup tables, so that placing a gate, cancelling it against its
//! inverse, or folding it into a neighbouring phase gate costs constant
//! time. On top of that sit predefined routines (QFT, inverse QFT, Fourier
//! adder), an instruction list with symbol-level tokenization, text
//! exporters, and a construction benchmark.

pub mod alloc;
pub mod angle;
pub mod bench;
pub mod circuit;
pub mod export;
pub mod gate;
pub mod instructions;
pub mod sim;

pub use circuit::{AddOutcome, Circuit, CircuitError, QubitTimeline, DEFAULT_K_SWAP, NO_CAP};
pub use gate::{Gate, GateError, GateKind, Qubit};
pub use instructions::{
    build_fourier_adder, build_fourier_adder_with, build_iqft, build_qft_generic,
    build_qft_improved, InstructionList, Label,
};
