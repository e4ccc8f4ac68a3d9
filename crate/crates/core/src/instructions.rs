//! Predefined routines and the instruction list.
//!
//! The QFT here omits the final qubit-reversal swaps. Its layer layout is
//! fixed: `H(j)` sits in layer `2j` and `CP(control c, target t)` with angle
//! `π / 2^(c−t)` in layer `c + t`, for `2n − 1` layers in total. The
//! improved builder writes that layout directly; the generic builder
//! arrives at it through [`Circuit::add_gate`].

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::angle::normalize_angle;
use crate::circuit::{Circuit, DEFAULT_K_SWAP};
use crate::gate::{Gate, Qubit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstructionError {
    #[error("addend {addend} does not fit in {width} qubits")]
    AddendOutOfRange { addend: u64, width: usize },
}

/// Normalized `π / 2^k` for `k = 0..n`.
fn qft_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| normalize_angle(PI * 2f64.powi(-(k as i32))))
        .collect()
}

/// QFT on qubits `0..n`, one [`Circuit::add_gate`] call per gate.
pub fn build_qft_generic(n: usize, k_swap: usize) -> Circuit {
    let angles = qft_angles(n);
    let mut circ = Circuit::with_width(n, k_swap);
    for j in 0..n {
        circ.add_gate(Gate::h(j as Qubit));
        for c in j + 1..n {
            circ.add_gate(Gate::cp_unchecked(c as Qubit, j as Qubit, angles[c - j]));
        }
    }
    circ
}

/// Number of gates in layer `layer` of the QFT on `n` qubits.
fn qft_layer_size(n: usize, layer: usize) -> usize {
    let hadamard = usize::from(layer.is_multiple_of(2));
    if layer == 0 {
        return hadamard;
    }
    // CP(c, t) with c + t = layer and t < c < n.
    let lo = (layer + 1).saturating_sub(n);
    let hi = (layer - 1) / 2;
    hadamard + (hi + 1).saturating_sub(lo)
}

/// QFT on qubits `0..n` written straight into its known layers. The result
/// is structurally identical to [`build_qft_generic`], including the order
/// of gates within each layer.
pub fn build_qft_improved(n: usize) -> Circuit {
    if n == 0 {
        return Circuit::new(DEFAULT_K_SWAP);
    }
    let angles = qft_angles(n);
    let depth = 2 * n - 1;
    let mut circ = Circuit::with_layout(
        n,
        (0..depth).map(|l| qft_layer_size(n, l)),
        n,
        DEFAULT_K_SWAP,
    );
    for j in 0..n {
        circ.push_unchecked(2 * j, Gate::h(j as Qubit));
        for c in j + 1..n {
            circ.push_unchecked(
                c + j,
                Gate::cp_unchecked(c as Qubit, j as Qubit, angles[c - j]),
            );
        }
    }
    circ
}

/// Inverse QFT: the gates of [`build_qft_improved`] inverted and in reverse
/// order, again written into known layers.
pub fn build_iqft(n: usize) -> Circuit {
    if n == 0 {
        return Circuit::new(DEFAULT_K_SWAP);
    }
    let angles: Vec<f64> = qft_angles(n)
        .into_iter()
        .map(|a| normalize_angle(-a))
        .collect();
    let last = 2 * n - 2;
    let mut circ = Circuit::with_layout(
        n,
        (0..last + 1).map(|l| qft_layer_size(n, last - l)),
        n,
        DEFAULT_K_SWAP,
    );
    for j in (0..n).rev() {
        for c in (j + 1..n).rev() {
            circ.push_unchecked(
                last - (c + j),
                Gate::cp_unchecked(c as Qubit, j as Qubit, angles[c - j]),
            );
        }
        circ.push_unchecked(last - 2 * j, Gate::h(j as Qubit));
    }
    circ
}

/// In-place adder `|x⟩ → |x + addend mod 2^n⟩` on qubits `0..n`: QFT,
/// one phase per qubit, inverse QFT. Phases and the inverse QFT go through
/// [`Circuit::add_gate`], so zero phases vanish and adjacent rotations fold.
///
/// After the QFT qubit `j` carries the phase of `x / 2^(n−j)`, so it
/// receives `2π · addend / 2^(n−j)`.
pub fn build_fourier_adder(n: usize, addend: u64) -> Result<Circuit, InstructionError> {
    build_fourier_adder_with(n, addend, DEFAULT_K_SWAP)
}

/// [`build_fourier_adder`] with the phases and inverse QFT added under
/// `k_swap`. With `k_swap = 0` nothing cancels or merges.
pub fn build_fourier_adder_with(
    n: usize,
    addend: u64,
    k_swap: usize,
) -> Result<Circuit, InstructionError> {
    if n < 64 && addend >> n != 0 {
        return Err(InstructionError::AddendOutOfRange { addend, width: n });
    }
    let mut circ = build_qft_improved(n);
    circ.set_k_swap(k_swap);
    for j in 0..n {
        let bits = n - j;
        let reduced = if bits >= 64 {
            addend
        } else {
            addend & ((1u64 << bits) - 1)
        };
        if reduced == 0 {
            continue;
        }
        let theta = 2.0 * PI * reduced as f64 * 2f64.powi(-(bits as i32));
        circ.add_gate(Gate::p(j as Qubit, theta));
    }
    for (_, g) in build_iqft(n).iter_gates() {
        circ.add_gate(g.clone());
    }
    Ok(circ)
}

/// Instruction vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Qft,
    Iqft,
    Add,
    Comp,
    CSub,
}

impl Label {
    /// Registered inverse label, used by tokenization.
    pub fn inverse(self) -> Option<Label> {
        match self {
            Label::Qft => Some(Label::Iqft),
            Label::Iqft => Some(Label::Qft),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Qft => "QFT",
            Label::Iqft => "IQFT",
            Label::Add => "ADD",
            Label::Comp => "COMP",
            Label::CSub => "cSUB",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct Instruction {
    pub label: Label,
    pub circuit: Circuit,
}

impl Instruction {
    pub fn width(&self) -> usize {
        self.circuit.width()
    }

    fn cancels(&self, next: &Instruction) -> bool {
        self.label.inverse() == Some(next.label) && self.width() == next.width()
    }
}

/// Prebuilt circuits applied one after another.
#[derive(Debug, Clone, Default)]
pub struct InstructionList {
    instructions: Vec<Instruction>,
    head: usize,
}

impl InstructionList {
    pub fn new() -> InstructionList {
        InstructionList::default()
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Index one past the current instruction.
    pub fn head(&self) -> usize {
        self.head
    }

    pub fn iter(&self) -> impl Iterator<Item = &Instruction> {
        self.instructions.iter()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.instructions.iter().map(|i| i.label).collect()
    }

    /// Append without tokenizing.
    pub fn push(&mut self, label: Label, circuit: Circuit) {
        self.instructions.push(Instruction { label, circuit });
        self.head = self.instructions.len();
    }

    /// Append, then drop any inverse pairs this exposes at the tail.
    /// Returns the number of pairs removed.
    pub fn append(&mut self, label: Label, circuit: Circuit) -> usize {
        self.push(label, circuit);
        self.tokenize()
    }

    /// Remove adjacent `(label, inverse label)` pairs of equal width, including
    /// pairs that only become adjacent once an inner pair is gone. Returns the
    /// number of pairs removed.
    pub fn tokenize(&mut self) -> usize {
        let mut kept: Vec<Instruction> = Vec::with_capacity(self.instructions.len());
        let mut removed = 0;
        for inst in self.instructions.drain(..) {
            match kept.last() {
                Some(top) if top.cancels(&inst) => {
                    kept.pop();
                    removed += 1;
                }
                _ => kept.push(inst),
            }
        }
        self.instructions = kept;
        self.head = self.instructions.len();
        removed
    }

    /// One circuit holding every instruction, each gate re-added through
    /// [`Circuit::add_gate`].
    pub fn flatten(&self, k_swap: usize) -> Circuit {
        let mut circ = Circuit::new(k_swap);
        for inst in &self.instructions {
            for (_, g) in inst.circuit.iter_gates() {
                circ.add_gate(g.clone());
            }
        }
        circ
    }
}
