//! Small dense state-vector simulator, used as a reference when checking
//! circuits produced by the backend.
//!
//! Qubit 0 is the most significant bit of a basis index.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::gate::{Gate, GateKind};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 10;

pub type Unitary = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("{0} qubits exceeds the simulator limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("gate touches qubit {qubit} but the register has {width}")]
    QubitOutOfRange { qubit: u32, width: usize },
}

/// 2×2 matrix `[[a, b], [c, d]]` of a gate kind.
pub fn kind_matrix(kind: GateKind, angle: f64) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let pi = std::f64::consts::PI;
    match kind {
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, -i], [i, zero]],
        GateKind::Z => [[one, zero], [zero, -one]],
        GateKind::H => [[one * r, one * r], [one * r, -one * r]],
        GateKind::S => [[one, zero], [zero, i]],
        GateKind::Sdg => [[one, zero], [zero, -i]],
        GateKind::T => [[one, zero], [zero, phase(pi / 4.0)]],
        GateKind::Tdg => [[one, zero], [zero, phase(-pi / 4.0)]],
        GateKind::P => [[one, zero], [zero, phase(angle)]],
        GateKind::Rz => [[phase(-angle / 2.0), zero], [zero, phase(angle / 2.0)]],
    }
}

#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|index⟩` on `n` qubits.
    pub fn basis(n: usize, index: usize) -> Result<StateVector, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector, SimError> {
        let n = amps.len().trailing_zeros() as usize;
        assert!(
            amps.len().is_power_of_two(),
            "amplitude count must be a power of two"
        );
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn mask(&self, q: u32) -> usize {
        1 << (self.n - 1 - q as usize)
    }

    /// Apply `gate`: the target update happens on the subspace where all
    /// controls are 1.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        if let Some(q) = gate.support().find(|&q| q as usize >= self.n) {
            return Err(SimError::QubitOutOfRange {
                qubit: q,
                width: self.n,
            });
        }
        let m = kind_matrix(gate.kind(), gate.angle().unwrap_or(0.0));
        let t = self.mask(gate.target());
        let ctrl: usize = gate.controls().iter().map(|&c| self.mask(c)).sum();
        for i in 0..self.amps.len() {
            if i & t != 0 || i & ctrl != ctrl {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | t]);
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i | t] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }
}

/// Unitary of a gate sequence on `n` qubits, applied left to right.
pub fn sequence_unitary<'a>(
    n: usize,
    gates: impl IntoIterator<Item = &'a Gate> + Clone,
) -> Result<Unitary, SimError> {
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    let dim = 1usize << n;
    let mut u = Unitary::zeros(dim, dim);
    for col in 0..dim {
        let mut state = StateVector::basis(n, col)?;
        for g in gates.clone() {
            state.apply_gate(g)?;
        }
        for (row, a) in state.amps.iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    Ok(u)
}

/// Unitary of `circ` on `max(width, n)` qubits, gates in
/// [`Circuit::iter_gates`] order.
pub fn circuit_unitary_on(circ: &Circuit, n: usize) -> Result<Unitary, SimError> {
    let n = n.max(circ.width());
    let gates: Vec<&Gate> = circ.iter_gates().map(|(_, g)| g).collect();
    sequence_unitary(n, gates.iter().copied())
}

pub fn circuit_unitary(circ: &Circuit) -> Result<Unitary, SimError> {
    circuit_unitary_on(circ, circ.width())
}

/// Largest elementwise modulus of `a − b`.
pub fn max_abs_diff(a: &Unitary, b: &Unitary) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U†U − I|`.
pub fn unitarity_error(u: &Unitary) -> f64 {
    let id = Unitary::identity(u.nrows(), u.ncols());
    max_abs_diff(&(u.adjoint() * u), &id)
}
