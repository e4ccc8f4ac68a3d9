#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qcg_core::circuit::{AddOutcome, Circuit};
use qcg_core::gate::{Gate, GateKind, Qubit};
use qcg_core::sim::{circuit_unitary_on, max_abs_diff, sequence_unitary, Unitary};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TOL: f64 = 1e-10;

/// `F[x][y] = ω^(xy) / √N` with the output index bit-reversed.
pub fn dft_bit_reversed(n: usize) -> Unitary {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut u = Unitary::zeros(dim, dim);
    for x in 0..dim {
        for y in 0..dim {
            let phase = 2.0 * PI * ((x * y) % dim) as f64 / dim as f64;
            u[(reverse_bits(x, n), y)] = Complex64::from_polar(scale, phase);
        }
    }
    u
}

pub fn reverse_bits(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| (acc << 1) | ((x >> b) & 1))
}

/// Unitary of the basis permutation `x → f(x)` on `n` qubits.
pub fn permutation(n: usize, f: impl Fn(usize) -> usize) -> Unitary {
    let dim = 1usize << n;
    let mut u = Unitary::zeros(dim, dim);
    for x in 0..dim {
        u[(f(x), x)] = Complex64::new(1.0, 0.0);
    }
    u
}

pub fn random_angle(rng: &mut impl Rng) -> f64 {
    if rng.random_bool(0.5) {
        let k = rng.random_range(0..5);
        rng.random_range(-8..8) as f64 * PI / (1 << k) as f64
    } else {
        rng.random_range(-7.0..7.0)
    }
}

/// Random gate on qubits `0..width` with up to two controls.
pub fn random_gate(rng: &mut impl Rng, width: usize) -> Gate {
    let kind = GateKind::ALL[rng.random_range(0..GateKind::ALL.len())];
    let mut qubits: Vec<Qubit> = (0..width as Qubit).collect();
    qubits.shuffle(rng);
    let controls = rng.random_range(0..width.min(3));
    let angle = kind.is_parametric().then(|| random_angle(rng));
    Gate::new(kind, &qubits[..1], &qubits[1..1 + controls], angle).unwrap()
}

/// Feed `gates` through `add_gate` and check every soundness property.
pub fn check_soundness(width: usize, gates: &[Gate], k_swap: usize) -> Result<(), String> {
    let mut circ = Circuit::new(k_swap);
    for (i, g) in gates.iter().enumerate() {
        circ.add_gate(g.clone());
        circ.validate()
            .map_err(|e| format!("invalid after insertion {i} ({g}): {e}"))?;
    }
    let built = circuit_unitary_on(&circ, width).map_err(|e| e.to_string())?;
    let naive = sequence_unitary(width, gates).map_err(|e| e.to_string())?;
    let diff = max_abs_diff(&built, &naive);
    if diff > TOL {
        return Err(format!("unitary differs by {diff:e}"));
    }
    Ok(())
}

/// Add `g` then its inverse; an `Added` gate must be removed again and the
/// unitary must always come back.
pub fn check_inverse_pair(circ: &mut Circuit, g: &Gate, width: usize) -> Result<(), String> {
    let before_u = circuit_unitary_on(circ, width).map_err(|e| e.to_string())?;
    let before_count = circ.gate_count();
    let first = circ.add_gate(g.clone());
    let second = circ.add_gate(g.inverse());
    circ.validate().map_err(|e| e.to_string())?;
    if matches!(first, AddOutcome::Added { .. })
        && !matches!(
            second,
            AddOutcome::Cancelled { .. } | AddOutcome::Merged { removed: true, .. }
        )
    {
        return Err(format!("{g} then its inverse gave {first:?}, {second:?}"));
    }
    if matches!(first, AddOutcome::Added { .. }) && circ.gate_count() != before_count {
        return Err(format!(
            "gate count {} -> {}",
            before_count,
            circ.gate_count()
        ));
    }
    let after = circuit_unitary_on(circ, width).map_err(|e| e.to_string())?;
    let diff = max_abs_diff(&before_u, &after);
    if diff > TOL {
        return Err(format!("{g} and inverse changed the unitary by {diff:e}"));
    }
    Ok(())
}
