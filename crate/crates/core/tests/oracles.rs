mod common;

use common::{dft_bit_reversed, permutation, TOL};
use qcg_core::instructions::{
    build_fourier_adder, build_fourier_adder_with, build_iqft, build_qft_generic,
    build_qft_improved, InstructionList, Label,
};
use qcg_core::sim::{
    circuit_unitary, circuit_unitary_on, max_abs_diff, unitarity_error, StateVector,
};
use qcg_core::{Circuit, DEFAULT_K_SWAP};

#[test]
fn qft_matches_bit_reversed_dft() {
    for n in 1..=8 {
        let u = circuit_unitary(&build_qft_generic(n, DEFAULT_K_SWAP)).unwrap();
        assert!(max_abs_diff(&u, &dft_bit_reversed(n)) < TOL, "n={n}");
        assert!(unitarity_error(&u) < TOL);
    }
    // Without the output reversal the match fails, so the check pins the
    // qubit order.
    let u = circuit_unitary(&build_qft_generic(3, DEFAULT_K_SWAP)).unwrap();
    let plain = common::permutation(3, |x| common::reverse_bits(x, 3)) * dft_bit_reversed(3);
    assert!(max_abs_diff(&u, &plain) > 0.1);
}

#[test]
fn iqft_is_adjoint_of_qft() {
    let q = circuit_unitary(&build_qft_improved(3)).unwrap();
    let iqft = build_iqft(3);
    assert_eq!(iqft.gate_count(), 6);
    let i = circuit_unitary(&iqft).unwrap();
    assert!(max_abs_diff(&i, &q.adjoint()) < TOL);
    assert_eq!(build_iqft(1).gate_count(), 1);
}

#[test]
fn adder_is_a_modular_shift() {
    for n in 1..=4 {
        for a in 0..1u64 << n {
            let c = build_fourier_adder(n, a).unwrap();
            let u = circuit_unitary_on(&c, n).unwrap();
            let shift = permutation(n, |x| (x + a as usize) % (1 << n));
            assert!(max_abs_diff(&u, &shift) < TOL, "n={n} a={a}");
        }
    }
}

#[test]
fn adder_examples() {
    let id = circuit_unitary_on(&build_fourier_adder(1, 0).unwrap(), 1).unwrap();
    assert!(max_abs_diff(&id, &permutation(1, |x| x)) < TOL);

    let c = build_fourier_adder(3, 1).unwrap();
    let mut s = StateVector::basis(3, 5).unwrap();
    for (_, g) in c.iter_gates() {
        s.apply_gate(g).unwrap();
    }
    assert!(s.amplitudes()[6].norm() >= 1.0 - 1e-10);

    let u = circuit_unitary(&build_fourier_adder(4, 9).unwrap()).unwrap();
    assert!(max_abs_diff(&u, &permutation(4, |x| (x + 9) % 16)) < TOL);
    assert!(build_fourier_adder(3, 8).is_err());

    // Without optimizations nothing collapses, but the action is the same.
    let plain = build_fourier_adder_with(3, 5, 0).unwrap();
    assert_eq!(plain.gate_count(), 15);
    assert_eq!(build_fourier_adder_with(3, 0, 0).unwrap().gate_count(), 12);
    assert!(build_fourier_adder(3, 0).unwrap().is_empty());
    let u = circuit_unitary(&plain).unwrap();
    assert!(max_abs_diff(&u, &permutation(3, |x| (x + 5) % 8)) < TOL);
}

#[test]
fn flatten_two_adders() {
    let mut list = InstructionList::new();
    list.append(Label::Add, build_fourier_adder(3, 1).unwrap());
    list.append(Label::Add, build_fourier_adder(3, 1).unwrap());
    let flat = list.flatten(DEFAULT_K_SWAP);
    flat.validate().unwrap();
    let u = circuit_unitary_on(&flat, 3).unwrap();
    assert!(max_abs_diff(&u, &permutation(3, |x| (x + 2) % 8)) < TOL);
}

#[test]
fn flatten_single_qft_equals_generic() {
    let mut list = InstructionList::new();
    list.append(Label::Qft, build_qft_improved(5));
    assert_eq!(
        list.flatten(DEFAULT_K_SWAP),
        build_qft_generic(5, DEFAULT_K_SWAP)
    );
    assert!(InstructionList::new().flatten(DEFAULT_K_SWAP).is_empty());
}

#[test]
fn qft_then_iqft_through_add_gate_is_empty() {
    for n in 1..=16 {
        let mut c = build_qft_generic(n, DEFAULT_K_SWAP);
        for (_, g) in build_iqft(n).iter_gates() {
            c.add_gate(g.clone());
        }
        assert!(c.is_empty(), "n={n}");
        assert_eq!(c.num_layers(), 0);
        assert_eq!(c, Circuit::default());
    }
}
