//! Layered circuit storage.
//!
//! Gates live in `layers[layer][slot]`. Two lookup tables make insertion
//! constant time:
//!
//! * `gate_index[layer][qubit]` is the slot of the gate touching `qubit` in
//!   `layer`, or `-1`;
//! * one [`QubitTimeline`] per qubit lists the layers the qubit is busy in,
//!   in ascending order.
//!
//! [`Circuit::add_gate`] places a gate in the lowest layer its qubits allow,
//! cancelling it against an adjacent inverse, folding it into an adjacent
//! phase gate, or sliding it below commuting gates a bounded number of
//! times.

use thiserror::Error;

use crate::angle::{is_zero_angle, normalize_angle};
use crate::gate::{Gate, Qubit};

/// Default bound on placement attempts per inserted gate.
pub const DEFAULT_K_SWAP: usize = 4;

/// Sentinel for "no cap" in [`Circuit::min_possible_layer`].
pub const NO_CAP: usize = usize::MAX;

/// Sentinel stored in `gate_index` for a free slot.
pub const NO_GATE: i32 = -1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("no gate at layer {layer}, slot {slot}")]
    NoSuchSlot { layer: usize, slot: usize },
    #[error("qubit {qubit} is already busy in layer {layer}")]
    QubitBusy { layer: usize, qubit: Qubit },
    #[error("inconsistent circuit: {0}")]
    Inconsistent(String),
}

/// Ascending list of the layers a qubit is busy in. `head` is the number of
/// valid entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QubitTimeline {
    layers: Vec<u32>,
}

impl QubitTimeline {
    pub fn head(&self) -> usize {
        self.layers.len()
    }

    pub fn occupied(&self) -> &[u32] {
        &self.layers
    }

    pub fn top(&self) -> Option<usize> {
        self.layers.last().map(|&l| l as usize)
    }

    /// Largest busy layer strictly below `cap`.
    pub fn last_below(&self, cap: usize) -> Option<usize> {
        let top = self.top()?;
        if top < cap {
            return Some(top);
        }
        let idx = self.layers.partition_point(|&l| (l as usize) < cap);
        idx.checked_sub(1).map(|i| self.layers[i] as usize)
    }

    fn insert(&mut self, layer: usize) {
        let layer = layer as u32;
        match self.layers.last() {
            Some(&top) if top >= layer => {
                let idx = self.layers.partition_point(|&l| l < layer);
                debug_assert_ne!(self.layers.get(idx), Some(&layer));
                self.layers.insert(idx, layer);
            }
            _ => self.layers.push(layer),
        }
    }

    fn remove(&mut self, layer: usize) {
        let layer = layer as u32;
        if self.layers.last() == Some(&layer) {
            self.layers.pop();
        } else if let Ok(idx) = self.layers.binary_search(&layer) {
            self.layers.remove(idx);
        } else {
            debug_assert!(false, "layer {layer} not on timeline");
        }
    }
}

/// What [`Circuit::add_gate`] did with a gate.
#[derive(Debug, Clone, PartialEq)]
pub enum AddOutcome {
    /// Appended to `layer`.
    Added { layer: usize },
    /// Cancelled against its inverse, which was removed from `layer`.
    Cancelled { layer: usize, removed: Gate },
    /// Angle folded into the phase gate at `layer`; `removed` when the sum
    /// was ≡ 0 and that gate was deleted.
    Merged { layer: usize, removed: bool },
}

#[derive(Debug, Clone)]
pub struct Circuit {
    layers: Vec<Vec<Gate>>,
    gate_index: Vec<Vec<i32>>,
    timelines: Vec<QubitTimeline>,
    k_swap: usize,
    gate_count: usize,
}

impl Default for Circuit {
    fn default() -> Self {
        Circuit::new(DEFAULT_K_SWAP)
    }
}

impl Circuit {
    /// Empty circuit. `k_swap` bounds the placement attempts per gate; `0`
    /// turns off cancellation, merging and sliding entirely.
    pub fn new(k_swap: usize) -> Circuit {
        Circuit {
            layers: Vec::new(),
            gate_index: Vec::new(),
            timelines: Vec::new(),
            k_swap,
            gate_count: 0,
        }
    }

    /// Empty circuit with `width` qubits registered up front.
    pub fn with_width(width: usize, k_swap: usize) -> Circuit {
        let mut c = Circuit::new(k_swap);
        c.timelines.resize_with(width, QubitTimeline::default);
        c
    }

    /// Preallocated layout for builders that know every layer size and
    /// every qubit's busy count in advance.
    pub(crate) fn with_layout(
        width: usize,
        layer_sizes: impl ExactSizeIterator<Item = usize>,
        busy_per_qubit: usize,
        k_swap: usize,
    ) -> Circuit {
        let depth = layer_sizes.len();
        let mut layers = Vec::with_capacity(depth);
        for size in layer_sizes {
            layers.push(Vec::with_capacity(size));
        }
        Circuit {
            layers,
            gate_index: vec![vec![NO_GATE; width]; depth],
            timelines: (0..width)
                .map(|_| QubitTimeline {
                    layers: Vec::with_capacity(busy_per_qubit),
                })
                .collect(),
            k_swap,
            gate_count: 0,
        }
    }

    /// Append to a preallocated layer without any checks. Callers must
    /// visit each qubit's layers in ascending order and keep layers
    /// disjoint.
    pub(crate) fn push_unchecked(&mut self, layer: usize, gate: Gate) {
        let row = &mut self.gate_index[layer];
        let slot = self.layers[layer].len() as i32;
        for q in gate.support() {
            let q = q as usize;
            debug_assert_eq!(row[q], NO_GATE);
            row[q] = slot;
            let tl = &mut self.timelines[q].layers;
            debug_assert!(tl.last().is_none_or(|&l| (l as usize) < layer));
            tl.push(layer as u32);
        }
        self.layers[layer].push(gate);
        self.gate_count += 1;
    }

    pub fn k_swap(&self) -> usize {
        self.k_swap
    }

    pub fn set_k_swap(&mut self, k_swap: usize) {
        self.k_swap = k_swap;
    }

    /// 1 + highest qubit index seen (or the registered width).
    pub fn width(&self) -> usize {
        self.timelines.len()
    }

    /// Number of non-empty layers.
    pub fn depth(&self) -> usize {
        self.layers.iter().filter(|l| !l.is_empty()).count()
    }

    /// Number of stored layers, counting interior empty ones.
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gate_count
    }

    pub fn is_empty(&self) -> bool {
        self.gate_count == 0
    }

    pub fn layer(&self, layer: usize) -> &[Gate] {
        self.layers.get(layer).map_or(&[], Vec::as_slice)
    }

    pub fn layers(&self) -> impl Iterator<Item = &[Gate]> {
        self.layers.iter().map(Vec::as_slice)
    }

    /// Every gate with its layer, in ascending layer order and storage order
    /// within a layer.
    pub fn iter_gates(&self) -> impl Iterator<Item = (usize, &Gate)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(l, gates)| gates.iter().map(move |g| (l, g)))
    }

    /// Slot of the gate on `qubit` in `layer`.
    pub fn gate_index(&self, layer: usize, qubit: Qubit) -> Option<usize> {
        let slot = self.raw_index(layer, qubit);
        (slot != NO_GATE).then_some(slot as usize)
    }

    /// Raw `gate_index` entry, `-1` when free.
    pub fn raw_index(&self, layer: usize, qubit: Qubit) -> i32 {
        self.gate_index
            .get(layer)
            .and_then(|row| row.get(qubit as usize))
            .copied()
            .unwrap_or(NO_GATE)
    }

    pub fn timeline(&self, qubit: Qubit) -> Option<&QubitTimeline> {
        self.timelines.get(qubit as usize)
    }

    /// One past the highest layer below `cap` in which any qubit of `gate`
    /// is busy; `0` if there is none. Read only.
    pub fn min_possible_layer(&self, gate: &Gate, cap: usize) -> usize {
        let mut m = 0;
        for q in gate.support() {
            if let Some(l) = self.timeline(q).and_then(|tl| tl.last_below(cap)) {
                m = m.max(l + 1);
            }
        }
        m
    }

    /// Insert a gate, applying the local optimizations.
    pub fn add_gate(&mut self, gate: Gate) -> AddOutcome {
        let mut cap = NO_CAP;
        let mut layer = self.min_possible_layer(&gate, cap);
        let mut m = layer;
        for attempt in 0..self.k_swap {
            if attempt > 0 {
                m = self.min_possible_layer(&gate, cap);
                // Layers m..cap are free on the gate's support.
                if m < cap {
                    layer = m;
                }
            }
            if m == 0 {
                break;
            }
            let blocking = m - 1;
            let mut all_commute = true;
            for q in gate.support() {
                let Some(slot) = self.gate_index(blocking, q) else {
                    continue;
                };
                let other = &self.layers[blocking][slot];
                // Merging subsumes the inverse test for phase pairs.
                if gate.is_phase_mergeable(other) {
                    let sum =
                        normalize_angle(other.angle().unwrap_or(0.0) + gate.angle().unwrap_or(0.0));
                    if is_zero_angle(sum) {
                        self.remove_slot(blocking, slot);
                        return AddOutcome::Merged {
                            layer: blocking,
                            removed: true,
                        };
                    }
                    self.layers[blocking][slot].set_angle(sum);
                    return AddOutcome::Merged {
                        layer: blocking,
                        removed: false,
                    };
                }
                if gate.is_inverse_of(other) {
                    let removed = self.remove_slot(blocking, slot);
                    return AddOutcome::Cancelled {
                        layer: blocking,
                        removed,
                    };
                }
                if !gate.commutes_with(other) {
                    all_commute = false;
                }
            }
            if !all_commute {
                break;
            }
            cap = blocking;
        }
        self.place(layer, gate);
        AddOutcome::Added { layer }
    }

    /// Put `gate` into `layer` if its qubits are free there.
    pub fn place_at(&mut self, layer: usize, gate: Gate) -> Result<(), CircuitError> {
        if let Some(qubit) = gate
            .support()
            .find(|&q| self.gate_index(layer, q).is_some())
        {
            return Err(CircuitError::QubitBusy { layer, qubit });
        }
        self.place(layer, gate);
        Ok(())
    }

    fn place(&mut self, layer: usize, gate: Gate) {
        if self.layers.len() <= layer {
            self.layers.resize_with(layer + 1, Vec::new);
            self.gate_index.resize_with(layer + 1, Vec::new);
        }
        let max_q = gate.max_qubit() as usize;
        if self.timelines.len() <= max_q {
            self.timelines
                .resize_with(max_q + 1, QubitTimeline::default);
        }
        let row = &mut self.gate_index[layer];
        if row.len() <= max_q {
            row.resize(max_q + 1, NO_GATE);
        }
        let slot = self.layers[layer].len() as i32;
        for q in gate.support() {
            debug_assert_eq!(row[q as usize], NO_GATE);
            row[q as usize] = slot;
            self.timelines[q as usize].insert(layer);
        }
        self.layers[layer].push(gate);
        self.gate_count += 1;
    }

    /// Remove the gate at `(layer, slot)`. The last gate of the layer moves
    /// into the freed slot.
    pub fn remove_gate(&mut self, layer: usize, slot: usize) -> Result<Gate, CircuitError> {
        if slot >= self.layer(layer).len() {
            return Err(CircuitError::NoSuchSlot { layer, slot });
        }
        Ok(self.remove_slot(layer, slot))
    }

    fn remove_slot(&mut self, layer: usize, slot: usize) -> Gate {
        let gate = self.layers[layer].swap_remove(slot);
        let row = &mut self.gate_index[layer];
        for q in gate.support() {
            row[q as usize] = NO_GATE;
            self.timelines[q as usize].remove(layer);
        }
        if let Some(moved) = self.layers[layer].get(slot) {
            for q in moved.support() {
                row[q as usize] = slot as i32;
            }
        }
        self.gate_count -= 1;
        while self.layers.last().is_some_and(Vec::is_empty) {
            self.layers.pop();
            self.gate_index.pop();
        }
        gate
    }

    /// Same gates in the same layers; storage order within a layer, the
    /// lookup tables and `k_swap` are ignored.
    pub fn same_structure(&self, other: &Circuit) -> bool {
        if self.gate_count != other.gate_count {
            return false;
        }
        let depth = self.layers.len().max(other.layers.len());
        (0..depth).all(|l| {
            let (a, b) = (self.layer(l), other.layer(l));
            a.len() == b.len() && sorted_by_min_qubit(a) == sorted_by_min_qubit(b)
        })
    }

    /// Rebuild both lookup tables from the layers and compare them with the
    /// incrementally maintained ones. Also checks layer disjointness.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let fail = |msg: String| Err(CircuitError::Inconsistent(msg));
        let mut expected: Vec<Vec<u32>> = vec![Vec::new(); self.timelines.len()];
        let mut count = 0;
        if self.layers.len() != self.gate_index.len() {
            return fail("layer and index row counts differ".into());
        }
        if self.layers.last().is_some_and(Vec::is_empty) {
            return fail("trailing empty layer".into());
        }
        for (l, gates) in self.layers.iter().enumerate() {
            let row = &self.gate_index[l];
            let mut seen = vec![NO_GATE; row.len()];
            for (slot, g) in gates.iter().enumerate() {
                count += 1;
                for q in g.support() {
                    let qi = q as usize;
                    if qi >= row.len() || qi >= self.timelines.len() {
                        return fail(format!("qubit {q} of layer {l} outside the tables"));
                    }
                    if seen[qi] != NO_GATE {
                        return fail(format!("qubit {q} used twice in layer {l}"));
                    }
                    seen[qi] = slot as i32;
                    expected[qi].push(l as u32);
                }
            }
            if seen != *row {
                return fail(format!("gate_index row {l} is {row:?}, expected {seen:?}"));
            }
        }
        for (q, (tl, want)) in self.timelines.iter().zip(&expected).enumerate() {
            if tl.layers != *want {
                return fail(format!(
                    "timeline of qubit {q} is {:?}, expected {want:?}",
                    tl.layers
                ));
            }
        }
        if count != self.gate_count {
            return fail(format!("gate count {} but {count} stored", self.gate_count));
        }
        Ok(())
    }
}

fn sorted_by_min_qubit(gates: &[Gate]) -> Vec<&Gate> {
    let mut v: Vec<&Gate> = gates.iter().collect();
    v.sort_by_key(|g| g.min_qubit());
    v
}

/// Structural equality, see [`Circuit::same_structure`].
impl PartialEq for Circuit {
    fn eq(&self, other: &Circuit) -> bool {
        self.same_structure(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateKind;
    use std::f64::consts::PI;

    fn qft_sequence(n: u32) -> Vec<Gate> {
        let mut gates = Vec::new();
        for j in 0..n {
            gates.push(Gate::h(j));
            for c in j + 1..n {
                gates.push(Gate::cp(c, j, PI / 2f64.powi((c - j) as i32)).unwrap());
            }
        }
        gates
    }

    fn qft5() -> Circuit {
        let mut c = Circuit::default();
        for g in qft_sequence(5) {
            c.add_gate(g);
        }
        c
    }

    /// Brute force: scan every stored gate.
    fn brute_min_layer(c: &Circuit, g: &Gate, cap: usize) -> usize {
        c.iter_gates()
            .filter(|(l, other)| *l < cap && other.shares_qubit(g))
            .map(|(l, _)| l + 1)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn min_layer_of_empty_circuit() {
        assert_eq!(
            Circuit::default().min_possible_layer(&Gate::h(0), NO_CAP),
            0
        );
    }

    #[test]
    fn min_layer_for_last_hadamard() {
        let mut c = Circuit::default();
        let seq = qft_sequence(5);
        for g in &seq[..seq.len() - 1] {
            c.add_gate(g.clone());
        }
        assert_eq!(c.min_possible_layer(&Gate::h(4), NO_CAP), 8);
    }

    #[test]
    fn min_layer_with_cap_matches_brute_force() {
        let c = qft5();
        let g = Gate::cp(4, 0, 0.3).unwrap();
        // Frozen from the brute-force scan: busy layers of {0, 4} below 4
        // are 0..=3 (CP(3,0) sits in layer 3).
        assert_eq!(brute_min_layer(&c, &g, 4), 4);
        assert_eq!(c.min_possible_layer(&g, 4), 4);
        for cap in 0..12 {
            for q in 0..5 {
                let h = Gate::h(q);
                assert_eq!(c.min_possible_layer(&h, cap), brute_min_layer(&c, &h, cap));
            }
        }
    }

    #[test]
    fn first_layers_of_qft() {
        let mut c = Circuit::default();
        assert_eq!(c.add_gate(Gate::h(0)), AddOutcome::Added { layer: 0 });
        assert_eq!(
            c.add_gate(Gate::cp(1, 0, PI / 2.0).unwrap()),
            AddOutcome::Added { layer: 1 }
        );
        assert_eq!(c.add_gate(Gate::h(1)), AddOutcome::Added { layer: 2 });
    }

    #[test]
    fn qft5_lookup_tables() {
        let c = qft5();
        assert_eq!(c.depth(), 9);
        assert_eq!(c.gate_count(), 15);
        c.validate().unwrap();
        for q in 0..5u32 {
            let want: Vec<u32> = (q..q + 5).collect();
            assert_eq!(c.timeline(q).unwrap().occupied(), want.as_slice());
        }
        assert_eq!(c.raw_index(0, 1), NO_GATE);
        assert_eq!(c.raw_index(8, 4), 0);
    }

    #[test]
    fn trailing_hadamard_cancels() {
        let mut c = qft5();
        assert_eq!(c.timeline(4).unwrap().head(), 5);
        let out = c.add_gate(Gate::h(4));
        assert_eq!(
            out,
            AddOutcome::Cancelled {
                layer: 8,
                removed: Gate::h(4)
            }
        );
        assert_eq!(c.timeline(4).unwrap().head(), 4);
        assert_eq!(c.timeline(4).unwrap().occupied(), &[4, 5, 6, 7]);
        assert_eq!(c.depth(), 8);
        c.validate().unwrap();
    }

    #[test]
    fn phase_merging() {
        let mut c = Circuit::default();
        c.add_gate(Gate::p(0, PI / 4.0));
        let out = c.add_gate(Gate::p(0, PI / 4.0));
        assert_eq!(
            out,
            AddOutcome::Merged {
                layer: 0,
                removed: false
            }
        );
        assert_eq!(c.layer(0)[0].angle(), Some(PI / 2.0));

        let mut c = Circuit::default();
        c.add_gate(Gate::p(0, PI));
        assert_eq!(
            c.add_gate(Gate::p(0, PI)),
            AddOutcome::Merged {
                layer: 0,
                removed: true
            }
        );
        assert!(c.is_empty() && c.num_layers() == 0);
        c.validate().unwrap();
    }

    #[test]
    fn commuting_gate_slides_down() {
        let mut c = Circuit::new(4);
        c.add_gate(Gate::p(0, 0.3)); // layer 0
        c.add_gate(Gate::h(1)); // layer 0
        c.add_gate(Gate::cp(1, 2, 0.2).unwrap()); // layer 1
        c.add_gate(Gate::single(GateKind::T, 1)); // layer 2 on qubit 1
                                                  // Z on qubit 2: blocked by CP(1,2) at layer 1, which commutes, then
                                                  // nothing below on qubit 2, so it lands in layer 0.
        assert_eq!(
            c.add_gate(Gate::single(GateKind::Z, 2)),
            AddOutcome::Added { layer: 0 }
        );
        c.validate().unwrap();

        let mut tight = Circuit::new(1);
        tight.add_gate(Gate::cp(1, 2, 0.2).unwrap());
        assert_eq!(
            tight.add_gate(Gate::single(GateKind::Z, 2)),
            AddOutcome::Added { layer: 1 }
        );
    }

    #[test]
    fn slide_inserts_into_middle_of_timeline() {
        let mut c = Circuit::new(4);
        c.add_gate(Gate::h(0)); // L0
        c.add_gate(Gate::h(1)); // L0
        c.add_gate(Gate::x(1)); // L1
        c.add_gate(Gate::cp(0, 1, 0.1).unwrap()); // L2
        assert_eq!(c.timeline(0).unwrap().occupied(), &[0, 2]);
        // Z(0) commutes with the CP in L2 and drops into the hole at L1.
        assert_eq!(
            c.add_gate(Gate::single(GateKind::Z, 0)),
            AddOutcome::Added { layer: 1 }
        );
        assert_eq!(c.timeline(0).unwrap().occupied(), &[0, 1, 2]);
        c.validate().unwrap();
    }

    #[test]
    fn k_swap_zero_is_plain_placement() {
        let mut c = Circuit::new(0);
        c.add_gate(Gate::h(0));
        assert_eq!(c.add_gate(Gate::h(0)), AddOutcome::Added { layer: 1 });
        assert_eq!(c.gate_count(), 2);
    }

    #[test]
    fn remove_gate_repairs_tables() {
        let mut c = Circuit::default();
        c.add_gate(Gate::h(0));
        c.remove_gate(0, 0).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.timeline(0).unwrap().head(), 0);

        let mut c = qft5();
        let slot = c.gate_index(2, 0).unwrap();
        let removed = c.remove_gate(2, slot).unwrap();
        assert_eq!(removed, Gate::cp(2, 0, PI / 4.0).unwrap());
        let h1 = c.gate_index(2, 1).unwrap();
        assert_eq!(c.layer(2)[h1], Gate::h(1));
        assert_eq!(c.gate_index(2, 0), None);
        assert_eq!(c.gate_index(2, 2), None);
        c.validate().unwrap();

        assert_eq!(
            c.remove_gate(40, 0),
            Err(CircuitError::NoSuchSlot { layer: 40, slot: 0 })
        );
    }

    #[test]
    fn counts() {
        let c = Circuit::default();
        assert_eq!((c.depth(), c.gate_count(), c.width()), (0, 0, 0));
        let mut c = Circuit::default();
        for g in qft_sequence(8) {
            c.add_gate(g);
        }
        assert_eq!((c.depth(), c.gate_count(), c.width()), (15, 36, 8));
    }

    #[test]
    fn iteration_order() {
        let mut c = Circuit::default();
        c.add_gate(Gate::h(0));
        let all: Vec<_> = c.iter_gates().map(|(l, g)| (l, g.clone())).collect();
        assert_eq!(all, vec![(0, Gate::h(0))]);

        let c = qft5();
        let first: Vec<_> = c
            .iter_gates()
            .take(2)
            .map(|(l, g)| (l, g.clone()))
            .collect();
        assert_eq!(first[0], (0, Gate::h(0)));
        assert_eq!(first[1], (1, Gate::cp(1, 0, PI / 2.0).unwrap()));
        let layers: Vec<usize> = c.iter_gates().map(|(l, _)| l).collect();
        assert!(layers.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rebuild_without_optimization_is_identical() {
        let c = qft5();
        let mut re = Circuit::new(0);
        for (_, g) in c.iter_gates() {
            re.add_gate(g.clone());
        }
        assert!(re.same_structure(&c));
        for l in 0..c.num_layers() {
            assert_eq!(re.layer(l), c.layer(l));
        }
    }

    #[test]
    fn place_at_rejects_busy_qubit() {
        let mut c = Circuit::default();
        c.place_at(3, Gate::h(0)).unwrap();
        assert_eq!(
            c.place_at(3, Gate::cp(0, 1, 1.0).unwrap()),
            Err(CircuitError::QubitBusy { layer: 3, qubit: 0 })
        );
        c.place_at(1, Gate::cp(0, 1, 1.0).unwrap()).unwrap();
        assert_eq!(c.timeline(0).unwrap().occupied(), &[1, 3]);
        assert_eq!(c.depth(), 2);
        assert_eq!(c.num_layers(), 4);
        c.validate().unwrap();
    }
}
