//! Gate kinds, the compact gate value and the symbolic relations used by
//! gate insertion (inverse, phase merge, commutation).

use std::fmt;

use thiserror::Error;

use crate::angle::{
    angle_distance, format_angle, is_zero_angle_mod, normalize_angle_mod, ANGLE_EPS,
};

/// Qubit index.
pub type Qubit = u32;

const INLINE_CONTROLS: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("gate needs exactly one target, got {0}")]
    TargetCount(usize),
    #[error("qubit {0} appears more than once in the gate")]
    DuplicateQubit(Qubit),
    #[error("angle given or missing for {kind}: only P and RZ carry an angle")]
    AngleMismatch { kind: GateKind },
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    /// Phase gate `diag(1, e^{iθ})`.
    P,
    /// `diag(e^{-iθ/2}, e^{iθ/2})`.
    Rz,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::P,
        GateKind::Rz,
    ];

    pub fn is_parametric(self) -> bool {
        matches!(self, GateKind::P | GateKind::Rz)
    }

    /// Angle period in full turns: 2 for RZ, 1 otherwise.
    pub fn angle_turns(self) -> u32 {
        if self == GateKind::Rz {
            2
        } else {
            1
        }
    }

    /// Kind of the inverse gate. Parametric kinds invert by negating the angle.
    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            other => other,
        }
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Z
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::P
                | GateKind::Rz
        )
    }

    /// `diag(1, e^{iφ})` kinds. A controlled version only phases the
    /// all-ones state of its support, so targets and controls can be
    /// exchanged freely.
    pub fn is_symmetric_phase(self) -> bool {
        self.is_diagonal() && self != GateKind::Rz
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::P => "P",
            GateKind::Rz => "RZ",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single-target, optionally controlled gate.
///
/// Up to two controls are stored inline; larger control sets spill to the
/// heap. Controls are kept sorted, so two gates on the same control set
/// compare equal regardless of the order the controls were given in.
#[derive(Clone)]
pub struct Gate {
    angle: f64,
    // A thin pointer keeps `Gate` at 32 bytes.
    #[allow(clippy::box_collection)]
    spilled: Option<Box<Vec<Qubit>>>,
    target: Qubit,
    inline: [Qubit; INLINE_CONTROLS],
    kind: GateKind,
    inline_len: u8,
}

impl Gate {
    /// Validating constructor for the general form.
    pub fn new(
        kind: GateKind,
        targets: &[Qubit],
        controls: &[Qubit],
        angle: Option<f64>,
    ) -> Result<Gate, GateError> {
        let &[target] = targets else {
            return Err(GateError::TargetCount(targets.len()));
        };
        let angle = match (kind.is_parametric(), angle) {
            (true, Some(a)) if !a.is_finite() => return Err(GateError::NonFiniteAngle(a)),
            (true, Some(a)) => normalize_angle_mod(a, kind.angle_turns()),
            (false, None) => 0.0,
            _ => return Err(GateError::AngleMismatch { kind }),
        };
        Gate::raw(kind, target, angle).with_controls(controls)
    }

    fn raw(kind: GateKind, target: Qubit, angle: f64) -> Gate {
        Gate {
            angle,
            spilled: None,
            target,
            inline: [0; INLINE_CONTROLS],
            kind,
            inline_len: 0,
        }
    }

    /// Uncontrolled non-parametric gate.
    ///
    /// # Panics
    /// If `kind` is parametric.
    pub fn single(kind: GateKind, target: Qubit) -> Gate {
        assert!(!kind.is_parametric(), "{kind} needs an angle");
        Gate::raw(kind, target, 0.0)
    }

    pub fn h(target: Qubit) -> Gate {
        Gate::single(GateKind::H, target)
    }

    pub fn x(target: Qubit) -> Gate {
        Gate::single(GateKind::X, target)
    }

    /// # Panics
    /// If `theta` is not finite.
    pub fn p(target: Qubit, theta: f64) -> Gate {
        assert!(theta.is_finite(), "angle must be finite");
        Gate::raw(GateKind::P, target, normalize_angle_mod(theta, 1))
    }

    /// # Panics
    /// If `theta` is not finite.
    pub fn rz(target: Qubit, theta: f64) -> Gate {
        assert!(theta.is_finite(), "angle must be finite");
        Gate::raw(GateKind::Rz, target, normalize_angle_mod(theta, 2))
    }

    /// Controlled phase.
    pub fn cp(control: Qubit, target: Qubit, theta: f64) -> Result<Gate, GateError> {
        Gate::new(GateKind::P, &[target], &[control], Some(theta))
    }

    /// Controlled phase for builders that already guarantee `control != target`
    /// and a normalized angle.
    pub(crate) fn cp_unchecked(control: Qubit, target: Qubit, normalized: f64) -> Gate {
        debug_assert_ne!(control, target);
        let mut g = Gate::raw(GateKind::P, target, normalized);
        g.inline[0] = control;
        g.inline_len = 1;
        g
    }

    /// Replace the control set.
    pub fn with_controls(mut self, controls: &[Qubit]) -> Result<Gate, GateError> {
        let mut sorted = controls.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GateError::DuplicateQubit(pair[0]));
            }
        }
        if sorted.binary_search(&self.target).is_ok() {
            return Err(GateError::DuplicateQubit(self.target));
        }
        if sorted.len() <= INLINE_CONTROLS {
            self.inline = [0; INLINE_CONTROLS];
            self.inline[..sorted.len()].copy_from_slice(&sorted);
            self.inline_len = sorted.len() as u8;
            self.spilled = None;
        } else {
            self.inline_len = 0;
            self.spilled = Some(Box::new(sorted));
        }
        Ok(self)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> Qubit {
        self.target
    }

    pub fn targets(&self) -> &[Qubit] {
        std::slice::from_ref(&self.target)
    }

    /// Sorted control qubits.
    pub fn controls(&self) -> &[Qubit] {
        match &self.spilled {
            Some(v) => v,
            None => &self.inline[..self.inline_len as usize],
        }
    }

    /// Normalized angle for parametric kinds: `[0, 2π)` for P, `[0, 4π)`
    /// for RZ.
    pub fn angle(&self) -> Option<f64> {
        self.kind.is_parametric().then_some(self.angle)
    }

    pub(crate) fn set_angle(&mut self, theta: f64) {
        debug_assert!(self.kind.is_parametric());
        self.angle = normalize_angle_mod(theta, self.kind.angle_turns());
    }

    /// Targets followed by controls.
    pub fn support(&self) -> impl Iterator<Item = Qubit> + '_ {
        std::iter::once(self.target).chain(self.controls().iter().copied())
    }

    /// Support as a sorted vector.
    pub fn support_set(&self) -> Vec<Qubit> {
        let mut s: Vec<Qubit> = self.support().collect();
        s.sort_unstable();
        s
    }

    pub fn support_len(&self) -> usize {
        1 + self.controls().len()
    }

    pub fn min_qubit(&self) -> Qubit {
        self.controls()
            .first()
            .map_or(self.target, |&c| c.min(self.target))
    }

    pub fn max_qubit(&self) -> Qubit {
        self.controls()
            .last()
            .map_or(self.target, |&c| c.max(self.target))
    }

    pub fn acts_on(&self, q: Qubit) -> bool {
        self.target == q || self.controls().binary_search(&q).is_ok()
    }

    pub fn shares_qubit(&self, other: &Gate) -> bool {
        self.support().any(|q| other.acts_on(q))
    }

    /// Supports equal as sets.
    pub fn same_support(&self, other: &Gate) -> bool {
        self.support_len() == other.support_len() && self.support().all(|q| other.acts_on(q))
    }

    /// Same target and same control set.
    pub fn same_wiring(&self, other: &Gate) -> bool {
        self.target == other.target && self.controls() == other.controls()
    }

    /// Wiring match for inverse and merge tests: symmetric phase kinds match
    /// on support sets, everything else on targets and controls.
    fn wiring_matches(&self, other: &Gate) -> bool {
        if self.kind.is_symmetric_phase() && other.kind.is_symmetric_phase() {
            self.same_support(other)
        } else {
            self.same_wiring(other)
        }
    }

    /// The inverse gate on the same qubits.
    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        g.kind = self.kind.inverse();
        if self.kind.is_parametric() {
            g.angle = normalize_angle_mod(-self.angle, self.kind.angle_turns());
        }
        g
    }

    /// `self · other = I` under the symbolic rules.
    pub fn is_inverse_of(&self, other: &Gate) -> bool {
        if self.kind.inverse() != other.kind || !self.wiring_matches(other) {
            return false;
        }
        let turns = self.kind.angle_turns();
        !self.kind.is_parametric()
            || is_zero_angle_mod(normalize_angle_mod(self.angle + other.angle, turns), turns)
    }

    /// Two phase gates on the same support, which combine by adding angles.
    pub fn is_phase_mergeable(&self, other: &Gate) -> bool {
        self.kind == GateKind::P && other.kind == GateKind::P && self.same_support(other)
    }

    /// Conservative commutation test: `true` only when the gates provably
    /// commute.
    pub fn commutes_with(&self, other: &Gate) -> bool {
        if !self.shares_qubit(other) {
            return true;
        }
        if self.kind.is_diagonal() && other.kind.is_diagonal() {
            return true;
        }
        if self.kind == other.kind && self.same_wiring(other) {
            return true;
        }
        // Overlap confined to the controls of one gate while the other is
        // diagonal: both are block diagonal over the shared qubits.
        (other.kind.is_diagonal() && !other.acts_on(self.target))
            || (self.kind.is_diagonal() && !self.acts_on(other.target))
    }

    /// True for a parametric gate whose angle is ≡ 0.
    pub fn is_identity_phase(&self) -> bool {
        self.kind.is_parametric() && is_zero_angle_mod(self.angle, self.kind.angle_turns())
    }
}

impl PartialEq for Gate {
    fn eq(&self, other: &Gate) -> bool {
        self.kind == other.kind
            && self.target == other.target
            && angle_distance(self.angle, other.angle, self.kind.angle_turns()) <= ANGLE_EPS
            && self.controls() == other.controls()
    }
}

/// `KIND(targets;controls;angle)`, with a `C` prefix on controlled gates and
/// the angle in π units where possible.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.controls().is_empty() {
            f.write_str("C")?;
        }
        write!(f, "{}({};", self.kind, self.target)?;
        for (i, c) in self.controls().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(";")?;
        if let Some(a) = self.angle() {
            f.write_str(&format_angle(a))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
