//! Angle normalization and the π-fraction text form.
//!
//! Stored angles live in `[0, 2π)`, or `[0, 4π)` for RZ whose matrix has
//! period 4π (`RZ(θ + 2π) = −RZ(θ)`, which is observable once the gate is
//! controlled). Values within [`ANGLE_EPS`] of a
//! multiple of `π / 2^31` are snapped onto that grid so that dyadic angles
//! (the only ones the QFT and the Fourier adder produce) compare exactly
//! after modular arithmetic.

use std::f64::consts::{PI, TAU};

/// Tolerance for modular angle comparisons.
pub const ANGLE_EPS: f64 = 1e-12;

const GRID_BITS: u32 = 31;
const GRID: f64 = (1u64 << GRID_BITS) as f64;
/// Number of grid steps in a full turn.
const TURN_STEPS: u64 = 2 << GRID_BITS;

fn grid_steps(angle: f64) -> f64 {
    (angle / PI * GRID).round()
}

fn grid_value(steps: u64) -> f64 {
    steps as f64 * PI / GRID
}

/// Reduce `theta` to `[0, 2π)`, snapping near-dyadic values onto the grid.
pub fn normalize_angle(theta: f64) -> f64 {
    normalize_angle_mod(theta, 1)
}

/// Reduce `theta` to `[0, turns · 2π)`, snapping near-dyadic values onto
/// the grid.
pub fn normalize_angle_mod(theta: f64, turns: u32) -> f64 {
    let period = TAU * turns as f64;
    let mut a = theta.rem_euclid(period);
    if a >= period {
        a = 0.0;
    }
    let steps = grid_steps(a);
    if (a - grid_value(steps as u64)).abs() <= ANGLE_EPS {
        // The unwrapped grid value may be exactly one period.
        grid_value(steps as u64 % (TURN_STEPS * turns as u64))
    } else {
        a
    }
}

/// True when a normalized angle is ≡ 0 (mod 2π) within [`ANGLE_EPS`].
pub fn is_zero_angle(normalized: f64) -> bool {
    is_zero_angle_mod(normalized, 1)
}

/// True when an angle normalized with `turns` is ≡ 0 within [`ANGLE_EPS`].
pub fn is_zero_angle_mod(normalized: f64, turns: u32) -> bool {
    normalized <= ANGLE_EPS || TAU * turns as f64 - normalized <= ANGLE_EPS
}

/// Modular distance between two angles normalized with `turns`.
pub fn angle_distance(a: f64, b: f64, turns: u32) -> f64 {
    let d = (a - b).abs();
    d.min(TAU * turns as f64 - d)
}

/// `(numerator, denominator)` with `angle = numerator/denominator · π`, in
/// lowest terms, when the normalized angle lies exactly on the grid.
pub fn pi_fraction(normalized: f64) -> Option<(u64, u64)> {
    let steps = grid_steps(normalized);
    if !(0.0..(2 * TURN_STEPS) as f64).contains(&steps) {
        return None;
    }
    let steps = steps as u64;
    if grid_value(steps) != normalized {
        return None;
    }
    if steps == 0 {
        return Some((0, 1));
    }
    let shift = steps.trailing_zeros().min(GRID_BITS);
    Some((steps >> shift, 1u64 << (GRID_BITS - shift)))
}

/// Text form used by the layered dump: `p/q` or `p` in units of π when the
/// angle is dyadic, otherwise radians in scientific notation with 17
/// significant digits, which reads back to the same value.
pub fn format_angle(normalized: f64) -> String {
    match pi_fraction(normalized) {
        Some((num, 1)) => num.to_string(),
        Some((num, den)) => format!("{num}/{den}"),
        None => format!("{normalized:.16e}"),
    }
}

/// Inverse of [`format_angle`]. Returns the raw (unnormalized) angle.
pub fn parse_angle(text: &str) -> Option<f64> {
    if text.contains(['.', 'e', 'E']) {
        return text.parse::<f64>().ok().filter(|a| a.is_finite());
    }
    match text.split_once('/') {
        Some((num, den)) => {
            let num: u64 = num.parse().ok()?;
            let den: u64 = den.parse().ok()?;
            if den == 0 {
                return None;
            }
            Some(num as f64 * PI / den as f64)
        }
        None => text.parse::<u64>().ok().map(|num| num as f64 * PI),
    }
}
