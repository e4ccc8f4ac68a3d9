//! QFT construction benchmark and the value-count lower bound it is
//! compared against.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alloc;
use crate::circuit::Circuit;
use crate::instructions::{build_qft_generic, build_qft_improved};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("no qubit counts given")]
    NoSizes,
    #[error("repeats must be at least 1")]
    NoRepeats,
    #[error("no variants given")]
    NoVariants,
    #[error("CPU clock must be positive, got {0} GHz")]
    BadClock(f64),
    #[error("unknown variant {0:?} (expected generic or improved)")]
    UnknownVariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Every gate through `add_gate`.
    Generic,
    /// Gates written into their known layers.
    Improved,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Generic => "generic",
            Variant::Improved => "improved",
        }
    }

    pub fn build(self, n: usize, k_swap: usize) -> Circuit {
        match self {
            Variant::Generic => build_qft_generic(n, k_swap),
            Variant::Improved => build_qft_improved(n),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Variant, BenchError> {
        match s {
            "generic" => Ok(Variant::Generic),
            "improved" => Ok(Variant::Improved),
            other => Err(BenchError::UnknownVariant(other.to_string())),
        }
    }
}

/// One benchmark measurement; also the CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub variant: Variant,
    pub n_qubits: usize,
    pub wall_ns: u64,
    pub bytes_allocated: u64,
    pub gates: u64,
    pub theory_wall_ns: f64,
    pub theory_bytes: u64,
}

/// `n` Hadamards plus `n(n−1)/2` controlled phases.
pub fn qft_gate_count(n: usize) -> u64 {
    let n = n as u64;
    n + n * n.saturating_sub(1) / 2
}

/// Minimal data needed to describe a QFT: a fixed number of 16-bit values
/// per gate (kind and target for H; kind, control, target and angle for
/// CP), each processed in one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryModel {
    pub bytes_per_value: u64,
    pub values_per_h: u64,
    pub values_per_cp: u64,
    /// Cycles per value for the "realistic" limit that accounts for array
    /// access.
    pub memory_cycles_per_value: f64,
}

impl Default for TheoryModel {
    fn default() -> Self {
        TheoryModel {
            bytes_per_value: 2,
            values_per_h: 2,
            values_per_cp: 4,
            memory_cycles_per_value: 4.0,
        }
    }
}

impl TheoryModel {
    pub fn values(&self, n: usize) -> u64 {
        let n = n as u64;
        self.values_per_h * n + self.values_per_cp * (n * n.saturating_sub(1) / 2)
    }

    pub fn bytes(&self, n: usize) -> u64 {
        self.bytes_per_value * self.values(n)
    }

    /// One cycle per value.
    pub fn ideal_wall_ns(&self, n: usize, cpu_ghz: f64) -> f64 {
        self.values(n) as f64 / cpu_ghz
    }

    pub fn realistic_wall_ns(&self, n: usize, cpu_ghz: f64) -> f64 {
        self.ideal_wall_ns(n, cpu_ghz) * self.memory_cycles_per_value
    }
}

/// Ideal-limit nanoseconds under the default [`TheoryModel`].
pub fn theory_wall_ns(n: usize, cpu_ghz: f64) -> f64 {
    TheoryModel::default().ideal_wall_ns(n, cpu_ghz)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub variants: Vec<Variant>,
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub cpu_ghz: f64,
    pub k_swap: usize,
    /// Time each variant on its own thread. Memory is still measured
    /// sequentially afterwards.
    pub parallel: bool,
    pub model: TheoryModel,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            variants: vec![Variant::Generic, Variant::Improved],
            sizes: vec![100, 250, 500, 1000, 2000],
            repeats: 5,
            cpu_ghz: 2.6,
            k_swap: crate::circuit::DEFAULT_K_SWAP,
            parallel: false,
            model: TheoryModel::default(),
        }
    }
}

/// Fastest of `repeats` constructions, in nanoseconds. Dropping the circuit
/// is not timed.
pub fn time_build(variant: Variant, n: usize, k_swap: usize, repeats: usize) -> u64 {
    let mut best = u64::MAX;
    for _ in 0..repeats {
        let start = Instant::now();
        let circ = std::hint::black_box(variant.build(n, k_swap));
        let elapsed = start.elapsed().as_nanos() as u64;
        drop(circ);
        best = best.min(elapsed);
    }
    best
}

/// Peak bytes allocated while building one circuit.
pub fn measure_build_bytes(variant: Variant, n: usize, k_swap: usize) -> u64 {
    let (circ, peak) = alloc::measure_peak(|| variant.build(n, k_swap));
    drop(circ);
    peak as u64
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    if cfg.sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if cfg.variants.is_empty() {
        return Err(BenchError::NoVariants);
    }
    if cfg.repeats == 0 {
        return Err(BenchError::NoRepeats);
    }
    if cfg.cpu_ghz.is_nan() || cfg.cpu_ghz <= 0.0 {
        return Err(BenchError::BadClock(cfg.cpu_ghz));
    }
    let timings: Vec<Vec<u64>> = if cfg.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = cfg
                .variants
                .iter()
                .map(|&v| {
                    s.spawn(move || {
                        cfg.sizes
                            .iter()
                            .map(|&n| time_build(v, n, cfg.k_swap, cfg.repeats))
                            .collect::<Vec<u64>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("bench thread panicked"))
                .collect()
        })
    } else {
        cfg.variants
            .iter()
            .map(|&v| {
                cfg.sizes
                    .iter()
                    .map(|&n| time_build(v, n, cfg.k_swap, cfg.repeats))
                    .collect()
            })
            .collect()
    };
    let mut records = Vec::new();
    for (&variant, walls) in cfg.variants.iter().zip(&timings) {
        for (&n, &wall_ns) in cfg.sizes.iter().zip(walls) {
            records.push(BenchRecord {
                variant,
                n_qubits: n,
                wall_ns,
                bytes_allocated: measure_build_bytes(variant, n, cfg.k_swap),
                gates: qft_gate_count(n),
                theory_wall_ns: cfg.model.ideal_wall_ns(n, cfg.cpu_ghz),
                theory_bytes: cfg.model.bytes(n),
            });
        }
    }
    Ok(records)
}
