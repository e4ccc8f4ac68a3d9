//! Text formats: the layered dump, OpenQASM 2.0 and benchmark CSV.
//!
//! Layered dump, one line per non-empty layer:
//!
//! ```text
//! L3: CP(0;3;1/8) CP(1;2;1/2)
//! ```
//!
//! Each gate prints as `KIND(targets;controls;angle)`, with a `C` prefix when
//! it has controls. Angles are `p/q` (or `p`) in units of π when dyadic,
//! otherwise radians in scientific notation. Gates within a line are ordered
//! by their lowest qubit.

use std::fmt::Write as _;
use std::io::{Read, Write};

use thiserror::Error;

use crate::angle::{parse_angle, pi_fraction};
use crate::bench::BenchRecord;
use crate::circuit::{Circuit, CircuitError};
use crate::gate::{Gate, GateError, GateKind, Qubit};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("OpenQASM 2.0 export of {gate} needs a decomposition of its {controls} controls")]
    Unsupported { gate: String, controls: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const CSV_HEADER: [&str; 7] = [
    "variant",
    "n_qubits",
    "wall_ns",
    "bytes_allocated",
    "gates",
    "theory_wall_ns",
    "theory_bytes",
];

pub fn dump_layers(circ: &Circuit) -> String {
    let mut out = String::new();
    for (l, gates) in circ.layers().enumerate() {
        if gates.is_empty() {
            continue;
        }
        let mut sorted: Vec<&Gate> = gates.iter().collect();
        sorted.sort_by_key(|g| g.min_qubit());
        write!(out, "L{l}:").unwrap();
        for g in sorted {
            write!(out, " {g}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_qubits(text: &str) -> Result<Vec<Qubit>, String> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|q| {
            q.parse::<Qubit>()
                .map_err(|_| format!("bad qubit index {q:?}"))
        })
        .collect()
}

fn parse_gate(token: &str) -> Result<Gate, String> {
    let (name, rest) = token
        .split_once('(')
        .ok_or_else(|| format!("expected KIND(...) in {token:?}"))?;
    let body = rest
        .strip_suffix(')')
        .ok_or_else(|| format!("missing ')' in {token:?}"))?;
    let fields: Vec<&str> = body.split(';').collect();
    let [targets, controls, angle] = fields[..] else {
        return Err(format!("expected three ';'-separated fields in {token:?}"));
    };
    let (controlled, kind_name) = match name.strip_prefix('C') {
        Some(rest) => (true, rest),
        None => (false, name),
    };
    let kind = GateKind::from_name(kind_name).ok_or_else(|| format!("unknown gate {name:?}"))?;
    let targets = parse_qubits(targets)?;
    let controls = parse_qubits(controls)?;
    if controlled == controls.is_empty() {
        return Err(format!(
            "control prefix does not match the controls of {token:?}"
        ));
    }
    let angle = if angle.is_empty() {
        None
    } else {
        Some(parse_angle(angle).ok_or_else(|| format!("bad angle {angle:?}"))?)
    };
    Gate::new(kind, &targets, &controls, angle).map_err(|e: GateError| e.to_string())
}

/// Rebuild a circuit from [`dump_layers`] output. Gates are placed in the
/// stated layers as given, without optimization.
pub fn parse_layers(text: &str, k_swap: usize) -> Result<Circuit, ExportError> {
    let mut circ = Circuit::new(k_swap);
    for (i, line) in text.lines().enumerate() {
        let err = |msg: String| ExportError::Parse { line: i + 1, msg };
        if line.is_empty() {
            continue;
        }
        let (head, gates) = line
            .split_once(':')
            .ok_or_else(|| err("expected 'L<layer>:'".into()))?;
        let layer: usize = head
            .strip_prefix('L')
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| err(format!("bad layer label {head:?}")))?;
        for token in gates.split_whitespace() {
            let gate = parse_gate(token).map_err(err)?;
            circ.place_at(layer, gate)
                .map_err(|e: CircuitError| err(e.to_string()))?;
        }
    }
    Ok(circ)
}

fn qasm_angle(normalized: f64) -> String {
    match pi_fraction(normalized) {
        Some((0, _)) => "0".into(),
        Some((1, 1)) => "pi".into(),
        Some((p, 1)) => format!("{p}*pi"),
        Some((1, q)) => format!("pi/{q}"),
        Some((p, q)) => format!("{p}*pi/{q}"),
        None => format!("{normalized:.16e}"),
    }
}

fn qasm_op(gate: &Gate) -> Result<String, ExportError> {
    use std::f64::consts::PI;
    let controlled = match gate.controls().len() {
        0 => false,
        1 => true,
        n => {
            return Err(ExportError::Unsupported {
                gate: gate.to_string(),
                controls: n,
            })
        }
    };
    let angle = gate.angle().unwrap_or(0.0);
    let op = match (gate.kind(), controlled) {
        (GateKind::X, false) => "x".into(),
        (GateKind::Y, false) => "y".into(),
        (GateKind::Z, false) => "z".into(),
        (GateKind::H, false) => "h".into(),
        (GateKind::S, false) => "s".into(),
        (GateKind::Sdg, false) => "sdg".into(),
        (GateKind::T, false) => "t".into(),
        (GateKind::Tdg, false) => "tdg".into(),
        (GateKind::P, false) => format!("u1({})", qasm_angle(angle)),
        (GateKind::Rz, false) => format!("rz({})", qasm_angle(angle)),
        (GateKind::X, true) => "cx".into(),
        (GateKind::Y, true) => "cy".into(),
        (GateKind::Z, true) => "cz".into(),
        (GateKind::H, true) => "ch".into(),
        (GateKind::S, true) => format!("cu1({})", qasm_angle(PI / 2.0)),
        (GateKind::Sdg, true) => format!("cu1({})", qasm_angle(3.0 * PI / 2.0)),
        (GateKind::T, true) => format!("cu1({})", qasm_angle(PI / 4.0)),
        (GateKind::Tdg, true) => format!("cu1({})", qasm_angle(7.0 * PI / 4.0)),
        (GateKind::P, true) => format!("cu1({})", qasm_angle(angle)),
        (GateKind::Rz, true) => format!("crz({})", qasm_angle(angle)),
    };
    Ok(op)
}

/// OpenQASM 2.0 text, gates in [`Circuit::iter_gates`] order.
pub fn export_qasm(circ: &Circuit) -> Result<String, ExportError> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", circ.width()).unwrap();
    for (_, g) in circ.iter_gates() {
        let op = qasm_op(g)?;
        match g.controls().first() {
            Some(c) => writeln!(out, "{op} q[{c}],q[{}];", g.target()).unwrap(),
            None => writeln!(out, "{op} q[{}];", g.target()).unwrap(),
        }
    }
    Ok(out)
}

/// Write records sorted by `(variant, n_qubits)` under the fixed header.
pub fn write_bench_csv<W: Write>(records: &[BenchRecord], sink: W) -> Result<(), ExportError> {
    let mut sorted = records.to_vec();
    sorted.sort_by_key(|r| (r.variant, r.n_qubits));
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in &sorted {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bench_csv<R: Read>(source: R) -> Result<Vec<BenchRecord>, ExportError> {
    let mut reader = csv::Reader::from_reader(source);
    let records = reader
        .deserialize()
        .collect::<Result<Vec<BenchRecord>, _>>()?;
    Ok(records)
}
