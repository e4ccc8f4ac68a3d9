use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use qcg_core::alloc::CountingAllocator;
use qcg_core::bench::{run_bench, BenchConfig, TheoryModel, Variant};
use qcg_core::export::{dump_layers, export_qasm, write_bench_csv};
use qcg_core::instructions::build_fourier_adder_with;
use qcg_core::{Circuit, DEFAULT_K_SWAP};

#[global_allocator]
static GLOBAL: CountingAllocator = CountingAllocator;

/// Exit status for bad arguments, matching clap's own parse errors.
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "qcg", version, about = "Fast quantum circuit generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an n-qubit QFT (no terminal swaps).
    Qft {
        #[arg(short = 'n', long = "n")]
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Generic)]
        variant: VariantArg,
        #[command(flatten)]
        out: Output,
    },
    /// Build the Fourier adder |x> -> |x + addend mod 2^n>.
    Add {
        #[arg(short = 'n', long = "n")]
        n: usize,
        #[arg(long)]
        addend: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Time and measure QFT construction, emit CSV.
    Bench {
        /// Qubit counts, comma separated.
        #[arg(
            long = "n",
            value_delimiter = ',',
            default_value = "100,250,500,1000,2000"
        )]
        sizes: Vec<usize>,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "generic,improved"
        )]
        variants: Vec<VariantArg>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 2.6)]
        cpu_ghz: f64,
        /// Cycles per value for the realistic limit column of the summary.
        #[arg(long, default_value_t = 4.0)]
        memory_factor: f64,
        #[arg(long, env = "QCG_KSWAP", default_value_t = DEFAULT_K_SWAP)]
        k_swap: usize,
        /// Time variants on separate threads.
        #[arg(long)]
        parallel: bool,
        /// Write records here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, env = "QCG_KSWAP", default_value_t = DEFAULT_K_SWAP)]
    k_swap: usize,
    /// Print the circuit instead of a summary.
    #[arg(long, value_enum)]
    dump: Option<DumpFormat>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Generic,
    Improved,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Generic => Variant::Generic,
            VariantArg::Improved => Variant::Improved,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpFormat {
    Layers,
    Qasm,
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Runtime(e)
    }
}

fn sink(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(circ: &Circuit, what: &str, build_ns: u128, out: &Output) -> Result<(), Failure> {
    let text = match out.dump {
        Some(DumpFormat::Layers) => dump_layers(circ),
        Some(DumpFormat::Qasm) => export_qasm(circ).map_err(|e| Failure::Usage(e.to_string()))?,
        None => format!(
            "{what}: width {} gates {} depth {} build_ns {build_ns}\n",
            circ.width(),
            circ.gate_count(),
            circ.depth()
        ),
    };
    let mut w = sink(out.output.as_ref())?;
    w.write_all(text.as_bytes()).context("writing output")?;
    w.flush().context("writing output")?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Qft { n, variant, out } => {
            let variant = Variant::from(variant);
            let start = Instant::now();
            let circ = variant.build(n, out.k_swap);
            let ns = start.elapsed().as_nanos();
            emit(&circ, &format!("qft {variant} n={n}"), ns, &out)
        }
        Command::Add { n, addend, out } => {
            let start = Instant::now();
            let circ = build_fourier_adder_with(n, addend, out.k_swap)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let ns = start.elapsed().as_nanos();
            emit(&circ, &format!("add n={n} addend={addend}"), ns, &out)
        }
        Command::Bench {
            sizes,
            variants,
            repeats,
            cpu_ghz,
            memory_factor,
            k_swap,
            parallel,
            csv,
        } => {
            let model = TheoryModel {
                memory_cycles_per_value: memory_factor,
                ..TheoryModel::default()
            };
            let cfg = BenchConfig {
                variants: variants.into_iter().map(Variant::from).collect(),
                sizes,
                repeats,
                cpu_ghz,
                k_swap,
                parallel,
                model,
            };
            let records = run_bench(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut w = sink(csv.as_ref())?;
            write_bench_csv(&records, &mut w).context("writing CSV")?;
            w.flush().context("writing CSV")?;
            if csv.is_some() {
                println!(
                    "variant   n_qubits        wall_ns    ideal_ns  realistic_ns      peak_bytes"
                );
                for r in &records {
                    println!(
                        "{:<9} {:>8} {:>14} {:>11.0} {:>13.0} {:>15}",
                        r.variant,
                        r.n_qubits,
                        r.wall_ns,
                        r.theory_wall_ns,
                        model.realistic_wall_ns(r.n_qubits, cpu_ghz),
                        r.bytes_allocated
                    );
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
