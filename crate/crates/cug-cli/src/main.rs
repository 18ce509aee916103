use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cug_core::tensor::mat_vec;

use cug_cli::bench::{self, BenchConfig};
use cug_cli::examples::{self, ExampleName};
use cug_cli::file::{build_circuit, build_cug_spec, parse_circuit_file, parse_cug_file};
use cug_cli::render::{decompose_report, format_output, OutputFormat};
use cug_cli::CliError;

#[derive(Parser)]
#[command(
    name = "cug",
    version,
    about = "Build, run, and benchmark controlled-unitary-gate circuits on mixed-level qudit registers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit file and print the resulting amplitudes.
    Run {
        /// Circuit file (JSON).
        path: PathBuf,
        /// Listing tolerance: amplitudes at or below this magnitude are omitted.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Treat wire and conditional indices as the 1-based paper convention.
        #[arg(long)]
        paper_indexing: bool,
        /// Also compile the full circuit matrix and cross-check the two paths.
        #[arg(long)]
        dual_path: bool,
    },
    /// Print the identity + active - inactive decomposition of a single gate.
    Decompose {
        /// Gate description file, or a circuit file with exactly one cug element.
        path: PathBuf,
        /// Print the three terms as explicit matrices.
        #[arg(long)]
        matrices: bool,
        /// Treat wire and conditional indices as the 1-based paper convention.
        #[arg(long)]
        paper_indexing: bool,
    },
    /// Run a bundled example circuit and print its domain read-out.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Listing tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Time the irreducible builder against the naive projector sum.
    Bench {
        /// Inclusive wire-count range for the CNOT_n / Toffoli_n sweep.
        #[arg(long, default_value = "10..16")]
        n_range: String,
        /// Timed repeats per configuration (median reported).
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Seed for the random multi-conditional gate.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the table to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the register-dimension guard.
        #[arg(long)]
        force_large: bool,
        /// Wire count of the multi-conditional configuration.
        #[arg(long, default_value_t = 10)]
        multi_wires: usize,
        /// Conditional count of the multi-conditional configuration.
        #[arg(long, default_value_t = 8)]
        multi_conditionals: usize,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "cannot parse wire range {text:?} (expected forms: \"10..16\" or \"12\")"
        ))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        Ok((lo, hi))
    } else {
        let n = text.trim().parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

fn cmd_run(
    path: &Path,
    tol: f64,
    format: OutputFormat,
    paper_indexing: bool,
    dual_path: bool,
) -> Result<(), CliError> {
    let file = parse_circuit_file(&read_file(path)?)?;
    let loaded = build_circuit(&file, paper_indexing)?;
    let output = loaded
        .circuit
        .apply(&loaded.input)
        .map_err(|e| CliError::Invalid(e.to_string()))?;

    if dual_path {
        let compiled = loaded.circuit.compile();
        let through_matrix = mat_vec(&compiled, loaded.input.amplitudes())
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        let deviation = output.amplitudes().max_diff(&through_matrix);
        eprintln!("dual-path check: max deviation {deviation:.3e}");
        if deviation > 1e-12 {
            return Err(CliError::Invalid(format!(
                "matrix-free and compiled results disagree by {deviation:.3e}"
            )));
        }
    }

    print!("{}", format_output(&output, tol, format));
    Ok(())
}

fn cmd_decompose(path: &Path, matrices: bool, paper_indexing: bool) -> Result<(), CliError> {
    let file = parse_cug_file(&read_file(path)?)?;
    let spec = build_cug_spec(&file, paper_indexing)?;
    print!("{}", decompose_report(&spec, matrices));
    Ok(())
}

fn cmd_example(name: ExampleName, tol: f64, format: OutputFormat) -> Result<(), CliError> {
    let loaded = examples::load(name)?;
    let output = loaded
        .circuit
        .apply(&loaded.input)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    print!("{}", format_output(&output, tol, format));

    match name {
        ExampleName::Shor15 => {
            let report = examples::shor_period_report(&output, 1e-10)?;
            let values: Vec<String> = report.values.iter().map(|v| v.to_string()).collect();
            println!("# output register values (reversed digit order): {{{}}}", values.join(", "));
            println!("# period p = {}", report.period);
            println!(
                "# factors: gcd(7^{} - 1, 15) = {}, gcd(7^{} + 1, 15) = {}",
                (1u64 << 2) / report.period,
                report.factors.0,
                (1u64 << 2) / report.period,
                report.factors.1
            );
        }
        ExampleName::Cycle16 => {
            println!("# node/subnode split:");
            for (node, node_str, sub_str, amp) in examples::node_subnode_split(&output, 4, tol) {
                println!(
                    "# node {node} (|{node_str}⟩), subnode |{sub_str}⟩: amplitude {:.6}{:+.6}i",
                    amp.re, amp.im
                );
            }
        }
        ExampleName::Graph27 => {
            println!("# amplitude magnitudes:");
            for (magnitude, count) in examples::magnitude_histogram(&output, tol) {
                println!("# {magnitude:.6} x{count}");
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    n_range: &str,
    repeats: usize,
    seed: u64,
    out: Option<&Path>,
    force_large: bool,
    multi_wires: usize,
    multi_conditionals: usize,
) -> Result<(), CliError> {
    let (n_lo, n_hi) = parse_range(n_range)?;
    let config = BenchConfig {
        n_lo,
        n_hi,
        repeats,
        seed,
        multi_wires,
        multi_conditionals,
        force_large,
    };
    let records = bench::run(&config)?;
    let csv = bench::to_csv(&records);
    match out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            path,
            tol,
            format,
            paper_indexing,
            dual_path,
        } => cmd_run(&path, tol, format, paper_indexing, dual_path),
        Command::Decompose {
            path,
            matrices,
            paper_indexing,
        } => cmd_decompose(&path, matrices, paper_indexing),
        Command::Example { name, tol, format } => cmd_example(name, tol, format),
        Command::Bench {
            n_range,
            repeats,
            seed,
            out,
            force_large,
            multi_wires,
            multi_conditionals,
        } => cmd_bench(
            &n_range,
            repeats,
            seed,
            out.as_deref(),
            force_large,
            multi_wires,
            multi_conditionals,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
