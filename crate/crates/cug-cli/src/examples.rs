//! Bundled example circuits and their domain post-processing.

use clap::ValueEnum;

use cug_core::{StateVector, Complex64};

use crate::file::{build_circuit, parse_circuit_file, LoadedCircuit};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    /// 7-qubit order finding for N = 15 with base 7.
    Shor15,
    /// Quantum walk step on a 16-node cycle (4 node qubits + 1 coin qubit).
    Cycle16,
    /// Quantum walk step on the complete 3^3 graph with self-loops
    /// (six qutrits + one ancilla qubit).
    Graph27,
}

impl ExampleName {
    pub fn source(&self) -> &'static str {
        match self {
            ExampleName::Shor15 => include_str!("../circuits/shor15.json"),
            ExampleName::Cycle16 => include_str!("../circuits/cycle16.json"),
            ExampleName::Graph27 => include_str!("../circuits/graph27.json"),
        }
    }
}

/// Load and validate a bundled circuit.
pub fn load(name: ExampleName) -> Result<LoadedCircuit, CliError> {
    build_circuit(&parse_circuit_file(name.source())?, false)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Period and factor read-out for the 15 = 3 x 5 run: collect the output
/// register values (first three wires, digits reversed), take their spacing
/// as the period p, and report gcd(7^(2^(n-1)/p) ± 1, 15).
pub struct PeriodReport {
    /// Distinct output-register values in reversed digit order, ascending.
    pub values: Vec<u64>,
    pub period: u64,
    pub factors: (u64, u64),
}

pub fn shor_period_report(output: &StateVector, tol: f64) -> Result<PeriodReport, CliError> {
    const OUT_WIRES: usize = 3;
    const BASE: u64 = 7;
    const MODULUS: u64 = 15;

    let mut values = std::collections::BTreeSet::new();
    for (index, amp) in output.amplitudes().as_slice().iter().enumerate() {
        if amp.norm() > tol {
            let digits = output.profile().digits_of(index);
            let mut value = 0u64;
            for w in (0..OUT_WIRES).rev() {
                value = value * 2 + digits[w] as u64;
            }
            values.insert(value);
        }
    }
    let values: Vec<u64> = values.into_iter().collect();
    let period = values.iter().fold(0u64, |acc, &v| gcd(acc, v));
    if period == 0 {
        return Err(CliError::Invalid(
            "period extraction failed: output register holds only zero".into(),
        ));
    }
    let exponent = (1u64 << (OUT_WIRES - 1)) / period;
    let power = BASE.pow(exponent as u32);
    let factors = (gcd(power - 1, MODULUS), gcd(power + 1, MODULUS));
    Ok(PeriodReport {
        values,
        period,
        factors,
    })
}

/// Node/subnode split of a walk state: (node digits as an integer, node digit
/// string, subnode digits, amplitude) per surviving term.
pub fn node_subnode_split(
    output: &StateVector,
    node_wires: usize,
    tol: f64,
) -> Vec<(usize, String, String, Complex64)> {
    let profile = output.profile();
    let mut rows = Vec::new();
    for (index, amp) in output.amplitudes().as_slice().iter().enumerate() {
        if amp.norm() > tol {
            let digits = profile.digits_of(index);
            let mut node = 0usize;
            for w in 0..node_wires {
                node = node * profile.levels()[w] + digits[w];
            }
            let node_str: String = digits[..node_wires].iter().map(|d| d.to_string()).collect();
            let sub_str: String = digits[node_wires..].iter().map(|d| d.to_string()).collect();
            rows.push((node, node_str, sub_str, *amp));
        }
    }
    rows
}

/// Histogram of amplitude magnitudes (rounded to 1e-9), descending by
/// magnitude.
pub fn magnitude_histogram(output: &StateVector, tol: f64) -> Vec<(f64, usize)> {
    let mut counts: std::collections::BTreeMap<i64, usize> = std::collections::BTreeMap::new();
    for amp in output.amplitudes().as_slice() {
        let m = amp.norm();
        if m > tol {
            *counts.entry((m * 1e9).round() as i64).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .rev()
        .map(|(k, c)| (k as f64 / 1e9, c))
        .collect()
}
