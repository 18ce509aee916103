//! Wall-clock comparison of the two gate builders. Every configuration is
//! timed sequentially with warm-up iterations, and the median over the
//! requested repeats is reported.

use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cug_core::cug::{build_cug, build_cug_naive};
use cug_core::gates::not_gate;
use cug_core::{Complex64, Conditional, CugSpec, RegisterProfile, SparseMatrix, UBlock};

use crate::CliError;

/// Refuse register dimensions above this without --force-large.
pub const DIMENSION_GUARD: usize = 1 << 22;

const WARMUP_RUNS: usize = 2;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n_lo: usize,
    pub n_hi: usize,
    pub repeats: usize,
    pub seed: u64,
    pub multi_wires: usize,
    pub multi_conditionals: usize,
    pub force_large: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_lo: 10,
            n_hi: 16,
            repeats: 5,
            seed: 7,
            multi_wires: 10,
            multi_conditionals: 8,
            force_large: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub family: &'static str,
    pub builder: &'static str,
    pub wires: usize,
    pub conditionals: usize,
    pub repeats: usize,
    pub median_seconds: f64,
}

fn median_time<F: FnMut()>(repeats: usize, mut build: F) -> f64 {
    for _ in 0..WARMUP_RUNS {
        build();
    }
    let mut times: Vec<f64> = (0..repeats)
        .map(|_| {
            let start = Instant::now();
            build();
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        0.5 * (times[n / 2 - 1] + times[n / 2])
    }
}

fn time_both(
    family: &'static str,
    spec: &CugSpec,
    repeats: usize,
    records: &mut Vec<BenchRecord>,
) {
    let wires = spec.profile().wire_count();
    let conditionals = spec.conditionals().len();
    let irreducible = median_time(repeats, || {
        black_box(build_cug(black_box(spec)));
    });
    records.push(BenchRecord {
        family,
        builder: "irreducible",
        wires,
        conditionals,
        repeats,
        median_seconds: irreducible,
    });
    let naive = median_time(repeats, || {
        black_box(build_cug_naive(black_box(spec)));
    });
    records.push(BenchRecord {
        family,
        builder: "naive",
        wires,
        conditionals,
        repeats,
        median_seconds: naive,
    });
}

/// Control at wire 0, NOT at wire n-1.
pub fn cnot_spec(n: usize) -> CugSpec {
    CugSpec::new(
        RegisterProfile::qubits(n).expect("n >= 2"),
        vec![Conditional::new(0, 1)],
        vec![UBlock::new(n - 1, not_gate())],
    )
    .expect("valid by construction")
}

/// Controls at wires 0 and 1, NOT at wire n-1.
pub fn toffoli_spec(n: usize) -> CugSpec {
    CugSpec::new(
        RegisterProfile::qubits(n).expect("n >= 3"),
        vec![Conditional::new(0, 1), Conditional::new(1, 1)],
        vec![UBlock::new(n - 1, not_gate())],
    )
    .expect("valid by construction")
}

fn random_2x2_unitary<R: Rng + ?Sized>(rng: &mut R) -> SparseMatrix {
    let theta: f64 = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
    let alpha: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let beta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let a = Complex64::from_polar(theta.cos(), alpha);
    let b = Complex64::from_polar(theta.sin(), beta);
    SparseMatrix::from_entries(
        2,
        2,
        [
            (0, 0, a),
            (0, 1, b),
            (1, 0, -b.conj()),
            (1, 1, a.conj()),
        ],
    )
    .expect("entries in range")
}

/// Random conditionals on the first `conditionals` wires, a seeded random
/// 2x2 unitary on the last wire.
pub fn random_cug_spec(wires: usize, conditionals: usize, seed: u64) -> CugSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conds = (0..conditionals)
        .map(|w| Conditional::new(w, rng.random_range(0..2)))
        .collect();
    CugSpec::new(
        RegisterProfile::qubits(wires).expect("wires >= 1"),
        conds,
        vec![UBlock::new(wires - 1, random_2x2_unitary(&mut rng))],
    )
    .expect("valid by construction")
}

/// Run the full benchmark: the CNOT_n / Toffoli_n sweep over the wire range
/// with both builders, plus one multi-conditional configuration.
pub fn run(config: &BenchConfig) -> Result<Vec<BenchRecord>, CliError> {
    if config.n_lo < 3 || config.n_lo > config.n_hi {
        return Err(CliError::Usage(format!(
            "wire range {}..{} is invalid (need 3 <= lo <= hi)",
            config.n_lo, config.n_hi
        )));
    }
    if config.repeats == 0 {
        return Err(CliError::Usage("repeats must be at least 1".into()));
    }
    if config.multi_wires < 2 || config.multi_conditionals >= config.multi_wires {
        return Err(CliError::Usage(format!(
            "multi-conditional config needs 2 <= wires and conditionals < wires, got {} and {}",
            config.multi_wires, config.multi_conditionals
        )));
    }
    let max_wires = config.n_hi.max(config.multi_wires);
    if !config.force_large && (max_wires >= 63 || (1usize << max_wires) > DIMENSION_GUARD) {
        return Err(CliError::Guard(format!(
            "register dimension 2^{max_wires} exceeds the {DIMENSION_GUARD} guard; \
             pass --force-large to override"
        )));
    }

    let mut records = Vec::new();
    for n in config.n_lo..=config.n_hi {
        time_both("cnot", &cnot_spec(n), config.repeats, &mut records);
        time_both("toffoli", &toffoli_spec(n), config.repeats, &mut records);
    }
    let multi = random_cug_spec(config.multi_wires, config.multi_conditionals, config.seed);
    time_both("random-cug", &multi, config.repeats, &mut records);
    Ok(records)
}

/// Header row plus one comma-separated record per configuration.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("family,builder,wires,conditionals,repeats,median_seconds\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{:.9e}\n",
            r.family, r.builder, r.wires, r.conditionals, r.repeats, r.median_seconds
        ));
    }
    out
}
