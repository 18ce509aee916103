//! Controlled unitary gates over mixed-level registers.
//!
//! `build_cug` assembles the gate matrix as I + K_U − K_I: the identity, plus
//! the projector/unitary tensor term, minus the same term with the unitary
//! blocks replaced by identities. The cost is two full-size matrix additions
//! no matter how many conditionals the gate carries. `build_cug_naive` keeps
//! the sum-over-all-projector-assignments form as oracle and baseline.

use crate::error::{Error, Result};
use crate::gates::projector;
use crate::tensor::{
    add_scaled, kron_all, unitarity_deviation, SparseMatrix, C_NEG_ONE, C_ONE,
};

/// Default tolerance for validating that a unitary block is in fact unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Ordered per-wire level counts. Wire 0 is the most significant digit of the
/// big-endian mixed-radix basis index, so kets read left to right in wire
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterProfile {
    levels: Vec<usize>,
}

impl RegisterProfile {
    /// Every wire needs at least 2 levels and the register at least one wire.
    pub fn new(levels: Vec<usize>) -> Result<Self> {
        if levels.is_empty() || levels.iter().any(|&l| l < 2) {
            return Err(Error::InvalidProfile);
        }
        let mut dim = 1usize;
        for &l in &levels {
            dim = dim.checked_mul(l).ok_or(Error::InvalidProfile)?;
        }
        Ok(RegisterProfile { levels })
    }

    /// All-qubit profile on `n` wires.
    pub fn qubits(n: usize) -> Result<Self> {
        RegisterProfile::new(vec![2; n])
    }

    pub fn wire_count(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, wire: usize) -> Result<usize> {
        self.levels
            .get(wire)
            .copied()
            .ok_or(Error::WireOutOfRange {
                wire,
                wires: self.levels.len(),
            })
    }

    /// Total Hilbert-space dimension ∏ζᵢ.
    pub fn dimension(&self) -> usize {
        self.levels.iter().product()
    }

    /// Big-endian mixed-radix index of a digit string.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.levels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.levels.len(),
                found: digits.len(),
            });
        }
        let mut idx = 0usize;
        for (wire, (&d, &l)) in digits.iter().zip(&self.levels).enumerate() {
            if d >= l {
                return Err(Error::InvalidState {
                    wire,
                    digit: d,
                    levels: l,
                });
            }
            idx = idx * l + d;
        }
        Ok(idx)
    }

    /// Digit string of a basis index, wire 0 first.
    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.levels.len()];
        for (wire, &l) in self.levels.iter().enumerate().rev() {
            digits[wire] = index % l;
            index /= l;
        }
        digits
    }

    /// Profile restricted to the inclusive wire range.
    pub fn sub_profile(&self, start: usize, end: usize) -> Result<RegisterProfile> {
        if start > end || end >= self.levels.len() {
            return Err(Error::WireOutOfRange {
                wire: end,
                wires: self.levels.len(),
            });
        }
        RegisterProfile::new(self.levels[start..=end].to_vec())
    }

    /// Number of consecutive wires starting at `start_wire` whose level
    /// product equals `dim`; errors when no prefix matches.
    pub fn span_for_block(&self, start_wire: usize, dim: usize) -> Result<usize> {
        if start_wire >= self.levels.len() {
            return Err(Error::WireOutOfRange {
                wire: start_wire,
                wires: self.levels.len(),
            });
        }
        let mut prod = 1usize;
        for (k, &l) in self.levels[start_wire..].iter().enumerate() {
            prod *= l;
            if prod == dim {
                return Ok(k + 1);
            }
            if prod > dim {
                break;
            }
        }
        Err(Error::SpanMismatch { start_wire, dim })
    }
}

/// Requirement that one wire holds one basis level (0-based). A qubit C̄
/// conditional is exactly `Conditional { state: 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conditional {
    pub wire: usize,
    pub state: usize,
}

impl Conditional {
    pub fn new(wire: usize, state: usize) -> Self {
        Conditional { wire, state }
    }
}

/// A unitary occupying a run of consecutive wires starting at `start_wire`.
#[derive(Debug, Clone, PartialEq)]
pub struct UBlock {
    pub start_wire: usize,
    pub matrix: SparseMatrix,
}

impl UBlock {
    pub fn new(start_wire: usize, matrix: SparseMatrix) -> Self {
        UBlock { start_wire, matrix }
    }
}

/// Validated controlled-unitary-gate description: a register profile, a set
/// of conditionals on distinct wires, and unitary blocks on disjoint spans.
#[derive(Debug, Clone, PartialEq)]
pub struct CugSpec {
    profile: RegisterProfile,
    conditionals: Vec<Conditional>,
    ublocks: Vec<UBlock>,
    /// Wire span length of each block, aligned with `ublocks`.
    spans: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq)]
enum Occupancy {
    Free,
    Conditional,
    Block,
}

impl CugSpec {
    /// Validate and freeze a gate description. Unitary blocks are checked at
    /// the default tolerance.
    pub fn new(
        profile: RegisterProfile,
        conditionals: Vec<Conditional>,
        ublocks: Vec<UBlock>,
    ) -> Result<Self> {
        CugSpec::with_tolerance(profile, conditionals, ublocks, UNITARITY_TOL)
    }

    /// As `new`, with an explicit unitarity tolerance for the blocks.
    pub fn with_tolerance(
        profile: RegisterProfile,
        conditionals: Vec<Conditional>,
        ublocks: Vec<UBlock>,
        unitarity_tol: f64,
    ) -> Result<Self> {
        let n = profile.wire_count();
        let mut occupancy = vec![Occupancy::Free; n];

        for c in &conditionals {
            let levels = profile.level(c.wire)?;
            if c.state >= levels {
                return Err(Error::InvalidConditional {
                    wire: c.wire,
                    state: c.state,
                    levels,
                });
            }
            if occupancy[c.wire] != Occupancy::Free {
                return Err(Error::DuplicateConditional { wire: c.wire });
            }
            occupancy[c.wire] = Occupancy::Conditional;
        }

        let mut spans = Vec::with_capacity(ublocks.len());
        for b in &ublocks {
            if !b.matrix.is_square() {
                return Err(Error::NotSquare {
                    rows: b.matrix.n_rows(),
                    cols: b.matrix.n_cols(),
                });
            }
            let span = profile.span_for_block(b.start_wire, b.matrix.n_rows())?;
            for wire in b.start_wire..b.start_wire + span {
                if occupancy[wire] != Occupancy::Free {
                    return Err(Error::OverlappingSpan { wire });
                }
                occupancy[wire] = Occupancy::Block;
            }
            let deviation = unitarity_deviation(&b.matrix)?;
            if deviation > unitarity_tol {
                return Err(Error::NonUnitaryBlock {
                    start_wire: b.start_wire,
                    deviation,
                    tolerance: unitarity_tol,
                });
            }
            spans.push(span);
        }

        Ok(CugSpec {
            profile,
            conditionals,
            ublocks,
            spans,
        })
    }

    pub fn profile(&self) -> &RegisterProfile {
        &self.profile
    }

    pub fn conditionals(&self) -> &[Conditional] {
        &self.conditionals
    }

    pub fn ublocks(&self) -> &[UBlock] {
        &self.ublocks
    }

    /// Wire span (start, length) of each block.
    pub fn block_spans(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ublocks
            .iter()
            .zip(&self.spans)
            .map(|(b, &s)| (b.start_wire, s))
    }

    /// Number of projector assignments the naive sum ranges over: ∏ζ_{c}.
    pub fn permutation_count(&self) -> usize {
        self.conditionals
            .iter()
            .map(|c| self.profile.levels()[c.wire])
            .product()
    }
}

/// Per-invocation instrumentation counters for the irreducible builder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Full-dimension matrix additions performed (always 2).
    pub full_additions: usize,
    /// Pairwise Kronecker multiplications performed.
    pub kron_multiplications: usize,
}

/// The three matrices whose combination identity + active − inactive is the
/// gate.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerms {
    pub identity: SparseMatrix,
    pub active: SparseMatrix,
    pub inactive: SparseMatrix,
}

enum WireRole<'a> {
    Projector(usize, usize),
    Block(&'a SparseMatrix, usize),
    Free(usize),
}

fn wire_roles(spec: &CugSpec) -> Vec<WireRole<'_>> {
    let n = spec.profile.wire_count();
    let levels = spec.profile.levels();
    let mut roles: Vec<Option<WireRole>> = (0..n).map(|_| None).collect();
    for c in &spec.conditionals {
        roles[c.wire] = Some(WireRole::Projector(c.state, levels[c.wire]));
    }
    for (b, &span) in spec.ublocks.iter().zip(&spec.spans) {
        roles[b.start_wire] = Some(WireRole::Block(&b.matrix, span));
    }
    let mut out = Vec::new();
    let mut wire = 0usize;
    while wire < n {
        match roles[wire].take() {
            Some(WireRole::Block(m, span)) => {
                out.push(WireRole::Block(m, span));
                wire += span;
            }
            Some(role) => {
                out.push(role);
                wire += 1;
            }
            None => {
                // merge a run of free wires into one identity factor
                let mut dim = levels[wire];
                wire += 1;
                while wire < n && roles[wire].is_none() {
                    dim *= levels[wire];
                    wire += 1;
                }
                out.push(WireRole::Free(dim));
            }
        }
    }
    out
}

/// Tensor factor list of the active term, counting pairwise products.
fn active_term(spec: &CugSpec, stats: &mut BuildStats) -> SparseMatrix {
    let mut factors = Vec::new();
    for role in wire_roles(spec) {
        factors.push(match role {
            WireRole::Projector(state, levels) => projector(state, levels).expect("validated"),
            WireRole::Block(m, _) => m.clone(),
            WireRole::Free(dim) => SparseMatrix::identity(dim).expect("dim >= 1"),
        });
    }
    stats.kron_multiplications += factors.len().saturating_sub(1);
    kron_all(&factors).expect("at least one wire")
}

/// The active term with every block replaced by an identity: a diagonal
/// matrix with a 1 exactly where all conditionals hold. Built directly from
/// the digit constraints, no Kronecker products needed.
fn inactive_term(spec: &CugSpec) -> SparseMatrix {
    let profile = &spec.profile;
    let n = profile.wire_count();
    let levels = profile.levels();
    let mut fixed: Vec<Option<usize>> = vec![None; n];
    for c in &spec.conditionals {
        fixed[c.wire] = Some(c.state);
    }
    let free: Vec<usize> = (0..n).filter(|&w| fixed[w].is_none()).collect();

    let mut digits: Vec<usize> = (0..n).map(|w| fixed[w].unwrap_or(0)).collect();
    let mut entries = Vec::new();
    loop {
        let idx = profile.index_of(&digits).expect("digits in range");
        entries.push((idx, idx, C_ONE));
        // advance the free digits as a mixed-radix counter
        let mut done = true;
        for &w in free.iter().rev() {
            digits[w] += 1;
            if digits[w] < levels[w] {
                done = false;
                break;
            }
            digits[w] = 0;
        }
        if done {
            break;
        }
    }
    SparseMatrix::from_entries(profile.dimension(), profile.dimension(), entries)
        .expect("indices in range")
}

fn terms_with_stats(spec: &CugSpec) -> (DecompositionTerms, BuildStats) {
    let mut stats = BuildStats::default();
    let identity = SparseMatrix::identity(spec.profile.dimension()).expect("dim >= 2");
    let active = active_term(spec, &mut stats);
    let inactive = inactive_term(spec);
    (
        DecompositionTerms {
            identity,
            active,
            inactive,
        },
        stats,
    )
}

/// Gate matrix in the irreducible form: exactly two full-size additions,
/// independent of the number of conditionals.
pub fn build_cug(spec: &CugSpec) -> SparseMatrix {
    build_cug_with_stats(spec).0
}

/// As `build_cug`, returning the instrumentation counters alongside.
pub fn build_cug_with_stats(spec: &CugSpec) -> (SparseMatrix, BuildStats) {
    let (terms, mut stats) = terms_with_stats(spec);
    let partial = add_scaled(&terms.identity, &terms.active, C_ONE).expect("same shape");
    stats.full_additions += 1;
    let result = add_scaled(&partial, &terms.inactive, C_NEG_ONE).expect("same shape");
    stats.full_additions += 1;
    (result, stats)
}

/// The identity / active / inactive triple, exposed for inspection.
pub fn decomposition_terms(spec: &CugSpec) -> DecompositionTerms {
    terms_with_stats(spec).0
}

/// Gate matrix as the sum over all ∏ζ_c projector assignments: the single
/// assignment matching every conditional carries the blocks, the rest carry
/// identities. Equals `build_cug` entry-wise; kept as oracle and baseline.
pub fn build_cug_naive(spec: &CugSpec) -> SparseMatrix {
    let profile = spec.profile();
    let levels = profile.levels();
    let mut cond_wires: Vec<usize> = spec.conditionals.iter().map(|c| c.wire).collect();
    cond_wires.sort_unstable();
    let required: Vec<usize> = cond_wires
        .iter()
        .map(|&w| {
            spec.conditionals
                .iter()
                .find(|c| c.wire == w)
                .expect("wire from conditionals")
                .state
        })
        .collect();

    let mut assignment: Vec<usize> = vec![0; cond_wires.len()];
    let mut sum: Option<SparseMatrix> = None;
    loop {
        let active = assignment == required;
        let term = assignment_term(spec, &cond_wires, &assignment, active);
        sum = Some(match sum {
            None => term,
            Some(acc) => add_scaled(&acc, &term, C_ONE).expect("same shape"),
        });

        let mut done = true;
        for i in (0..assignment.len()).rev() {
            assignment[i] += 1;
            if assignment[i] < levels[cond_wires[i]] {
                done = false;
                break;
            }
            assignment[i] = 0;
        }
        if done {
            break;
        }
    }
    sum.expect("at least one assignment")
}

fn assignment_term(
    spec: &CugSpec,
    cond_wires: &[usize],
    assignment: &[usize],
    active: bool,
) -> SparseMatrix {
    let profile = spec.profile();
    let levels = profile.levels();
    let n = profile.wire_count();

    let mut projector_at: Vec<Option<usize>> = vec![None; n];
    for (&w, &s) in cond_wires.iter().zip(assignment) {
        projector_at[w] = Some(s);
    }
    let mut block_at: Vec<Option<(&SparseMatrix, usize)>> = vec![None; n];
    for (b, &span) in spec.ublocks.iter().zip(&spec.spans) {
        block_at[b.start_wire] = Some((&b.matrix, span));
    }

    let mut factors = Vec::new();
    let mut wire = 0usize;
    while wire < n {
        if let Some(state) = projector_at[wire] {
            factors.push(projector(state, levels[wire]).expect("validated"));
            wire += 1;
        } else if let Some((m, span)) = block_at[wire] {
            factors.push(if active {
                m.clone()
            } else {
                SparseMatrix::identity(m.n_rows()).expect("dim >= 1")
            });
            wire += span;
        } else {
            let mut dim = levels[wire];
            wire += 1;
            while wire < n && projector_at[wire].is_none() && block_at[wire].is_none() {
                dim *= levels[wire];
                wire += 1;
            }
            factors.push(SparseMatrix::identity(dim).expect("dim >= 1"));
        }
    }
    kron_all(&factors).expect("at least one wire")
}

/// Build the gate restricted to the minimal contiguous wire range touching a
/// conditional or a block. Returns the sub-register matrix together with the
/// inclusive (start, end) wire range for caller-side identity padding.
pub fn build_cug_span(
    profile: &RegisterProfile,
    conditionals: &[Conditional],
    ublocks: &[UBlock],
) -> Result<(SparseMatrix, usize, usize)> {
    let mut lo = usize::MAX;
    let mut hi = 0usize;
    for c in conditionals {
        profile.level(c.wire)?;
        lo = lo.min(c.wire);
        hi = hi.max(c.wire);
    }
    for b in ublocks {
        let span = profile.span_for_block(b.start_wire, b.matrix.n_rows())?;
        lo = lo.min(b.start_wire);
        hi = hi.max(b.start_wire + span - 1);
    }
    if lo == usize::MAX {
        return Err(Error::InvalidArgument(
            "gate references no conditional and no block",
        ));
    }

    let sub = profile.sub_profile(lo, hi)?;
    let shifted_conditionals = conditionals
        .iter()
        .map(|c| Conditional::new(c.wire - lo, c.state))
        .collect();
    let shifted_blocks = ublocks
        .iter()
        .map(|b| UBlock::new(b.start_wire - lo, b.matrix.clone()))
        .collect();
    let spec = CugSpec::new(sub, shifted_conditionals, shifted_blocks)?;
    Ok((build_cug(&spec), lo, hi))
}
