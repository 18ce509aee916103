//! Register-level composition: embedding sub-matrices, wire swaps and
//! rotations, increment/decrement cascades, and compilation or direct
//! application of gate sequences.
//!
//! Elements listed in circuit order apply chronologically; compiling to a
//! single matrix therefore multiplies right to left (later elements on the
//! left).

use crate::cug::{build_cug, Conditional, CugSpec, RegisterProfile, UBlock};
use crate::error::{Error, Result};
use crate::gates::{not_gate, r_shift, Sign};
use crate::state::StateVector;
use crate::tensor::{kron_all, mat_mul, mat_vec, SparseMatrix, C_ONE};

/// Direction of the qubit increment/decrement cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepDirection {
    Increment,
    Decrement,
}

/// Direction of a wire rotation: R (clockwise) or L (anticlockwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationDirection {
    Right,
    Left,
}

/// One placed circuit element.
#[derive(Debug, Clone)]
pub enum PlacedElement {
    /// A controlled unitary gate over the full register.
    Cug(CugSpec),
    /// An uncontrolled matrix on a run of consecutive wires, identity-padded.
    SpanGate {
        start_wire: usize,
        matrix: SparseMatrix,
    },
    /// Exchange of two equal-level wires.
    WireSwap { a: usize, b: usize },
    /// Cyclic rotation of the contents of an inclusive wire range.
    WireRotation {
        direction: RotationDirection,
        start: usize,
        end: usize,
    },
}

/// An ordered gate sequence over one register; element 0 applies first.
#[derive(Debug, Clone)]
pub struct Circuit {
    profile: RegisterProfile,
    elements: Vec<PlacedElement>,
}

impl Circuit {
    /// Validate every element against the profile. Errors carry the index of
    /// the offending element.
    pub fn new(profile: RegisterProfile, elements: Vec<PlacedElement>) -> Result<Self> {
        for (index, element) in elements.iter().enumerate() {
            validate_element(&profile, element).map_err(|e| e.at_element(index))?;
        }
        Ok(Circuit { profile, elements })
    }

    pub fn profile(&self) -> &RegisterProfile {
        &self.profile
    }

    pub fn elements(&self) -> &[PlacedElement] {
        &self.elements
    }

    /// Full-register matrix of one element.
    pub fn element_matrix(&self, index: usize) -> SparseMatrix {
        element_matrix(&self.profile, &self.elements[index]).expect("validated at construction")
    }

    /// Product M_last · ... · M_1. The empty circuit compiles to the identity.
    pub fn compile(&self) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(self.profile.dimension()).expect("dim >= 2");
        for i in 0..self.elements.len() {
            acc = mat_mul(&self.element_matrix(i), &acc).expect("square matrices");
        }
        acc
    }

    /// Apply element by element to a state: same result as compiling and
    /// multiplying, but the full product is never materialized.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.profile() != &self.profile {
            return Err(Error::DimensionMismatch {
                expected: self.profile.dimension(),
                found: state.dim(),
            });
        }
        let mut amplitudes = state.amplitudes().clone();
        for i in 0..self.elements.len() {
            amplitudes = mat_vec(&self.element_matrix(i), &amplitudes)?;
        }
        StateVector::from_amplitudes(self.profile.clone(), amplitudes)
    }
}

fn validate_element(profile: &RegisterProfile, element: &PlacedElement) -> Result<()> {
    let n = profile.wire_count();
    match element {
        PlacedElement::Cug(spec) => {
            if spec.profile() != profile {
                return Err(Error::DimensionMismatch {
                    expected: profile.dimension(),
                    found: spec.profile().dimension(),
                });
            }
            Ok(())
        }
        PlacedElement::SpanGate { start_wire, matrix } => {
            if !matrix.is_square() {
                return Err(Error::NotSquare {
                    rows: matrix.n_rows(),
                    cols: matrix.n_cols(),
                });
            }
            profile.span_for_block(*start_wire, matrix.n_rows())?;
            Ok(())
        }
        PlacedElement::WireSwap { a, b } => {
            let la = profile.level(*a)?;
            let lb = profile.level(*b)?;
            if la != lb {
                return Err(Error::LevelMismatch {
                    a: *a,
                    b: *b,
                    level_a: la,
                    level_b: lb,
                });
            }
            Ok(())
        }
        PlacedElement::WireRotation { start, end, .. } => {
            if *start > *end || *end >= n {
                return Err(Error::WireOutOfRange {
                    wire: *end,
                    wires: n,
                });
            }
            let first = profile.levels()[*start];
            for w in *start..=*end {
                if profile.levels()[w] != first {
                    return Err(Error::LevelMismatch {
                        a: *start,
                        b: w,
                        level_a: first,
                        level_b: profile.levels()[w],
                    });
                }
            }
            Ok(())
        }
    }
}

/// Full-register matrix of one element against a profile.
pub fn element_matrix(profile: &RegisterProfile, element: &PlacedElement) -> Result<SparseMatrix> {
    validate_element(profile, element)?;
    match element {
        PlacedElement::Cug(spec) => Ok(build_cug(spec)),
        PlacedElement::SpanGate { start_wire, matrix } => embed(profile, matrix, *start_wire),
        PlacedElement::WireSwap { a, b } => swap_wires(profile, *a, *b),
        PlacedElement::WireRotation {
            direction,
            start,
            end,
        } => rotate_wires(profile, *direction, *start, *end),
    }
}

/// I_left ⊗ m ⊗ I_right at full register dimension. The matrix must span
/// consecutive wires starting at `start_wire` with matching level product.
pub fn embed(profile: &RegisterProfile, m: &SparseMatrix, start_wire: usize) -> Result<SparseMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.n_rows(),
            cols: m.n_cols(),
        });
    }
    let span = profile.span_for_block(start_wire, m.n_rows())?;
    let levels = profile.levels();
    let left: usize = levels[..start_wire].iter().product();
    let right: usize = levels[start_wire + span..].iter().product();
    let mut factors = Vec::with_capacity(3);
    if left > 1 {
        factors.push(SparseMatrix::identity(left)?);
    }
    factors.push(m.clone());
    if right > 1 {
        factors.push(SparseMatrix::identity(right)?);
    }
    kron_all(&factors)
}

/// Full-register permutation exchanging the i-th and j-th digits of every
/// basis index. Involutory; requires equal level counts.
pub fn swap_wires(profile: &RegisterProfile, i: usize, j: usize) -> Result<SparseMatrix> {
    let li = profile.level(i)?;
    let lj = profile.level(j)?;
    if li != lj {
        return Err(Error::LevelMismatch {
            a: i,
            b: j,
            level_a: li,
            level_b: lj,
        });
    }
    let dim = profile.dimension();
    let entries = (0..dim).map(|col| {
        let mut digits = profile.digits_of(col);
        digits.swap(i, j);
        let row = profile.index_of(&digits).expect("digits in range");
        (row, col, C_ONE)
    });
    SparseMatrix::from_entries(dim, dim, entries)
}

/// Cyclic rotation of the wire contents over an inclusive range of
/// equal-level wires, as a ladder of swaps against the last wire: rotating
/// right moves every digit one wire down, rotating left one wire up. A
/// two-wire range is a single swap either way.
pub fn rotate_wires(
    profile: &RegisterProfile,
    direction: RotationDirection,
    start: usize,
    end: usize,
) -> Result<SparseMatrix> {
    validate_element(
        profile,
        &PlacedElement::WireRotation {
            direction,
            start,
            end,
        },
    )?;
    let mut acc = SparseMatrix::identity(profile.dimension())?;
    let partners: Vec<usize> = match direction {
        RotationDirection::Right => (start..end).collect(),
        RotationDirection::Left => (start..end).rev().collect(),
    };
    for w in partners {
        acc = mat_mul(&swap_wires(profile, w, end)?, &acc)?;
    }
    Ok(acc)
}

/// Qubit increment/decrement cascade on `n_wires` qubits: for each target
/// wire from the top down, a NOT conditioned on every lower wire holding 1
/// (increment) or 0 (decrement), then an unconditional NOT on the last wire.
/// The result is the |k⟩ → |k±1 mod 2ⁿ⟩ permutation in big-endian encoding.
pub fn step_gate(n_wires: usize, direction: StepDirection) -> Result<SparseMatrix> {
    if n_wires == 0 {
        return Err(Error::InvalidArgument("step gate requires at least one wire"));
    }
    let profile = RegisterProfile::qubits(n_wires)?;
    let control_state = match direction {
        StepDirection::Increment => 1,
        StepDirection::Decrement => 0,
    };
    let mut acc = SparseMatrix::identity(profile.dimension())?;
    for target in 0..n_wires - 1 {
        let conditionals = (target + 1..n_wires)
            .map(|w| Conditional::new(w, control_state))
            .collect();
        let spec = CugSpec::new(
            profile.clone(),
            conditionals,
            vec![UBlock::new(target, not_gate())],
        )?;
        acc = mat_mul(&build_cug(&spec), &acc)?;
    }
    let last = embed(&profile, &not_gate(), n_wires - 1)?;
    mat_mul(&last, &acc)
}

/// Qudit shift cascade: for each target wire from the top down, an R± shift
/// conditioned on every lower wire holding its top level (plus) or bottom
/// level (minus), then an unconditional shift on the last wire. Reduces to
/// `step_gate` when every wire is a qubit; for d > 2 it is a basis
/// permutation but not the ±1 map on mixed-radix values.
pub fn generalized_step(profile: &RegisterProfile, sign: Sign) -> Result<SparseMatrix> {
    let n = profile.wire_count();
    let levels = profile.levels().to_vec();
    let mut acc = SparseMatrix::identity(profile.dimension())?;
    for target in 0..n - 1 {
        let conditionals = (target + 1..n)
            .map(|w| {
                let state = match sign {
                    Sign::Plus => levels[w] - 1,
                    Sign::Minus => 0,
                };
                Conditional::new(w, state)
            })
            .collect();
        let spec = CugSpec::new(
            profile.clone(),
            conditionals,
            vec![UBlock::new(target, r_shift(sign, levels[target])?)],
        )?;
        acc = mat_mul(&build_cug(&spec), &acc)?;
    }
    let last = embed(&profile, &r_shift(sign, levels[n - 1])?, n - 1)?;
    mat_mul(&last, &acc)
}
