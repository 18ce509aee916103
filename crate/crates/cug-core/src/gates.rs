//! Elementary gate constructors: projectors, Hadamard, NOT, qubit and qudit
//! phase gates, QFT± coins, the Grover coin Gₙ, cyclic level shifts R±, and
//! the two-wire SWAP.
//!
//! Every constructor returns a freshly built matrix; there is no caching.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{SparseMatrix, C_ONE};

/// Direction parameter shared by the QFT coin and the cyclic shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Projector onto basis level `state` of a `levels`-level wire: a single 1 at
/// (state, state). Idempotent; non-unitary for levels > 1. The full set over
/// one wire sums to the identity.
pub fn projector(state: usize, levels: usize) -> Result<SparseMatrix> {
    if levels == 0 {
        return Err(Error::ZeroDimension);
    }
    if state >= levels {
        return Err(Error::InvalidConditional {
            wire: 0,
            state,
            levels,
        });
    }
    SparseMatrix::from_entries(levels, levels, [(state, state, C_ONE)])
}

/// 2x2 Hadamard.
pub fn hadamard() -> SparseMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    SparseMatrix::from_entries(2, 2, [(0, 0, h), (0, 1, h), (1, 0, h), (1, 1, -h)]).unwrap()
}

/// 2x2 NOT.
pub fn not_gate() -> SparseMatrix {
    SparseMatrix::from_entries(2, 2, [(0, 1, C_ONE), (1, 0, C_ONE)]).unwrap()
}

/// diag(1, e^{iθ}).
pub fn phase_qubit(theta: f64) -> SparseMatrix {
    debug_assert!(theta.is_finite());
    SparseMatrix::from_diagonal(&[C_ONE, Complex64::from_polar(1.0, theta)]).unwrap()
}

/// diag(e^{iθ₁}, ..., e^{iθ_d}).
pub fn phase_qudit(thetas: &[f64]) -> Result<SparseMatrix> {
    if thetas.is_empty() {
        return Err(Error::InvalidArgument(
            "phase_qudit requires at least one angle",
        ));
    }
    let diag: Vec<Complex64> = thetas
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    SparseMatrix::from_diagonal(&diag)
}

/// d-level Fourier coin: entry (a, b) = (1/√d) e^{sign·2πi·ab/d} over 0-based
/// a, b. The +/- pair are conjugate transposes and mutual inverses.
pub fn qft_gate(sign: Sign, levels: usize) -> Result<SparseMatrix> {
    if levels == 0 {
        return Err(Error::ZeroDimension);
    }
    let d = levels as f64;
    let scale = 1.0 / d.sqrt();
    let mut entries = Vec::with_capacity(levels * levels);
    for a in 0..levels {
        for b in 0..levels {
            let angle = sign.factor() * 2.0 * std::f64::consts::PI * (a * b) as f64 / d;
            entries.push((a, b, Complex64::from_polar(scale, angle)));
        }
    }
    SparseMatrix::from_entries(levels, levels, entries)
}

/// Grover coin: (Gₙ)_{ij} = 2/n − δ_{ij}. Symmetric involution.
pub fn grover_g(n: usize) -> Result<SparseMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let off = Complex64::new(2.0 / n as f64, 0.0);
    let diag = off - C_ONE;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push((i, j, if i == j { diag } else { off }));
        }
    }
    SparseMatrix::from_entries(n, n, entries)
}

/// Cyclic level shift on one d-level wire, per the 1-based formulas
/// (R₊)_{i,j} = δ_{i(mod d)+1, j} and (R₋)_{i,j} = δ_{i, j(mod d)+1}.
///
/// In 0-based labels R₊ sends |k⟩ to |k−1 mod d⟩ and R₋ sends |k⟩ to
/// |k+1 mod d⟩ — the formulas' direction is kept verbatim even though it runs
/// against the Plus/Minus naming. The two are mutual inverses and transposes.
pub fn r_shift(sign: Sign, levels: usize) -> Result<SparseMatrix> {
    if levels == 0 {
        return Err(Error::ZeroDimension);
    }
    let entries = (0..levels).map(|r| match sign {
        Sign::Plus => (r, (r + 1) % levels, C_ONE),
        Sign::Minus => ((r + 1) % levels, r, C_ONE),
    });
    SparseMatrix::from_entries(levels, levels, entries)
}

/// Two-wire SWAP for a pair of d-level wires: |ab⟩ → |ba⟩.
pub fn swap_gate(levels: usize) -> Result<SparseMatrix> {
    if levels == 0 {
        return Err(Error::ZeroDimension);
    }
    let d = levels;
    let entries = (0..d * d).map(|col| {
        let (a, b) = (col / d, col % d);
        (b * d + a, col, C_ONE)
    });
    SparseMatrix::from_entries(d * d, d * d, entries)
}

/// Symbolic names of the gate registry. The spellings double as the gate
/// vocabulary of the circuit file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateName {
    H,
    Not,
    Phase,
    PhaseG,
    QftPlus,
    QftMinus,
    G,
    RPlus,
    RMinus,
    Swap,
    Identity,
}

impl GateName {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateName::H => "H",
            GateName::Not => "NOT",
            GateName::Phase => "PHASE",
            GateName::PhaseG => "PHASEG",
            GateName::QftPlus => "QFTPLUS",
            GateName::QftMinus => "QFTMINUS",
            GateName::G => "G",
            GateName::RPlus => "RPLUS",
            GateName::RMinus => "RMINUS",
            GateName::Swap => "SWAP",
            GateName::Identity => "IDENTITY",
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "H" => Ok(GateName::H),
            "NOT" => Ok(GateName::Not),
            "PHASE" => Ok(GateName::Phase),
            "PHASEG" => Ok(GateName::PhaseG),
            "QFTPLUS" => Ok(GateName::QftPlus),
            "QFTMINUS" => Ok(GateName::QftMinus),
            "G" => Ok(GateName::G),
            "RPLUS" => Ok(GateName::RPlus),
            "RMINUS" => Ok(GateName::RMinus),
            "SWAP" => Ok(GateName::Swap),
            "IDENTITY" => Ok(GateName::Identity),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

/// A registry gate together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: GateName,
    /// Angles in radians; arity depends on the gate.
    pub params: Vec<f64>,
    /// Level count / dimension for the gates that need one.
    pub levels: Option<usize>,
}

impl GateSpec {
    pub fn new(name: GateName, params: Vec<f64>, levels: Option<usize>) -> Self {
        GateSpec {
            name,
            params,
            levels,
        }
    }

    fn expect_params(&self, expected: usize, what: &'static str) -> Result<()> {
        if self.params.len() != expected {
            return Err(Error::GateArity {
                gate: self.name.as_str(),
                expected: what,
                found: self.params.len(),
            });
        }
        for (i, p) in self.params.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        Ok(())
    }

    fn required_levels(&self) -> Result<usize> {
        self.levels.ok_or(Error::MissingLevels {
            gate: self.name.as_str(),
        })
    }

    /// Build the gate matrix, validating parameter arity first.
    pub fn matrix(&self) -> Result<SparseMatrix> {
        match self.name {
            GateName::H => {
                self.expect_params(0, "no parameters")?;
                Ok(hadamard())
            }
            GateName::Not => {
                self.expect_params(0, "no parameters")?;
                Ok(not_gate())
            }
            GateName::Phase => {
                self.expect_params(1, "exactly one angle")?;
                Ok(phase_qubit(self.params[0]))
            }
            GateName::PhaseG => {
                if self.params.is_empty() {
                    return Err(Error::GateArity {
                        gate: "PHASEG",
                        expected: "one angle per level",
                        found: 0,
                    });
                }
                if let Some(levels) = self.levels {
                    if levels != self.params.len() {
                        return Err(Error::GateArity {
                            gate: "PHASEG",
                            expected: "one angle per level",
                            found: self.params.len(),
                        });
                    }
                }
                for (i, p) in self.params.iter().enumerate() {
                    if !p.is_finite() {
                        return Err(Error::NonFinite { row: i, col: 0 });
                    }
                }
                phase_qudit(&self.params)
            }
            GateName::QftPlus => {
                self.expect_params(0, "no parameters")?;
                qft_gate(Sign::Plus, self.required_levels()?)
            }
            GateName::QftMinus => {
                self.expect_params(0, "no parameters")?;
                qft_gate(Sign::Minus, self.required_levels()?)
            }
            GateName::G => {
                self.expect_params(0, "no parameters")?;
                grover_g(self.required_levels()?)
            }
            GateName::RPlus => {
                self.expect_params(0, "no parameters")?;
                r_shift(Sign::Plus, self.required_levels()?)
            }
            GateName::RMinus => {
                self.expect_params(0, "no parameters")?;
                r_shift(Sign::Minus, self.required_levels()?)
            }
            GateName::Swap => {
                self.expect_params(0, "no parameters")?;
                swap_gate(self.levels.unwrap_or(2))
            }
            GateName::Identity => {
                self.expect_params(0, "no parameters")?;
                SparseMatrix::identity(self.required_levels()?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{
        add_scaled, identity, mat_mul, mat_vec, unitarity_check, DenseVector, C_NEG_ONE, C_ZERO,
    };

    const TOL: f64 = 1e-12;

    #[test]
    fn projector_examples() {
        let p0 = projector(0, 2).unwrap();
        let p1 = projector(1, 2).unwrap();
        assert_eq!(p0.get(0, 0), C_ONE);
        assert_eq!(p0.nnz(), 1);
        assert_eq!(p1.get(1, 1), C_ONE);
        assert_eq!(p1.nnz(), 1);

        let p23 = projector(2, 3).unwrap();
        assert_eq!(p23.get(2, 2), C_ONE);
        assert_eq!(p23.nnz(), 1);

        assert!(matches!(
            projector(2, 2),
            Err(Error::InvalidConditional { .. })
        ));
    }

    #[test]
    fn projectors_sum_to_identity() {
        for d in 2..=6 {
            let mut sum = projector(0, d).unwrap();
            for a in 1..d {
                sum = add_scaled(&sum, &projector(a, d).unwrap(), C_ONE).unwrap();
            }
            assert_eq!(sum, identity(d).unwrap());
        }
    }

    #[test]
    fn projectors_idempotent_and_orthogonal() {
        for d in 2..=4 {
            for a in 0..d {
                let pa = projector(a, d).unwrap();
                assert_eq!(mat_mul(&pa, &pa).unwrap(), pa);
                for b in 0..d {
                    if a != b {
                        let pb = projector(b, d).unwrap();
                        assert_eq!(mat_mul(&pa, &pb).unwrap().nnz(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let h = hadamard();
        assert!(mat_mul(&h, &h)
            .unwrap()
            .max_diff(&identity(2).unwrap())
            .abs()
            < TOL);
    }

    #[test]
    fn not_flips_basis_state() {
        let mut zero = DenseVector::zeros(2).unwrap();
        zero.set(0, C_ONE);
        let one = mat_vec(&not_gate(), &zero).unwrap();
        assert_eq!(one.get(1), C_ONE);
        assert_eq!(one.get(0), C_ZERO);
    }

    #[test]
    fn phase_gate_examples() {
        assert!(phase_qubit(0.0).max_diff(&identity(2).unwrap()) < TOL);
        let z = phase_qubit(std::f64::consts::PI);
        assert!((z.get(1, 1) - C_NEG_ONE).norm() < TOL);
        assert_eq!(z.get(0, 0), C_ONE);
    }

    #[test]
    fn phase_qudit_examples() {
        let m = phase_qudit(&[std::f64::consts::PI, 0.0, 0.0]).unwrap();
        assert!((m.get(0, 0) - C_NEG_ONE).norm() < TOL);
        assert_eq!(m.get(1, 1), C_ONE);
        assert_eq!(m.get(2, 2), C_ONE);

        let theta = 0.37;
        assert!(phase_qudit(&[0.0, theta]).unwrap().max_diff(&phase_qubit(theta)) < TOL);
        assert!(phase_qudit(&[0.0; 3]).unwrap().max_diff(&identity(3).unwrap()) < TOL);
        assert!(matches!(
            phase_qudit(&[]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn qft_pair_inverts() {
        for d in 2..=5 {
            let plus = qft_gate(Sign::Plus, d).unwrap();
            let minus = qft_gate(Sign::Minus, d).unwrap();
            assert!(mat_mul(&plus, &minus)
                .unwrap()
                .max_diff(&identity(d).unwrap())
                < TOL);
        }
    }

    #[test]
    fn qft_degenerate_and_first_entry() {
        let one = qft_gate(Sign::Plus, 1).unwrap();
        assert!((one.get(0, 0) - C_ONE).norm() < TOL);
        let m = qft_gate(Sign::Plus, 3).unwrap();
        assert!((m.get(0, 0) - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < TOL);
    }

    #[test]
    fn qft_rows_orthonormal() {
        for d in 2..=8 {
            let m = qft_gate(Sign::Plus, d).unwrap();
            for a in 0..d {
                for b in 0..d {
                    let dot: Complex64 = (0..d).map(|k| m.get(a, k) * m.get(b, k).conj()).sum();
                    let expect = if a == b { C_ONE } else { C_ZERO };
                    assert!((dot - expect).norm() < TOL, "rows {a},{b} of d={d}");
                }
            }
        }
    }

    #[test]
    fn grover_examples() {
        assert!(grover_g(2).unwrap().max_diff(&not_gate()) < TOL);

        let g3 = grover_g(3).unwrap();
        let timi = 2.0 / 3.0;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { timi - 1.0 } else { timi };
                assert!((g3.get(i, j) - Complex64::new(want, 0.0)).norm() < TOL);
            }
        }

        for n in 1..=6 {
            let g = grover_g(n).unwrap();
            assert!(mat_mul(&g, &g).unwrap().max_diff(&identity(n).unwrap()) < TOL);
        }
    }

    #[test]
    fn grover_eigenstructure() {
        // G fixes the uniform vector and negates anything orthogonal to it.
        let n = 5;
        let g = grover_g(n).unwrap();
        let ones = DenseVector::from_vec(vec![C_ONE; n]).unwrap();
        assert!(mat_vec(&g, &ones).unwrap().max_diff(&ones) < TOL);

        let mut v = DenseVector::zeros(n).unwrap();
        v.set(0, C_ONE);
        v.set(3, -C_ONE);
        let gv = mat_vec(&g, &v).unwrap();
        let neg = DenseVector::from_vec(v.as_slice().iter().map(|a| -a).collect()).unwrap();
        assert!(gv.max_diff(&neg) < TOL);
    }

    #[test]
    fn r_shift_examples() {
        assert!(r_shift(Sign::Plus, 2).unwrap().max_diff(&not_gate()) < TOL);
        assert!(r_shift(Sign::Minus, 2).unwrap().max_diff(&not_gate()) < TOL);

        let rp = r_shift(Sign::Plus, 3).unwrap();
        let rm = r_shift(Sign::Minus, 3).unwrap();
        assert!(mat_mul(&rp, &rm).unwrap().max_diff(&identity(3).unwrap()) < TOL);
        assert!(rp.max_diff(&rm.transpose()) < TOL);
    }

    #[test]
    fn r_shift_direction_on_zero_based_labels() {
        // R+ |k> = |k-1 mod d>, R- |k> = |k+1 mod d> -- formula direction,
        // enumerated column by column.
        for d in [3usize, 4] {
            let rp = r_shift(Sign::Plus, d).unwrap();
            let rm = r_shift(Sign::Minus, d).unwrap();
            for k in 0..d {
                assert_eq!(rp.get((k + d - 1) % d, k), C_ONE);
                assert_eq!(rm.get((k + 1) % d, k), C_ONE);
            }
        }
    }

    #[test]
    fn r_shift_is_permutation() {
        for d in 2..=5 {
            assert!(r_shift(Sign::Plus, d).unwrap().is_permutation(TOL));
            assert!(r_shift(Sign::Minus, d).unwrap().is_permutation(TOL));
        }
    }

    #[test]
    fn registry_gates_are_unitary() {
        let specs = [
            GateSpec::new(GateName::H, vec![], None),
            GateSpec::new(GateName::Not, vec![], None),
            GateSpec::new(GateName::Phase, vec![0.7], None),
            GateSpec::new(GateName::PhaseG, vec![0.1, -0.4, 2.0], None),
            GateSpec::new(GateName::QftPlus, vec![], Some(4)),
            GateSpec::new(GateName::QftMinus, vec![], Some(3)),
            GateSpec::new(GateName::G, vec![], Some(5)),
            GateSpec::new(GateName::RPlus, vec![], Some(4)),
            GateSpec::new(GateName::RMinus, vec![], Some(3)),
            GateSpec::new(GateName::Swap, vec![], Some(3)),
            GateSpec::new(GateName::Identity, vec![], Some(6)),
        ];
        for spec in &specs {
            let m = spec.matrix().unwrap();
            assert!(
                unitarity_check(&m, 1e-12).unwrap(),
                "{} not unitary",
                spec.name
            );
        }
    }

    #[test]
    fn gate_spec_arity_errors() {
        assert!(matches!(
            GateSpec::new(GateName::Phase, vec![], None).matrix(),
            Err(Error::GateArity { .. })
        ));
        assert!(matches!(
            GateSpec::new(GateName::Phase, vec![0.1, 0.2], None).matrix(),
            Err(Error::GateArity { .. })
        ));
        assert!(matches!(
            GateSpec::new(GateName::PhaseG, vec![], None).matrix(),
            Err(Error::GateArity { .. })
        ));
        assert!(matches!(
            GateSpec::new(GateName::PhaseG, vec![0.1, 0.2], Some(3)).matrix(),
            Err(Error::GateArity { .. })
        ));
        assert!(matches!(
            GateSpec::new(GateName::QftPlus, vec![], None).matrix(),
            Err(Error::MissingLevels { .. })
        ));
        assert!(matches!(
            GateSpec::new(GateName::H, vec![0.3], None).matrix(),
            Err(Error::GateArity { .. })
        ));
    }

    #[test]
    fn gate_name_round_trip() {
        for name in [
            GateName::H,
            GateName::Not,
            GateName::Phase,
            GateName::PhaseG,
            GateName::QftPlus,
            GateName::QftMinus,
            GateName::G,
            GateName::RPlus,
            GateName::RMinus,
            GateName::Swap,
            GateName::Identity,
        ] {
            assert_eq!(name.as_str().parse::<GateName>().unwrap(), name);
        }
        assert!(matches!(
            "CZ".parse::<GateName>(),
            Err(Error::UnknownGate(_))
        ));
    }

    #[test]
    fn swap_gate_exchanges_digit_pair() {
        let s = swap_gate(3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(s.get(b * 3 + a, a * 3 + b), C_ONE);
            }
        }
        assert!(s.is_permutation(TOL));
    }
}
