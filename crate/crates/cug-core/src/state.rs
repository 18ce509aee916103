//! State construction, amplitude listing in ket notation, and projective
//! measurement.

use num_complex::Complex64;
use rand::Rng;

use crate::cug::RegisterProfile;
use crate::error::{Error, Result};
use crate::tensor::{DenseVector, C_ONE};

/// Normalization tolerance enforced on construction and after collapse.
pub const NORM_TOL: f64 = 1e-10;

/// Default magnitude below which amplitudes are omitted from listings.
pub const LISTING_TOL: f64 = 1e-12;

const DEFAULT_SIG_DIGITS: usize = 6;

/// Normalized complex amplitude vector over a register's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    profile: RegisterProfile,
    amplitudes: DenseVector,
}

impl StateVector {
    /// Unit amplitude on one basis digit string.
    pub fn basis_state(profile: RegisterProfile, digits: &[usize]) -> Result<Self> {
        let index = profile.index_of(digits)?;
        let mut amplitudes = DenseVector::zeros(profile.dimension())?;
        amplitudes.set(index, C_ONE);
        Ok(StateVector {
            profile,
            amplitudes,
        })
    }

    /// Every amplitude equal to 1/√D.
    pub fn equal_superposition(profile: RegisterProfile) -> Self {
        let dim = profile.dimension();
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let amplitudes = DenseVector::from_vec(vec![a; dim]).expect("dim >= 2");
        StateVector {
            profile,
            amplitudes,
        }
    }

    /// Wrap amplitudes, enforcing dimension and unit norm.
    pub fn from_amplitudes(profile: RegisterProfile, amplitudes: DenseVector) -> Result<Self> {
        if amplitudes.dim() != profile.dimension() {
            return Err(Error::DimensionMismatch {
                expected: profile.dimension(),
                found: amplitudes.dim(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOL,
            });
        }
        Ok(StateVector {
            profile,
            amplitudes,
        })
    }

    pub fn profile(&self) -> &RegisterProfile {
        &self.profile
    }

    pub fn amplitudes(&self) -> &DenseVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes.get(index)
    }

    /// Born-rule probability of every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes
            .as_slice()
            .iter()
            .map(|a| a.norm_sqr())
            .collect()
    }

    /// Marginal level distribution of one wire.
    pub fn wire_marginal(&self, wire: usize) -> Result<Vec<f64>> {
        let levels = self.profile.level(wire)?;
        let mut marginal = vec![0.0; levels];
        for (index, a) in self.amplitudes.as_slice().iter().enumerate() {
            let digit = self.profile.digits_of(index)[wire];
            marginal[digit] += a.norm_sqr();
        }
        Ok(marginal)
    }
}

/// Result of a projective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    /// Observed level per measured wire.
    pub digits: Vec<usize>,
    /// Born-rule probability of this outcome.
    pub probability: f64,
    /// Renormalized post-measurement state.
    pub post_state: StateVector,
}

fn sample_index<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
            cumulative += p;
            if u < cumulative {
                return i;
            }
        }
    }
    last_nonzero
}

/// Measure every wire: samples a basis index with probability |amplitude|²
/// and collapses to that basis state.
pub fn measure_all<R: Rng + ?Sized>(v: &StateVector, rng: &mut R) -> MeasurementOutcome {
    let probabilities = v.probabilities();
    let index = sample_index(&probabilities, rng);
    let digits = v.profile().digits_of(index);
    let post_state =
        StateVector::basis_state(v.profile().clone(), &digits).expect("digits from profile");
    MeasurementOutcome {
        digits,
        probability: probabilities[index],
        post_state,
    }
}

/// Measure one wire: samples a level by its marginal probability and projects
/// and renormalizes the rest of the register.
pub fn measure_wire<R: Rng + ?Sized>(
    v: &StateVector,
    wire: usize,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let marginal = v.wire_marginal(wire)?;
    let level = sample_index(&marginal, rng);
    let probability = marginal[level];
    let scale = Complex64::new(1.0 / probability.sqrt(), 0.0);

    let profile = v.profile().clone();
    let mut post = DenseVector::zeros(v.dim())?;
    for (index, &a) in v.amplitudes().as_slice().iter().enumerate() {
        if profile.digits_of(index)[wire] == level {
            post.set(index, a * scale);
        }
    }
    Ok(MeasurementOutcome {
        digits: vec![level],
        probability,
        post_state: StateVector::from_amplitudes(profile, post)?,
    })
}

fn round_sig(x: f64, sig: usize) -> f64 {
    if x == 0.0 || sig >= 17 {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(sig as i32 - 1 - magnitude);
    (x * factor).round() / factor
}

fn format_amplitude(z: Complex64, sig: usize) -> String {
    // a component smaller than the magnitude's last printed digit is noise
    let floor = if sig >= 17 { 0.0 } else { z.norm() * 10f64.powi(-(sig as i32)) };
    let re = if z.re.abs() < floor { 0.0 } else { round_sig(z.re, sig) };
    let im = if z.im.abs() < floor { 0.0 } else { round_sig(z.im, sig) };
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn format_digits(profile: &RegisterProfile, digits: &[usize]) -> String {
    if profile.levels().iter().any(|&l| l > 10) {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",")
    } else {
        digits.iter().map(|d| d.to_string()).collect()
    }
}

/// Deterministic ascending-index listing of every amplitude with magnitude
/// above `tol`, one `(amplitude) |digits⟩` term per line, wire 0 leftmost.
/// Amplitudes are printed to 6 significant digits.
pub fn list_states(v: &StateVector, tol: f64) -> String {
    list_states_with_precision(v, tol, DEFAULT_SIG_DIGITS)
}

/// As `list_states` with explicit significant-digit precision (≥ 17 prints
/// full round-trip precision).
pub fn list_states_with_precision(v: &StateVector, tol: f64, sig_digits: usize) -> String {
    let mut out = String::new();
    for (index, &a) in v.amplitudes().as_slice().iter().enumerate() {
        if a.norm() > tol {
            let digits = v.profile().digits_of(index);
            out.push('(');
            out.push_str(&format_amplitude(a, sig_digits));
            out.push_str(") |");
            out.push_str(&format_digits(v.profile(), &digits));
            out.push_str("⟩\n");
        }
    }
    out
}

fn parse_amplitude(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::InvalidArgument("malformed amplitude");
    if let Some(body) = s.strip_suffix('i') {
        // pure imaginary or re±im i; find the split sign not part of an exponent
        let chars: Vec<char> = body.chars().collect();
        for pos in (1..chars.len()).rev() {
            let c = chars[pos];
            if (c == '+' || c == '-') && chars[pos - 1] != 'e' && chars[pos - 1] != 'E' {
                let re: f64 = body[..pos].parse().map_err(|_| bad())?;
                let im_str = &body[pos..];
                let im: f64 = if im_str == "+" || im_str == "-" {
                    return Err(bad());
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = body.parse().map_err(|_| bad())?;
        Ok(Complex64::new(0.0, im))
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parse a listing produced by `list_states` back into an amplitude vector.
/// Lines that do not look like listing terms are ignored; amplitudes below
/// the listing tolerance were never printed, so the result reproduces the
/// original only to that precision.
pub fn parse_listing(profile: &RegisterProfile, text: &str) -> Result<DenseVector> {
    let mut amplitudes = DenseVector::zeros(profile.dimension())?;
    for line in text.lines() {
        let line = line.trim();
        if !line.starts_with('(') {
            continue;
        }
        let close = line.find(')').ok_or(Error::InvalidArgument("unterminated amplitude"))?;
        let amp = parse_amplitude(&line[1..close])?;
        let rest = &line[close + 1..];
        let ket_start = rest.find('|').ok_or(Error::InvalidArgument("missing ket"))?;
        let ket_end = rest.find('⟩').ok_or(Error::InvalidArgument("missing ket terminator"))?;
        let body = &rest[ket_start + 1..ket_end];
        let digits: Vec<usize> = if body.contains(',') {
            body.split(',')
                .map(|d| d.parse().map_err(|_| Error::InvalidArgument("bad digit")))
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or(Error::InvalidArgument("bad digit"))
                })
                .collect::<Result<_>>()?
        };
        let index = profile.index_of(&digits)?;
        amplitudes.set(index, amp);
    }
    Ok(amplitudes)
}
