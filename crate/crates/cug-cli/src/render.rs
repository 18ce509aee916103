//! Text rendering for the decompose view and the amplitude listings.

use cug_core::cug::decomposition_terms;
use cug_core::state::{list_states, StateVector};
use cug_core::{Complex64, CugSpec, SparseMatrix};

/// Per-wire factor symbols of one decomposition term. On all-qubit registers
/// projectors print as P0/P1; on mixed registers every projector uses the
/// 1-based P[s,d] label. Merged identity runs print as I with their
/// dimension.
fn term_symbols(spec: &CugSpec, with_blocks: bool) -> Vec<String> {
    let profile = spec.profile();
    let n = profile.wire_count();
    let levels = profile.levels();
    let all_qubits = levels.iter().all(|&l| l == 2);

    let mut projector_at: Vec<Option<usize>> = vec![None; n];
    for c in spec.conditionals() {
        projector_at[c.wire] = Some(c.state);
    }
    let mut block_at: Vec<Option<(usize, usize, usize)>> = vec![None; n];
    let multiple = spec.ublocks().len() > 1;
    for (k, (start, span)) in spec.block_spans().enumerate() {
        let dim = spec.ublocks()[k].matrix.n_rows();
        block_at[start] = Some((k, span, dim));
    }

    let mut symbols = Vec::new();
    let mut wire = 0usize;
    while wire < n {
        if let Some(state) = projector_at[wire] {
            symbols.push(if all_qubits {
                format!("P{state}")
            } else {
                format!("P[{},{}]", state + 1, levels[wire])
            });
            wire += 1;
        } else if let Some((k, span, dim)) = block_at[wire] {
            symbols.push(if with_blocks {
                if multiple {
                    format!("U{}", k + 1)
                } else {
                    "U".to_string()
                }
            } else {
                format!("I{dim}")
            });
            wire += span;
        } else {
            let mut dim = levels[wire];
            wire += 1;
            while wire < n && projector_at[wire].is_none() && block_at[wire].is_none() {
                dim *= levels[wire];
                wire += 1;
            }
            symbols.push(format!("I{dim}"));
        }
    }
    symbols
}

/// One-line symbolic form "I_D + <active> - <inactive>".
pub fn decomposition_line(spec: &CugSpec) -> String {
    let dim = spec.profile().dimension();
    let active = term_symbols(spec, true).join("⊗");
    let inactive = term_symbols(spec, false).join("⊗");
    format!("I{dim} + {active} - {inactive}")
}

fn format_value(v: Complex64) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else if v.re == 0.0 {
        format!("{}i", v.im)
    } else if v.im < 0.0 {
        format!("{}-{}i", v.re, -v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}

/// Matrix body: dense rows for small matrices, sparse entry list otherwise.
pub fn matrix_body(m: &SparseMatrix) -> String {
    let mut out = String::new();
    if m.n_rows() <= 16 && m.n_cols() <= 16 {
        for r in 0..m.n_rows() {
            let row: Vec<String> = (0..m.n_cols()).map(|c| format_value(m.get(r, c))).collect();
            out.push_str("  [");
            out.push_str(&row.join(", "));
            out.push_str("]\n");
        }
    } else {
        for (r, c, v) in m.entries() {
            out.push_str(&format!("  ({r},{c}) = {}\n", format_value(v)));
        }
    }
    out
}

/// Full decompose report; `show_matrices` appends the explicit three terms.
pub fn decompose_report(spec: &CugSpec, show_matrices: bool) -> String {
    let profile = spec.profile();
    let mut out = String::new();
    out.push_str(&format!(
        "profile: ({})\n",
        profile
            .levels()
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    out.push_str(&format!(
        "conditionals: {}, naive-sum permutations: {}\n",
        spec.conditionals().len(),
        spec.permutation_count()
    ));
    out.push_str(&decomposition_line(spec));
    out.push('\n');
    if show_matrices {
        let terms = decomposition_terms(spec);
        out.push_str("identity term:\n");
        out.push_str(&matrix_body(&terms.identity));
        out.push_str("active term:\n");
        out.push_str(&matrix_body(&terms.active));
        out.push_str("inactive term:\n");
        out.push_str(&matrix_body(&terms.inactive));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Ket listing, one term per line.
    Text,
    /// Tab-separated index, digit string, re, im.
    Machine,
}

/// Amplitude listing in the requested format.
pub fn format_output(output: &StateVector, tol: f64, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut out = String::from("List of basis states with non-zero amplitude:\n");
            out.push_str(&list_states(output, tol));
            out
        }
        OutputFormat::Machine => {
            let mut out = String::new();
            for (index, amp) in output.amplitudes().as_slice().iter().enumerate() {
                if amp.norm() > tol {
                    let digits: String = output
                        .profile()
                        .digits_of(index)
                        .iter()
                        .map(|d| d.to_string())
                        .collect();
                    out.push_str(&format!("{index}\t{digits}\t{}\t{}\n", amp.re, amp.im));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cug_core::gates::not_gate;
    use cug_core::{Conditional, RegisterProfile, UBlock};

    #[test]
    fn qubit_three_term_line() {
        // conditionals (wire 2, 1) and (wire 0, 0), block on wire 1
        let spec = CugSpec::new(
            RegisterProfile::qubits(3).unwrap(),
            vec![Conditional::new(2, 1), Conditional::new(0, 0)],
            vec![UBlock::new(1, not_gate())],
        )
        .unwrap();
        assert_eq!(decomposition_line(&spec), "I8 + P0⊗U⊗P1 - P0⊗I2⊗P1");
    }

    #[test]
    fn qudit_three_term_line_uses_one_based_labels() {
        // profile (3,5,2), conditional wire 0 state 2 and wire 2 state 0,
        // 5-level block on wire 1
        let u = cug_core::gates::qft_gate(cug_core::gates::Sign::Plus, 5).unwrap();
        let spec = CugSpec::new(
            RegisterProfile::new(vec![3, 5, 2]).unwrap(),
            vec![Conditional::new(0, 2), Conditional::new(2, 0)],
            vec![UBlock::new(1, u)],
        )
        .unwrap();
        assert_eq!(decomposition_line(&spec), "I30 + P[3,3]⊗U⊗P[1,2] - P[3,3]⊗I5⊗P[1,2]");
    }

    #[test]
    fn no_conditional_line() {
        let spec = CugSpec::new(
            RegisterProfile::qubits(1).unwrap(),
            vec![],
            vec![UBlock::new(0, not_gate())],
        )
        .unwrap();
        assert_eq!(decomposition_line(&spec), "I2 + U - I2");
    }
}
