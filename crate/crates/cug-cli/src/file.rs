//! The circuit file format: a JSON document holding a register profile, an
//! input state, and an ordered element list. Conditionals are written as
//! `[wire, state]` pairs; the file-level `indexing` field (or the
//! `--paper-indexing` flag) switches between 0-based wires/states and the
//! 1-based convention where a conditional `[c, s]` means wire c-1 must hold
//! level s-1.

use std::str::FromStr;

use serde::Deserialize;

use cug_core::circuit::{generalized_step, step_gate, StepDirection};
use cug_core::gates::Sign;
use cug_core::{
    Circuit, Complex64, Conditional, CugSpec, GateName, GateSpec, PlacedElement, RegisterProfile,
    RotationDirection, SparseMatrix, StateVector, UBlock,
};

use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn at_element(index: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("element {index}: {msg}"))
}

/// An angle written either as a number or as a "pi" expression such as
/// "pi/2", "-3*pi/4", or "2*pi".
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Number(f64),
    Expr(String),
}

impl Angle {
    pub fn value(&self) -> Result<f64, CliError> {
        match self {
            Angle::Number(x) if x.is_finite() => Ok(*x),
            Angle::Number(x) => Err(invalid(format!("non-finite angle {x}"))),
            Angle::Expr(s) => {
                parse_pi_expr(s).ok_or_else(|| invalid(format!("cannot parse angle {s:?}")))
            }
        }
    }
}

fn parse_pi_expr(s: &str) -> Option<f64> {
    let t: String = s
        .trim()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return x.is_finite().then_some(x);
    }
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.as_str()),
    };
    let pi_at = t.find("pi")?;
    let coef_str = &t[..pi_at];
    let rest = &t[pi_at + 2..];
    let coef: f64 = if coef_str.is_empty() {
        1.0
    } else {
        coef_str.strip_suffix('*')?.parse().ok()?
    };
    let divisor: f64 = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/')?.parse().ok()?
    };
    if divisor == 0.0 {
        return None;
    }
    Some(sign * coef * std::f64::consts::PI / divisor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indexing {
    #[default]
    Zero,
    Paper,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Digits(Vec<usize>),
    Named(String),
}

/// One gate source: exactly one of a registry name, an inline matrix, or a
/// step cascade.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSource {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub params: Vec<Angle>,
    #[serde(default)]
    pub levels: Option<usize>,
    /// Row-major matrix of [re, im] pairs.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    /// "increment" | "decrement" (qubit cascade) or "plus" | "minus"
    /// (generalized cascade over the spanned wires).
    #[serde(default)]
    pub step: Option<String>,
    /// Wire count of a step cascade.
    #[serde(default)]
    pub wires: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UBlockRecord {
    pub start: usize,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub params: Vec<Angle>,
    #[serde(default)]
    pub levels: Option<usize>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub step: Option<String>,
    #[serde(default)]
    pub wires: Option<usize>,
}

impl UBlockRecord {
    fn source(&self) -> GateSource {
        GateSource {
            name: self.name.clone(),
            params: self.params.clone(),
            levels: self.levels,
            matrix: self.matrix.clone(),
            step: self.step.clone(),
            wires: self.wires,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementRecord {
    Cug {
        #[serde(default)]
        conditionals: Vec<[usize; 2]>,
        ublocks: Vec<UBlockRecord>,
    },
    Gate {
        wire: usize,
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        params: Vec<Angle>,
        #[serde(default)]
        levels: Option<usize>,
        #[serde(default)]
        matrix: Option<Vec<Vec<[f64; 2]>>>,
        #[serde(default)]
        step: Option<String>,
        #[serde(default)]
        wires: Option<usize>,
    },
    Swap {
        wires: [usize; 2],
    },
    Rotate {
        direction: String,
        range: [usize; 2],
    },
    Step {
        direction: String,
        range: [usize; 2],
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub profile: Vec<usize>,
    #[serde(default)]
    pub indexing: Indexing,
    pub input: InputSpec,
    pub elements: Vec<ElementRecord>,
}

/// A standalone gate description for the decompose command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CugFile {
    pub profile: Vec<usize>,
    #[serde(default)]
    pub indexing: Indexing,
    #[serde(default)]
    pub conditionals: Vec<[usize; 2]>,
    pub ublocks: Vec<UBlockRecord>,
}

pub fn parse_circuit_file(text: &str) -> Result<CircuitFile, CliError> {
    serde_json::from_str(text).map_err(|e| invalid(format!("circuit file parse error: {e}")))
}

pub fn parse_cug_file(text: &str) -> Result<CugFile, CliError> {
    if let Ok(cug) = serde_json::from_str::<CugFile>(text) {
        return Ok(cug);
    }
    // fall back to a circuit file holding exactly one cug element
    let file = parse_circuit_file(text)?;
    let mut cugs = file.elements.iter().filter_map(|e| match e {
        ElementRecord::Cug {
            conditionals,
            ublocks,
        } => Some((conditionals.clone(), ublocks.clone())),
        _ => None,
    });
    match (cugs.next(), cugs.next()) {
        (Some((conditionals, ublocks)), None) => Ok(CugFile {
            profile: file.profile,
            indexing: file.indexing,
            conditionals,
            ublocks,
        }),
        _ => Err(invalid(
            "decompose input must be a gate description or a circuit file with exactly one cug element",
        )),
    }
}

struct IndexMap {
    paper: bool,
}

impl IndexMap {
    fn wire(&self, w: usize) -> Result<usize, CliError> {
        if self.paper {
            if w == 0 {
                return Err(invalid("paper indexing is 1-based; wire 0 is invalid"));
            }
            Ok(w - 1)
        } else {
            Ok(w)
        }
    }

    fn conditional(&self, pair: [usize; 2]) -> Result<Conditional, CliError> {
        let wire = self.wire(pair[0])?;
        let state = if self.paper {
            if pair[1] == 0 {
                return Err(invalid(
                    "paper indexing conditionals use 1-based states; state 0 is invalid",
                ));
            }
            pair[1] - 1
        } else {
            pair[1]
        };
        Ok(Conditional::new(wire, state))
    }
}

fn inline_matrix(rows: &[Vec<[f64; 2]>]) -> Result<SparseMatrix, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(invalid("inline matrix is empty"));
    }
    let mut entries = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(invalid(format!(
                "inline matrix is not square: row {r} has {} of {} columns",
                row.len(),
                n
            )));
        }
        for (c, &[re, im]) in row.iter().enumerate() {
            entries.push((r, c, Complex64::new(re, im)));
        }
    }
    SparseMatrix::from_entries(n, n, entries).map_err(|e| invalid(e.to_string()))
}

fn step_matrix(
    profile: &RegisterProfile,
    start: usize,
    direction: &str,
    wires: usize,
) -> Result<SparseMatrix, CliError> {
    if wires == 0 {
        return Err(invalid("step cascade needs at least one wire"));
    }
    let end = start + wires - 1;
    match direction {
        "increment" | "decrement" => {
            for w in start..=end {
                let level = profile.level(w).map_err(|e| invalid(e.to_string()))?;
                if level != 2 {
                    return Err(invalid(format!(
                        "{direction} cascade requires 2-level wires; wire {w} has {level}"
                    )));
                }
            }
            let dir = if direction == "increment" {
                StepDirection::Increment
            } else {
                StepDirection::Decrement
            };
            step_gate(wires, dir).map_err(|e| invalid(e.to_string()))
        }
        "plus" | "minus" => {
            let sub = profile
                .sub_profile(start, end)
                .map_err(|e| invalid(e.to_string()))?;
            let sign = if direction == "plus" {
                Sign::Plus
            } else {
                Sign::Minus
            };
            generalized_step(&sub, sign).map_err(|e| invalid(e.to_string()))
        }
        other => Err(invalid(format!(
            "unknown step direction {other:?} (expected increment, decrement, plus, or minus)"
        ))),
    }
}

fn build_gate_source(
    profile: &RegisterProfile,
    start: usize,
    source: &GateSource,
) -> Result<SparseMatrix, CliError> {
    let picked = [
        source.name.is_some(),
        source.matrix.is_some(),
        source.step.is_some(),
    ]
    .iter()
    .filter(|&&p| p)
    .count();
    if picked != 1 {
        return Err(invalid(
            "gate needs exactly one of: a registry name, an inline matrix, or a step cascade",
        ));
    }

    if let Some(name) = &source.name {
        let gate_name = GateName::from_str(name).map_err(|e| invalid(e.to_string()))?;
        let params = source
            .params
            .iter()
            .map(Angle::value)
            .collect::<Result<Vec<f64>, CliError>>()?;
        let spec = GateSpec::new(gate_name, params, source.levels);
        return spec.matrix().map_err(|e| invalid(e.to_string()));
    }
    if let Some(rows) = &source.matrix {
        return inline_matrix(rows);
    }
    let direction = source.step.as_deref().expect("picked == 1");
    let wires = source
        .wires
        .ok_or_else(|| invalid("step cascade needs a \"wires\" count"))?;
    step_matrix(profile, start, direction, wires)
}

fn convert_element(
    profile: &RegisterProfile,
    record: &ElementRecord,
    map: &IndexMap,
) -> Result<PlacedElement, CliError> {
    match record {
        ElementRecord::Cug {
            conditionals,
            ublocks,
        } => {
            let conds = conditionals
                .iter()
                .map(|&pair| map.conditional(pair))
                .collect::<Result<Vec<_>, _>>()?;
            let blocks = ublocks
                .iter()
                .map(|b| {
                    let start = map.wire(b.start)?;
                    let matrix = build_gate_source(profile, start, &b.source())?;
                    Ok(UBlock::new(start, matrix))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let spec = CugSpec::new(profile.clone(), conds, blocks)
                .map_err(|e| invalid(e.to_string()))?;
            Ok(PlacedElement::Cug(spec))
        }
        ElementRecord::Gate {
            wire,
            name,
            params,
            levels,
            matrix,
            step,
            wires,
        } => {
            let start = map.wire(*wire)?;
            let source = GateSource {
                name: name.clone(),
                params: params.clone(),
                levels: *levels,
                matrix: matrix.clone(),
                step: step.clone(),
                wires: *wires,
            };
            let matrix = build_gate_source(profile, start, &source)?;
            Ok(PlacedElement::SpanGate {
                start_wire: start,
                matrix,
            })
        }
        ElementRecord::Swap { wires } => Ok(PlacedElement::WireSwap {
            a: map.wire(wires[0])?,
            b: map.wire(wires[1])?,
        }),
        ElementRecord::Rotate { direction, range } => {
            let dir = match direction.to_ascii_lowercase().as_str() {
                "r" | "right" => RotationDirection::Right,
                "l" | "left" => RotationDirection::Left,
                other => {
                    return Err(invalid(format!(
                        "unknown rotation direction {other:?} (expected R or L)"
                    )))
                }
            };
            Ok(PlacedElement::WireRotation {
                direction: dir,
                start: map.wire(range[0])?,
                end: map.wire(range[1])?,
            })
        }
        ElementRecord::Step { direction, range } => {
            let start = map.wire(range[0])?;
            let end = map.wire(range[1])?;
            if start > end {
                return Err(invalid(format!("step range [{start}, {end}] is reversed")));
            }
            let matrix = step_matrix(profile, start, direction, end - start + 1)?;
            Ok(PlacedElement::SpanGate {
                start_wire: start,
                matrix,
            })
        }
    }
}

/// A parsed, validated circuit together with its input state.
#[derive(Debug)]
pub struct LoadedCircuit {
    pub circuit: Circuit,
    pub input: StateVector,
}

/// Validate a circuit file and build the runnable circuit. `force_paper`
/// switches the index base regardless of the file's own setting.
pub fn build_circuit(file: &CircuitFile, force_paper: bool) -> Result<LoadedCircuit, CliError> {
    let profile =
        RegisterProfile::new(file.profile.clone()).map_err(|e| invalid(e.to_string()))?;
    let map = IndexMap {
        paper: force_paper || file.indexing == Indexing::Paper,
    };

    let mut elements = Vec::with_capacity(file.elements.len());
    for (index, record) in file.elements.iter().enumerate() {
        let element =
            convert_element(&profile, record, &map).map_err(|e| match e {
                CliError::Invalid(msg) => at_element(index, msg),
                other => other,
            })?;
        elements.push(element);
    }
    let circuit =
        Circuit::new(profile.clone(), elements).map_err(|e| invalid(e.to_string()))?;

    let input = match &file.input {
        InputSpec::Digits(digits) => StateVector::basis_state(profile, digits)
            .map_err(|e| invalid(format!("input state: {e}")))?,
        InputSpec::Named(name) if name == "uniform" => StateVector::equal_superposition(profile),
        InputSpec::Named(other) => {
            return Err(invalid(format!(
                "unknown input {other:?} (expected a digit list or \"uniform\")"
            )))
        }
    };
    Ok(LoadedCircuit { circuit, input })
}

/// Build the validated gate description from a decompose input file.
pub fn build_cug_spec(file: &CugFile, force_paper: bool) -> Result<CugSpec, CliError> {
    let profile =
        RegisterProfile::new(file.profile.clone()).map_err(|e| invalid(e.to_string()))?;
    let map = IndexMap {
        paper: force_paper || file.indexing == Indexing::Paper,
    };
    let conds = file
        .conditionals
        .iter()
        .map(|&pair| map.conditional(pair))
        .collect::<Result<Vec<_>, _>>()?;
    let blocks = file
        .ublocks
        .iter()
        .map(|b| {
            let start = map.wire(b.start)?;
            let matrix = build_gate_source(&profile, start, &b.source())?;
            Ok(UBlock::new(start, matrix))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    CugSpec::new(profile, conds, blocks).map_err(|e| invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_expressions() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_pi_expr("pi"), Some(pi));
        assert_eq!(parse_pi_expr("-pi"), Some(-pi));
        assert_eq!(parse_pi_expr("pi/2"), Some(pi / 2.0));
        assert_eq!(parse_pi_expr("3*pi/4"), Some(3.0 * pi / 4.0));
        assert_eq!(parse_pi_expr("2*pi"), Some(2.0 * pi));
        assert_eq!(parse_pi_expr(" - pi / 3 "), Some(-pi / 3.0));
        assert_eq!(parse_pi_expr("0.25"), Some(0.25));
        assert_eq!(parse_pi_expr("pi/0"), None);
        assert_eq!(parse_pi_expr("tau"), None);
    }

    #[test]
    fn minimal_file_round_trip() {
        let text = r#"{
            "profile": [2, 2],
            "input": [1, 0],
            "elements": [
                {"kind": "gate", "name": "H", "wire": 0},
                {"kind": "cug", "conditionals": [[0, 1]], "ublocks": [{"start": 1, "name": "NOT"}]}
            ]
        }"#;
        let file = parse_circuit_file(text).unwrap();
        let loaded = build_circuit(&file, false).unwrap();
        assert_eq!(loaded.circuit.elements().len(), 2);
        assert_eq!(loaded.input.amplitude(2).re, 1.0);
    }

    #[test]
    fn paper_indexing_shifts_wires_and_states() {
        // the same CNOT written both ways
        let zero = r#"{
            "profile": [2, 2], "input": [0, 0],
            "elements": [{"kind": "cug", "conditionals": [[0, 1]], "ublocks": [{"start": 1, "name": "NOT"}]}]
        }"#;
        let paper = r#"{
            "profile": [2, 2], "input": [0, 0], "indexing": "paper",
            "elements": [{"kind": "cug", "conditionals": [[1, 2]], "ublocks": [{"start": 2, "name": "NOT"}]}]
        }"#;
        let a = build_circuit(&parse_circuit_file(zero).unwrap(), false).unwrap();
        let b = build_circuit(&parse_circuit_file(paper).unwrap(), false).unwrap();
        assert!(a.circuit.compile().max_diff(&b.circuit.compile()) < 1e-15);

        // wire 0 is invalid in paper mode
        let bad = r#"{
            "profile": [2, 2], "input": [0, 0], "indexing": "paper",
            "elements": [{"kind": "gate", "name": "H", "wire": 0}]
        }"#;
        let err = build_circuit(&parse_circuit_file(bad).unwrap(), false).unwrap_err();
        assert!(err.to_string().contains("element 0"));
    }

    #[test]
    fn unknown_kind_rejected() {
        let text = r#"{
            "profile": [2], "input": [0],
            "elements": [{"kind": "teleport", "wire": 0}]
        }"#;
        assert!(parse_circuit_file(text).is_err());
    }

    #[test]
    fn gate_source_must_be_unique() {
        let text = r#"{
            "profile": [2], "input": [0],
            "elements": [{"kind": "gate", "name": "H", "matrix": [[[1,0]]], "wire": 0}]
        }"#;
        let err = build_circuit(&parse_circuit_file(text).unwrap(), false).unwrap_err();
        assert!(err.to_string().contains("exactly one of"));
    }

    #[test]
    fn inline_matrix_must_be_square_and_unitary_in_cug() {
        let ragged = r#"{
            "profile": [2], "input": [0],
            "elements": [{"kind": "gate", "matrix": [[[1,0],[0,0]]], "wire": 0}]
        }"#;
        let err = build_circuit(&parse_circuit_file(ragged).unwrap(), false).unwrap_err();
        assert!(err.to_string().contains("not square"));

        // non-unitary block inside a cug is rejected with the element index
        let non_unitary = r#"{
            "profile": [2, 2], "input": [0, 0],
            "elements": [{"kind": "cug", "conditionals": [[0, 1]],
                          "ublocks": [{"start": 1, "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}]}]
        }"#;
        let err = build_circuit(&parse_circuit_file(non_unitary).unwrap(), false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("element 0") && msg.contains("not unitary"), "{msg}");
    }

    #[test]
    fn span_mismatch_names_offending_element() {
        let text = r#"{
            "profile": [2, 2], "input": [0, 0],
            "elements": [
                {"kind": "gate", "name": "H", "wire": 0},
                {"kind": "gate", "name": "IDENTITY", "levels": 3, "wire": 1}
            ]
        }"#;
        let err = build_circuit(&parse_circuit_file(text).unwrap(), false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("element 1"), "{msg}");
        assert!(msg.contains("span"), "{msg}");
    }

    #[test]
    fn uniform_input() {
        let text = r#"{
            "profile": [2, 2], "input": "uniform",
            "elements": []
        }"#;
        let loaded = build_circuit(&parse_circuit_file(text).unwrap(), false).unwrap();
        for i in 0..4 {
            assert!((loaded.input.amplitude(i).re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn standalone_step_element() {
        let text = r#"{
            "profile": [2, 2, 2], "input": [0, 0, 0],
            "elements": [{"kind": "step", "direction": "increment", "range": [0, 2]}]
        }"#;
        let loaded = build_circuit(&parse_circuit_file(text).unwrap(), false).unwrap();
        let out = loaded.circuit.apply(&loaded.input).unwrap();
        assert!((out.amplitude(1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cug_file_parsing_both_shapes() {
        let bare = r#"{
            "profile": [2, 2, 2],
            "conditionals": [[2, 1], [0, 0]],
            "ublocks": [{"start": 1, "name": "NOT"}]
        }"#;
        let spec = build_cug_spec(&parse_cug_file(bare).unwrap(), false).unwrap();
        assert_eq!(spec.conditionals().len(), 2);

        let wrapped = r#"{
            "profile": [2, 2], "input": [0, 0],
            "elements": [{"kind": "cug", "conditionals": [[0, 1]], "ublocks": [{"start": 1, "name": "NOT"}]}]
        }"#;
        let spec = build_cug_spec(&parse_cug_file(wrapped).unwrap(), false).unwrap();
        assert_eq!(spec.conditionals().len(), 1);
    }
}
