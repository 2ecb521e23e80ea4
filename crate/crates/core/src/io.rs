//! JSON interchange documents.
//!
//! Every document carries a `kind` tag. Complex numbers are `[re, im]`
//! pairs, matrices are row-major nested arrays and shapes are arrays of
//! block dimensions:
//!
//! ```json
//! {"kind": "state", "shape": [2], "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
//! ```
//!
//! Floats are written in shortest round-trip form, so re-serializing a
//! parsed document reproduces it exactly.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::AlgebraShape;
use crate::channels::Channel;
use crate::conditional::ConditionalState;
use crate::error::{Error, Result};
use crate::matcore::{c, ComplexMatrix};
use crate::povm::{Ensemble, Povm};
use crate::states::{JointState, State};

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Raw {
    State {
        shape: AlgebraShape,
        matrix: RawMatrix,
    },
    JointState {
        #[serde(rename = "shapeA")]
        shape_a: AlgebraShape,
        #[serde(rename = "shapeB")]
        shape_b: AlgebraShape,
        matrix: RawMatrix,
    },
    Conditional {
        conditioning: AlgebraShape,
        conditioned: AlgebraShape,
        matrix: RawMatrix,
    },
    Channel {
        #[serde(rename = "shapeIn")]
        shape_in: AlgebraShape,
        #[serde(rename = "shapeOut")]
        shape_out: AlgebraShape,
        kraus: Vec<RawMatrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support: Option<RawMatrix>,
    },
    Povm {
        shape: AlgebraShape,
        elements: Vec<RawMatrix>,
    },
    Ensemble {
        shape: AlgebraShape,
        weights: Vec<f64>,
        members: Vec<RawMatrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outcomes: Option<Vec<usize>>,
    },
}

/// A validated object read from or written to a JSON document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    State(State),
    JointState(JointState),
    Conditional(ConditionalState),
    Channel(Channel),
    Povm(Povm),
    Ensemble(Ensemble),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::State(_) => "state",
            Document::JointState(_) => "joint_state",
            Document::Conditional(_) => "conditional",
            Document::Channel(_) => "channel",
            Document::Povm(_) => "povm",
            Document::Ensemble(_) => "ensemble",
        }
    }

    /// Parses and validates a document.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: Raw = serde_json::from_str(text).map_err(syntax_error)?;
        Self::from_raw(raw)
    }

    pub fn to_json(&self) -> String {
        to_pretty_json(&self.to_value())
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self.to_raw()).expect("documents always serialize")
    }

    fn from_raw(raw: Raw) -> Result<Self> {
        Ok(match raw {
            Raw::State { shape, matrix } => Document::State(State::new(shape, from_raw(&matrix)?)?),
            Raw::JointState {
                shape_a,
                shape_b,
                matrix,
            } => Document::JointState(JointState::new(shape_a, shape_b, from_raw(&matrix)?)?),
            Raw::Conditional {
                conditioning,
                conditioned,
                matrix,
            } => Document::Conditional(ConditionalState::new(conditioning, conditioned, from_raw(&matrix)?)?),
            Raw::Channel {
                shape_in,
                shape_out,
                kraus,
                support,
            } => {
                let kraus = kraus.iter().map(from_raw).collect::<Result<Vec<_>>>()?;
                Document::Channel(match support {
                    None => Channel::new(shape_in, shape_out, kraus)?,
                    Some(s) => Channel::with_support(shape_in, shape_out, kraus, from_raw(&s)?)?,
                })
            }
            Raw::Povm { shape, elements } => {
                let elements = elements.iter().map(from_raw).collect::<Result<Vec<_>>>()?;
                Document::Povm(Povm::new(shape, elements)?)
            }
            Raw::Ensemble {
                shape,
                weights,
                members,
                outcomes,
            } => {
                let members = members
                    .iter()
                    .map(|m| State::new(shape.clone(), from_raw(m)?))
                    .collect::<Result<Vec<_>>>()?;
                Document::Ensemble(match outcomes {
                    Some(o) => Ensemble::with_outcomes(weights, members, o)?,
                    None => Ensemble::new(weights, members)?,
                })
            }
        })
    }

    fn to_raw(&self) -> Raw {
        match self {
            Document::State(s) => Raw::State {
                shape: s.shape().clone(),
                matrix: to_raw(s.matrix()),
            },
            Document::JointState(j) => Raw::JointState {
                shape_a: j.shape_a().clone(),
                shape_b: j.shape_b().clone(),
                matrix: to_raw(j.matrix()),
            },
            Document::Conditional(cs) => Raw::Conditional {
                conditioning: cs.conditioning().clone(),
                conditioned: cs.conditioned().clone(),
                matrix: to_raw(cs.matrix()),
            },
            Document::Channel(ch) => Raw::Channel {
                shape_in: ch.shape_in().clone(),
                shape_out: ch.shape_out().clone(),
                kraus: ch.kraus().iter().map(to_raw).collect(),
                support: ch.support().map(to_raw),
            },
            Document::Povm(m) => Raw::Povm {
                shape: m.shape().clone(),
                elements: m.elements().iter().map(to_raw).collect(),
            },
            Document::Ensemble(e) => Raw::Ensemble {
                shape: e.shape().clone(),
                weights: e.weights().to_vec(),
                members: e.members().iter().map(|m| to_raw(m.matrix())).collect(),
                outcomes: Some(e.outcomes().to_vec()),
            },
        }
    }

    pub fn into_state(self) -> Result<State> {
        match self {
            Document::State(s) => Ok(s),
            other => Err(wrong_kind("state", &other)),
        }
    }

    pub fn into_joint_state(self) -> Result<JointState> {
        match self {
            Document::JointState(j) => Ok(j),
            other => Err(wrong_kind("joint_state", &other)),
        }
    }

    pub fn into_conditional(self) -> Result<ConditionalState> {
        match self {
            Document::Conditional(c) => Ok(c),
            other => Err(wrong_kind("conditional", &other)),
        }
    }

    pub fn into_channel(self) -> Result<Channel> {
        match self {
            Document::Channel(c) => Ok(c),
            other => Err(wrong_kind("channel", &other)),
        }
    }

    pub fn into_povm(self) -> Result<Povm> {
        match self {
            Document::Povm(m) => Ok(m),
            other => Err(wrong_kind("povm", &other)),
        }
    }

    pub fn into_ensemble(self) -> Result<Ensemble> {
        match self {
            Document::Ensemble(e) => Ok(e),
            other => Err(wrong_kind("ensemble", &other)),
        }
    }
}

macro_rules! from_impl {
    ($($variant:ident($ty:ty)),*) => {
        $(impl From<$ty> for Document {
            fn from(x: $ty) -> Self {
                Document::$variant(x)
            }
        })*
    };
}

from_impl!(
    State(State),
    JointState(JointState),
    Conditional(ConditionalState),
    Channel(Channel),
    Povm(Povm),
    Ensemble(Ensemble)
);

impl Serialize for Document {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(serializer)
    }
}

/// States embedded in reports serialize as full state documents.
impl Serialize for State {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Raw::State {
            shape: self.shape().clone(),
            matrix: to_raw(self.matrix()),
        }
        .serialize(serializer)
    }
}

fn wrong_kind(expected: &str, found: &Document) -> Error {
    Error::InvalidArgument(format!("expected a {expected} document, found {}", found.kind()))
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn from_raw(rows: &RawMatrix) -> Result<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: bad.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(n, m, |i, j| {
        let [re, im] = rows[i][j];
        c(re, im)
    }))
}

fn to_raw(m: &ComplexMatrix) -> RawMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Indented JSON with every matrix row, shape and weight list kept on one
/// line. Numbers use the same shortest round-trip form as `serde_json`.
pub fn to_pretty_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items
            .iter()
            .all(|x| !x.is_array() && !x.is_object() || is_scalar_array(x)),
        _ => true,
    }
}

fn is_scalar_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, indent, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Reads and parses a document from a file.
pub fn read_document(path: &std::path::Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore;
    use crate::scenarios::random;

    const HALF_I: &str = r#"{"kind": "state", "shape": [2],
        "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#;

    #[test]
    fn minimal_state() {
        let s = Document::parse(HALF_I).unwrap().into_state().unwrap();
        assert_eq!(s.matrix(), &matcore::diag(&[0.5, 0.5]));
    }

    #[test]
    fn trace_violation_reports_deviation() {
        let text = r#"{"kind": "state", "shape": [2],
            "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.4, 0.0]]]}"#;
        match Document::parse(text) {
            Err(Error::InvariantViolation { invariant, deviation }) => {
                assert_eq!(invariant, "trace");
                assert!((deviation - 0.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        match Document::parse("{\n  \"kind\": \"state\",\n  \"shape\": [2,\n}") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 4);
                assert!(column >= 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_kind_is_rejected() {
        assert!(matches!(
            Document::parse(r#"{"shape": [2]}"#),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn wrong_kind() {
        let d = Document::parse(HALF_I).unwrap();
        assert!(matches!(d.into_channel(), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn generated_corpus_round_trips() {
        let mut rng = random::rng_from_seed(11);
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let b = AlgebraShape::irreducible(2);
        let state = random::random_state(&s, &mut rng);
        let povm = random::random_povm(&s, 3, &mut rng);
        let docs: Vec<Document> = vec![
            state.clone().into(),
            random::random_joint_state(&s, &b, &mut rng).into(),
            crate::channels::choi_conditional(&random::random_channel(&s, &b, 2, &mut rng).unwrap()).into(),
            random::random_channel(&s, &b, 2, &mut rng).unwrap().into(),
            povm.clone().into(),
            crate::povm::prepare(&povm, &state).unwrap().into(),
        ];
        for d in docs {
            let text = d.to_json();
            let back = Document::parse(&text).unwrap();
            assert_eq!(back, d, "{}", d.kind());
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn pretty_json_keeps_rows_on_one_line() {
        let text = Document::parse(HALF_I).unwrap().to_json();
        assert!(text.contains("\n    [[0.5, 0.0], [0.0, 0.0]],\n"), "{text}");
        assert!(text.contains("\"shape\": [2]"));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v, Document::parse(HALF_I).unwrap().to_value());
    }
}
