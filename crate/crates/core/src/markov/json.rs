//! JSON form of automata.
//!
//! ```json
//! {"rank": 2, "states": ["p", "q"], "initial": {"p": "1/2", "q": 0.5},
//!  "transitions": [{"from": "p", "letter": "a", "to": "q", "prob": "1/3"}]}
//! ```
//!
//! Probabilities are numbers or strings; strings may be fractions. Both are
//! read exactly (a JSON number is read from its decimal text). States absent
//! from `initial` get initial probability 0.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use super::{MarkovianAutomaton, TransitionSpec, ValidationReport, ViolationKind};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Probability};
use crate::words::Alphabet;

fn probability(value: &Value, path: &str) -> Result<BigRational> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::parse(path, "expected a number or a string")),
    };
    parse_rational(&text).ok_or_else(|| Error::parse(path, format!("cannot parse probability {text:?}")))
}

fn convert<W: Probability>(value: &BigRational, path: &str) -> Result<W> {
    W::from_rational(value).ok_or_else(|| Error::parse(path, "probability is not representable"))
}

pub fn automaton_from_json_str<W: Probability>(text: &str) -> Result<MarkovianAutomaton<W>> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
    automaton_from_json(&value)
}

pub fn automaton_from_json<W: Probability>(value: &Value) -> Result<MarkovianAutomaton<W>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse("$", "expected an object"))?;
    let rank = obj
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse("$.rank", "expected a positive integer"))?;
    let alphabet =
        Alphabet::new(rank as usize).map_err(|e| Error::parse("$.rank", e.to_string()))?;

    let raw_states = obj
        .get("states")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("$.states", "expected an array of names"))?;
    let mut names: Vec<String> = Vec::with_capacity(raw_states.len());
    for (i, s) in raw_states.iter().enumerate() {
        let name = s
            .as_str()
            .ok_or_else(|| Error::parse(format!("$.states[{i}]"), "expected a string"))?;
        if names.iter().any(|n| n == name) {
            return Err(Error::parse(format!("$.states[{i}]"), format!("duplicate state {name:?}")));
        }
        names.push(name.to_string());
    }
    let index_of = |name: &str, path: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::parse(path, format!("unknown state {name:?}")))
    };

    let mut initial = vec![W::zero(); names.len()];
    let raw_initial = obj
        .get("initial")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse("$.initial", "expected an object mapping states to probabilities"))?;
    for (name, v) in raw_initial {
        let path = format!("$.initial.{name}");
        let p = index_of(name, &path)?;
        initial[p] = convert(&probability(v, &path)?, &path)?;
    }

    let raw_transitions = obj
        .get("transitions")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("$.transitions", "expected an array"))?;
    let mut transitions = Vec::with_capacity(raw_transitions.len());
    for (i, t) in raw_transitions.iter().enumerate() {
        let path = format!("$.transitions[{i}]");
        let t = t
            .as_object()
            .ok_or_else(|| Error::parse(&path, "expected an object"))?;
        let field = |key: &str| -> Result<&Value> {
            t.get(key)
                .ok_or_else(|| Error::parse(format!("{path}.{key}"), "missing field"))
        };
        let name = |key: &str| -> Result<&str> {
            field(key)?
                .as_str()
                .ok_or_else(|| Error::parse(format!("{path}.{key}"), "expected a string"))
        };
        let from = index_of(name("from")?, &format!("{path}.from"))?;
        let to = index_of(name("to")?, &format!("{path}.to"))?;
        let label = name("letter")?;
        let mut chars = label.chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) => alphabet
                .parse_letter(c, 0)
                .map_err(|e| Error::parse(format!("{path}.letter"), e.to_string()))?,
            _ => return Err(Error::parse(format!("{path}.letter"), "expected one letter")),
        };
        let prob_path = format!("{path}.prob");
        let prob = convert(&probability(field("prob")?, &prob_path)?, &prob_path)?;
        transitions.push(TransitionSpec {
            from,
            letter,
            to,
            prob,
        });
    }

    let locate = |report: ValidationReport| -> Error {
        let mut report = report;
        for v in &mut report.violations {
            let path = match (v.kind, v.state, v.letter) {
                (ViolationKind::InitialSum, _, _) => "$.initial".to_string(),
                (ViolationKind::InitialOutOfRange, Some(p), _) => format!("$.initial.{}", names[p]),
                (_, Some(p), Some(x)) => transitions
                    .iter()
                    .position(|t| t.from == p && t.letter == x)
                    .map(|i| format!("$.transitions[{i}]"))
                    .unwrap_or_else(|| "$.transitions".into()),
                _ => "$.transitions".into(),
            };
            v.message = format!("{path}: {}", v.message);
        }
        Error::InvalidAutomaton(report)
    };
    let specs = transitions.clone();
    let automaton = MarkovianAutomaton::new_unchecked(alphabet, names.clone(), initial, specs)
        .map_err(|e| match e {
            Error::InvalidAutomaton(r) => locate(r),
            other => other,
        })?;
    let report = automaton.validate();
    if !report.is_valid() {
        return Err(locate(report));
    }
    Ok(automaton)
}

/// Serializes with weights written as strings (exact for rationals).
pub fn automaton_to_json<W: Probability>(a: &MarkovianAutomaton<W>) -> Value {
    let names = a.state_names();
    let mut initial = Map::new();
    for (name, g) in names.iter().zip(a.initial()) {
        if !g.is_zero() {
            initial.insert(name.clone(), Value::String(g.to_string()));
        }
    }
    let transitions: Vec<Value> = a
        .transitions()
        .iter()
        .map(|t| {
            json!({
                "from": names[t.from],
                "letter": t.letter.to_string(),
                "to": names[t.to],
                "prob": t.prob.to_string(),
            })
        })
        .collect();
    json!({
        "rank": a.alphabet().rank(),
        "states": names,
        "initial": initial,
        "transitions": transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::uniform_automaton;

    #[test]
    fn roundtrip_exact() {
        let u = uniform_automaton::<BigRational>(2).unwrap();
        let back: MarkovianAutomaton<BigRational> = automaton_from_json(&automaton_to_json(&u)).unwrap();
        assert_eq!(u, back);
    }

    #[test]
    fn mixed_probability_formats() {
        let text = r#"{"rank": 1, "states": ["s"], "initial": {"s": 1},
            "transitions": [{"from": "s", "letter": "a", "to": "s", "prob": "1/1"}]}"#;
        let a: MarkovianAutomaton<f64> = automaton_from_json_str(text).unwrap();
        assert_eq!(a.state_count(), 1);
    }

    #[test]
    fn errors_carry_paths() {
        let text = r#"{"rank": 2, "states": ["p"], "initial": {"p": 1},
            "transitions": [{"from": "p", "letter": "a", "to": "p", "prob": 0.5},
                            {"from": "p", "letter": "b", "to": "p", "prob": 0.499},
                            {"from": "p", "letter": "A", "to": "p", "prob": "x"}]}"#;
        let err = automaton_from_json_str::<f64>(text).unwrap_err().to_string();
        assert!(err.contains("$.transitions[2].prob"), "{err}");

        let text = r#"{"rank": 2, "states": ["p", "q"], "initial": {"p": 1},
            "transitions": [{"from": "p", "letter": "a", "to": "q", "prob": 1},
                            {"from": "q", "letter": "A", "to": "p", "prob": 1}]}"#;
        let err = automaton_from_json_str::<f64>(text).unwrap_err().to_string();
        assert!(err.contains("$.transitions[0]"), "{err}");

        let text = r#"{"rank": 1, "states": ["p"], "initial": {"p": 0.9},
            "transitions": [{"from": "p", "letter": "a", "to": "p", "prob": 1}]}"#;
        let err = automaton_from_json_str::<f64>(text).unwrap_err().to_string();
        assert!(err.contains("$.initial"), "{err}");

        let err = automaton_from_json_str::<f64>(r#"{"rank": 2, "states": ["p"], "initial": {"z": 1}, "transitions": []}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("$.initial.z"), "{err}");
    }

    #[test]
    fn decimal_numbers_are_exact() {
        let text = r#"{"rank": 1, "states": ["s", "t"], "initial": {"s": 0.1, "t": 0.9},
            "transitions": [{"from": "s", "letter": "a", "to": "s", "prob": 1},
                            {"from": "t", "letter": "A", "to": "t", "prob": 1}]}"#;
        let a: MarkovianAutomaton<BigRational> = automaton_from_json_str(text).unwrap();
        assert_eq!(a.initial()[0], BigRational::new(1.into(), 10.into()));
    }
}
