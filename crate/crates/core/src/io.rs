//! JSON forms of the main objects.
//!
//! Exact values are written as strings (`"5/12"`), floats as JSON numbers.
//! Readers accept either form for any scalar type; decimals read into
//! rationals exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classdist::ClassDistribution;
use crate::consistency::ExtendabilityReport;
use crate::dependence::{DependenceGraph, EdgeKind};
use crate::error::{Error, Result};
use crate::estimation::FitReport;
use crate::graph::{dyad_label, parse_dyad_label, UnlabeledClass};
use crate::mobius::{JointTable, MobiusVector};
use crate::scalar::{ParseScalar, Scalar};

pub fn scalar_value<T: Scalar>(v: &T) -> Value {
    if T::EXACT {
        Value::String(v.to_text())
    } else {
        let f = v.to_f64();
        serde_json::Number::from_f64(f).map_or(Value::String(f.to_string()), Value::Number)
    }
}

pub fn parse_scalar_value<T: ParseScalar>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => T::parse_text(s),
        Value::Number(n) => T::parse_text(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn class_entry(c: &UnlabeledClass) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("class".into(), Value::String(c.key()));
    if let Some(name) = c.name() {
        m.insert("name".into(), Value::String(name));
    }
    m.insert("edges".into(), json!(c.edge_count()));
    m
}

fn class_values<'a, T: Scalar + 'a>(
    key: &str,
    items: impl Iterator<Item = (&'a UnlabeledClass, &'a T)>,
) -> Value {
    Value::Array(
        items
            .map(|(c, v)| {
                let mut m = class_entry(c);
                m.insert(key.into(), scalar_value(v));
                Value::Object(m)
            })
            .collect(),
    )
}

/// `{"n": n, "z": [{"class": "1-2,1-3", "name": "2-star", "edges": 2, "z": "1/3"}, ...]}`
pub fn mobius_to_json<T: Scalar>(mv: &MobiusVector<T>) -> Value {
    json!({ "n": mv.n(), "z": class_values("z", mv.iter()) })
}

#[derive(Deserialize)]
struct ClassValueDoc {
    class: String,
    #[serde(alias = "q")]
    z: Value,
}

#[derive(Deserialize)]
struct MobiusDoc {
    n: usize,
    z: Vec<ClassValueDoc>,
}

fn parse_json<'a, D: Deserialize<'a>>(text: &'a str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn mobius_from_json<T: ParseScalar>(text: &str) -> Result<MobiusVector<T>> {
    let doc: MobiusDoc = parse_json(text)?;
    let pairs = doc
        .z
        .iter()
        .map(|e| Ok((UnlabeledClass::parse_key(&e.class)?, parse_scalar_value(&e.z)?)))
        .collect::<Result<Vec<_>>>()?;
    if let Some((c, _)) = pairs.iter().find(|(c, _)| c.vertex_count() > doc.n) {
        return Err(Error::InvalidInput(format!("class {} does not fit on {} nodes", c.key(), doc.n)));
    }
    MobiusVector::from_pairs(doc.n, pairs)
}

pub fn class_distribution_to_json<T: Scalar>(cd: &ClassDistribution<T>) -> Value {
    json!({ "n": cd.n(), "q": class_values("q", cd.iter()) })
}

/// `{"n": n, "probs": [...]}` with one entry per dyad mask; bit `d` of the
/// mask is dyad `d` in the order 1-2, 1-3, 2-3, 1-4, 2-4, 3-4, ...
pub fn joint_to_json<T: Scalar>(jt: &JointTable<T>) -> Value {
    json!({ "n": jt.n(), "probs": jt.probs().iter().map(scalar_value).collect::<Vec<_>>() })
}

#[derive(Deserialize)]
struct JointDoc {
    n: usize,
    probs: Vec<Value>,
}

pub fn joint_from_json<T: ParseScalar>(text: &str, tol: f64) -> Result<JointTable<T>> {
    let doc: JointDoc = parse_json(text)?;
    let probs = doc.probs.iter().map(parse_scalar_value).collect::<Result<Vec<T>>>()?;
    JointTable::new(doc.n, probs, tol)
}

/// `{"n": n, "kind": "bidirected", "edges": [["1-2", "3-4"], ...]}`
#[derive(Serialize, Deserialize)]
struct DependenceDoc {
    n: usize,
    kind: String,
    edges: Vec<[String; 2]>,
}

pub fn dependence_to_json(g: &DependenceGraph) -> Value {
    let doc = DependenceDoc {
        n: g.n(),
        kind: g.kind().as_str().into(),
        edges: g.edges().into_iter().map(|(u, v)| [dyad_label(u), dyad_label(v)]).collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn dependence_from_json(text: &str) -> Result<DependenceGraph> {
    let doc: DependenceDoc = parse_json(text)?;
    let kind = EdgeKind::parse(&doc.kind)?;
    let edges = doc
        .edges
        .iter()
        .map(|[a, b]| Ok((parse_dyad_label(a)?, parse_dyad_label(b)?)))
        .collect::<Result<Vec<_>>>()?;
    DependenceGraph::from_edges(doc.n, kind, &edges)
}

pub fn fit_report_to_json(r: &FitReport) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("family".into(), json!(r.family));
    m.insert("status".into(), json!(r.status.as_str()));
    m.insert("loglik".into(), scalar_value(&r.loglik));
    m.insert("likelihood".into(), scalar_value(&r.likelihood()));
    m.insert("z".into(), r.z.as_ref().map_or(Value::Null, |z| class_values("z", z.iter())));
    m.insert("q".into(), r.q.as_ref().map_or(Value::Null, |q| class_values("q", q.iter())));
    if !r.nu.is_empty() {
        m.insert(
            "nu".into(),
            Value::Array(r.nu.iter().map(|(s, v)| json!({ "stat": s, "nu": scalar_value(v) })).collect()),
        );
    }
    m.insert("constraint_residual".into(), scalar_value(&r.constraint_residual));
    m.insert("kkt_residual".into(), scalar_value(&r.kkt_residual));
    m.insert("restarts_used".into(), json!(r.restarts_used));
    m.insert("iterations".into(), json!(r.iterations));
    if !r.endpoints.is_empty() {
        m.insert(
            "endpoints".into(),
            Value::Array(r.endpoints.iter().map(|e| class_values("q", e.iter())).collect()),
        );
    }
    Value::Object(m)
}

pub fn extendability_to_json<T: Scalar>(r: &ExtendabilityReport<T>) -> Value {
    json!({
        "feasible": r.feasible,
        "n": r.n,
        "m": r.m,
        "cap": r.cap,
        "margin": scalar_value(&r.margin),
        "worst_class": r.worst_class.map(|c| c.key()),
        "certificate": r.certificate.as_ref().map(|q| class_values("q", q.iter())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::incidence_graph;
    use crate::scalar::{rat, Rational};

    #[test]
    fn round_trips() {
        let z = MobiusVector::erdos_renyi(3, &rat(1, 3)).unwrap();
        let back: MobiusVector<Rational> = mobius_from_json(&mobius_to_json(&z).to_string()).unwrap();
        assert_eq!(back, z);
        let g = incidence_graph(4, EdgeKind::Bidirected);
        assert_eq!(dependence_from_json(&dependence_to_json(&g).to_string()).unwrap(), g);
        let jt = crate::genmodels::er_joint(3, &rat(1, 4)).unwrap();
        let back: JointTable<Rational> = joint_from_json(&joint_to_json(&jt).to_string(), 0.0).unwrap();
        assert_eq!(back, jt);
    }

    #[test]
    fn decimals_read_exactly() {
        let v: Rational = parse_scalar_value(&json!(0.25)).unwrap();
        assert_eq!(v, rat(1, 4));
        assert!(parse_scalar_value::<f64>(&json!(true)).is_err());
    }
}
