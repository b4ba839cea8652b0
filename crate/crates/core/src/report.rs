//! Key/value report trees, rendered as indented text or JSON.

use std::fmt::Write;

use serde_json::{Map, Value};

use crate::certificate::Certificate;
use crate::exact::{fmt_rational, fmt_vector, Rational};
use crate::polytope::FaceReport;
use crate::sa::SaDecision;
use crate::theorem::TheoremReport;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Str(String),
    Bool(bool),
    Int(i64),
    Map(Vec<(String, Node)>),
    List(Vec<Node>),
}

impl Node {
    pub fn map() -> Self {
        Node::Map(Vec::new())
    }

    /// Appends `key: value` to a map node.
    pub fn with(mut self, key: &str, value: impl Into<Node>) -> Self {
        if let Node::Map(entries) = &mut self {
            entries.push((key.to_string(), value.into()));
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(e) => e.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Node::Map(_) | Node::List(_))
    }

    fn scalar_text(&self) -> String {
        match self {
            Node::Str(s) => s.clone(),
            Node::Bool(b) => b.to_string(),
            Node::Int(i) => i.to_string(),
            Node::Map(e) if e.is_empty() => "{}".into(),
            Node::List(l) if l.is_empty() => "[]".into(),
            _ => String::new(),
        }
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match self {
            Node::Map(entries) => {
                for (k, v) in entries {
                    if v.is_scalar() || v.is_empty_compound() {
                        writeln!(out, "{pad}{k}: {}", v.scalar_text()).unwrap();
                    } else {
                        writeln!(out, "{pad}{k}:").unwrap();
                        v.write_text(depth + 1, out);
                    }
                }
            }
            Node::List(items) => {
                for v in items {
                    if v.is_scalar() {
                        writeln!(out, "{pad}- {}", v.scalar_text()).unwrap();
                    } else {
                        writeln!(out, "{pad}-").unwrap();
                        v.write_text(depth + 1, out);
                    }
                }
            }
            _ => writeln!(out, "{pad}{}", self.scalar_text()).unwrap(),
        }
    }

    fn is_empty_compound(&self) -> bool {
        matches!(self, Node::Map(e) if e.is_empty()) || matches!(self, Node::List(l) if l.is_empty())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(0, &mut s);
        s
    }

    pub fn to_json(&self) -> Value {
        match self {
            Node::Str(s) => Value::String(s.clone()),
            Node::Bool(b) => Value::Bool(*b),
            Node::Int(i) => Value::from(*i),
            Node::List(l) => Value::Array(l.iter().map(Node::to_json).collect()),
            Node::Map(e) => {
                let mut m = Map::new();
                for (k, v) in e {
                    m.insert(k.clone(), v.to_json());
                }
                Value::Object(m)
            }
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
            s.push('\n');
            s
        } else {
            self.to_text()
        }
    }
}

impl From<&str> for Node {
    fn from(s: &str) -> Self {
        Node::Str(s.to_string())
    }
}

impl From<String> for Node {
    fn from(s: String) -> Self {
        Node::Str(s)
    }
}

impl From<bool> for Node {
    fn from(b: bool) -> Self {
        Node::Bool(b)
    }
}

impl From<usize> for Node {
    fn from(i: usize) -> Self {
        Node::Int(i as i64)
    }
}

impl From<u64> for Node {
    fn from(i: u64) -> Self {
        Node::Int(i as i64)
    }
}

impl From<&Rational> for Node {
    fn from(q: &Rational) -> Self {
        Node::Str(fmt_rational(q))
    }
}

impl From<Vec<Node>> for Node {
    fn from(l: Vec<Node>) -> Self {
        Node::List(l)
    }
}

pub fn vector(v: &[Rational]) -> Node {
    Node::Str(fmt_vector(v))
}

pub fn theorem_node(r: &TheoremReport) -> Node {
    let rows = r
        .rows
        .iter()
        .map(|row| {
            let mut n = Node::map()
                .with("k", row.k)
                .with("condition_a", row.condition_a)
                .with("failing_face", row.failing_face.map_or("none".to_string(), |f| f.to_string()))
                .with("sa", row.sa.label())
                .with("ls", row.ls.label())
                .with("ls0", row.ls0.label())
                .with("hypotheses", row.hypotheses)
                .with("consistent", row.consistent);
            if let Some(note) = &row.note {
                n = n.with("note", note.as_str());
            }
            n
        })
        .collect::<Vec<_>>();
    let ie = match r.integer_empty {
        Some(b) => b.to_string(),
        None => "undecided-resource-limit".to_string(),
    };
    Node::map()
        .with("n", r.n)
        .with("k_max", r.k_max)
        .with("transitivity_certificate", r.transitivity)
        .with("integer_empty", ie)
        .with("levels", rows)
        .with("consistent", r.consistent())
}

pub fn certificate_node(c: &Certificate) -> Node {
    let s = &c.solution;
    let checks = Node::Map(c.checks.iter().map(|ch| (ch.name.clone(), Node::Bool(ch.passed))).collect());
    let warnings: Vec<Node> =
        c.extraction.warnings.iter().chain(&s.warnings).map(|w| Node::from(w.as_str())).collect();
    let points: Vec<Node> = c.extraction.averaged.iter().map(|x| vector(x)).collect();
    Node::map()
        .with("k", c.k)
        .with("delta", vector(&s.delta))
        .with("omega", &s.omega)
        .with("lambda", vector(&s.lambda))
        .with("gamma", vector(&s.gamma))
        .with("rho", vector(&s.rho))
        .with("face_points", points)
        .with("value", &c.value)
        .with("checks", checks)
        .with("warnings", warnings)
        .with("verified", c.checks.iter().all(|ch| ch.passed))
}

pub fn faces_node(k: usize, canonical: bool, f: &FaceReport) -> Node {
    let witnesses: Vec<Node> = f
        .witnesses
        .iter()
        .map(|(face, x)| Node::map().with("face", face.to_string()).with("point", vector(x)))
        .collect();
    Node::map()
        .with("k", k)
        .with("canonical_only", canonical)
        .with("faces_checked", f.faces_checked)
        .with("holds", f.holds)
        .with("failing_face", f.failing.map_or("none".to_string(), |x| x.to_string()))
        .with("witnesses", witnesses)
}

pub fn sa_node(d: &SaDecision) -> Node {
    let mut n = Node::map()
        .with("k", d.system.k)
        .with("variables", d.system.dim())
        .with("rows", d.system.rows.len())
        .with("empty", d.empty)
        .with("pivots", d.pivots);
    if let Some(y) = &d.witness {
        n = n.with("witness_level_one", vector(&y.level_one()));
    }
    if let Some(u) = &d.farkas {
        let support: Vec<Node> = u
            .iter()
            .enumerate()
            .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
            .map(|(i, v)| Node::map().with("row", d.system.origins[i].to_string()).with("multiplier", v))
            .collect();
        n = n.with("farkas_support", support);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn text_and_json() {
        let n = Node::map()
            .with("a", 1usize)
            .with("b", Node::map().with("c", true))
            .with("l", vec![Node::from("x"), Node::map().with("q", &rat(1, 3))])
            .with("e", Vec::<Node>::new());
        assert_eq!(n.to_text(), "a: 1\nb:\n  c: true\nl:\n  - x\n  -\n    q: 1/3\ne: []\n");
        assert_eq!(n.to_json().to_string(), r#"{"a":1,"b":{"c":true},"l":["x",{"q":"1/3"}],"e":[]}"#);
    }
}
