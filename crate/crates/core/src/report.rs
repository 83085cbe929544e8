//! Structured reports with a stable key order, rendered as indented text or
//! as JSON.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Null,
    Bool(bool),
    Int(i64),
    Str(String),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn str(s: impl Into<String>) -> Node {
        Node::Str(s.into())
    }

    pub fn strs<I, S>(items: I) -> Node
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Node::List(items.into_iter().map(|s| Node::Str(s.into())).collect())
    }

    pub fn int(v: impl TryInto<i64>) -> Node {
        Node::Int(v.try_into().unwrap_or(i64::MAX))
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Node::List(_) | Node::Map(_)) && !matches!(self, Node::Str(s) if s.contains('\n'))
    }

    fn scalar_text(&self) -> String {
        match self {
            Node::Null => "-".into(),
            Node::Bool(b) => b.to_string(),
            Node::Int(i) => i.to_string(),
            Node::Str(s) => s.clone(),
            Node::List(items) => {
                let parts: Vec<String> = items.iter().map(Node::scalar_text).collect();
                format!("[{}]", parts.join(", "))
            }
            Node::Map(_) => unreachable!("maps are never inline"),
        }
    }

    fn inline(&self) -> bool {
        match self {
            Node::List(items) => items.iter().all(Node::is_scalar),
            other => other.is_scalar(),
        }
    }
}

/// Ordered map builder.
#[derive(Debug, Clone, Default)]
pub struct Fields(Vec<(String, Node)>);

impl Fields {
    pub fn new() -> Self {
        Fields(Vec::new())
    }

    pub fn with(mut self, key: &str, value: Node) -> Self {
        self.0.push((key.to_string(), value));
        self
    }

    pub fn push(&mut self, key: &str, value: Node) {
        self.0.push((key.to_string(), value));
    }

    pub fn node(self) -> Node {
        Node::Map(self.0)
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Node::Null => ser.serialize_unit(),
            Node::Bool(b) => ser.serialize_bool(*b),
            Node::Int(i) => ser.serialize_i64(*i),
            Node::Str(s) => ser.serialize_str(s),
            Node::List(items) => {
                let mut seq = ser.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            Node::Map(entries) => {
                let mut map = ser.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    /// Unix seconds; `None` for byte-stable output.
    pub timestamp: Option<u64>,
    pub body: Fields,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), timestamp: None, body: Fields::new() }
    }

    pub fn push(&mut self, key: &str, value: Node) {
        self.body.push(key, value);
    }

    pub fn stamp_now(&mut self) {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }

    pub fn to_node(&self) -> Node {
        let mut top = Fields::new().with("command", Node::str(&self.command));
        if let Some(t) = self.timestamp {
            top.push("generated_at_unix", Node::int(t));
        }
        let mut entries = top.0;
        entries.extend(self.body.0.iter().cloned());
        Node::Map(entries)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_node()).expect("report nodes always serialise");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Node::Map(entries) = self.to_node() {
            write_entries(&mut out, &entries, 0);
        }
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_text()
        }
    }
}

fn write_entries(out: &mut String, entries: &[(String, Node)], depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in entries {
        if v.inline() {
            out.push_str(&format!("{pad}{k}: {}\n", v.scalar_text()));
        } else {
            out.push_str(&format!("{pad}{k}:\n"));
            write_block(out, v, depth + 1);
        }
    }
}

fn write_block(out: &mut String, node: &Node, depth: usize) {
    let pad = "  ".repeat(depth);
    match node {
        Node::Map(entries) => write_entries(out, entries, depth),
        Node::List(items) => {
            for item in items {
                match item {
                    Node::Map(entries) if !entries.is_empty() => {
                        // first key shares the dash line
                        let mut first = String::new();
                        write_entries(&mut first, &entries[..1], depth + 1);
                        out.push_str(&format!("{pad}- {}", first.trim_start()));
                        write_entries(out, &entries[1..], depth + 1);
                    }
                    other if other.inline() => out.push_str(&format!("{pad}- {}\n", other.scalar_text())),
                    other => {
                        out.push_str(&format!("{pad}-\n"));
                        write_block(out, other, depth + 1);
                    }
                }
            }
        }
        Node::Str(s) => {
            for line in s.lines() {
                if line.is_empty() {
                    out.push_str(&format!("{pad}|\n"));
                } else {
                    out.push_str(&format!("{pad}| {line}\n"));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", other.scalar_text())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("validate");
        r.push("digest", Node::str("ab12"));
        r.push(
            "axioms",
            Fields::new()
                .with("P0", Node::str("pass"))
                .with("P4", Fields::new().with("verdict", Node::str("fail")).with("witness", Node::strs(["{0}", "{1}"])).node())
                .node(),
        );
        r.push("rows", Node::List(vec![Fields::new().with("a", Node::int(1)).with("b", Node::Bool(true)).node()]));
        r.push("model", Node::str("points = 2\n[topology]"));
        r
    }

    #[test]
    fn text_layout() {
        let expected = "\
command: validate
digest: ab12
axioms:
  P0: pass
  P4:
    verdict: fail
    witness: [{0}, {1}]
rows:
  - a: 1
    b: true
model:
  | points = 2
  | [topology]
";
        assert_eq!(sample().to_text(), expected);
    }

    #[test]
    fn json_keeps_order_and_timestamp_is_optional() {
        let mut r = sample();
        let json = r.to_json();
        assert!(json.find("\"command\"").unwrap() < json.find("\"digest\"").unwrap());
        assert!(json.find("\"digest\"").unwrap() < json.find("\"axioms\"").unwrap());
        assert!(!json.contains("generated_at_unix"));
        r.timestamp = Some(7);
        assert!(r.to_json().contains("\"generated_at_unix\": 7"));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["axioms"]["P4"]["witness"][1], "{1}");
    }
}
