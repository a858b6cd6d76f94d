use serde_json::{Map, Value};

/// An ordered list of fields rendered either as indented `key: value` text or
/// as a JSON object with the same key order.
#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn nest(&mut self, key: &str, report: Report) -> &mut Self {
        self.fields.insert(key.to_string(), Value::Object(report.fields));
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("serializable");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        write_map(&mut out, &self.fields, 0);
        out
    }
}

fn write_map(out: &mut String, map: &Map<String, Value>, indent: usize) {
    let pad = "  ".repeat(indent);
    for (k, v) in map {
        match v {
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_map(out, inner, indent + 1);
            }
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) || items.len() > 1 => {
                out.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    match item {
                        Value::Object(inner) => {
                            out.push_str(&format!("{pad}  -\n"));
                            write_map(out, inner, indent + 2);
                        }
                        other => out.push_str(&format!("{pad}  - {}\n", scalar(other))),
                    }
                }
            }
            Value::Array(items) => {
                let item = items.first().map(scalar).unwrap_or_default();
                out.push_str(&format!("{pad}{k}: [{item}]\n"));
            }
            other => out.push_str(&format!("{pad}{k}: {}\n", scalar(other))),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}
