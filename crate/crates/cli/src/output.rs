//! Result items and their text, LaTeX and JSON renderings.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ncgeom::calculus::ModVec;
use ncgeom::qalgebra::{render_element, render_element_latex};
use ncgeom::report::Report;
use ncgeom::{AlgElement, QValue};

use crate::config::{Format, QMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A computed value.
    Ok,
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Element(AlgElement),
    /// A module element with its basis symbol (`E` or `e`).
    Vector(ModVec, &'static str),
    Text(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub name: String,
    pub latex_name: String,
    pub value: Value,
    pub status: Status,
}

impl Item {
    pub fn element(name: impl Into<String>, latex_name: impl Into<String>, x: AlgElement) -> Self {
        Item {
            name: name.into(),
            latex_name: latex_name.into(),
            value: Value::Element(x),
            status: Status::Ok,
        }
    }

    pub fn vector(name: impl Into<String>, latex_name: impl Into<String>, m: ModVec, basis: &'static str) -> Self {
        Item {
            name: name.into(),
            latex_name: latex_name.into(),
            value: Value::Vector(m, basis),
            status: Status::Ok,
        }
    }

    pub fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        let name = name.into();
        let detail = detail.into();
        Item {
            latex_name: format!("\\text{{{name}}}"),
            name,
            value: Value::Text(if passed && detail.is_empty() { "0".into() } else { detail }),
            status: if passed { Status::Pass } else { Status::Fail },
        }
    }

    pub fn error(name: impl Into<String>, e: impl std::fmt::Display) -> Self {
        let name = name.into();
        Item {
            latex_name: format!("\\text{{{name}}}"),
            name,
            value: Value::Text(e.to_string()),
            status: Status::Error,
        }
    }

    pub fn from_report(prefix: &str, report: &Report) -> Vec<Item> {
        report
            .checks()
            .iter()
            .map(|c| Item::check(format!("{prefix}{}", c.name), c.passed, c.detail.clone()))
            .collect()
    }

    fn specialized(&self, q: QMode) -> Item {
        if q == QMode::Formal {
            return self.clone();
        }
        let spec = |x: &AlgElement| x.specialize_q(&QValue::One);
        let value = match &self.value {
            Value::Element(x) => spec(x).map(Value::Element),
            Value::Vector(m, b) => m.map(spec).map(|m| Value::Vector(m, b)),
            Value::Text(t) => Ok(Value::Text(t.clone())),
        };
        match value {
            Ok(value) => Item { value, ..self.clone() },
            Err(e) => Item::error(self.name.clone(), e),
        }
    }

    pub fn text(&self) -> String {
        match &self.value {
            Value::Element(x) => render_element(x),
            Value::Vector(m, b) => m.render(b),
            Value::Text(t) => t.clone(),
        }
    }

    pub fn latex(&self) -> String {
        match &self.value {
            Value::Element(x) => render_element_latex(x),
            Value::Vector(m, b) => m.render_latex(b),
            Value::Text(t) => format!("\\text{{{t}}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub command: String,
    pub config: String,
    pub digest: String,
    pub items: Vec<Item>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonResult {
    pub name: String,
    pub expression: String,
    pub status: Status,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonReport {
    pub command: String,
    #[serde(rename = "inputs-digest")]
    pub inputs_digest: String,
    pub results: Vec<JsonResult>,
}

/// SHA-256 over the command line and the configuration text.
pub fn digest(command: &str, config_text: &str) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0u8]);
    h.update(config_text.as_bytes());
    hex::encode(h.finalize())
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| matches!(i.status, Status::Ok | Status::Pass))
    }

    pub fn render(&self, format: Format, q: QMode) -> String {
        let items: Vec<Item> = self.items.iter().map(|i| i.specialized(q)).collect();
        match format {
            Format::Text => {
                let mut out = format!("# {} ({})\n", self.command, self.config);
                for i in &items {
                    let line = match i.status {
                        Status::Ok => format!("{} = {}", i.name, i.text()),
                        Status::Pass => format!("PASS {}", i.name),
                        Status::Fail => format!("FAIL {}: {}", i.name, i.text()),
                        Status::Error => format!("ERROR {}: {}", i.name, i.text()),
                    };
                    out.push_str(&line);
                    out.push('\n');
                }
                out
            }
            Format::Latex => {
                let mut out = String::from("\\begin{align*}\n");
                let n = items.len();
                for (k, i) in items.iter().enumerate() {
                    let sep = if k + 1 < n { "\\\\" } else { "" };
                    let line = match i.status {
                        Status::Ok => format!("{} &= {}{sep}\n", i.latex_name, i.latex()),
                        s => format!("{} &: \\text{{{}}}{sep}\n", i.latex_name, format!("{s:?}").to_lowercase()),
                    };
                    out.push_str(&line);
                }
                out.push_str("\\end{align*}\n");
                out
            }
            Format::Json => {
                let report = JsonReport {
                    command: self.command.clone(),
                    inputs_digest: self.digest.clone(),
                    results: items
                        .iter()
                        .map(|i| JsonResult {
                            name: i.name.clone(),
                            expression: i.text(),
                            status: i.status,
                        })
                        .collect(),
                };
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncgeom::qalgebra::parse_element;
    use ncgeom::AlgebraSpec;

    fn outcome() -> Outcome {
        let x = parse_element("q*V*U", AlgebraSpec::torus()).unwrap();
        Outcome {
            command: "demo".into(),
            config: "inline".into(),
            digest: digest("demo", ""),
            items: vec![Item::element("x", "x", x), Item::check("law", false, "residual")],
        }
    }

    #[test]
    fn text_and_specialization() {
        let o = outcome();
        assert!(!o.passed());
        assert_eq!(o.render(Format::Text, QMode::Formal), "# demo (inline)\nx = q^2*U*V\nFAIL law: residual\n");
        assert!(o.render(Format::Text, QMode::One).contains("x = U*V\n"));
    }

    #[test]
    fn json_schema() {
        let v: serde_json::Value = serde_json::from_str(&outcome().render(Format::Json, QMode::Formal)).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["inputs-digest"].as_str().unwrap().len(), 64);
        assert_eq!(v["results"][1]["status"], "fail");
    }

    #[test]
    fn digest_separates_command_from_config() {
        assert_ne!(digest("ab", "c"), digest("a", "bc"));
    }
}
