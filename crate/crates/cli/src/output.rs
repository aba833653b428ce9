use std::fmt::Write as _;

use birational_core::Complex64;
use serde_json::{json, Map, Value};

use crate::args::Format;

/// What a command produced, in every format it can be rendered to.
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Falls back to the text inside a verbatim block.
    pub tex: Option<String>,
    /// False when a check failed.
    pub passed: bool,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            tex: None,
            passed: true,
        }
    }

    pub fn with_tex(mut self, tex: String) -> Self {
        self.tex = Some(tex);
        self
    }

    pub fn passed(mut self, ok: bool) -> Self {
        self.passed = ok;
        self
    }
}

/// The resolved configuration of one invocation, in insertion order.
pub struct Header {
    pub command: String,
    pub config: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            config: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.into(), value.to_string()));
    }
}

pub fn render(format: Format, header: &Header, out: &Output) -> String {
    match format {
        Format::Text => {
            let mut s = format!("# birat {}\n", header.command);
            for (k, v) in &header.config {
                let _ = writeln!(s, "# {k}: {v}");
            }
            s.push_str(&out.text);
            s
        }
        Format::Structured => {
            let config: Map<String, Value> = header
                .config
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect();
            let doc = json!({
                "command": header.command,
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "passed": out.passed,
                "result": out.json,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Tex => {
            let mut s = format!("% birat {}\n", header.command);
            for (k, v) in &header.config {
                let _ = writeln!(s, "% {k}: {v}");
            }
            match &out.tex {
                Some(t) => s.push_str(t),
                None => {
                    s.push_str("\\begin{verbatim}\n");
                    s.push_str(&out.text);
                    s.push_str("\\end{verbatim}\n");
                }
            }
            s
        }
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complex_text(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}

/// `\begin{align*} … \end{align*}` with one `lhs &= rhs` row per pair.
pub fn align(rows: &[(String, String)]) -> String {
    let body: Vec<String> = rows.iter().map(|(l, r)| format!("  {l} &= {r}")).collect();
    format!("\\begin{{align*}}\n{}\n\\end{{align*}}\n", body.join(" \\\\\n"))
}
