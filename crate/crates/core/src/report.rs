//! Deterministic report structure with plain-text and JSON rendering.
//!
//! Derived verdicts carry a citation tag naming the result they rely on,
//! so report-level traceability can be tested mechanically.

use serde::Serialize;

/// Tags for results quoted rather than recomputed, and for the computed
/// statements named after them.
pub const CITE_KRECK_SU: &str = "cite:kreck-su";
pub const CITE_SULLIVAN: &str = "cite:sullivan-arithmetic";
pub const CITE_CARLSON_TOLEDO: &str = "cite:carlson-toledo";
pub const CITE_JOHNSON_SURJ: &str = "cite:johnson-surjectivity";
pub const CITE_RANK_BOUND: &str = "cite:rank-lower-bound";
pub const CITE_DISTORTION: &str = "cite:distortion-vanishing";
pub const CITE_FORMALITY: &str = "cite:formality-degeneration";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub invocation: Vec<String>,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub title: String,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Item {
    KeyValue {
        key: String,
        value: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        cite: Option<&'static str>,
    },
    Table {
        headers: Vec<String>,
        rows: Vec<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        cite: Option<&'static str>,
    },
    Note {
        text: String,
    },
}

impl Report {
    pub fn new(invocation: Vec<String>) -> Self {
        Report {
            tool: "torelli",
            version: env!("CARGO_PKG_VERSION"),
            invocation,
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, title: impl Into<String>) -> &mut Section {
        self.sections.push(Section { title: title.into(), items: Vec::new() });
        self.sections.last_mut().unwrap()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} v{}\n", self.tool, self.version));
        out.push_str(&format!("# invocation: {}\n", self.invocation.join(" ")));
        for section in &self.sections {
            out.push_str(&format!("\n== {} ==\n", section.title));
            for item in &section.items {
                match item {
                    Item::KeyValue { key, value, cite } => {
                        out.push_str(&format!("{key}: {value}"));
                        if let Some(c) = cite {
                            out.push_str(&format!("  [{c}]"));
                        }
                        out.push('\n');
                    }
                    Item::Note { text } => {
                        out.push_str(&format!("note: {text}\n"));
                    }
                    Item::Table { headers, rows, cite } => {
                        let mut widths: Vec<usize> =
                            headers.iter().map(|h| h.len()).collect();
                        for row in rows {
                            for (i, cell) in row.iter().enumerate() {
                                if i < widths.len() {
                                    widths[i] = widths[i].max(cell.len());
                                } else {
                                    widths.push(cell.len());
                                }
                            }
                        }
                        let fmt_row = |cells: &[String]| -> String {
                            cells
                                .iter()
                                .enumerate()
                                .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
                                .collect::<Vec<_>>()
                                .join("  ")
                                .trim_end()
                                .to_string()
                        };
                        out.push_str(&fmt_row(headers));
                        if let Some(c) = cite {
                            out.push_str(&format!("  [{c}]"));
                        }
                        out.push('\n');
                        out.push_str(&format!(
                            "{}\n",
                            "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1))
                        ));
                        for row in rows {
                            out.push_str(&fmt_row(row));
                            out.push('\n');
                        }
                    }
                }
            }
        }
        out
    }
}

impl Section {
    pub fn kv(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.items.push(Item::KeyValue { key: key.into(), value: value.into(), cite: None });
        self
    }

    pub fn kv_cited(
        &mut self,
        key: impl Into<String>,
        value: impl Into<String>,
        cite: &'static str,
    ) -> &mut Self {
        self.items.push(Item::KeyValue { key: key.into(), value: value.into(), cite: Some(cite) });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.items.push(Item::Note { text: text.into() });
        self
    }

    pub fn table(
        &mut self,
        headers: Vec<String>,
        rows: Vec<Vec<String>>,
        cite: Option<&'static str>,
    ) -> &mut Self {
        self.items.push(Item::Table { headers, rows, cite });
        self
    }
}
