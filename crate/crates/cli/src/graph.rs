//! The theory graph: one node per definition, one arrow per edge from a
//! derived theory to the theory it was built from.

use std::fmt::Write as _;

use serde::Serialize;

use tpc_core::combinators::TheoryEnv;

use tpc_core::kernel::{Expr, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Serialize)]
pub struct EntryExport {
    pub label: String,
    pub classifier: String,
    pub sort: String,
}

#[derive(Debug, Serialize)]
pub struct TheoryExport {
    pub name: String,
    pub entry_count: usize,
    pub entries: Vec<EntryExport>,
}

#[derive(Debug, Serialize)]
pub struct ArrowExport {
    pub source: String,
    pub target: String,
    pub class: String,
    /// One term per entry of the target, in the target's order.
    pub mapping: Vec<Mapped>,
    #[serde(skip)]
    moved: String,
}

#[derive(Debug, Serialize)]
pub struct GraphExport {
    pub theories: Vec<TheoryExport>,
    pub arrows: Vec<ArrowExport>,
}

impl GraphExport {
    pub fn from_env(env: &TheoryEnv) -> Self {
        let mut theories = Vec::new();
        let mut arrows = Vec::new();
        for (name, d) in env.iter() {
            let ctx = &d.sem.context;
            theories.push(TheoryExport {
                name: name.to_string(),
                entry_count: ctx.len(),
                entries: ctx
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| EntryExport {
                        label: e.label.to_string(),
                        classifier: e.classifier.to_string(),
                        sort: ctx.entry_sort(i).to_string(),
                    })
                    .collect(),
            });
            for edge in &d.sem.edges {
                let a = &edge.assignment;
                arrows.push(ArrowExport {
                    source: name.to_string(),
                    target: edge.target.clone(),
                    class: a.classify().name().to_string(),
                    mapping: a.mapping().map(|(l, t)| Mapped { label: l.to_string(), term: t.to_string() }).collect(),
                    moved: moved_pairs(a.mapping()),
                });
            }
        }
        GraphExport { theories, arrows }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph export serializes");
        s.push('\n');
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph theories {\n  rankdir=BT;\n  node [shape=box];\n");
        for t in &self.theories {
            let _ = writeln!(s, "  {} [label={}];", quote(&t.name), quote(&format!("{}\n{} {}", t.name, t.entry_count, if t.entry_count == 1 { "entry" } else { "entries" })));
        }
        for a in &self.arrows {
            let label = if a.moved.is_empty() { a.class.clone() } else { format!("{}\n{}", a.class, a.moved) };
            let _ = writeln!(s, "  {} -> {} [label={}];", quote(&a.source), quote(&a.target), quote(&label));
        }
        s.push_str("}\n");
        s
    }
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            _ => q.push(c),
        }
    }
    q.push('"');
    q
}

/// Non-identity parts of a mapping, as `l |-> t`.
fn moved_pairs<'a>(mapping: impl Iterator<Item = (&'a Label, &'a Expr)>) -> String {
    let mut s = String::new();
    for (l, t) in mapping {
        if *t != Expr::Label(l.clone()) {
            if !s.is_empty() {
                s.push_str(", ");
            }
            let _ = write!(s, "{l} |-> {t}");
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct Mapped {
    pub label: String,
    pub term: String,
}
