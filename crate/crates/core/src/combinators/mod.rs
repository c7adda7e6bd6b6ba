//! The theory presentation language: `.tpc` syntax, its context and arrow
//! semantics, the compatibility check between them, and flattening.

mod ast;
mod compat;
mod eval;
mod flatten;
mod parser;

pub use ast::{Def, Judgment, NameRef, RenameSpec, TpcTerm};
pub use compat::{check_compatibility, compatibility_reports, CompatibilityReport, Hypothesis, Verdict};
pub use eval::{load, Definition, Diagnostic, Edge, EvalError, Loaded, TheoryEnv, TheorySemantics};
pub use flatten::{flatten, flatten_base, render_theory};
pub use parser::parse_tpc;
