//! Theory presentation combinators.
//!
//! Theories are contexts of a small dependent type theory, arrows between them
//! are assignments, and the combinator language (`extend`, `combine`,
//! renaming, sequencing) is given two semantics: a context, and a general
//! extension whose domain is that context. `combine` is computed as a
//! pullback in the category of nominal assignments.

pub mod category;
pub mod combinators;
pub mod context;
pub mod kernel;
pub mod span;

pub use span::{Pos, Span};
