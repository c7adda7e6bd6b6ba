//! The fixed background type theory: expressions, substitution, α-equivalence
//! and the judgement checker that context well-formedness rests on.

mod check;
mod expr;
mod print;
pub(crate) mod syntax;

pub use check::{check_classifier, check_term, infer, sort_of, KernelError, Signature, Sort};
pub use expr::{alpha_equal, BinderName, Expr, Label, Substitution};
pub use syntax::{parse_expr, SyntaxError};
