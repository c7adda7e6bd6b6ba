use super::eval::{EvalError, TheoryEnv};
use crate::context::Context;
use crate::kernel::Sort;

/// `Name := Theory { ... }` with one judgment per line.
pub fn render_theory(name: &str, ctx: &Context) -> String {
    if ctx.is_empty() {
        return format!("{name} := Theory {{ }}\n");
    }
    let mut out = format!("{name} := Theory {{\n");
    let n = ctx.len();
    for (i, e) in ctx.entries().iter().enumerate() {
        out.push_str("  ");
        if ctx.entry_sort(i) == Sort::Prop {
            out.push_str(&format!("axiom {}: {}", e.label, e.classifier));
        } else {
            out.push_str(&format!("{}:{}", e.label, e.classifier));
        }
        out.push_str(if i + 1 < n { ";\n" } else { "\n" });
    }
    out.push_str("}\n");
    out
}

/// The flat presentation of a defined theory: its full context.
pub fn flatten(env: &TheoryEnv, name: &str) -> Result<String, EvalError> {
    let d = env.get(name).ok_or_else(|| EvalError::UnknownName(name.to_string()))?;
    Ok(render_theory(name, &d.sem.context))
}

/// The base a theory extends: the codomain of its arrow semantics.
pub fn flatten_base(env: &TheoryEnv, name: &str) -> Result<String, EvalError> {
    let d = env.get(name).ok_or_else(|| EvalError::UnknownName(name.to_string()))?;
    let arrow = d.sem.arrow.as_ref().map_err(|e| e.clone())?;
    Ok(render_theory(name, arrow.cod()))
}
