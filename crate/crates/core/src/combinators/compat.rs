use std::fmt;

use super::ast::TpcTerm;
use super::eval::{EvalError, TheoryEnv};
use crate::category::meet_context;
use crate::context::AssignmentClass;

/// Outcome of comparing the two semantics of a definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Hypotheses hold and the semantics agree.
    Compatible,
    /// Some hypothesis fails, yet the semantics agree anyway.
    Benign,
    /// The context differs from the domain of the arrow.
    Divergent,
    /// The arrow semantics is undefined.
    ArrowUndefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Compatible => "compatible",
            Verdict::Benign => "benign",
            Verdict::Divergent => "divergent",
            Verdict::ArrowUndefined => "arrow-undefined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub description: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub name: String,
    pub form: &'static str,
    pub hypotheses: Vec<Hypothesis>,
    /// `None` when the arrow semantics is undefined.
    pub semantics_agree: Option<bool>,
    pub verdict: Verdict,
    pub arrow_error: Option<EvalError>,
}

impl CompatibilityReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    /// Whether the report has anything to warn about.
    pub fn flagged(&self) -> bool {
        self.verdict != Verdict::Compatible
    }
}

impl fmt::Display for CompatibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.name, self.form, self.verdict)?;
        for h in &self.hypotheses {
            write!(f, "\n  [{}] {}", if h.holds { "ok" } else { "fails" }, h.description)?;
        }
        if let Some(e) = &self.arrow_error {
            write!(f, "\n  arrow semantics: {e}")?;
        }
        Ok(())
    }
}

fn pure(class: AssignmentClass) -> bool {
    matches!(class, AssignmentClass::Extension | AssignmentClass::Diagonal)
}

/// Check the conditions under which the context semantics of `name` is the
/// domain of its arrow semantics, and whether they agree.
pub fn check_compatibility(env: &TheoryEnv, name: &str) -> Option<CompatibilityReport> {
    let d = env.get(name)?;
    let sem = &d.sem;
    let arrow = |n: &str| env.get(n).and_then(|d| d.sem.arrow.as_ref().ok());
    let context = |n: &str| env.get(n).map(|d| d.sem.context.clone());
    let mut hypotheses = Vec::new();
    match &d.def.term {
        TpcTerm::Seq { first, second } => {
            let holds = match (arrow(&first.name), arrow(&second.name)) {
                (Some(a), Some(b)) => b.cod() == a.dom(),
                _ => false,
            };
            hypotheses.push(Hypothesis {
                description: format!("`{}` extends the theory `{}` starts from", second.name, first.name),
                holds,
            });
        }
        TpcTerm::Combine {
            left,
            left_ren,
            right,
            right_ren,
            over,
        } => {
            let (base, base_name) = match over {
                Some(o) => (context(&o.name), format!("`{}`", o.name)),
                None => match (context(&left.name), context(&right.name)) {
                    (Some(a), Some(b)) => (Some(std::sync::Arc::new(meet_context(&a, &b))), "the meet".into()),
                    _ => (None, "the meet".into()),
                },
            };
            let (a1, a2) = (arrow(&left.name), arrow(&right.name));
            let cods_agree = match (a1, a2, &base) {
                (Some(a1), Some(a2), Some(b)) => a1.cod() == a2.cod() && a1.cod() == b,
                _ => false,
            };
            hypotheses.push(Hypothesis {
                description: format!("both arrows extend {base_name}"),
                holds: cods_agree,
            });
            for (r, ren, a) in [(left, left_ren, a1), (right, right_ren, a2)] {
                hypotheses.push(Hypothesis {
                    description: format!("`{}` is used without renaming", r.name),
                    holds: ren.is_empty() && a.is_some_and(|a| pure(a.classify())),
                });
            }
        }
        _ => {}
    }
    let semantics_agree = sem.arrow.as_ref().ok().map(|a| a.dom() == &sem.context);
    let all_hold = hypotheses.iter().all(|h| h.holds);
    let verdict = match semantics_agree {
        None => Verdict::ArrowUndefined,
        Some(false) => Verdict::Divergent,
        Some(true) if all_hold => Verdict::Compatible,
        Some(true) => Verdict::Benign,
    };
    Some(CompatibilityReport {
        name: name.to_string(),
        form: d.def.term.form(),
        hypotheses,
        semantics_agree,
        verdict,
        arrow_error: sem.arrow.as_ref().err().cloned(),
    })
}

/// Reports for every definition, in order.
pub fn compatibility_reports(env: &TheoryEnv) -> Vec<CompatibilityReport> {
    env.names().filter_map(|n| check_compatibility(env, n)).collect()
}
