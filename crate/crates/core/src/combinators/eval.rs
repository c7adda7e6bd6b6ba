#![allow(clippy::result_large_err)]

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use super::ast::{Def, Judgment, NameRef, RenameSpec, TpcTerm};
use super::parser::parse_tpc;
use crate::category::{cartesian_lift, is_pullback_square, meet_context, CategoryError, GeneralExtension};
use crate::context::{parse_renaming_spec, Assignment, Context, ContextError, Entry, LabelPermutation};
use crate::kernel::{Label, Sort, SyntaxError};
use crate::span::Span;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("syntax error: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("unknown theory `{0}`")]
    UnknownName(String),
    #[error("theory `{0}` is already defined")]
    DuplicateDefinition(String),
    #[error("judgment `{label}` does not extend the theory: {cause}")]
    IllFormedExtension { label: Label, cause: ContextError },
    #[error("`{0}` is declared as an axiom but is not a proposition")]
    AxiomNotProposition(Label),
    #[error("invalid renaming: {0}")]
    InvalidRenaming(ContextError),
    #[error("renaming moves `{0}`, which belongs to the common base")]
    RenamingDisturbsBase(Label),
    #[error("`{base}` is not a sub-theory of `{theory}`")]
    BaseNotShared { base: String, theory: String },
    #[error("`{0}` is introduced by both combined theories outside their common base")]
    CombineClash(Label),
    #[error("combine square is not a pullback: {0}")]
    NotAPullback(String),
    #[error("cannot compose: {0}")]
    CompositionMismatch(String),
    #[error("combined arrows have different bases: {0}")]
    CodomainMismatch(String),
    #[error("the two composites of the combine square differ")]
    CombineBranchesDisagree,
    #[error("the arrow semantics of `{0}` is undefined")]
    ArrowUndefined(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

impl From<ContextError> for EvalError {
    fn from(e: ContextError) -> Self {
        EvalError::Category(e.into())
    }
}

/// An error located in a source file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub definition: Option<String>,
    pub error: EvalError,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.definition {
            Some(d) => write!(f, "{}: in `{d}`: {}", self.span, self.error),
            None => write!(f, "{}: {}", self.span, self.error),
        }
    }
}

fn at(span: Span, error: impl Into<EvalError>) -> Diagnostic {
    Diagnostic {
        span,
        definition: None,
        error: error.into(),
    }
}

/// An arrow from a defined theory to one it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub target: String,
    pub assignment: Assignment,
}

/// Both denotations of a definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheorySemantics {
    /// The context semantics.
    pub context: Arc<Context>,
    /// The arrow semantics; partial, so kept even when undefined.
    pub arrow: Result<GeneralExtension, EvalError>,
    pub edges: Vec<Edge>,
}

impl TheorySemantics {
    /// Whether the context equals the domain of the arrow.
    pub fn is_compatible(&self) -> bool {
        self.arrow.as_ref().is_ok_and(|a| a.dom() == &self.context)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub def: Def,
    pub sem: TheorySemantics,
}

/// Definitions in order; each may only refer to earlier ones.
#[derive(Clone, Debug, Default)]
pub struct TheoryEnv {
    defs: IndexMap<String, Definition>,
}

/// Result of loading a whole file.
#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub env: TheoryEnv,
    pub diagnostics: Vec<Diagnostic>,
    /// Definitions not evaluated because something they use failed.
    pub skipped: Vec<String>,
}

/// Parse and evaluate a source text, continuing past failed definitions.
pub fn load(src: &str) -> Loaded {
    let mut out = Loaded::default();
    let defs = match parse_tpc(src) {
        Ok(d) => d,
        Err(e) => {
            out.diagnostics.push(at(e.span, e));
            return out;
        }
    };
    out.env.extend_with(defs, &mut out.diagnostics, &mut out.skipped);
    out
}

struct CombineParts<'a> {
    left: &'a NameRef,
    left_ren: &'a RenameSpec,
    right: &'a NameRef,
    right_ren: &'a RenameSpec,
    over: Option<&'a NameRef>,
}

impl TheoryEnv {
    pub fn new() -> Self {
        TheoryEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.get(name)
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Definition)> + '_ {
        self.defs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.defs.keys().map(String::as_str)
    }

    /// Evaluate definitions in order, collecting errors.
    pub fn extend_with(&mut self, defs: Vec<Def>, diagnostics: &mut Vec<Diagnostic>, skipped: &mut Vec<String>) {
        let mut failed: BTreeSet<String> = BTreeSet::new();
        for def in defs {
            if def.term.references().iter().any(|r| failed.contains(&r.name)) {
                skipped.push(def.name.clone());
                failed.insert(def.name);
                continue;
            }
            let name = def.name.clone();
            if let Err(d) = self.define(def) {
                diagnostics.push(d);
                failed.insert(name);
            }
        }
    }

    /// Evaluate one definition and add it.
    pub fn define(&mut self, def: Def) -> Result<&Definition, Diagnostic> {
        let with_name = |mut d: Diagnostic| {
            d.definition = Some(def.name.clone());
            d
        };
        if self.defs.contains_key(&def.name) {
            return Err(with_name(at(def.name_span, EvalError::DuplicateDefinition(def.name.clone()))));
        }
        let sem = self.evaluate(&def.term, def.span).map_err(with_name)?;
        let name = def.name.clone();
        self.defs.insert(name.clone(), Definition { def, sem });
        Ok(&self.defs[&name])
    }

    /// Both semantics of a term over the current environment.
    pub fn evaluate(&self, term: &TpcTerm, span: Span) -> Result<TheorySemantics, Diagnostic> {
        let (context, edges) = self.eval_c_with_edges(term, span)?;
        let arrow = self.eval_e_given(term, &context);
        Ok(TheorySemantics { context, arrow, edges })
    }

    /// The context semantics.
    pub fn eval_c(&self, term: &TpcTerm, span: Span) -> Result<Arc<Context>, Diagnostic> {
        self.eval_c_with_edges(term, span).map(|(c, _)| c)
    }

    /// The arrow semantics. Errors from the context semantics come first.
    pub fn eval_e(&self, term: &TpcTerm, span: Span) -> Result<GeneralExtension, Diagnostic> {
        let context = self.eval_c(term, span)?;
        self.eval_e_given(term, &context).map_err(|e| at(span, e))
    }

    fn lookup(&self, r: &NameRef) -> Result<&Definition, Diagnostic> {
        self.defs
            .get(&r.name)
            .ok_or_else(|| at(r.span, EvalError::UnknownName(r.name.clone())))
    }

    fn context_of(&self, r: &NameRef) -> Result<Arc<Context>, Diagnostic> {
        Ok(self.lookup(r)?.sem.context.clone())
    }

    fn arrow_of(&self, r: &NameRef) -> Result<GeneralExtension, EvalError> {
        let d = self.defs.get(&r.name).ok_or_else(|| EvalError::UnknownName(r.name.clone()))?;
        d.sem.arrow.clone().map_err(|_| EvalError::ArrowUndefined(r.name.clone()))
    }

    fn eval_c_with_edges(&self, term: &TpcTerm, span: Span) -> Result<(Arc<Context>, Vec<Edge>), Diagnostic> {
        let edge = |target: &NameRef, assignment: Assignment| Edge {
            target: target.name.clone(),
            assignment,
        };
        match term {
            TpcTerm::Empty => Ok((Arc::new(Context::empty()), Vec::new())),
            TpcTerm::Theory { body } => Ok((Arc::new(assemble(&Context::empty(), body, span)?), Vec::new())),
            TpcTerm::Extend { base, body } => {
                let c = self.context_of(base)?;
                let ctx = Arc::new(assemble(&c, body, span)?);
                let delta = Assignment::diagonal(ctx.clone(), c).map_err(|e| at(span, CategoryError::from(e)))?;
                Ok((ctx, vec![edge(base, delta)]))
            }
            TpcTerm::Rename { base, ren } => {
                let c = self.context_of(base)?;
                let pi = renaming(ren, &c)?;
                let iso = Assignment::renaming(&pi, c);
                Ok((iso.source().clone(), vec![edge(base, iso)]))
            }
            TpcTerm::Seq { first, second } => {
                self.lookup(first)?;
                let c = self.context_of(second)?;
                Ok((c.clone(), vec![edge(second, Assignment::identity(c))]))
            }
            TpcTerm::Combine {
                left,
                left_ren,
                right,
                right_ren,
                over,
            } => self.combine_c(
                CombineParts {
                    left,
                    left_ren,
                    right,
                    right_ren,
                    over: over.as_ref(),
                },
                span,
            ),
        }
    }

    fn combine_c(&self, parts: CombineParts<'_>, span: Span) -> Result<(Arc<Context>, Vec<Edge>), Diagnostic> {
        let c1 = self.context_of(parts.left)?;
        let c2 = self.context_of(parts.right)?;
        let base = match parts.over {
            Some(o) => {
                let t = self.context_of(o)?;
                for (r, c) in [(parts.left, &c1), (parts.right, &c2)] {
                    if !t.is_sub_context_of(c) {
                        return Err(at(
                            o.span,
                            EvalError::BaseNotShared {
                                base: o.name.clone(),
                                theory: r.name.clone(),
                            },
                        ));
                    }
                }
                t
            }
            None => Arc::new(meet_context(&c1, &c2)),
        };
        let p1 = branch_renaming(parts.left_ren, &c1, &base)?;
        let p2 = branch_renaming(parts.right_ren, &c2, &base)?;
        let q1 = Arc::new(c1.permute(&p1));
        let q2 = Arc::new(c2.permute(&p2));
        for l in q2.labels() {
            if !base.contains(l) && q1.contains(l) {
                return Err(at(parts.right.span, EvalError::CombineClash(l.clone())));
            }
        }
        let category = |e: CategoryError| at(span, e);
        let u = Assignment::diagonal(q1.clone(), base.clone()).map_err(|e| category(e.into()))?;
        let a = GeneralExtension::extension(q2.clone(), base.clone()).map_err(category)?;
        let lift = cartesian_lift(&u, &a).map_err(category)?;
        if !is_pullback_square(&lift.square()) {
            return Err(at(span, EvalError::NotAPullback(format!("apex {}", lift.apex))));
        }
        let leg = |pi: &LabelPermutation, c: &Arc<Context>, via: &Assignment| {
            Assignment::renaming(pi, c.clone())
                .compose(via)
                .map_err(|e| category(e.into()))
        };
        let mut edges = vec![
            Edge {
                target: parts.left.name.clone(),
                assignment: leg(&p1, &c1, lift.lifted.assignment())?,
            },
            Edge {
                target: parts.right.name.clone(),
                assignment: leg(&p2, &c2, &lift.top)?,
            },
        ];
        if let Some(o) = parts.over {
            edges.push(Edge {
                target: o.name.clone(),
                assignment: Assignment::diagonal(lift.apex.clone(), base).map_err(|e| category(e.into()))?,
            });
        }
        Ok((lift.apex, edges))
    }

    fn eval_e_given(&self, term: &TpcTerm, context: &Arc<Context>) -> Result<GeneralExtension, EvalError> {
        match term {
            TpcTerm::Empty => Ok(GeneralExtension::identity(context.clone())),
            TpcTerm::Theory { .. } => Ok(GeneralExtension::to_empty(context.clone())),
            TpcTerm::Extend { base, .. } => {
                let c = self.context_of(base).map_err(|d| d.error)?;
                Ok(GeneralExtension::extension(context.clone(), c)?)
            }
            TpcTerm::Rename { base, ren } => {
                let c = self.context_of(base).map_err(|d| d.error)?;
                let pi = renaming(ren, &c).map_err(|d| d.error)?;
                Ok(self.arrow_of(base)?.permute(&pi))
            }
            TpcTerm::Seq { first, second } => {
                let a = self.arrow_of(first)?;
                let b = self.arrow_of(second)?;
                if b.cod() != a.dom() {
                    return Err(EvalError::CompositionMismatch(format!(
                        "the base of `{}` is not the theory `{}` extends",
                        second.name, first.name
                    )));
                }
                Ok(b.then(&a)?)
            }
            TpcTerm::Combine {
                left,
                left_ren,
                right,
                right_ren,
                over,
            } => self.combine_e(CombineParts {
                left,
                left_ren,
                right,
                right_ren,
                over: over.as_ref(),
            }),
        }
    }

    fn combine_e(&self, parts: CombineParts<'_>) -> Result<GeneralExtension, EvalError> {
        let e1 = self.arrow_of(parts.left)?;
        let e2 = self.arrow_of(parts.right)?;
        if e1.cod() != e2.cod() {
            return Err(EvalError::CodomainMismatch(format!(
                "`{}` extends {} but `{}` extends {}",
                parts.left.name,
                e1.cod(),
                parts.right.name,
                e2.cod()
            )));
        }
        if let Some(o) = parts.over {
            let c = self.context_of(o).map_err(|d| d.error)?;
            if *e1.cod() != c {
                return Err(EvalError::CodomainMismatch(format!(
                    "the combined arrows extend {}, not `{}`",
                    e1.cod(),
                    o.name
                )));
            }
        }
        let leg = |r: &NameRef, ren: &RenameSpec, e: &GeneralExtension| -> Result<Assignment, EvalError> {
            let c = self.context_of(r).map_err(|d| d.error)?;
            let pi = branch_renaming(ren, &c, e.cod()).map_err(|d| d.error)?;
            Ok(e.compose(&Assignment::renaming(&pi, e.dom().clone()))?)
        };
        let w1 = leg(parts.left, parts.left_ren, &e1)?;
        let w2 = GeneralExtension::try_from(leg(parts.right, parts.right_ren, &e2)?)?;
        let lift = cartesian_lift(&w1, &w2)?;
        let via_left = w1.compose(&lift.lifted)?;
        let via_right = w2.compose(&lift.top)?;
        if via_left != via_right {
            return Err(EvalError::CombineBranchesDisagree);
        }
        if !is_pullback_square(&lift.square()) {
            return Err(EvalError::NotAPullback(format!("apex {}", lift.apex)));
        }
        Ok(GeneralExtension::try_from(via_left)?)
    }
}

fn renaming(ren: &RenameSpec, ctx: &Context) -> Result<LabelPermutation, Diagnostic> {
    parse_renaming_spec(&ren.pairs, ctx).map_err(|e| at(ren.span, EvalError::InvalidRenaming(e)))
}

/// A branch renaming, which must fix every label of the base.
fn branch_renaming(ren: &RenameSpec, ctx: &Context, base: &Context) -> Result<LabelPermutation, Diagnostic> {
    let pi = renaming(ren, ctx)?;
    if let Some(l) = base.labels().find(|l| !pi.fixes(l)) {
        return Err(at(ren.span, EvalError::RenamingDisturbsBase(l.clone())));
    }
    Ok(pi)
}

/// `base ⨟ ⟨body⟩`, reporting the first bad judgment at its own span.
fn assemble(base: &Context, body: &[Judgment], span: Span) -> Result<Context, Diagnostic> {
    let entries = body.iter().map(|j| Entry::new(j.label.clone(), j.classifier.clone())).collect();
    let ctx = base.extend(entries).map_err(|e| {
        let index = match &e {
            ContextError::DuplicateLabel { index, .. } | ContextError::IllFormedEntry { index, .. } => Some(*index),
            _ => None,
        };
        let j = index.and_then(|i| i.checked_sub(base.len())).and_then(|i| body.get(i));
        match j {
            Some(j) => at(
                j.span,
                EvalError::IllFormedExtension {
                    label: j.label.clone(),
                    cause: e,
                },
            ),
            None => at(span, CategoryError::from(e)),
        }
    })?;
    for (i, j) in body.iter().enumerate() {
        if j.axiom && ctx.entry_sort(base.len() + i) != Sort::Prop {
            return Err(at(j.span, EvalError::AxiomNotProposition(j.label.clone())));
        }
    }
    Ok(ctx)
}
