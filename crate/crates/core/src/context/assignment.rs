use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{Context, ContextError, LabelPermutation};
use crate::kernel::{check_term, Expr, Label, Substitution};

/// An arrow `Γ → Δ`: one term over `Γ` for every label of `Δ`, in `Δ`'s
/// order, such that each term has the target classifier instantiated by the
/// earlier terms.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    source: Arc<Context>,
    target: Arc<Context>,
    terms: Vec<Expr>,
}

/// Most specific class of an assignment. Inclusions:
/// `Diagonal ⊆ Extension ⊆ GeneralExtension ⊆ Nominal ⊆ General` and
/// `Renaming ⊆ GeneralExtension`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AssignmentClass {
    General,
    Nominal,
    GeneralExtension,
    Extension,
    Renaming,
    Diagonal,
}

impl AssignmentClass {
    pub fn is_general_extension(self) -> bool {
        !matches!(self, AssignmentClass::General | AssignmentClass::Nominal)
    }

    pub fn name(self) -> &'static str {
        match self {
            AssignmentClass::General => "general",
            AssignmentClass::Nominal => "nominal",
            AssignmentClass::GeneralExtension => "general-extension",
            AssignmentClass::Extension => "extension",
            AssignmentClass::Renaming => "renaming",
            AssignmentClass::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for AssignmentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} : {:?} → {:?}", self.source, self.target)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (y, t)) in self.mapping().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{y} |-> {t}")?;
        }
        f.write_str("]")
    }
}

fn check_terms(source: &Context, target: &Context, terms: &[Expr]) -> Result<(), ContextError> {
    let mut subst = Substitution::new();
    for (entry, t) in target.entries().iter().zip(terms) {
        let expected = entry.classifier.substitute(&subst);
        check_term(source, t, &expected).map_err(|cause| ContextError::TypeMismatch {
            label: entry.label.clone(),
            cause,
        })?;
        subst.insert(entry.label.clone(), t.clone());
    }
    Ok(())
}

impl Assignment {
    /// Validate a raw mapping from target labels to terms over `source`.
    pub fn new(
        source: Arc<Context>,
        target: Arc<Context>,
        mapping: Vec<(Label, Expr)>,
    ) -> Result<Self, ContextError> {
        let mut by_label: HashMap<Label, Expr> = HashMap::with_capacity(mapping.len());
        for (y, t) in mapping {
            if !target.contains(&y) {
                return Err(ContextError::ExtraTarget(y));
            }
            if by_label.insert(y.clone(), t).is_some() {
                return Err(ContextError::ContextMismatch(format!("`{y}` is assigned twice")));
            }
        }
        let mut terms = Vec::with_capacity(target.len());
        for y in target.labels() {
            match by_label.remove(y) {
                Some(t) => terms.push(t),
                None => return Err(ContextError::MissingTarget(y.clone())),
            }
        }
        check_terms(&source, &target, &terms)?;
        Ok(Assignment { source, target, terms })
    }

    /// A nominal assignment given by one source label per target entry.
    pub fn nominal(source: Arc<Context>, target: Arc<Context>, labels: &[Label]) -> Result<Self, ContextError> {
        if labels.len() != target.len() {
            return Err(ContextError::ContextMismatch(format!(
                "{} labels given for a target of {} entries",
                labels.len(),
                target.len()
            )));
        }
        let mapping = target
            .labels()
            .cloned()
            .zip(labels.iter().map(|l| Expr::Label(l.clone())))
            .collect();
        Assignment::new(source, target, mapping)
    }


    pub fn identity(ctx: Arc<Context>) -> Self {
        let terms = ctx.labels().map(|l| Expr::Label(l.clone())).collect();
        Assignment {
            source: ctx.clone(),
            target: ctx,
            terms,
        }
    }

    /// `δ_target : source → target`, sending each label to itself.
    pub fn diagonal(source: Arc<Context>, target: Arc<Context>) -> Result<Self, ContextError> {
        let terms: Vec<Expr> = target.labels().map(|l| Expr::Label(l.clone())).collect();
        check_terms(&source, &target, &terms)?;
        Ok(Assignment { source, target, terms })
    }

    /// `!_Γ : Γ → ⟨⟩`.
    pub fn to_empty(ctx: Arc<Context>) -> Self {
        Assignment {
            source: ctx,
            target: Arc::new(Context::empty()),
            terms: Vec::new(),
        }
    }

    /// `I_π(Γ) : π·Γ → Γ`, sending `x` to `π(x)`.
    pub fn renaming(pi: &LabelPermutation, ctx: Arc<Context>) -> Self {
        let source = Arc::new(ctx.permute(pi));
        let terms = ctx.labels().map(|l| Expr::Label(pi.apply(l))).collect();
        Assignment {
            source,
            target: ctx,
            terms,
        }
    }

    pub fn source(&self) -> &Arc<Context> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Context> {
        &self.target
    }

    pub fn terms(&self) -> &[Expr] {
        &self.terms
    }

    pub fn mapping(&self) -> impl Iterator<Item = (&Label, &Expr)> + '_ {
        self.target.labels().zip(&self.terms)
    }

    pub fn term_for(&self, label: &Label) -> Option<&Expr> {
        self.target.position(label).map(|i| &self.terms[i])
    }

    pub fn substitution(&self) -> Substitution {
        self.mapping().map(|(y, t)| (y.clone(), t.clone())).collect()
    }

    /// Re-run the typing conditions.
    pub fn validate(&self) -> Result<(), ContextError> {
        if self.terms.len() != self.target.len() {
            return Err(ContextError::ContextMismatch("term count differs from target".into()));
        }
        check_terms(&self.source, &self.target, &self.terms)
    }

    /// `self ∘ f`: defined when `f`'s target is `self`'s source.
    pub fn compose(&self, f: &Assignment) -> Result<Assignment, ContextError> {
        if *f.target != *self.source {
            return Err(ContextError::ContextMismatch(format!(
                "cannot compose: {} is not {}",
                f.target, self.source
            )));
        }
        let subst = f.substitution();
        let terms = self.terms.iter().map(|t| t.substitute(&subst)).collect();
        Ok(Assignment {
            source: f.source.clone(),
            target: self.target.clone(),
            terms,
        })
    }

    /// `π · f : π·Γ → π·Δ`.
    pub fn permute(&self, pi: &LabelPermutation) -> Assignment {
        Assignment {
            source: Arc::new(self.source.permute(pi)),
            target: Arc::new(self.target.permute(pi)),
            terms: self.terms.iter().map(|t| pi.act(t)).collect(),
        }
    }

    pub fn is_nominal(&self) -> bool {
        self.terms.iter().all(|t| matches!(t, Expr::Label(_)))
    }

    /// For nominal assignments, the position in the source of each term.
    pub fn indexing(&self) -> Option<Vec<usize>> {
        self.terms
            .iter()
            .map(|t| t.as_label().and_then(|l| self.source.position(l)))
            .collect()
    }

    /// Source labels used by a nominal assignment, in target order.
    pub fn source_labels(&self) -> Option<Vec<&Label>> {
        self.terms.iter().map(|t| t.as_label()).collect()
    }

    pub fn is_general_extension(&self) -> bool {
        match self.source_labels() {
            Some(ls) => {
                let distinct: BTreeSet<&Label> = ls.iter().copied().collect();
                distinct.len() == ls.len()
            }
            None => false,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.mapping().all(|(y, t)| t.as_label() == Some(y))
    }

    /// Diagonal onto a sub-context of the source.
    pub fn is_extension(&self) -> bool {
        self.is_diagonal() && self.target.is_sub_context_of(&self.source)
    }

    /// The permutation `π` with `self = I_π(target)`, if there is one.
    pub fn renaming_permutation(&self) -> Option<LabelPermutation> {
        if !self.is_general_extension() || self.source.len() != self.target.len() {
            return None;
        }
        let pairs = self
            .mapping()
            .map(|(y, t)| (y.clone(), t.as_label().cloned().expect("nominal")));
        let pi = LabelPermutation::complete(pairs).ok()?;
        (*self.source == self.target.permute(&pi)).then_some(pi)
    }

    pub fn is_renaming(&self) -> bool {
        self.renaming_permutation().is_some()
    }

    pub fn classify(&self) -> AssignmentClass {
        if !self.is_nominal() {
            return AssignmentClass::General;
        }
        if !self.is_general_extension() {
            return AssignmentClass::Nominal;
        }
        if self.is_extension() {
            if self.source == self.target {
                return AssignmentClass::Diagonal;
            }
            return AssignmentClass::Extension;
        }
        if self.is_renaming() {
            return AssignmentClass::Renaming;
        }
        AssignmentClass::GeneralExtension
    }

    /// The inverse in the category of nominal assignments, when `self` is an
    /// isomorphism there.
    pub fn inverse(&self) -> Option<Assignment> {
        if self.source.len() != self.target.len() || !self.is_general_extension() {
            return None;
        }
        let mapping = self
            .mapping()
            .map(|(y, t)| (t.as_label().cloned().expect("nominal"), Expr::Label(y.clone())))
            .collect();
        let inv = Assignment::new(self.target.clone(), self.source.clone(), mapping).ok()?;
        let round_trip = self.compose(&inv).ok()? == Assignment::identity(self.target.clone())
            && inv.compose(self).ok()? == Assignment::identity(self.source.clone());
        round_trip.then_some(inv)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}
