//! General extensions and their cartesian liftings along nominal arrows.
//!
//! Arrows of [`ExtSquare`] are commutative squares
//!
//! ```text
//!   Γ⁺ --top--> Δ⁺
//!   |           |
//!  left       right
//!   v           v
//!   Γ --bottom-> Δ
//! ```
//!
//! and `cod` sends a square to its bottom edge.

use std::collections::BTreeSet;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

use crate::context::{Assignment, Context, ContextError, Entry, LabelPermutation};
use crate::kernel::{Expr, Label, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("not a general extension: {0}")]
    NotGeneralExtension(String),
    #[error("not an extension: {0}")]
    NotExtension(String),
    #[error("not a nominal assignment: {0}")]
    NotNominal(String),
    #[error("cannot lift an extension of {found} along an arrow into {expected}")]
    BaseMismatch { expected: String, found: String },
    #[error("ran out of fresh variants of `{0}`")]
    FreshLabelExhaustion(Label),
    #[error("{0}")]
    PropertyViolation(String),
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// A nominal assignment that uses each source label at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralExtension(Assignment);

impl TryFrom<Assignment> for GeneralExtension {
    type Error = CategoryError;

    fn try_from(a: Assignment) -> Result<Self, CategoryError> {
        if a.is_general_extension() {
            Ok(GeneralExtension(a))
        } else {
            Err(CategoryError::NotGeneralExtension(a.to_string()))
        }
    }
}

impl Deref for GeneralExtension {
    type Target = Assignment;

    fn deref(&self) -> &Assignment {
        &self.0
    }
}

impl GeneralExtension {
    pub fn identity(ctx: Arc<Context>) -> Self {
        GeneralExtension(Assignment::identity(ctx))
    }

    /// `!_Γ : Γ → ⟨⟩`.
    pub fn to_empty(ctx: Arc<Context>) -> Self {
        GeneralExtension(Assignment::to_empty(ctx))
    }

    /// `δ_sub : outer → sub`, when `sub` is a sub-context of `outer`.
    pub fn extension(outer: Arc<Context>, sub: Arc<Context>) -> Result<Self, CategoryError> {
        if !sub.is_sub_context_of(&outer) {
            return Err(CategoryError::NotExtension(format!("{sub} is not a sub-context of {outer}")));
        }
        Ok(GeneralExtension(Assignment::diagonal(outer, sub)?))
    }

    pub fn renaming(pi: &LabelPermutation, ctx: Arc<Context>) -> Self {
        GeneralExtension(Assignment::renaming(pi, ctx))
    }

    pub fn assignment(&self) -> &Assignment {
        &self.0
    }

    pub fn into_assignment(self) -> Assignment {
        self.0
    }

    pub fn dom(&self) -> &Arc<Context> {
        self.0.source()
    }

    pub fn cod(&self) -> &Arc<Context> {
        self.0.target()
    }

    /// Composites of general extensions are general extensions.
    pub fn then(&self, after: &GeneralExtension) -> Result<GeneralExtension, CategoryError> {
        Ok(GeneralExtension(after.0.compose(&self.0)?))
    }

    pub fn permute(&self, pi: &LabelPermutation) -> GeneralExtension {
        GeneralExtension(self.0.permute(pi))
    }
}

/// An arrow `left → right` of general extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtSquare {
    pub top: Assignment,
    pub bottom: Assignment,
    pub left: GeneralExtension,
    pub right: GeneralExtension,
}

impl ExtSquare {
    pub fn new(
        top: Assignment,
        bottom: Assignment,
        left: GeneralExtension,
        right: GeneralExtension,
    ) -> Result<Self, CategoryError> {
        if !top.is_nominal() || !bottom.is_nominal() {
            return Err(CategoryError::NotNominal("square edges must be nominal".into()));
        }
        let sq = ExtSquare { top, bottom, left, right };
        if !sq.commutes() {
            return Err(CategoryError::PropertyViolation("square does not commute".into()));
        }
        Ok(sq)
    }

    pub fn commutes(&self) -> bool {
        match (self.right.compose(&self.top), self.bottom.compose(&self.left)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn identity(a: &GeneralExtension) -> Self {
        ExtSquare {
            top: Assignment::identity(a.dom().clone()),
            bottom: Assignment::identity(a.cod().clone()),
            left: a.clone(),
            right: a.clone(),
        }
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &ExtSquare) -> Result<ExtSquare, CategoryError> {
        if f.right != self.left {
            return Err(CategoryError::PropertyViolation(
                "squares are not composable: middle extensions differ".into(),
            ));
        }
        Ok(ExtSquare {
            top: self.top.compose(&f.top)?,
            bottom: self.bottom.compose(&f.bottom)?,
            left: f.left.clone(),
            right: self.right.clone(),
        })
    }

    /// The functor `cod : 𝔼 → 𝔹` on arrows.
    pub fn cod(&self) -> &Assignment {
        &self.bottom
    }
}

/// The permutation `π_A` with `π_A(yᵢ) = x_{a(i)}`.
pub fn decomposition_permutation(a: &GeneralExtension) -> LabelPermutation {
    let pairs = a
        .mapping()
        .map(|(y, t)| (y.clone(), t.as_label().cloned().expect("general extensions are nominal")));
    LabelPermutation::complete(pairs).expect("general extensions are injective")
}

/// Split `a : Γ⁺ → Δ` as `ren ∘ ext`, `ext` an extension onto `π_A·Δ` and
/// `ren = I_{π_A}(Δ)`.
pub fn decompose(a: &Assignment) -> Result<(Assignment, Assignment), CategoryError> {
    let a = GeneralExtension::try_from(a.clone())?;
    let pi = decomposition_permutation(&a);
    let ren = Assignment::renaming(&pi, a.cod().clone());
    let back = Assignment::renaming(&pi.inverse(), ren.source().clone());
    let ext = back.compose(&a)?;
    debug_assert!(ext.is_extension());
    Ok((ext, ren))
}

/// Reorder the source of an extension `Γ⁺ → Γ` so that `Γ` is a prefix. Returns
/// the reordered context `Γ°` and the isomorphism `δ_{Γ⁺} : Γ° → Γ⁺`.
pub fn normalize_initial_segment(a: &Assignment) -> Result<(Arc<Context>, Assignment), CategoryError> {
    if !a.is_extension() {
        return Err(CategoryError::NotExtension(a.to_string()));
    }
    let outer = a.source();
    let sub = a.target();
    let mut entries: Vec<Entry> = sub.entries().to_vec();
    entries.extend(outer.entries().iter().filter(|e| !sub.contains(&e.label)).cloned());
    let reordered = Arc::new(Context::new(entries)?);
    let iso = Assignment::diagonal(reordered.clone(), outer.clone())?;
    Ok((reordered, iso))
}

/// First of `l′, l″, …` not rejected by `taken`.
pub fn fresh_variant(l: &Label, taken: impl Fn(&Label) -> bool) -> Result<Label, CategoryError> {
    const MAX_PRIMES: usize = 64;
    let mut candidate = l.primed();
    for _ in 0..MAX_PRIMES {
        if !taken(&candidate) {
            return Ok(candidate);
        }
        candidate = candidate.primed();
    }
    Err(CategoryError::FreshLabelExhaustion(l.clone()))
}

/// The canonical pullback of `a` along `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartesianLift {
    /// `u : Γ → Δ`.
    pub base: Assignment,
    /// `A : Δ⁺ → Δ`.
    pub over: GeneralExtension,
    /// `Γ⁺`, which starts with `Γ`.
    pub apex: Arc<Context>,
    /// `u*(A) = δ_Γ : Γ⁺ → Γ`.
    pub lifted: GeneralExtension,
    /// `u⁺(A) : Γ⁺ → Δ⁺`.
    pub top: Assignment,
    // New apex labels, each paired with the label of Δ⁺ it comes from.
    tail: Vec<(Label, Label)>,
}

impl CartesianLift {
    pub fn square(&self) -> ExtSquare {
        ExtSquare {
            top: self.top.clone(),
            bottom: self.base.clone(),
            left: self.lifted.clone(),
            right: self.over.clone(),
        }
    }

    /// Labels added on top of `Γ`, paired with their origin in `Δ⁺`.
    pub fn tail(&self) -> &[(Label, Label)] {
        &self.tail
    }

    /// The unique `v̄⁺ : Ξ⁺ → Γ⁺` with `u*(A) ∘ v̄⁺ = v ∘ x` and
    /// `u⁺(A) ∘ v̄⁺ = g⁺`, for `g : x → A` and `v : Ξ → Γ` with `u ∘ v = g⁻`.
    pub fn mediating_arrow(
        &self,
        x: &Assignment,
        g: &ExtSquare,
        v: &Assignment,
    ) -> Result<Assignment, CategoryError> {
        let violation = |m: &str| Err(CategoryError::PropertyViolation(m.to_string()));
        if g.left.assignment() != x {
            return violation("the given square does not start at the given extension");
        }
        if g.right != self.over {
            return violation("the given square does not end at the lifted extension");
        }
        if !g.commutes() {
            return violation("the given square does not commute");
        }
        if v.source() != x.target() {
            return violation("v does not start at the base of x");
        }
        if self.base.compose(v).ok().as_ref() != Some(&g.bottom) {
            return violation("u ∘ v differs from the bottom of the square");
        }
        self.mediate(&v.compose(x)?, &g.top)
    }

    /// The unique `m : P → Γ⁺` with `u*(A) ∘ m = left` and `u⁺(A) ∘ m = top`,
    /// for any commuting cone `Γ ←left− P −top→ Δ⁺` in 𝔹.
    pub fn mediate(&self, left: &Assignment, top: &Assignment) -> Result<Assignment, CategoryError> {
        let violation = |m: &str| Err(CategoryError::PropertyViolation(m.to_string()));
        if left.target() != self.lifted.cod() || top.target() != self.over.dom() || left.source() != top.source() {
            return violation("cone legs do not match the cospan");
        }
        if self.base.compose(left)? != self.over.compose(top)? {
            return violation("cone does not commute");
        }
        let mut mapping: Vec<(Label, Expr)> = left.mapping().map(|(l, t)| (l.clone(), t.clone())).collect();
        for (new, origin) in &self.tail {
            let t = top.term_for(origin).expect("tail labels come from Δ⁺").clone();
            mapping.push((new.clone(), t));
        }
        let med = Assignment::new(left.source().clone(), self.apex.clone(), mapping)
            .map_err(|e| CategoryError::PropertyViolation(format!("mediating arrow is ill-typed: {e}")))?;
        if self.lifted.compose(&med)? != *left {
            return violation("mediating arrow does not commute with the lifted leg");
        }
        if self.top.compose(&med)? != *top {
            return violation("mediating arrow does not commute with the top leg");
        }
        Ok(med)
    }
}

/// Pull `a : Δ⁺ → Δ` back along the nominal `u : Γ → Δ`.
pub fn cartesian_lift(u: &Assignment, a: &GeneralExtension) -> Result<CartesianLift, CategoryError> {
    if !u.is_nominal() {
        return Err(CategoryError::NotNominal(u.to_string()));
    }
    if u.target() != a.cod() {
        return Err(CategoryError::BaseMismatch {
            expected: u.target().to_string(),
            found: a.cod().to_string(),
        });
    }
    let gamma = u.source();
    let pi = decomposition_permutation(a);
    let (ext, _ren) = decompose(a)?;
    let delta_renamed = ext.target().clone();
    let u_renamed = Assignment::renaming(&pi.inverse(), delta_renamed.clone()).compose(u)?;
    let (normal, _) = normalize_initial_segment(&ext)?;

    let delta_plus = a.dom();
    let mut chosen: BTreeSet<Label> = BTreeSet::new();
    let mut tail = Vec::new();
    for e in &normal.entries()[delta_renamed.len()..] {
        let w = &e.label;
        let fresh = if gamma.contains(w) {
            fresh_variant(w, |c| gamma.contains(c) || delta_plus.contains(c) || chosen.contains(c))?
        } else {
            w.clone()
        };
        chosen.insert(fresh.clone());
        tail.push((fresh, w.clone()));
    }

    let mut m: Substitution = u_renamed.substitution();
    for (fresh, w) in &tail {
        m.insert(w.clone(), Expr::Label(fresh.clone()));
    }
    let new_entries = normal.entries()[delta_renamed.len()..]
        .iter()
        .zip(&tail)
        .map(|(e, (fresh, _))| Entry::new(fresh.clone(), e.classifier.substitute(&m)))
        .collect();
    let apex = Arc::new(gamma.extend(new_entries)?);
    let lifted = GeneralExtension::extension(apex.clone(), gamma.clone())?;
    let top_mapping = delta_plus
        .labels()
        .map(|z| (z.clone(), m.get(z).cloned().expect("every label of Δ⁺ is mapped")))
        .collect();
    let top = Assignment::new(apex.clone(), delta_plus.clone(), top_mapping)?;
    let lift = CartesianLift {
        base: u.clone(),
        over: a.clone(),
        apex,
        lifted,
        top,
        tail,
    };
    if !lift.square().commutes() {
        return Err(CategoryError::PropertyViolation("lifted square does not commute".into()));
    }
    Ok(lift)
}

/// Largest common sub-context, in `a`'s order.
pub fn meet_context(a: &Context, b: &Context) -> Context {
    let mut kept: BTreeSet<Label> = BTreeSet::new();
    let mut entries = Vec::new();
    for e in a.entries() {
        let shared = b.get(&e.label) == Some(&e.classifier);
        if shared && e.classifier.labels().iter().all(|l| kept.contains(l)) {
            kept.insert(e.label.clone());
            entries.push(e.clone());
        }
    }
    Context::new(entries).expect("dependency-closed sub-lists of a context are contexts")
}

/// Whether `sq` is a pullback in the category of nominal assignments. The
/// canonical lift of `sq.right` along `sq.bottom` is a pullback, so `sq` is
/// one exactly when the mediating arrow into the canonical apex is invertible.
pub fn is_pullback_square(sq: &ExtSquare) -> bool {
    if !sq.commutes() {
        return false;
    }
    let Ok(lift) = cartesian_lift(&sq.bottom, &sq.right) else {
        return false;
    };
    let id = Assignment::identity(sq.left.cod().clone());
    match lift.mediating_arrow(sq.left.assignment(), sq, &id) {
        Ok(med) => med.is_isomorphism(),
        Err(_) => false,
    }
}
