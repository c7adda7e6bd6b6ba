use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Context, ContextError};
use crate::kernel::{Expr, Label};

/// A finitely supported permutation of labels.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct LabelPermutation {
    // Only labels that move are stored.
    forward: BTreeMap<Label, Label>,
}

impl fmt::Debug for LabelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LabelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (a, b)) in self.forward.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a} |-> {b}")?;
        }
        f.write_str("]")
    }
}

impl LabelPermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Complete a partial injective map to a permutation. Labels the map
    /// sends onto but not from are sent back to labels it maps from but not
    /// onto, pairing them in sorted order.
    pub fn complete(pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self, ContextError> {
        let mut forward = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (a, b) in pairs {
            if let Some(prev) = forward.get(&a) {
                if prev != &b {
                    return Err(ContextError::NonInjectiveRenaming(a));
                }
                continue;
            }
            if !targets.insert(b.clone()) {
                return Err(ContextError::NonInjectiveRenaming(b));
            }
            forward.insert(a, b);
        }
        let sources: BTreeSet<Label> = forward.keys().cloned().collect();
        let dangling: Vec<Label> = targets.difference(&sources).cloned().collect();
        let unhit: Vec<Label> = sources.difference(&targets).cloned().collect();
        debug_assert_eq!(dangling.len(), unhit.len());
        for (b, a) in dangling.into_iter().zip(unhit) {
            forward.insert(b, a);
        }
        forward.retain(|a, b| a != b);
        Ok(LabelPermutation { forward })
    }

    /// The transposition `a ↔ b`.
    pub fn swap(a: Label, b: Label) -> Self {
        let mut forward = BTreeMap::new();
        if a != b {
            forward.insert(a.clone(), b.clone());
            forward.insert(b, a);
        }
        LabelPermutation { forward }
    }

    pub fn apply(&self, l: &Label) -> Label {
        self.forward.get(l).cloned().unwrap_or_else(|| l.clone())
    }

    /// The induced action `π · e` on expressions.
    pub fn act(&self, e: &Expr) -> Expr {
        if self.forward.is_empty() {
            return e.clone();
        }
        e.rename_labels(&|l| self.apply(l))
    }

    pub fn inverse(&self) -> Self {
        LabelPermutation {
            forward: self.forward.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &LabelPermutation) -> Self {
        let mut support: BTreeSet<Label> = self.forward.keys().cloned().collect();
        support.extend(other.forward.keys().cloned());
        let forward = support
            .into_iter()
            .filter_map(|l| {
                let image = self.apply(&other.apply(&l));
                (image != l).then_some((l, image))
            })
            .collect();
        LabelPermutation { forward }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Label> + '_ {
        self.forward.keys()
    }

    /// The moved labels with their images.
    pub fn pairs(&self) -> impl Iterator<Item = (&Label, &Label)> + '_ {
        self.forward.iter()
    }

    pub fn fixes(&self, l: &Label) -> bool {
        !self.forward.contains_key(l)
    }
}

/// Turn a user renaming `[a |-> b, ...]` into a permutation, rejecting maps
/// that would merge a target with a label `ctx` already uses.
pub fn parse_renaming_spec(pairs: &[(Label, Label)], ctx: &Context) -> Result<LabelPermutation, ContextError> {
    let sources: BTreeSet<&Label> = pairs.iter().filter(|(a, b)| a != b).map(|(a, _)| a).collect();
    let mut seen_targets = BTreeSet::new();
    let mut seen_sources = BTreeMap::new();
    for (a, b) in pairs {
        if let Some(prev) = seen_sources.insert(a, b) {
            if prev != b {
                return Err(ContextError::NonInjectiveRenaming(a.clone()));
            }
            continue;
        }
        if !seen_targets.insert(b) {
            return Err(ContextError::NonInjectiveRenaming(b.clone()));
        }
        if a != b && ctx.contains(b) && !sources.contains(b) {
            return Err(ContextError::ClashInContext(b.clone()));
        }
    }
    LabelPermutation::complete(pairs.iter().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Entry;
    use crate::kernel::parse_expr;

    fn l(s: &str) -> Label {
        Label::new(s)
    }

    fn semigroup() -> Context {
        Context::new(vec![
            Entry::new("U", parse_expr("type").unwrap()),
            Entry::new("*", parse_expr("(U,U) -> U").unwrap()),
            Entry::new("associative", parse_expr("forall x,y,z:U. (x*y)*z = x*(y*z)").unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn completion_adds_reverse_pairs() {
        let pi = LabelPermutation::complete([(l("*"), l("+"))]).unwrap();
        assert_eq!(pi.apply(&l("*")), l("+"));
        assert_eq!(pi.apply(&l("+")), l("*"));
        assert_eq!(pi.apply(&l("U")), l("U"));

        let chain = LabelPermutation::complete([(l("a"), l("b")), (l("b"), l("c"))]).unwrap();
        assert_eq!(chain.apply(&l("c")), l("a"));
        assert_eq!(chain.inverse().then_after(&chain), LabelPermutation::identity());
    }

    #[test]
    fn renaming_spec() {
        let pi = parse_renaming_spec(&[(l("*"), l("+")), (l("e"), l("0"))], &semigroup()).unwrap();
        assert_eq!(pi.apply(&l("e")), l("0"));
        assert_eq!(parse_renaming_spec(&[], &semigroup()).unwrap(), LabelPermutation::identity());
        assert_eq!(
            parse_renaming_spec(&[(l("*"), l("U"))], &semigroup()),
            Err(ContextError::ClashInContext(l("U")))
        );
        assert_eq!(
            parse_renaming_spec(&[(l("*"), l("+")), (l("U"), l("+"))], &semigroup()),
            Err(ContextError::NonInjectiveRenaming(l("+")))
        );
        // A swap of two present labels is fine: both move.
        assert!(parse_renaming_spec(&[(l("*"), l("U")), (l("U"), l("*"))], &semigroup()).is_ok());
    }

    #[test]
    fn permutation_action_on_contexts() {
        let pi = LabelPermutation::swap(l("*"), l("+"));
        let additive = semigroup().permute(&pi);
        assert_eq!(additive.entries()[1].label, l("+"));
        assert_eq!(
            additive.entries()[2].classifier,
            parse_expr("forall x,y,z:U. (x+y)+z = x+(y+z)").unwrap()
        );
        assert!(Context::new(additive.entries().to_vec()).is_ok());
        assert_eq!(additive.permute(&pi.inverse()), semigroup());
        assert_eq!(semigroup().permute(&LabelPermutation::identity()), semigroup());
    }
}
