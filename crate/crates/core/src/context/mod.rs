//! Objects and arrows of the category of contexts.
//!
//! A [`Context`] is an ordered list of `label : classifier` entries, each
//! well-sorted relative to the entries before it. Contexts are compared on the
//! nose: labels and order matter, only bound variables are taken up to α.

mod assignment;
mod permutation;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::kernel::{check_classifier, KernelError, Label, Signature, Sort};

pub use crate::kernel::Expr;
pub use assignment::{Assignment, AssignmentClass};
pub use permutation::{parse_renaming_spec, LabelPermutation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("label `{label}` is declared twice")]
    DuplicateLabel { index: usize, label: Label },
    #[error("entry `{label}` is ill-formed: {cause}")]
    IllFormedEntry {
        index: usize,
        label: Label,
        cause: KernelError,
    },
    #[error("assignment does not map target label `{0}`")]
    MissingTarget(Label),
    #[error("assignment maps `{0}`, which is not a label of the target")]
    ExtraTarget(Label),
    #[error("assignment for `{label}` is ill-typed: {cause}")]
    TypeMismatch { label: Label, cause: KernelError },
    #[error("contexts do not match: {0}")]
    ContextMismatch(String),
    #[error("renaming is not injective at `{0}`")]
    NonInjectiveRenaming(Label),
    #[error("renaming target `{0}` already occurs in the theory")]
    ClashInContext(Label),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub label: Label,
    pub classifier: Expr,
}

impl Entry {
    pub fn new(label: impl Into<Label>, classifier: Expr) -> Self {
        Entry {
            label: label.into(),
            classifier,
        }
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label::new(s)
    }
}

/// A well-formed context.
#[derive(Clone, Default)]
pub struct Context {
    entries: Vec<Entry>,
    index: HashMap<Label, usize>,
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for Context {}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} : {}", e.label, e.classifier)?;
        }
        f.write_str("⟩")
    }
}

/// The first `len` entries of a context under construction.
struct Prefix<'a> {
    entries: &'a [Entry],
    index: &'a HashMap<Label, usize>,
}

impl Signature for Prefix<'_> {
    fn classifier_of(&self, label: &Label) -> Option<&Expr> {
        self.index.get(label).and_then(|&i| self.entries.get(i)).map(|e| &e.classifier)
    }
}

impl Signature for Context {
    fn classifier_of(&self, label: &Label) -> Option<&Expr> {
        self.get(label)
    }
}

impl Context {
    pub fn empty() -> Self {
        Context::default()
    }

    /// Validate raw entries: labels distinct and every classifier well-sorted
    /// over the entries before it.
    pub fn new(entries: Vec<Entry>) -> Result<Self, ContextError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if index.contains_key(&entry.label) {
                return Err(ContextError::DuplicateLabel {
                    index: i,
                    label: entry.label.clone(),
                });
            }
            let prefix = Prefix {
                entries: &entries[..i],
                index: &index,
            };
            check_classifier(&prefix, &entry.classifier).map_err(|cause| ContextError::IllFormedEntry {
                index: i,
                label: entry.label.clone(),
                cause,
            })?;
            index.insert(entry.label.clone(), i);
        }
        Ok(Context { entries, index })
    }

    /// Build from already-validated entries.
    pub(crate) fn trusted(entries: Vec<Entry>) -> Self {
        let index = entries.iter().enumerate().map(|(i, e)| (e.label.clone(), i)).collect();
        Context { entries, index }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> + '_ {
        self.entries.iter().map(|e| &e.label)
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.labels().cloned().collect()
    }

    pub fn get(&self, label: &Label) -> Option<&Expr> {
        self.index.get(label).map(|&i| &self.entries[i].classifier)
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.index.contains_key(label)
    }

    /// Sort of the classifier of entry `i` (`Kind`, `Type` or `Prop`).
    pub fn entry_sort(&self, i: usize) -> Sort {
        let prefix = Prefix {
            entries: &self.entries[..i],
            index: &self.index,
        };
        check_classifier(&prefix, &self.entries[i].classifier).expect("context entries are well-formed")
    }

    /// Concatenation `self ⨟ ⟨more⟩`, validated.
    pub fn extend(&self, more: Vec<Entry>) -> Result<Context, ContextError> {
        let mut entries = self.entries.clone();
        entries.extend(more);
        Context::new(entries)
    }

    /// Every `label : classifier` of `self` occurs in `outer`.
    pub fn is_sub_context_of(&self, outer: &Context) -> bool {
        self.entries
            .iter()
            .all(|e| outer.get(&e.label).is_some_and(|c| c == &e.classifier))
    }

    /// `π · Γ`: rename labels and label references.
    pub fn permute(&self, pi: &LabelPermutation) -> Context {
        let entries = self
            .entries
            .iter()
            .map(|e| Entry {
                label: pi.apply(&e.label),
                classifier: pi.act(&e.classifier),
            })
            .collect();
        Context::trusted(entries)
    }
}
