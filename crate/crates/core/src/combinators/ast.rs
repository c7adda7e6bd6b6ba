use crate::kernel::{Expr, Label};
use crate::span::Span;

/// `label : classifier`, or `axiom label : prop`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub label: Label,
    pub classifier: Expr,
    pub axiom: bool,
    pub span: Span,
}

/// `[a |-> b, ...]`; empty when omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RenameSpec {
    pub pairs: Vec<(Label, Label)>,
    pub span: Span,
}

impl RenameSpec {
    pub fn is_empty(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameRef {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TpcTerm {
    /// `extend A by { l }` or `A extended by { l }`.
    Extend { base: NameRef, body: Vec<Judgment> },
    /// `combine A r₁, B r₂ [over C]`.
    Combine {
        left: NameRef,
        left_ren: RenameSpec,
        right: NameRef,
        right_ren: RenameSpec,
        over: Option<NameRef>,
    },
    /// `A ; B`.
    Seq { first: NameRef, second: NameRef },
    /// `A r`; a bare name is `A []`.
    Rename { base: NameRef, ren: RenameSpec },
    Empty,
    Theory { body: Vec<Judgment> },
}

impl TpcTerm {
    pub fn references(&self) -> Vec<&NameRef> {
        match self {
            TpcTerm::Extend { base, .. } | TpcTerm::Rename { base, .. } => vec![base],
            TpcTerm::Combine { left, right, over, .. } => {
                let mut v = vec![left, right];
                v.extend(over.iter());
                v
            }
            TpcTerm::Seq { first, second } => vec![first, second],
            TpcTerm::Empty | TpcTerm::Theory { .. } => Vec::new(),
        }
    }

    pub fn form(&self) -> &'static str {
        match self {
            TpcTerm::Extend { .. } => "extend",
            TpcTerm::Combine { .. } => "combine",
            TpcTerm::Seq { .. } => "seq",
            TpcTerm::Rename { .. } => "rename",
            TpcTerm::Empty => "empty",
            TpcTerm::Theory { .. } => "theory",
        }
    }
}

/// `Name := term`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: String,
    pub name_span: Span,
    pub term: TpcTerm,
    pub span: Span,
}
