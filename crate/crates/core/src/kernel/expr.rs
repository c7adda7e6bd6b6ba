//! Expression syntax of the background type theory.
//!
//! Bound variables are de Bruijn indices; the name a binder was written with
//! is carried only for printing and never takes part in equality. The derived
//! `PartialEq` on [`Expr`] is therefore α-equivalence. Labels are rigid.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Characters that make up operator labels such as `*` or `+`.
pub(crate) fn is_operator_char(c: char) -> bool {
    matches!(
        c,
        '*' | '+' | '-' | '/' | '^' | '~' | '!' | '@' | '#' | '$' | '%' | '&' | '<' | '>' | '?'
            | '|' | '\\' | '·' | '∘' | '⊕' | '⊗'
    )
}

/// A context label: an element of the countable label set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: impl AsRef<str>) -> Self {
        Label(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Operator labels print infix when applied to two arguments.
    pub fn is_infix(&self) -> bool {
        self.0.chars().next().is_some_and(is_operator_char)
    }

    /// `U` becomes `U'`, `U'` becomes `U''`.
    pub fn primed(&self) -> Label {
        Label::new(format!("{}'", self.0))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

/// Display name of a bound variable. Always compares equal.
#[derive(Clone, Debug)]
pub struct BinderName(pub String);

impl PartialEq for BinderName {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for BinderName {}

impl Hash for BinderName {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// `type`, the universe of types; classified by `Kind`.
    Universe,
    /// Reference to a context entry (a base type, an operation or an axiom).
    Label(Label),
    /// De Bruijn index into the enclosing `forall` binders.
    Bound(usize),
    /// `(A,B,...)`, at least two components.
    Product(Vec<Expr>),
    Arrow(Box<Expr>, Box<Expr>),
    Apply(Box<Expr>, Vec<Expr>),
    Forall {
        name: BinderName,
        ty: Box<Expr>,
        body: Box<Expr>,
    },
    Eq(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

/// Simultaneous substitution of labels by expressions.
pub type Substitution = HashMap<Label, Expr>;

impl Expr {
    pub fn label(name: impl AsRef<str>) -> Expr {
        Expr::Label(Label::new(name))
    }

    pub fn arrow(dom: Expr, cod: Expr) -> Expr {
        Expr::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn apply(f: Expr, args: Vec<Expr>) -> Expr {
        Expr::Apply(Box::new(f), args)
    }

    pub fn infix(op: impl AsRef<str>, lhs: Expr, rhs: Expr) -> Expr {
        Expr::apply(Expr::label(op), vec![lhs, rhs])
    }

    pub fn eq(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Eq(Box::new(lhs), Box::new(rhs))
    }

    /// `forall name:ty. body` where `body` already refers to the new
    /// variable as `Bound(0)`.
    pub fn forall(name: impl Into<String>, ty: Expr, body: Expr) -> Expr {
        Expr::Forall {
            name: BinderName(name.into()),
            ty: Box::new(ty),
            body: Box::new(body),
        }
    }

    pub fn as_label(&self) -> Option<&Label> {
        match self {
            Expr::Label(l) => Some(l),
            _ => None,
        }
    }

    /// Labels occurring in the expression.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<Label>) {
        self.for_each_child(|c| c.collect_labels(out));
        if let Expr::Label(l) = self {
            out.insert(l.clone());
        }
    }

    pub fn mentions(&self, label: &Label) -> bool {
        match self {
            Expr::Label(l) => l == label,
            _ => {
                let mut found = false;
                self.for_each_child(|c| found |= c.mentions(label));
                found
            }
        }
    }

    fn for_each_child(&self, mut f: impl FnMut(&Expr)) {
        match self {
            Expr::Universe | Expr::Label(_) | Expr::Bound(_) => {}
            Expr::Product(ts) => ts.iter().for_each(f),
            Expr::Arrow(a, b)
            | Expr::Eq(a, b)
            | Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Implies(a, b) => {
                f(a);
                f(b)
            }
            Expr::Apply(g, args) => {
                f(g);
                args.iter().for_each(f)
            }
            Expr::Forall { ty, body, .. } => {
                f(ty);
                f(body)
            }
            Expr::Not(a) => f(a),
        }
    }

    /// True when some `Bound(i)` is not captured by an enclosing binder.
    pub fn has_loose_bound(&self) -> bool {
        self.loose_above(0)
    }

    fn loose_above(&self, depth: usize) -> bool {
        match self {
            Expr::Bound(i) => *i >= depth,
            Expr::Forall { ty, body, .. } => ty.loose_above(depth) || body.loose_above(depth + 1),
            _ => {
                let mut found = false;
                self.for_each_child(|c| found |= c.loose_above(depth));
                found
            }
        }
    }

    fn shifted(&self, by: usize, cutoff: usize) -> Expr {
        if by == 0 {
            return self.clone();
        }
        match self {
            Expr::Bound(i) if *i >= cutoff => Expr::Bound(i + by),
            Expr::Forall { name, ty, body } => Expr::Forall {
                name: name.clone(),
                ty: Box::new(ty.shifted(by, cutoff)),
                body: Box::new(body.shifted(by, cutoff + 1)),
            },
            _ => self.map_children(|c| c.shifted(by, cutoff)),
        }
    }

    fn map_children(&self, mut f: impl FnMut(&Expr) -> Expr) -> Expr {
        let bx = |e: &Expr, f: &mut dyn FnMut(&Expr) -> Expr| Box::new(f(e));
        match self {
            Expr::Universe | Expr::Label(_) | Expr::Bound(_) => self.clone(),
            Expr::Product(ts) => Expr::Product(ts.iter().map(f).collect()),
            Expr::Arrow(a, b) => Expr::Arrow(bx(a, &mut f), bx(b, &mut f)),
            Expr::Eq(a, b) => Expr::Eq(bx(a, &mut f), bx(b, &mut f)),
            Expr::And(a, b) => Expr::And(bx(a, &mut f), bx(b, &mut f)),
            Expr::Or(a, b) => Expr::Or(bx(a, &mut f), bx(b, &mut f)),
            Expr::Implies(a, b) => Expr::Implies(bx(a, &mut f), bx(b, &mut f)),
            Expr::Apply(g, args) => Expr::Apply(bx(g, &mut f), args.iter().map(f).collect()),
            Expr::Forall { name, ty, body } => Expr::Forall {
                name: name.clone(),
                ty: bx(ty, &mut f),
                body: bx(body, &mut f),
            },
            Expr::Not(a) => Expr::Not(bx(a, &mut f)),
        }
    }

    /// Replace every label in the domain of `subst`, simultaneously.
    /// Only bound variables are ever renamed, so capture cannot happen.
    pub fn substitute(&self, subst: &Substitution) -> Expr {
        if subst.is_empty() {
            return self.clone();
        }
        self.subst_at(subst, 0)
    }

    fn subst_at(&self, subst: &Substitution, depth: usize) -> Expr {
        match self {
            Expr::Label(l) => match subst.get(l) {
                Some(r) => r.shifted(depth, 0),
                None => self.clone(),
            },
            Expr::Forall { name, ty, body } => Expr::Forall {
                name: name.clone(),
                ty: Box::new(ty.subst_at(subst, depth)),
                body: Box::new(body.subst_at(subst, depth + 1)),
            },
            _ => self.map_children(|c| c.subst_at(subst, depth)),
        }
    }

    /// Apply a label-to-label function everywhere (the permutation action).
    pub fn rename_labels(&self, f: &dyn Fn(&Label) -> Label) -> Expr {
        match self {
            Expr::Label(l) => Expr::Label(f(l)),
            _ => self.map_children(|c| c.rename_labels(f)),
        }
    }
}

/// α-equivalence: equality up to the names of bound variables.
pub fn alpha_equal(a: &Expr, b: &Expr) -> bool {
    a == b
}
