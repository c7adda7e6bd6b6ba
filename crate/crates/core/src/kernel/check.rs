//! The judgement checker `Γ ⊢ e : s`.
//!
//! The theory is deliberately small: one universe `type`, base types named by
//! labels, finite products, first-order arrows, application, typed `forall`
//! over term variables, equality and the propositional connectives. Types
//! match syntactically up to α; there is no conversion.

use std::fmt;

use thiserror::Error;

use super::expr::{Expr, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Type,
    Term,
    Kind,
    Prop,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Type => "Type",
            Sort::Term => "Term",
            Sort::Kind => "Kind",
            Sort::Prop => "Prop",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unbound label `{0}`")]
    UnboundLabel(Label),
    #[error("expected {expected}, found {found} in `{expr}`")]
    SortMismatch {
        expected: Sort,
        found: Sort,
        expr: String,
    },
    #[error("ill-formed expression: {0}")]
    IllFormedExpression(String),
    #[error("`{term}` has type `{actual}`, expected `{expected}`")]
    TypeMismatch {
        term: String,
        expected: String,
        actual: String,
    },
}

/// Anything that assigns classifiers to labels.
pub trait Signature {
    fn classifier_of(&self, label: &Label) -> Option<&Expr>;
}

struct Checker<'a, S: ?Sized> {
    sig: &'a S,
    // Types of the enclosing bound variables, innermost last.
    locals: Vec<Expr>,
}

impl<S: Signature + ?Sized> Checker<'_, S> {
    fn infer(&mut self, e: &Expr) -> Result<Expr, KernelError> {
        match e {
            Expr::Label(l) => self
                .sig
                .classifier_of(l)
                .cloned()
                .ok_or_else(|| KernelError::UnboundLabel(l.clone())),
            Expr::Bound(i) => self
                .locals
                .len()
                .checked_sub(i + 1)
                .map(|k| self.locals[k].clone())
                .ok_or_else(|| KernelError::IllFormedExpression(format!("dangling bound variable #{i}"))),
            Expr::Universe => Err(KernelError::SortMismatch {
                expected: Sort::Term,
                found: Sort::Kind,
                expr: e.to_string(),
            }),
            Expr::Product(ts) => {
                if ts.len() < 2 {
                    return Err(KernelError::IllFormedExpression(
                        "a product needs at least two components".into(),
                    ));
                }
                for t in ts {
                    self.expect_type(t)?;
                }
                Ok(Expr::Universe)
            }
            Expr::Arrow(a, b) => {
                self.expect_type(a)?;
                self.expect_type(b)?;
                Ok(Expr::Universe)
            }
            Expr::Apply(f, args) => {
                let fty = self.infer(f)?;
                let Expr::Arrow(dom, cod) = fty else {
                    return Err(KernelError::IllFormedExpression(format!(
                        "`{f}` of type `{fty}` is applied but is not a function"
                    )));
                };
                let params: Vec<&Expr> = match (&*dom, args.len()) {
                    (Expr::Product(ts), n) if n > 1 => ts.iter().collect(),
                    (d, 1) => vec![d],
                    _ => Vec::new(),
                };
                if params.len() != args.len() {
                    return Err(KernelError::IllFormedExpression(format!(
                        "`{f}` expects {} argument(s) of type `{dom}`, given {}",
                        match &*dom {
                            Expr::Product(ts) => ts.len(),
                            _ => 1,
                        },
                        args.len()
                    )));
                }
                for (a, p) in args.iter().zip(params) {
                    let actual = self.infer(a)?;
                    if &actual != p {
                        return Err(KernelError::TypeMismatch {
                            term: a.to_string(),
                            expected: p.to_string(),
                            actual: actual.to_string(),
                        });
                    }
                }
                Ok(*cod)
            }
            Expr::Forall { .. }
            | Expr::Eq(..)
            | Expr::And(..)
            | Expr::Or(..)
            | Expr::Implies(..)
            | Expr::Not(..) => Err(KernelError::SortMismatch {
                expected: Sort::Term,
                found: Sort::Prop,
                expr: e.to_string(),
            }),
        }
    }

    fn expect_type(&mut self, e: &Expr) -> Result<(), KernelError> {
        match self.sort(e)? {
            Sort::Type => Ok(()),
            found => Err(KernelError::SortMismatch {
                expected: Sort::Type,
                found,
                expr: e.to_string(),
            }),
        }
    }

    fn expect_prop(&mut self, e: &Expr) -> Result<(), KernelError> {
        match self.sort(e)? {
            Sort::Prop => Ok(()),
            found => Err(KernelError::SortMismatch {
                expected: Sort::Prop,
                found,
                expr: e.to_string(),
            }),
        }
    }

    fn sort(&mut self, e: &Expr) -> Result<Sort, KernelError> {
        match e {
            Expr::Universe => Ok(Sort::Kind),
            Expr::Forall { ty, body, .. } => {
                self.expect_type(ty)?;
                self.locals.push((**ty).clone());
                let r = self.expect_prop(body);
                self.locals.pop();
                r.map(|_| Sort::Prop)
            }
            Expr::Eq(l, r) => {
                let lt = self.infer(l)?;
                self.expect_type(&lt).map_err(|_| KernelError::SortMismatch {
                    expected: Sort::Term,
                    found: self.sort(l).unwrap_or(Sort::Type),
                    expr: l.to_string(),
                })?;
                let rt = self.infer(r)?;
                if lt != rt {
                    return Err(KernelError::TypeMismatch {
                        term: r.to_string(),
                        expected: lt.to_string(),
                        actual: rt.to_string(),
                    });
                }
                Ok(Sort::Prop)
            }
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) => {
                self.expect_prop(a)?;
                self.expect_prop(b)?;
                Ok(Sort::Prop)
            }
            Expr::Not(a) => {
                self.expect_prop(a)?;
                Ok(Sort::Prop)
            }
            _ => {
                let c = self.infer(e)?;
                if c == Expr::Universe {
                    return Ok(Sort::Type);
                }
                match self.sort(&c)? {
                    Sort::Type => Ok(Sort::Term),
                    _ => Err(KernelError::IllFormedExpression(format!(
                        "`{e}` names a proof of `{c}` and cannot be used inside an expression"
                    ))),
                }
            }
        }
    }
}

/// The sort of an arbitrary closed expression.
pub fn sort_of<S: Signature + ?Sized>(sig: &S, e: &Expr) -> Result<Sort, KernelError> {
    Checker { sig, locals: Vec::new() }.sort(e)
}

/// The sort of `e` used as the classifier of a context entry: `Kind` for
/// `type`, `Type` for types and `Prop` for propositions.
pub fn check_classifier<S: Signature + ?Sized>(sig: &S, e: &Expr) -> Result<Sort, KernelError> {
    match sort_of(sig, e)? {
        Sort::Term => Err(KernelError::SortMismatch {
            expected: Sort::Type,
            found: Sort::Term,
            expr: e.to_string(),
        }),
        s => Ok(s),
    }
}

/// `Γ ⊢ t : expected`, up to α-equivalence.
pub fn check_term<S: Signature + ?Sized>(sig: &S, t: &Expr, expected: &Expr) -> Result<(), KernelError> {
    let actual = Checker { sig, locals: Vec::new() }.infer(t)?;
    if &actual == expected {
        Ok(())
    } else {
        Err(KernelError::TypeMismatch {
            term: t.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        })
    }
}

/// The classifier of a term (its type, or `type` for type expressions).
pub fn infer<S: Signature + ?Sized>(sig: &S, t: &Expr) -> Result<Expr, KernelError> {
    Checker { sig, locals: Vec::new() }.infer(t)
}
