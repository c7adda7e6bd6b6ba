//! Concrete-syntax printing. Output re-parses to an α-equal expression.

use std::collections::BTreeSet;
use std::fmt;

use super::expr::{Expr, Label};
use super::syntax::is_keyword;

const FORALL: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const EQ: u8 = 5;
const ARROW: u8 = 6;
const INFIX: u8 = 7;
const ATOM: u8 = 8;

fn infix_parts(e: &Expr) -> Option<(&Label, &Expr, &Expr)> {
    match e {
        Expr::Apply(f, args) if args.len() == 2 => match &**f {
            Expr::Label(op) if op.is_infix() => Some((op, &args[0], &args[1])),
            _ => None,
        },
        _ => None,
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Forall { .. } => FORALL,
        Expr::Implies(..) => IMPLIES,
        Expr::Or(..) => OR,
        Expr::And(..) => AND,
        Expr::Not(..) => NOT,
        Expr::Eq(..) => EQ,
        Expr::Arrow(..) => ARROW,
        _ if infix_parts(e).is_some() => INFIX,
        _ => ATOM,
    }
}

struct Printer {
    avoid: BTreeSet<String>,
    scope: Vec<String>,
}

impl Printer {
    fn fresh(&self, wanted: &str) -> String {
        let mut name = if wanted.is_empty() { "x".to_string() } else { wanted.to_string() };
        while self.avoid.contains(&name) || self.scope.contains(&name) || is_keyword(&name) {
            name.push('\'');
        }
        name
    }

    fn write(&mut self, out: &mut String, e: &Expr, need: u8) {
        let paren = precedence(e) < need;
        if paren {
            out.push('(');
        }
        self.write_bare(out, e);
        if paren {
            out.push(')');
        }
    }

    fn write_bare(&mut self, out: &mut String, e: &Expr) {
        if let Some((op, l, r)) = infix_parts(e) {
            self.write(out, l, ATOM);
            out.push_str(op.as_str());
            self.write(out, r, ATOM);
            return;
        }
        match e {
            Expr::Universe => out.push_str("type"),
            Expr::Label(l) if l.is_infix() => {
                out.push('(');
                out.push_str(l.as_str());
                out.push(')');
            }
            Expr::Label(l) => out.push_str(l.as_str()),
            Expr::Bound(i) => match self.scope.len().checked_sub(i + 1) {
                Some(k) => out.push_str(&self.scope[k]),
                None => out.push_str(&format!("#{i}")),
            },
            Expr::Product(ts) => {
                out.push('(');
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    self.write(out, t, FORALL);
                }
                out.push(')');
            }
            Expr::Arrow(a, b) => {
                self.write(out, a, INFIX);
                out.push_str(" -> ");
                self.write(out, b, ARROW);
            }
            Expr::Apply(f, args) => {
                self.write(out, f, ATOM);
                out.push('(');
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    self.write(out, a, FORALL);
                }
                out.push(')');
            }
            Expr::Eq(a, b) => {
                self.write(out, a, ARROW);
                out.push_str(" = ");
                self.write(out, b, ARROW);
            }
            Expr::And(a, b) => self.binary(out, a, " and ", b, AND, NOT),
            Expr::Or(a, b) => self.binary(out, a, " or ", b, OR, AND),
            Expr::Implies(a, b) => self.binary(out, a, " implies ", b, OR, IMPLIES),
            Expr::Not(a) => {
                out.push_str("not ");
                self.write(out, a, NOT);
            }
            Expr::Forall { .. } => self.forall(out, e),
        }
    }

    fn binary(&mut self, out: &mut String, a: &Expr, op: &str, b: &Expr, lp: u8, rp: u8) {
        self.write(out, a, lp);
        out.push_str(op);
        self.write(out, b, rp);
    }

    /// Consecutive binders over the same closed type share one `forall`.
    fn forall(&mut self, out: &mut String, e: &Expr) {
        let depth = self.scope.len();
        let mut groups: Vec<(Vec<String>, &Expr, String)> = Vec::new();
        let mut cur = e;
        while let Expr::Forall { name, ty, body } = cur {
            // A binder's type lies outside its own scope.
            let mut ty_text = String::new();
            self.write(&mut ty_text, ty, INFIX);
            let chosen = self.fresh(&name.0);
            self.scope.push(chosen.clone());
            match groups.last_mut() {
                Some((names, g, _)) if *g == &**ty && !ty.has_loose_bound() => names.push(chosen),
                _ => groups.push((vec![chosen], ty, ty_text)),
            }
            cur = body;
        }
        out.push_str("forall ");
        for (k, (names, _, ty_text)) in groups.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            out.push_str(&names.join(","));
            out.push(':');
            out.push_str(ty_text);
        }
        out.push_str(". ");
        self.write(out, cur, FORALL);
        self.scope.truncate(depth);
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let avoid = self.labels().iter().map(|l| l.as_str().to_string()).collect();
        let mut p = Printer {
            avoid,
            scope: Vec::new(),
        };
        let mut out = String::new();
        p.write(&mut out, self, FORALL);
        f.write_str(&out)
    }
}
