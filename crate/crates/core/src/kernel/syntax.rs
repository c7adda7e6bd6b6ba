//! Lexer and expression grammar shared by judgment bodies and `.tpc` files.

use std::fmt;

use thiserror::Error;

use super::expr::{is_operator_char, BinderName, Expr, Label};
use crate::span::{Pos, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Op(String),
    Arrow,
    MapsTo,
    Assign,
    Colon,
    Semi,
    Comma,
    Dot,
    Equals,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Op(s) => write!(f, "operator `{s}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::MapsTo => f.write_str("`|->`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "forall", "and", "or", "not", "implies", "type", "Type", "Theory", "Empty", "extend",
    "extended", "by", "combine", "over", "axiom",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("expected {expected}, found {found}")]
pub struct SyntaxError {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′'
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (1u32, 1u32);
    let pos_at = |line, col| Pos { line, col };

    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        let start = pos_at(line, col);
        let single = match c {
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Equals),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '→' => Some(Tok::Arrow),
            '↦' => Some(Tok::MapsTo),
            '∀' => Some(Tok::Ident("forall".into())),
            _ => None,
        };
        let (tok, len) = if let Some(t) = single {
            (t, 1)
        } else if c == ':' {
            if chars.get(i + 1) == Some(&'=') {
                (Tok::Assign, 2)
            } else {
                (Tok::Colon, 1)
            }
        } else if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() {
                if is_ident_char(chars[j]) {
                    j += 1;
                } else if chars[j - 1] == '_' && is_operator_char(chars[j]) {
                    // `rightIdentity_*_e`: operators may follow an underscore.
                    while j < chars.len() && is_operator_char(chars[j]) {
                        j += 1;
                    }
                } else {
                    break;
                }
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if is_operator_char(c) {
            let mut j = i;
            while j < chars.len() && is_operator_char(chars[j]) {
                j += 1;
            }
            while j < chars.len() && (chars[j] == '\'' || chars[j] == '′') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let tok = match s.as_str() {
                "->" => Tok::Arrow,
                "|->" => Tok::MapsTo,
                _ => Tok::Op(s),
            };
            (tok, j - i)
        } else {
            return Err(SyntaxError {
                span: Span::new(start, start),
                expected: "a token".into(),
                found: format!("character `{c}`"),
            });
        };
        advance!(len);
        out.push(Token {
            tok,
            span: Span::new(start, pos_at(line, col)),
        });
    }
    let end = pos_at(line, col);
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(end, end),
    });
    Ok(out)
}

/// Recursive-descent parser over a token stream.
pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser {
            toks,
            pos: 0,
            scope: Vec::new(),
        }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    pub fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, expected: impl Into<String>) -> SyntaxError {
        SyntaxError {
            span: self.span(),
            expected: expected.into(),
            found: self.peek().to_string(),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Span, SyntaxError> {
        if self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.error(tok.to_string()))
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<Span, SyntaxError> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.error(format!("`{kw}`")))
        }
    }

    /// A plain identifier that is not a keyword.
    pub fn ident(&mut self, what: &str) -> Result<(String, Span), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.error(what.to_string())),
        }
    }

    /// A label in declaration or renaming position: `e`, `*` or `(*)`.
    pub fn label(&mut self) -> Result<(Label, Span), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let sp = self.bump().span;
                Ok((Label::new(s), sp))
            }
            Tok::Op(s) => {
                let sp = self.bump().span;
                Ok((Label::new(s), sp))
            }
            Tok::LParen if matches!(self.peek_at(1), Tok::Op(_)) && self.peek_at(2) == &Tok::RParen => {
                let start = self.bump().span;
                let Tok::Op(s) = self.bump().tok else {
                    unreachable!()
                };
                let end = self.bump().span;
                Ok((Label::new(s), start.to(end)))
            }
            _ => Err(self.error("a label")),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.or_expr()?;
        if self.eat_keyword("implies") {
            let rhs = self.expr()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.and_expr()?;
        while self.eat_keyword("or") {
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.not_expr()?;
        while self.eat_keyword("and") {
            let rhs = self.not_expr()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_keyword("not") {
            return Ok(Expr::Not(Box::new(self.not_expr()?)));
        }
        if self.at_keyword("forall") {
            return self.forall();
        }
        self.eq_expr()
    }

    fn forall(&mut self) -> Result<Expr, SyntaxError> {
        self.bump();
        let mut binders = Vec::new();
        loop {
            let mut names = vec![self.ident("a bound variable")?.0];
            while self.eat(&Tok::Comma) {
                names.push(self.ident("a bound variable")?.0);
            }
            self.expect(&Tok::Colon)?;
            let ty = self.arrow_expr()?;
            for n in names {
                binders.push((n, ty.clone()));
            }
            if self.eat(&Tok::Dot) {
                break;
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.error("`.`"));
            }
        }
        let depth = self.scope.len();
        for (n, _) in &binders {
            self.scope.push(n.clone());
        }
        let body = self.expr();
        self.scope.truncate(depth);
        let mut body = body?;
        // Binder types never mention the variables bound alongside them.
        for (n, ty) in binders.into_iter().rev() {
            body = Expr::Forall {
                name: BinderName(n),
                ty: Box::new(ty),
                body: Box::new(body),
            };
        }
        Ok(body)
    }

    fn eq_expr(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.arrow_expr()?;
        if self.eat(&Tok::Equals) {
            let rhs = self.arrow_expr()?;
            return Ok(Expr::eq(lhs, rhs));
        }
        Ok(lhs)
    }

    fn arrow_expr(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.infix_expr()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.arrow_expr()?;
            return Ok(Expr::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn infix_expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.app_expr()?;
        while let Tok::Op(op) = self.peek().clone() {
            self.bump();
            let rhs = self.app_expr()?;
            lhs = Expr::infix(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn app_expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut head = self.atom()?;
        while self.peek() == &Tok::LParen {
            self.bump();
            let mut args = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                args.push(self.expr()?);
            }
            self.expect(&Tok::RParen)?;
            head = Expr::apply(head, args);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "type" || s == "Type" => {
                self.bump();
                Ok(Expr::Universe)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(self.resolve(&s))
            }
            Tok::LParen => {
                if matches!(self.peek_at(1), Tok::Op(_)) && self.peek_at(2) == &Tok::RParen {
                    return Ok(Expr::Label(self.label()?.0));
                }
                self.bump();
                let mut items = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.expr()?);
                }
                self.expect(&Tok::RParen)?;
                if items.len() == 1 {
                    Ok(items.pop().unwrap())
                } else {
                    Ok(Expr::Product(items))
                }
            }
            _ => Err(self.error("an expression")),
        }
    }

    fn resolve(&self, name: &str) -> Expr {
        match self.scope.iter().rev().position(|n| n == name) {
            Some(i) => Expr::Bound(i),
            None => Expr::label(name),
        }
    }
}

/// Parse a single classifier, term or proposition.
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(lex(src)?);
    let e = p.expr()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}
