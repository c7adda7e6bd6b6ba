use super::ast::{Def, Judgment, NameRef, RenameSpec, TpcTerm};
use crate::kernel::syntax::{lex, Parser, Tok};
use crate::kernel::SyntaxError;

/// Parse a `.tpc` file into its definitions.
pub fn parse_tpc(src: &str) -> Result<Vec<Def>, SyntaxError> {
    let mut p = Parser::new(lex(src)?);
    let mut defs = Vec::new();
    while p.peek() != &Tok::Eof {
        defs.push(def(&mut p)?);
    }
    Ok(defs)
}

fn def(p: &mut Parser) -> Result<Def, SyntaxError> {
    let (name, name_span) = p.ident("a theory name")?;
    p.expect(&Tok::Assign)?;
    let term = term(p)?;
    Ok(Def {
        name,
        name_span,
        term,
        span: name_span.to(p.prev_span()),
    })
}

fn name(p: &mut Parser) -> Result<NameRef, SyntaxError> {
    let (name, span) = p.ident("a theory name")?;
    Ok(NameRef { name, span })
}

fn term(p: &mut Parser) -> Result<TpcTerm, SyntaxError> {
    if p.eat_keyword("Empty") {
        return Ok(TpcTerm::Empty);
    }
    if p.eat_keyword("Theory") {
        return Ok(TpcTerm::Theory { body: body(p)? });
    }
    if p.eat_keyword("extend") {
        let base = name(p)?;
        p.expect_keyword("by")?;
        return Ok(TpcTerm::Extend { base, body: body(p)? });
    }
    if p.eat_keyword("combine") {
        let left = name(p)?;
        let left_ren = renaming(p)?;
        p.expect(&Tok::Comma)?;
        let right = name(p)?;
        let right_ren = renaming(p)?;
        let over = if p.eat_keyword("over") { Some(name(p)?) } else { None };
        return Ok(TpcTerm::Combine {
            left,
            left_ren,
            right,
            right_ren,
            over,
        });
    }
    let base = match name(p) {
        Ok(n) => n,
        Err(_) => return Err(p.error("a theory expression")),
    };
    if p.eat_keyword("extended") {
        p.expect_keyword("by")?;
        return Ok(TpcTerm::Extend { base, body: body(p)? });
    }
    if p.eat(&Tok::Semi) {
        let second = name(p)?;
        return Ok(TpcTerm::Seq { first: base, second });
    }
    let ren = renaming(p)?;
    Ok(TpcTerm::Rename { base, ren })
}

/// An optional `[a |-> b, ...]`.
fn renaming(p: &mut Parser) -> Result<RenameSpec, SyntaxError> {
    if p.peek() != &Tok::LBracket {
        let at = p.span();
        return Ok(RenameSpec {
            pairs: Vec::new(),
            span: crate::Span::new(at.start, at.start),
        });
    }
    let start = p.bump().span;
    let mut pairs = Vec::new();
    if p.peek() != &Tok::RBracket {
        loop {
            let (a, _) = p.label()?;
            p.expect(&Tok::MapsTo)?;
            let (b, _) = p.label()?;
            pairs.push((a, b));
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
    }
    let end = p.expect(&Tok::RBracket)?;
    Ok(RenameSpec {
        pairs,
        span: start.to(end),
    })
}

fn body(p: &mut Parser) -> Result<Vec<Judgment>, SyntaxError> {
    p.expect(&Tok::LBrace)?;
    let mut out = Vec::new();
    loop {
        if p.eat(&Tok::RBrace) {
            return Ok(out);
        }
        out.push(judgment(p)?);
        if !p.eat(&Tok::Semi) {
            p.expect(&Tok::RBrace)?;
            return Ok(out);
        }
    }
}

fn judgment(p: &mut Parser) -> Result<Judgment, SyntaxError> {
    let start = p.span();
    let axiom = p.eat_keyword("axiom");
    let (label, _) = p.label()?;
    p.expect(&Tok::Colon)?;
    let classifier = p.expr()?;
    Ok(Judgment {
        label,
        classifier,
        axiom,
        span: start.to(p.prev_span()),
    })
}
