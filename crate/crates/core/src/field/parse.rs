//! A small infix parser for tower elements, e.g. `(7 + i*sqrt15)/4`.
//!
//! Accepts integers, `+ - * / ^`, parentheses, `·` as a synonym for `*`,
//! basis names as printed by [`Tower::basis_name`], level names, and `omega`.
//! The canonical `Display` form parses back to the same element.

use std::sync::Arc;

use super::{FieldElement, FieldError, Tower};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, FieldError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut p = 0;
    while p < cs.len() {
        let c = cs[p];
        if c.is_whitespace() {
            p += 1;
        } else if c.is_ascii_digit() {
            let st = p;
            while p < cs.len() && cs[p].is_ascii_digit() {
                p += 1;
            }
            let t: String = cs[st..p].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| FieldError::Parse(format!("integer too large: {t}")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = p;
            while p < cs.len() && (cs[p].is_ascii_alphanumeric() || cs[p] == '_') {
                p += 1;
            }
            out.push(Tok::Ident(cs[st..p].iter().collect()));
        } else if "+-*/^()·".contains(c) {
            out.push(Tok::Op(if c == '·' { '*' } else { c }));
            p += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            p += 1;
        } else {
            return Err(FieldError::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    tower: &'a Arc<Tower>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                acc = acc.try_div(&self.unary()?)?;
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // implicit product, e.g. `5i` or `2(1+i)`
                acc = &acc * &self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElement, FieldError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    return base.pow(if neg { -n } else { n });
                }
                _ => return Err(FieldError::Parse("exponent must be an integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement, FieldError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(FieldElement::from_int(self.tower, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                ident(self.tower, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(FieldError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(FieldError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn ident(tower: &Arc<Tower>, name: &str) -> Result<FieldElement, FieldError> {
    if name == "omega" || name == "w" {
        return FieldElement::omega(tower);
    }
    for l in 0..tower.depth() {
        if tower.level_name(l) == name {
            return Ok(FieldElement::generator(tower, l));
        }
    }
    for mask in 0..tower.degree() {
        if tower.basis_name(mask) == name {
            return Ok(FieldElement::basis(tower, mask));
        }
    }
    // `sqrtN` for any N whose root is a product of adjoined roots, e.g. `sqrt15`.
    if let Some(n) = name.strip_prefix("sqrt").and_then(|r| r.parse::<i64>().ok()) {
        for mask in 0..tower.degree() {
            let b = FieldElement::basis(tower, mask);
            if (&b * &b).as_rational() == Some(num_rational::BigRational::from_integer(n.into())) {
                return Ok(b);
            }
        }
    }
    Err(FieldError::Parse(format!("unknown symbol {name:?} for {tower:?}")))
}

impl FieldElement {
    /// Parses an infix expression over `tower`.
    pub fn parse(tower: &Arc<Tower>, s: &str) -> Result<FieldElement, FieldError> {
        let toks = lex(s)?;
        let mut p = Parser { toks, pos: 0, tower };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(FieldError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}
