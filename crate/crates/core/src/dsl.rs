//! Species expressions: parsing, printing and building.
//!
//! ```text
//! expr    := sum
//! sum     := product ('+' product)*
//! product := cart ('*' cart)*
//! cart    := comp ('&' comp)*
//! comp    := power ('o' power)*
//! power   := postfix ('^' INT)*
//! postfix := primary '\''*
//! primary := ATOM | 'free' '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! All binary operators are left associative. A standalone identifier `o` is
//! the composition operator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::species::{power, Atom, AtomKind, Cartesian, Compose, Derivative, FreeProduct, Product, SpeciesRef, Sum};
use crate::weights::{parse_weight, WeightRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpeciesExpr {
    Atom(String),
    Sum(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Product(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Cartesian(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Compose(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Derivative(Box<SpeciesExpr>),
    FreeProduct(Vec<SpeciesExpr>),
    Power(Box<SpeciesExpr>, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(usize),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Token::Ident(chars[start..i].iter().map(|c| c.1).collect())));
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().map(|c| c.1).collect();
            let value = digits.parse().map_err(|_| Error::Syntax { pos, msg: format!("integer `{digits}` too large") })?;
            out.push((pos, Token::Int(value)));
        } else if "+*&'^(),".contains(ch) {
            out.push((pos, Token::Sym(ch)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn eat_sym(&mut self, sym: char) -> bool {
        if self.peek() == Some(&Token::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_compose(&self) -> bool {
        matches!(self.peek(), Some(Token::Ident(s)) if s == "o")
    }

    fn binary(
        &mut self,
        next: fn(&mut Self) -> Result<SpeciesExpr>,
        matches: fn(&Self) -> bool,
        make: fn(Box<SpeciesExpr>, Box<SpeciesExpr>) -> SpeciesExpr,
    ) -> Result<SpeciesExpr> {
        let mut lhs = next(self)?;
        while matches(self) {
            self.pos += 1;
            let rhs = next(self)?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<SpeciesExpr> {
        self.binary(Self::product, |p| p.peek() == Some(&Token::Sym('+')), SpeciesExpr::Sum)
    }

    fn product(&mut self) -> Result<SpeciesExpr> {
        self.binary(Self::cart, |p| p.peek() == Some(&Token::Sym('*')), SpeciesExpr::Product)
    }

    fn cart(&mut self) -> Result<SpeciesExpr> {
        self.binary(Self::comp, |p| p.peek() == Some(&Token::Sym('&')), SpeciesExpr::Cartesian)
    }

    fn comp(&mut self) -> Result<SpeciesExpr> {
        self.binary(Self::power, Self::is_compose, SpeciesExpr::Compose)
    }

    fn power(&mut self) -> Result<SpeciesExpr> {
        let mut base = self.postfix()?;
        while self.eat_sym('^') {
            match self.peek() {
                Some(Token::Int(k)) => {
                    let k = *k;
                    self.pos += 1;
                    base = SpeciesExpr::Power(Box::new(base), k);
                }
                _ => return self.error("expected an integer exponent after `^`"),
            }
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<SpeciesExpr> {
        let mut e = self.primary()?;
        while self.eat_sym('\'') {
            e = SpeciesExpr::Derivative(Box::new(e));
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<SpeciesExpr> {
        match self.peek().cloned() {
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat_sym(')') {
                    return self.error("expected `)`");
                }
                Ok(e)
            }
            Some(Token::Ident(name)) if name == "free" => {
                self.pos += 1;
                if !self.eat_sym('(') {
                    return self.error("expected `(` after `free`");
                }
                if self.eat_sym(')') {
                    return Err(Error::Arity("`free` needs at least one operand".into()));
                }
                let mut args = vec![self.sum()?];
                while self.eat_sym(',') {
                    args.push(self.sum()?);
                }
                if !self.eat_sym(')') {
                    return self.error("expected `,` or `)`");
                }
                Ok(SpeciesExpr::FreeProduct(args))
            }
            Some(Token::Ident(name)) if name != "o" => {
                self.pos += 1;
                Ok(SpeciesExpr::Atom(name))
            }
            Some(_) => self.error("expected a species"),
            None => self.error("unexpected end of expression"),
        }
    }
}

/// Parses a species expression.
pub fn parse(text: &str) -> Result<SpeciesExpr> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0, end: text.len() };
    let e = p.sum()?;
    if p.pos != p.tokens.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

impl SpeciesExpr {
    fn precedence(&self) -> u8 {
        match self {
            SpeciesExpr::Sum(..) => 1,
            SpeciesExpr::Product(..) => 2,
            SpeciesExpr::Cartesian(..) => 3,
            SpeciesExpr::Compose(..) => 4,
            SpeciesExpr::Power(..) => 5,
            SpeciesExpr::Derivative(..) => 6,
            SpeciesExpr::Atom(_) | SpeciesExpr::FreeProduct(_) => 7,
        }
    }

    fn write(&self, out: &mut String, min: u8) {
        let paren = self.precedence() < min;
        if paren {
            out.push('(');
        }
        let mut infix = |l: &SpeciesExpr, op: &str, r: &SpeciesExpr, prec: u8| {
            l.write(out, prec);
            out.push_str(op);
            r.write(out, prec + 1);
        };
        match self {
            SpeciesExpr::Atom(name) => out.push_str(name),
            SpeciesExpr::Sum(l, r) => infix(l, " + ", r, 1),
            SpeciesExpr::Product(l, r) => infix(l, " * ", r, 2),
            SpeciesExpr::Cartesian(l, r) => infix(l, " & ", r, 3),
            SpeciesExpr::Compose(l, r) => infix(l, " o ", r, 4),
            SpeciesExpr::Power(e, k) => {
                e.write(out, 5);
                out.push_str(&format!("^{k}"));
            }
            SpeciesExpr::Derivative(e) => {
                e.write(out, 6);
                out.push('\'');
            }
            SpeciesExpr::FreeProduct(args) => {
                out.push_str("free(");
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    a.write(out, 0);
                }
                out.push(')');
            }
        }
        if paren {
            out.push(')');
        }
    }
}

/// Prints with the fewest parentheses the grammar needs.
impl fmt::Display for SpeciesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0);
        f.write_str(&s)
    }
}

/// Atom tags with their species and default weights.
#[derive(Clone, Debug)]
pub struct SpeciesRegistry {
    entries: BTreeMap<String, (SpeciesRef, Option<WeightRef>)>,
}

impl SpeciesRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// The concrete species; `A` defaults to `ω_A`, `D` and `Bal` to `q = 1/2`.
    pub fn standard() -> Self {
        let mut reg = Self::empty();
        let with = |w: &str| Some(parse_weight(w).expect("catalog weight"));
        let atoms = [
            (AtomKind::E, with("E")),
            (AtomKind::Eplus, with("Eplus")),
            (AtomKind::Epm, with("Epm")),
            (AtomKind::L, with("L")),
            (AtomKind::C, None),
            (AtomKind::X, None),
            (AtomKind::A, with("tree")),
            (AtomKind::D, with("digraph:0.5")),
            (AtomKind::Bal, with("ballot:0.5")),
            (AtomKind::Eps, None),
        ];
        for (kind, w) in atoms {
            let species: SpeciesRef = Arc::new(Atom::new(kind));
            reg.insert(kind.tag(), species, w).expect("distinct tags");
        }
        reg
    }

    pub fn insert(&mut self, tag: &str, species: SpeciesRef, weight: Option<WeightRef>) -> Result<()> {
        if self.entries.contains_key(tag) {
            return Err(Error::Parameter(format!("atom `{tag}` already registered")));
        }
        self.entries.insert(tag.to_string(), (species, weight));
        Ok(())
    }

    pub fn species(&self, tag: &str) -> Result<SpeciesRef> {
        self.entries.get(tag).map(|e| e.0.clone()).ok_or_else(|| Error::UnknownAtom(tag.to_string()))
    }

    pub fn weight(&self, tag: &str) -> Option<WeightRef> {
        self.entries.get(tag).and_then(|e| e.1.clone())
    }
}

impl Default for SpeciesRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

/// Builds the species an expression denotes.
pub fn build(expr: &SpeciesExpr, reg: &SpeciesRegistry) -> Result<SpeciesRef> {
    let b = |e: &SpeciesExpr| build(e, reg);
    Ok(match expr {
        SpeciesExpr::Atom(tag) => reg.species(tag)?,
        SpeciesExpr::Sum(l, r) => Arc::new(Sum::new(b(l)?, b(r)?)),
        SpeciesExpr::Product(l, r) => Arc::new(Product::new(b(l)?, b(r)?)),
        SpeciesExpr::Cartesian(l, r) => Arc::new(Cartesian::new(b(l)?, b(r)?)),
        SpeciesExpr::Compose(l, r) => Arc::new(Compose::new(b(l)?, b(r)?)?),
        SpeciesExpr::Derivative(e) => Arc::new(Derivative::new(b(e)?)),
        SpeciesExpr::FreeProduct(args) => Arc::new(FreeProduct::new(args.iter().map(b).collect::<Result<_>>()?)?),
        SpeciesExpr::Power(e, k) => power(b(e)?, *k),
    })
}

/// Parses and builds with the standard registry.
pub fn species(text: &str) -> Result<SpeciesRef> {
    build(&parse(text)?, &SpeciesRegistry::standard())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Box<SpeciesExpr> {
        Box::new(SpeciesExpr::Atom(s.into()))
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("X*E o A").unwrap(),
            SpeciesExpr::Product(atom("X"), Box::new(SpeciesExpr::Compose(atom("E"), atom("A"))))
        );
        assert_eq!(parse("A & A").unwrap(), SpeciesExpr::Cartesian(atom("A"), atom("A")));
        assert_eq!(parse("E'").unwrap(), SpeciesExpr::Derivative(atom("E")));
        assert_eq!(
            parse("L + E * L").unwrap(),
            SpeciesExpr::Sum(atom("L"), Box::new(SpeciesExpr::Product(atom("E"), atom("L"))))
        );
        assert_eq!(parse("E'^2").unwrap(), SpeciesExpr::Power(Box::new(SpeciesExpr::Derivative(atom("E"))), 2));
        assert_eq!(
            parse("E - L").unwrap_err(),
            Error::Syntax { pos: 2, msg: "unexpected character `-`".into() }
        );
    }

    #[test]
    fn left_associative() {
        assert_eq!(
            parse("E + L + C").unwrap(),
            SpeciesExpr::Sum(Box::new(SpeciesExpr::Sum(atom("E"), atom("L"))), atom("C"))
        );
    }

    #[test]
    fn printer_round_trips() {
        for text in ["X * E o A", "(E + L) * C", "E + (L + C)", "A & (A & A)", "(E * L)'", "free(L, E + X)", "(L o Eplus)^2", "E'^3"] {
            let e = parse(text).unwrap();
            assert_eq!(e.to_string(), text);
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("E +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(E"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("free()"), Err(Error::Arity(_))));
        assert!(matches!(parse("E^"), Err(Error::Syntax { .. })));
        assert!(matches!(species("Q"), Err(Error::UnknownAtom(_))));
        assert!(matches!(species("L o E"), Err(Error::Composition(_))));
    }

    #[test]
    fn build_examples() {
        assert_eq!(species("E + L").unwrap().enumerate(2).len(), 3);
        assert_eq!(species("L o Eplus").unwrap().enumerate(3).len(), 13);
        let a = species("A").unwrap();
        let p = species("X * E o A").unwrap();
        for n in 0..=5 {
            assert_eq!(p.enumerate(n).len(), a.enumerate(n).len());
        }
        assert_eq!(species("X^3").unwrap().enumerate(3).len(), 6);
    }

    #[test]
    fn species_names_parse_back() {
        for text in ["A & (A & A)", "free(L, E)", "(E * L)'", "E + L * C"] {
            let s = species(text).unwrap();
            let again = species(&s.name()).unwrap();
            assert_eq!(again.name(), s.name());
            assert_eq!(again.enumerate(3).len(), s.enumerate(3).len());
        }
    }
}
