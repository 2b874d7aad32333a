//! The expression grammar shared by quadratic forms and variety classes.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (['*'] unary)*
//! unary := '-' unary | atom
//! atom  := INT | '(' expr ')'
//!        | '<' ['-'] INT ['/' INT] '>' | 'H'                     (gw)
//!        | 'Pt' | 'A^' INT | 'P^' INT | 'Gm' | 'Curve(g=' INT ')'
//!        | 'Et(' INT (',' INT)* ')' | 'Ab(' INT ')'
//!        | 'Sym^' INT '(' expr ')'                                (variety)
//! ```
//!
//! Juxtaposition is multiplication, so `2H` and `3<5>` are products.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::error::Result;
use crate::field::BaseField;
use crate::gw::GwElement;
use crate::variety::{sym_class, VarietyClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Gw,
    Variety,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    /// `<num/den>`; `den == 1` prints without a slash.
    Class { num: i64, den: i64 },
    Hyperbolic,
    Point,
    Affine(u32),
    Projective(u32),
    Torus,
    Curve(u32),
    Etale(Vec<i64>),
    Abelian(u32),
    Sym(u32, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> std::result::Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = text[start..i].parse::<i64>().map_err(|_| ParseError {
                position: start,
                message: "integer literal out of range".into(),
                expected: vec![],
            })?;
            toks.push((Tok::Int(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "<>/+-*()^,=".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or(c);
            return Err(ParseError { position: i, message: format!("unexpected character '{ch}'"), expected: vec![] });
        }
    }
    toks.push((Tok::End, text.len()));
    Ok(Lexer { toks })
}

const GW_ATOMS: &[&str] = &["integer", "'<'", "'H'", "'('", "'-'"];
const VARIETY_ATOMS: &[&str] =
    &["integer", "'Pt'", "'A'", "'P'", "'Gm'", "'Curve'", "'Et'", "'Ab'", "'Sym'", "'('", "'-'"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    kind: Kind,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>, expected: &[&str]) -> std::result::Result<T, ParseError> {
        Err(ParseError {
            position: self.at(),
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Int(v) => format!("unexpected integer {v}"),
            Tok::Ident(s) => format!("unexpected '{s}'"),
            Tok::Sym(c) => format!("unexpected '{c}'"),
            Tok::End => "unexpected end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> std::result::Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(self.describe(), &[&format!("'{c}'")])
        }
    }

    fn expect_int(&mut self) -> std::result::Result<i64, ParseError> {
        match *self.peek() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.fail(self.describe(), &["integer"]),
        }
    }

    fn expect_u32(&mut self) -> std::result::Result<u32, ParseError> {
        let at = self.at();
        let v = self.expect_int()?;
        u32::try_from(v).map_err(|_| ParseError { position: at, message: format!("{v} is too large"), expected: vec![] })
    }

    fn atoms(&self) -> &'static [&'static str] {
        match self.kind {
            Kind::Gw => GW_ATOMS,
            Kind::Variety => VARIETY_ATOMS,
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Ident(_) => true,
            Tok::Sym(c) => *c == '(' || (*c == '<' && self.kind == Kind::Gw),
            Tok::End => false,
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if *self.peek() == Tok::Sym('*') {
                self.bump();
            } else if !self.starts_atom() {
                return Ok(lhs);
            }
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('<') if self.kind == Kind::Gw => self.class(),
            Tok::Ident(name) => self.named(&name),
            _ => self.fail(self.describe(), self.atoms()),
        }
    }

    fn class(&mut self) -> std::result::Result<Expr, ParseError> {
        let start = self.at();
        self.bump();
        let negative = *self.peek() == Tok::Sym('-');
        if negative {
            self.bump();
        }
        let mut num = self.expect_int()?;
        if negative {
            num = -num;
        }
        let mut den = 1;
        if *self.peek() == Tok::Sym('/') {
            self.bump();
            let at = self.at();
            den = self.expect_int()?;
            if den == 0 {
                return Err(ParseError { position: at, message: "zero denominator".into(), expected: vec![] });
            }
        }
        self.expect_sym('>')?;
        if num == 0 {
            return Err(ParseError { position: start, message: "zero square class".into(), expected: vec![] });
        }
        Ok(Expr::Class { num, den })
    }

    fn named(&mut self, name: &str) -> std::result::Result<Expr, ParseError> {
        let gw_only = name == "H";
        let variety_only = matches!(name, "Pt" | "A" | "P" | "Gm" | "Curve" | "Et" | "Ab" | "Sym");
        if (gw_only && self.kind != Kind::Gw) || (variety_only && self.kind != Kind::Variety) || !(gw_only || variety_only) {
            return self.fail(format!("unknown name '{name}'"), self.atoms());
        }
        self.bump();
        match name {
            "H" => Ok(Expr::Hyperbolic),
            "Pt" => Ok(Expr::Point),
            "Gm" => Ok(Expr::Torus),
            "A" | "P" => {
                self.expect_sym('^')?;
                let n = self.expect_u32()?;
                Ok(if name == "A" { Expr::Affine(n) } else { Expr::Projective(n) })
            }
            "Curve" => {
                self.expect_sym('(')?;
                match self.peek() {
                    Tok::Ident(g) if g == "g" => {
                        self.bump();
                    }
                    _ => return self.fail(self.describe(), &["'g'"]),
                }
                self.expect_sym('=')?;
                let g = self.expect_u32()?;
                self.expect_sym(')')?;
                Ok(Expr::Curve(g))
            }
            "Et" => {
                self.expect_sym('(')?;
                let mut gens = Vec::new();
                loop {
                    let negative = *self.peek() == Tok::Sym('-');
                    if negative {
                        self.bump();
                    }
                    let at = self.at();
                    let v = self.expect_int()?;
                    if v == 0 {
                        return Err(ParseError { position: at, message: "zero square class".into(), expected: vec![] });
                    }
                    gens.push(if negative { -v } else { v });
                    match self.peek() {
                        Tok::Sym(',') => {
                            self.bump();
                        }
                        Tok::Sym(')') => {
                            self.bump();
                            return Ok(Expr::Etale(gens));
                        }
                        _ => return self.fail(self.describe(), &["','", "')'"]),
                    }
                }
            }
            "Ab" => {
                self.expect_sym('(')?;
                let d = self.expect_u32()?;
                self.expect_sym(')')?;
                Ok(Expr::Abelian(d))
            }
            "Sym" => {
                self.expect_sym('^')?;
                let n = self.expect_u32()?;
                self.expect_sym('(')?;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(Expr::Sym(n, Box::new(e)))
            }
            _ => unreachable!(),
        }
    }
}

/// Parses `text` as an expression of the given kind.
pub fn parse_expression(text: &str, kind: Kind) -> std::result::Result<Expr, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser { toks: lexer.toks, pos: 0, kind };
    if *p.peek() == Tok::End {
        return p.fail("empty expression", p.atoms());
    }
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let mut expected = vec!["'+'", "'-'", "'*'"];
        if p.kind == Kind::Gw {
            expected.push("'<'");
        }
        return p.fail(p.describe(), &expected);
    }
    Ok(e)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) => 1,
        Expr::Neg(_) => 2,
        _ => 3,
    }
}

struct Wrap<'a>(&'a Expr, bool);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Class { num, den: 1 } => write!(f, "<{num}>"),
            Expr::Class { num, den } => write!(f, "<{num}/{den}>"),
            Expr::Hyperbolic => write!(f, "H"),
            Expr::Point => write!(f, "Pt"),
            Expr::Affine(n) => write!(f, "A^{n}"),
            Expr::Projective(n) => write!(f, "P^{n}"),
            Expr::Torus => write!(f, "Gm"),
            Expr::Curve(g) => write!(f, "Curve(g={g})"),
            Expr::Etale(gens) => {
                let s: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "Et({})", s.join(","))
            }
            Expr::Abelian(d) => write!(f, "Ab({d})"),
            Expr::Sym(n, e) => write!(f, "Sym^{n}({e})"),
            Expr::Neg(e) => write!(f, "-{}", Wrap(e, precedence(e) < 2)),
            Expr::Add(a, b) => write!(f, "{a} + {}", Wrap(b, precedence(b) == 0)),
            Expr::Sub(a, b) => write!(f, "{a} - {}", Wrap(b, precedence(b) == 0)),
            Expr::Mul(a, b) => write!(f, "{} * {}", Wrap(a, precedence(a) == 0), Wrap(b, precedence(b) <= 1)),
        }
    }
}

/// Evaluates a gw-kind expression in `GW(field)`.
pub fn eval_gw(e: &Expr, field: BaseField) -> Result<GwElement> {
    Ok(match e {
        Expr::Int(v) => GwElement::from_int(field, *v),
        Expr::Class { num, den } => {
            let q = BigRational::new(BigInt::from(*num), BigInt::from(*den));
            GwElement::class(field, field.class_of_rational(&q)?)
        }
        Expr::Hyperbolic => GwElement::hyperbolic(field),
        Expr::Neg(a) => eval_gw(a, field)?.neg(),
        Expr::Add(a, b) => eval_gw(a, field)?.try_add(&eval_gw(b, field)?)?,
        Expr::Sub(a, b) => eval_gw(a, field)?.try_sub(&eval_gw(b, field)?)?,
        Expr::Mul(a, b) => eval_gw(a, field)?.try_mul(&eval_gw(b, field)?)?,
        other => {
            return Err(crate::error::Error::InvalidArgument(format!("{other} is not a quadratic form")));
        }
    })
}

/// Evaluates a variety-kind expression. `Sym^n` of a single curve (times an
/// affine space) stays symbolic; other symmetric powers are expanded.
pub fn eval_variety(e: &Expr, field: BaseField) -> Result<VarietyClass> {
    Ok(match e {
        Expr::Int(v) => VarietyClass::from_int(field, *v),
        Expr::Point => VarietyClass::point(field),
        Expr::Affine(n) => VarietyClass::affine(field, *n),
        Expr::Projective(n) => VarietyClass::projective(field, *n),
        Expr::Torus => VarietyClass::torus(field),
        Expr::Curve(g) => VarietyClass::curve(field, *g),
        Expr::Abelian(d) => VarietyClass::abelian(field, *d),
        Expr::Etale(gens) => {
            let classes = gens.iter().map(|&a| field.class_of_int(a)).collect::<Result<Vec<_>>>()?;
            VarietyClass::etale(field, &classes)?
        }
        Expr::Sym(n, a) => {
            let inner = eval_variety(a, field)?;
            match inner.as_curve_monomial() {
                Some((g, m)) => VarietyClass::sym_curve(field, g, *n).try_mul(&VarietyClass::affine(field, m * n))?,
                None => sym_class(&inner, *n as usize)?,
            }
        }
        Expr::Neg(a) => eval_variety(a, field)?.scale(-1),
        Expr::Add(a, b) => eval_variety(a, field)?.try_add(&eval_variety(b, field)?)?,
        Expr::Sub(a, b) => eval_variety(a, field)?.try_add(&eval_variety(b, field)?.scale(-1))?,
        Expr::Mul(a, b) => eval_variety(a, field)?.try_mul(&eval_variety(b, field)?)?,
        other => {
            return Err(crate::error::Error::InvalidArgument(format!("{other} is not a variety class")));
        }
    })
}

/// Parses and evaluates a quadratic form.
pub fn parse_gw(text: &str, field: BaseField) -> Result<GwElement> {
    eval_gw(&parse_expression(text, Kind::Gw)?, field)
}

/// Parses and evaluates a variety class.
pub fn parse_variety(text: &str, field: BaseField) -> Result<VarietyClass> {
    eval_variety(&parse_expression(text, Kind::Variety)?, field)
}
