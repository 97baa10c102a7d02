//! Text grammar for field elements, polynomials, divisors, and reciprocity
//! datum files.
//!
//! Elements: integers, fractions `a/b`, variables by name, `+ - * / ^`, and
//! parentheses. Field specs: `Q`, `Fp(5)`, optionally followed by a variable
//! list like `Q(u,t)`. Datum files are line-based with `[section]`/`[f]`
//! blocks; see the repository documentation for the full format.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement, FunctionField};
use crate::picard::{Divisor, Place};
use crate::scalar::BaseField;
use crate::unipoly::{RatT, UniPoly};
use crate::weil::{FactoredRat, SlotKind, WeilDatum, WeilSection};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

fn lex(s: &str, line: usize) -> Result<Lexer> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                let v = text.parse::<i64>().map_err(|_| Error::Parse {
                    line,
                    col,
                    msg: format!("integer {text} out of range"),
                })?;
                toks.push((Tok::Int(v), col));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Name(bytes[start..i].iter().collect()), col));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0, line })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, c)| *c)
            .unwrap_or(1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        let col = self.col();
        match self.next() {
            Some(got) if &got == t => Ok(()),
            got => Err(Error::Parse {
                line: self.line,
                col,
                msg: format!("expected {t:?}, found {got:?}"),
            }),
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            col: self.col(),
            msg: msg.to_string(),
        })
    }
}

/// Expression tree; exponents are literal integers.
#[derive(Clone, Debug)]
pub enum Ast {
    Int(i64),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

pub fn parse_expr(s: &str) -> Result<Ast> {
    parse_expr_at(s, 1)
}

fn parse_expr_at(s: &str, line: usize) -> Result<Ast> {
    let mut lx = lex(s, line)?;
    let ast = parse_sum(&mut lx)?;
    if lx.peek().is_some() {
        return lx.err("trailing input");
    }
    Ok(ast)
}

fn parse_sum(lx: &mut Lexer) -> Result<Ast> {
    let mut acc = parse_product(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let rhs = parse_product(lx)?;
                acc = Ast::Add(Box::new(acc), Box::new(rhs));
            }
            Some(Tok::Minus) => {
                lx.next();
                let rhs = parse_product(lx)?;
                acc = Ast::Sub(Box::new(acc), Box::new(rhs));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_product(lx: &mut Lexer) -> Result<Ast> {
    let mut acc = parse_unary(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let rhs = parse_unary(lx)?;
                acc = Ast::Mul(Box::new(acc), Box::new(rhs));
            }
            Some(Tok::Slash) => {
                lx.next();
                let rhs = parse_unary(lx)?;
                acc = Ast::Div(Box::new(acc), Box::new(rhs));
            }
            // juxtaposition like `3T` or `2 u`
            Some(Tok::Name(_)) | Some(Tok::LParen) => {
                let rhs = parse_unary(lx)?;
                acc = Ast::Mul(Box::new(acc), Box::new(rhs));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_unary(lx: &mut Lexer) -> Result<Ast> {
    match lx.peek() {
        Some(Tok::Minus) => {
            lx.next();
            Ok(Ast::Neg(Box::new(parse_unary(lx)?)))
        }
        _ => parse_power(lx),
    }
}

fn parse_power(lx: &mut Lexer) -> Result<Ast> {
    let base = parse_atom(lx)?;
    if lx.peek() == Some(&Tok::Caret) {
        lx.next();
        let neg = if lx.peek() == Some(&Tok::Minus) {
            lx.next();
            true
        } else {
            false
        };
        match lx.next() {
            Some(Tok::Int(e)) => Ok(Ast::Pow(Box::new(base), if neg { -e } else { e })),
            _ => lx.err("exponent must be an integer literal"),
        }
    } else {
        Ok(base)
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Ast> {
    match lx.next() {
        Some(Tok::Int(v)) => Ok(Ast::Int(v)),
        Some(Tok::Name(n)) => Ok(Ast::Var(n)),
        Some(Tok::LParen) => {
            let inner = parse_sum(lx)?;
            lx.expect(&Tok::RParen)?;
            Ok(inner)
        }
        _ => lx.err("expected a value"),
    }
}

/// Evaluates an expression to a field element; names resolve to the field's
/// variables or extension generator.
pub fn eval_element(ast: &Ast, fld: &Fld) -> Result<FieldElement> {
    match ast {
        Ast::Int(v) => Ok(fld.from_i64(*v)),
        Ast::Var(n) => fld
            .var(n)
            .ok_or_else(|| Error::Invalid(format!("unknown name {n}"))),
        Ast::Neg(a) => Ok(eval_element(a, fld)?.neg()),
        Ast::Add(a, b) => Ok(eval_element(a, fld)?.add(&eval_element(b, fld)?)),
        Ast::Sub(a, b) => Ok(eval_element(a, fld)?.sub(&eval_element(b, fld)?)),
        Ast::Mul(a, b) => Ok(eval_element(a, fld)?.mul(&eval_element(b, fld)?)),
        Ast::Div(a, b) => eval_element(a, fld)?.div(&eval_element(b, fld)?),
        Ast::Pow(a, e) => eval_element(a, fld)?.pow(*e),
    }
}

/// Evaluates an expression to a rational function of one distinguished
/// variable over the field; every other name resolves inside the field.
pub fn eval_rational(ast: &Ast, fld: &Fld, var: &str) -> Result<RatT> {
    let one = || RatT::from_poly(UniPoly::one(fld.clone()));
    match ast {
        Ast::Int(v) => Ok(RatT::from_poly(UniPoly::constant(
            fld.clone(),
            fld.from_i64(*v),
        ))),
        Ast::Var(n) if n == var => Ok(RatT::from_poly(UniPoly::var(fld.clone()))),
        Ast::Var(n) => {
            let c = fld
                .var(n)
                .ok_or_else(|| Error::Invalid(format!("unknown name {n}")))?;
            Ok(RatT::from_poly(UniPoly::constant(fld.clone(), c)))
        }
        Ast::Neg(a) => Ok(eval_rational(a, fld, var)?.neg()),
        Ast::Add(a, b) => Ok(eval_rational(a, fld, var)?.add(&eval_rational(b, fld, var)?)),
        Ast::Sub(a, b) => Ok(eval_rational(a, fld, var)?.sub(&eval_rational(b, fld, var)?)),
        Ast::Mul(a, b) => Ok(eval_rational(a, fld, var)?.mul(&eval_rational(b, fld, var)?)),
        Ast::Div(a, b) => {
            let d = eval_rational(b, fld, var)?;
            Ok(eval_rational(a, fld, var)?.mul(&d.inv()?))
        }
        Ast::Pow(a, e) => {
            let base = eval_rational(a, fld, var)?;
            if base.is_zero() && *e <= 0 {
                return Err(Error::DivisionByZero);
            }
            let _ = one;
            base.pow(*e)
        }
    }
}

/// Evaluates to a polynomial of the distinguished variable (constant
/// denominator required).
pub fn eval_poly(ast: &Ast, fld: &Fld, var: &str) -> Result<UniPoly> {
    let r = eval_rational(ast, fld, var)?;
    if r.den.degree() != Some(0) {
        return Err(Error::Invalid("expected a polynomial, found a fraction".into()));
    }
    let inv = r.den.coeff(0).inv()?;
    Ok(r.num.mul_elem(&inv))
}

/// A polynomial in two fiber coordinates, as coefficients of the second.
#[derive(Clone, Debug)]
pub struct BiPoly {
    pub coeffs: Vec<UniPoly>,
}

/// Evaluates to a polynomial in `s_var` and `t_var` (homotopy families).
pub fn eval_bipoly(ast: &Ast, fld: &Fld, s_var: &str, t_var: &str) -> Result<BiPoly> {
    fn bi_add(fld: &Fld, a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let zero = UniPoly::zero(fld.clone());
            let x = a.get(i).unwrap_or(&zero).clone();
            let y = b.get(i).unwrap_or(&zero);
            out.push(x.add(y));
        }
        out
    }
    fn bi_mul(fld: &Fld, a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![UniPoly::zero(fld.clone()); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }
    let go = |ast: &Ast| eval_bipoly(ast, fld, s_var, t_var);
    let coeffs = match ast {
        Ast::Int(v) => vec![UniPoly::constant(fld.clone(), fld.from_i64(*v))],
        Ast::Var(n) if n == t_var => {
            vec![UniPoly::zero(fld.clone()), UniPoly::one(fld.clone())]
        }
        Ast::Var(n) if n == s_var => vec![UniPoly::var(fld.clone())],
        Ast::Var(n) => {
            let c = fld
                .var(n)
                .ok_or_else(|| Error::Invalid(format!("unknown name {n}")))?;
            vec![UniPoly::constant(fld.clone(), c)]
        }
        Ast::Neg(a) => go(a)?.coeffs.iter().map(|c| c.neg()).collect(),
        Ast::Add(a, b) => bi_add(fld, &go(a)?.coeffs, &go(b)?.coeffs),
        Ast::Sub(a, b) => {
            let nb: Vec<UniPoly> = go(b)?.coeffs.iter().map(|c| c.neg()).collect();
            bi_add(fld, &go(a)?.coeffs, &nb)
        }
        Ast::Mul(a, b) => bi_mul(fld, &go(a)?.coeffs, &go(b)?.coeffs),
        Ast::Div(_, _) => return Err(Error::Invalid("families must be polynomial".into())),
        Ast::Pow(a, e) => {
            if *e < 0 {
                return Err(Error::Invalid("families must be polynomial".into()));
            }
            let base = go(a)?.coeffs;
            let mut acc = vec![UniPoly::one(fld.clone())];
            for _ in 0..*e {
                acc = bi_mul(fld, &acc, &base);
            }
            acc
        }
    };
    let mut coeffs = coeffs;
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(BiPoly { coeffs })
}

/// Parses a field specification: `Q`, `Fp(5)`, `Q(u,t)`, `Fp(7)(u)`.
pub fn parse_field(spec: &str) -> Result<Fld> {
    let s = spec.trim();
    let bad = |msg: &str| Error::Parse {
        line: 1,
        col: 1,
        msg: msg.to_string(),
    };
    let (base, rest) = if let Some(rest) = s.strip_prefix("Fp(") {
        let close = rest.find(')').ok_or_else(|| bad("missing )"))?;
        let p: u64 = rest[..close]
            .trim()
            .parse()
            .map_err(|_| bad("bad characteristic"))?;
        (BaseField::prime(p)?, &rest[close + 1..])
    } else if let Some(rest) = s.strip_prefix('Q') {
        (BaseField::Rationals, rest)
    } else {
        return Err(bad("field spec must start with Q or Fp(p)"));
    };
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(Fld::Fun(FunctionField::new(base, &[])));
    }
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| bad("expected (vars)"))?;
    let vars: Vec<&str> = inner
        .split(',')
        .map(|v| v.trim())
        .filter(|v| !v.is_empty())
        .collect();
    Ok(Fld::Fun(FunctionField::new(base, &vars)))
}

/// Parses a divisor: `0`, or terms `m[poly]` joined by `+`, with `[inf]` for
/// the place at infinity. Example: `2[inf] + 1[t^2+1]`.
pub fn parse_divisor(s: &str, fld: &Fld, coord: &str, line: usize) -> Result<Divisor> {
    let s = s.trim();
    let mut d = Divisor::zero();
    if s == "0" || s.is_empty() {
        return Ok(d);
    }
    for term in split_top_plus(s) {
        let term = term.trim();
        let open = term.find('[').ok_or(Error::Parse {
            line,
            col: 1,
            msg: "divisor term needs [place]".into(),
        })?;
        let mult: i64 = if term[..open].trim().is_empty() {
            1
        } else {
            term[..open].trim().parse().map_err(|_| Error::Parse {
                line,
                col: 1,
                msg: "bad multiplicity".into(),
            })?
        };
        let inner = term[open + 1..]
            .strip_suffix(']')
            .ok_or(Error::Parse {
                line,
                col: 1,
                msg: "missing ]".into(),
            })?
            .trim();
        let place = if inner == "inf" {
            Place::Infinity
        } else {
            let ast = parse_expr_at(inner, line)?;
            let poly = eval_poly(&ast, fld, coord)?;
            if !poly.is_monic() {
                return Err(Error::Invalid(format!("place {inner} is not monic")));
            }
            Place::finite(poly)
        };
        d.insert(place, mult);
    }
    Ok(d)
}

fn split_top_plus(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => {
                depth += 1;
                cur.push(c);
            }
            ']' | ')' => {
                depth -= 1;
                cur.push(c);
            }
            '+' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

/// Parses a factored value: factors `(poly)^exp` joined by `*`, against the
/// separately supplied unit.
pub fn parse_factored(
    s: &str,
    unit: FieldElement,
    fld: &Fld,
    coord: &str,
    line: usize,
) -> Result<FactoredRat> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return FactoredRat::new(unit, vec![]);
    }
    let mut factors = Vec::new();
    for part in split_top_star(s) {
        let part = part.trim();
        let (body, exp) = match part.rfind('^') {
            Some(i) if depth_at(part, i) == 0 => {
                let e: i64 = part[i + 1..].trim().parse().map_err(|_| Error::Parse {
                    line,
                    col: 1,
                    msg: "bad exponent".into(),
                })?;
                (&part[..i], e)
            }
            _ => (part, 1),
        };
        let body = body
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body.trim());
        let ast = parse_expr_at(body, line)?;
        let poly = eval_poly(&ast, fld, coord)?;
        if poly.degree() == Some(0) {
            return Err(Error::Invalid("constant factors belong in the unit".into()));
        }
        if !poly.is_monic() {
            return Err(Error::Invalid(format!("factor {body} is not monic")));
        }
        factors.push((poly, exp));
    }
    FactoredRat::new(unit, factors)
}

fn depth_at(s: &str, idx: usize) -> i32 {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        if i >= idx {
            break;
        }
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
    }
    depth
}

fn split_top_star(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => {
                depth += 1;
                cur.push(c);
            }
            ']' | ')' => {
                depth -= 1;
                cur.push(c);
            }
            '*' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

/// Parses a reciprocity datum file. The format is line-based:
///
/// ```text
/// field: Q(u)
/// coord: t
///
/// [section]
/// kind: ga
/// unit: 1
/// value: (t + u)^1
/// modulus: 2[inf]
///
/// [f]
/// unit: 1
/// value: (t^2 + 2)^1 * (t^2 + 1)^-1
/// ```
pub fn parse_weil_file(text: &str) -> Result<WeilDatum> {
    let mut field: Option<Fld> = None;
    let mut coord = "t".to_string();
    let mut sections: Vec<WeilSection> = Vec::new();
    let mut f: Option<FactoredRat> = None;

    #[derive(Default)]
    struct Block {
        is_f: bool,
        kind: Option<SlotKind>,
        unit: Option<String>,
        value: Option<String>,
        modulus: Option<String>,
        line: usize,
    }
    let mut block: Option<Block> = None;

    let close_block = |blk: Block,
                           field: &Option<Fld>,
                           coord: &str,
                           sections: &mut Vec<WeilSection>,
                           f: &mut Option<FactoredRat>|
     -> Result<()> {
        let fld = field.clone().ok_or(Error::Parse {
            line: blk.line,
            col: 1,
            msg: "field must be declared before sections".into(),
        })?;
        let unit = match &blk.unit {
            None => fld.one(),
            Some(s) => eval_element(&parse_expr_at(s, blk.line)?, &fld)?,
        };
        let value = parse_factored(
            blk.value.as_deref().unwrap_or(""),
            unit,
            &fld,
            coord,
            blk.line,
        )?;
        if blk.is_f {
            *f = Some(value);
        } else {
            let kind = blk.kind.ok_or(Error::Parse {
                line: blk.line,
                col: 1,
                msg: "section needs kind: ga or gm".into(),
            })?;
            let modulus = parse_divisor(
                blk.modulus.as_deref().unwrap_or("0"),
                &fld,
                coord,
                blk.line,
            )?;
            sections.push(WeilSection {
                kind,
                value,
                modulus,
            });
        }
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line_nr = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[section]" || line == "[f]" {
            if let Some(blk) = block.take() {
                close_block(blk, &field, &coord, &mut sections, &mut f)?;
            }
            block = Some(Block {
                is_f: line == "[f]",
                line: line_nr,
                ..Default::default()
            });
            continue;
        }
        let (key, val) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                return Err(Error::Parse {
                    line: line_nr,
                    col: 1,
                    msg: "expected key: value".into(),
                })
            }
        };
        match (&mut block, key) {
            (None, "field") => field = Some(parse_field(val)?),
            (None, "coord") => coord = val.to_string(),
            (Some(blk), "kind") => {
                blk.kind = Some(match val {
                    "ga" => SlotKind::Ga,
                    "gm" => SlotKind::Gm,
                    other => {
                        return Err(Error::Parse {
                            line: line_nr,
                            col: 1,
                            msg: format!("unknown kind {other}"),
                        })
                    }
                })
            }
            (Some(blk), "unit") => blk.unit = Some(val.to_string()),
            (Some(blk), "value") => blk.value = Some(val.to_string()),
            (Some(blk), "modulus") => blk.modulus = Some(val.to_string()),
            (_, other) => {
                return Err(Error::Parse {
                    line: line_nr,
                    col: 1,
                    msg: format!("unknown key {other}"),
                })
            }
        }
    }
    if let Some(blk) = block.take() {
        close_block(blk, &field, &coord, &mut sections, &mut f)?;
    }

    let constant_field = field.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing field declaration".into(),
    })?;
    let f = f.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing [f] block".into(),
    })?;
    Ok(WeilDatum {
        constant_field,
        coord,
        sections,
        f,
    })
}

/// Parses coordinate tuples like `(3, -1)` into field elements.
pub fn parse_tuple(s: &str, fld: &Fld) -> Result<Vec<FieldElement>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(s.trim());
    inner
        .split(',')
        .map(|part| eval_element(&parse_expr(part.trim())?, fld))
        .collect()
}

/// Convenience: the function field K and its polynomial coordinate ring
/// variable for curve work, from a field spec that does not contain the
/// coordinate.
pub fn curve_setup(spec: &str, coord: &str) -> Result<(Fld, Arc<FunctionField>)> {
    let k = parse_field(spec)?;
    let ground = match &k {
        Fld::Fun(f) => f.clone(),
        Fld::Ext(_) => return Err(Error::Invalid("constant field must be transcendental".into())),
    };
    if ground.var_index(coord).is_some() {
        return Err(Error::Invalid(format!(
            "field spec must not contain the coordinate {coord}"
        )));
    }
    Ok((k, ground))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_grammar() {
        let k = parse_field("Q(u,t)").unwrap();
        let e = eval_element(&parse_expr("(1/2) u^2 - 3*t + 1").unwrap(), &k).unwrap();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let expect = u
            .mul(&u)
            .div(&k.from_i64(2))
            .unwrap()
            .sub(&t.mul(&k.from_i64(3)))
            .add(&k.one());
        assert_eq!(e, expect);
    }

    #[test]
    fn witt_series_grammar() {
        let k = parse_field("Fp(7)").unwrap();
        let p = eval_poly(&parse_expr("1 - 3T + 2T^2").unwrap(), &k, "T").unwrap();
        assert_eq!(p.coeff(0), k.one());
        assert_eq!(p.coeff(1), k.from_i64(-3));
        assert_eq!(p.coeff(2), k.from_i64(2));
    }

    #[test]
    fn field_spec_errors() {
        assert!(parse_field("Fp(6)").is_err());
        assert!(parse_field("Z").is_err());
        assert!(parse_field("Fp(5)(u,t)").is_ok());
    }

    #[test]
    fn bipoly_family() {
        let k = parse_field("Fp(5)").unwrap();
        let b = eval_bipoly(&parse_expr("T^3 - S").unwrap(), &k, "S", "T").unwrap();
        assert_eq!(b.coeffs.len(), 4);
        assert_eq!(b.coeffs[0], UniPoly::var(k.clone()).neg());
        assert!(b.coeffs[3].is_monic());
    }

    #[test]
    fn divisor_grammar() {
        let k = parse_field("Q(u)").unwrap();
        let d = parse_divisor("2[inf] + 1[t^2+1]", &k, "t", 1).unwrap();
        assert_eq!(d.multiplicity(&Place::Infinity), 2);
        assert_eq!(d.degree(), 2 + 2);
    }

    #[test]
    fn weil_file_roundtrip() {
        let text = r#"
# the worked example
field: Q(u)
coord: t

[section]
kind: ga
value: (t + u)^1
modulus: 2[inf]

[section]
kind: gm
unit: u

[f]
value: (t^2 + 2)^1 * (t^2 + 1)^-1
"#;
        let d = parse_weil_file(text).unwrap();
        assert_eq!(d.sections.len(), 2);
        assert_eq!(d.sections[0].kind, SlotKind::Ga);
        assert_eq!(d.f.factors.len(), 2);
        let rep = crate::weil::weil_validate(&d);
        assert!(rep.valid, "{:?}", rep.violations);
    }

    #[test]
    fn parse_error_position() {
        let err = parse_expr("1 + $").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
            }
            _ => panic!(),
        }
    }
}
