//! Operator expressions such as `s(0,1)*z(0,2) - 1/2*1(0)` and polynomial
//! literals such as `e1^2 - 3*e1*e2`.
//!
//! In `z(i,t)` the variable index `t` is 1-based, matching the printed names
//! `e1, e2, ...`; component and reflection indices are 0-based.

use crate::algebra::{Model, TwistedOperator};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{parse_q, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum OpExpr {
    Unit { i: usize, pos: usize },
    Var { i: usize, t: usize, pos: usize },
    Sigma { i: usize, s: usize, pos: usize },
    Scalar(Q),
    Neg(Box<OpExpr>),
    Add(Box<OpExpr>, Box<OpExpr>),
    Sub(Box<OpExpr>, Box<OpExpr>),
    Mul(Box<OpExpr>, Box<OpExpr>),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| Error::Parse { pos: at, msg: "index too large".into() })
    }

    /// `p` or `p/q`, no sign.
    fn rational(&mut self) -> Result<Q> {
        let at = self.pos;
        let n = self.digits()?;
        let mut text = n.to_string();
        let save = self.pos;
        if self.eat('/') {
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                text.push('/');
                text.push_str(self.digits()?);
            } else {
                self.pos = save;
            }
        }
        parse_q(&text).ok_or(Error::Parse { pos: at, msg: format!("bad rational {text:?}") })
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

pub fn parse_opexpr(text: &str) -> Result<OpExpr> {
    let mut lx = Lexer::new(text);
    let e = op_expr(&mut lx)?;
    lx.finish()?;
    Ok(e)
}

fn op_expr(lx: &mut Lexer) -> Result<OpExpr> {
    let mut acc = op_term(lx)?;
    loop {
        if lx.eat('+') {
            acc = OpExpr::Add(Box::new(acc), Box::new(op_term(lx)?));
        } else if lx.eat('-') {
            acc = OpExpr::Sub(Box::new(acc), Box::new(op_term(lx)?));
        } else {
            return Ok(acc);
        }
    }
}

fn op_term(lx: &mut Lexer) -> Result<OpExpr> {
    let mut acc = op_factor(lx)?;
    while lx.eat('*') {
        acc = OpExpr::Mul(Box::new(acc), Box::new(op_factor(lx)?));
    }
    Ok(acc)
}

fn op_factor(lx: &mut Lexer) -> Result<OpExpr> {
    let pos = {
        lx.skip_ws();
        lx.pos
    };
    match lx.peek() {
        Some('-') => {
            lx.pos += 1;
            Ok(OpExpr::Neg(Box::new(op_factor(lx)?)))
        }
        Some('(') => {
            lx.pos += 1;
            let e = op_expr(lx)?;
            lx.expect(')')?;
            Ok(e)
        }
        Some('z') | Some('s') => {
            let c = lx.peek().unwrap();
            lx.pos += 1;
            lx.expect('(')?;
            let i = lx.index()?;
            lx.expect(',')?;
            let k = lx.index()?;
            lx.expect(')')?;
            Ok(if c == 'z' { OpExpr::Var { i, t: k, pos } } else { OpExpr::Sigma { i, s: k, pos } })
        }
        Some(c) if c.is_ascii_digit() => {
            let save = lx.pos;
            let d = lx.digits()?;
            if d == "1" && lx.peek() == Some('(') {
                lx.expect('(')?;
                let i = lx.index()?;
                lx.expect(')')?;
                return Ok(OpExpr::Unit { i, pos });
            }
            lx.pos = save;
            Ok(OpExpr::Scalar(lx.rational()?))
        }
        Some(c) => lx.err(format!("unexpected '{c}'")),
        None => lx.err("unexpected end of input"),
    }
}

fn unknown(pos: usize, msg: String) -> Error {
    Error::UnknownIndex { pos, msg }
}

/// Evaluates against a model; scalars act as multiples of the identity.
pub fn evaluate(e: &OpExpr, model: &Model) -> Result<TwistedOperator> {
    let nc = model.ncomponents();
    let comp = |i: usize, pos: usize| {
        if i < nc {
            Ok(())
        } else {
            Err(unknown(pos, format!("component {i} out of range (have {nc})")))
        }
    };
    Ok(match e {
        OpExpr::Unit { i, pos } => {
            comp(*i, *pos)?;
            model.unit(*i)
        }
        OpExpr::Var { i, t, pos } => {
            comp(*i, *pos)?;
            if *t == 0 || *t > model.nvars() {
                return Err(unknown(*pos, format!("variable {t} out of range 1..={}", model.nvars())));
            }
            model.var(*i, t - 1)
        }
        OpExpr::Sigma { i, s, pos } => {
            comp(*i, *pos)?;
            if *s >= model.rank() {
                return Err(unknown(*pos, format!("reflection {s} out of range (rank {})", model.rank())));
            }
            model.sigma(*i, *s)
        }
        OpExpr::Scalar(c) => model.identity().scale(c),
        OpExpr::Neg(a) => -&evaluate(a, model)?,
        OpExpr::Add(a, b) => &evaluate(a, model)? + &evaluate(b, model)?,
        OpExpr::Sub(a, b) => &evaluate(a, model)? - &evaluate(b, model)?,
        OpExpr::Mul(a, b) => model.mul(&evaluate(a, model)?, &evaluate(b, model)?),
    })
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str, model: &Model) -> Result<TwistedOperator> {
    evaluate(&parse_opexpr(text)?, model)
}

/// Polynomial literal in `e1, ..., eN`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    let mut lx = Lexer::new(text);
    let p = poly_expr(&mut lx, nvars)?;
    lx.finish()?;
    Ok(p)
}

fn poly_expr(lx: &mut Lexer, n: usize) -> Result<Poly> {
    let mut acc = poly_term(lx, n)?;
    loop {
        if lx.eat('+') {
            acc = &acc + &poly_term(lx, n)?;
        } else if lx.eat('-') {
            acc = &acc - &poly_term(lx, n)?;
        } else {
            return Ok(acc);
        }
    }
}

fn poly_term(lx: &mut Lexer, n: usize) -> Result<Poly> {
    let mut acc = poly_power(lx, n)?;
    while lx.eat('*') {
        acc = &acc * &poly_power(lx, n)?;
    }
    Ok(acc)
}

fn poly_power(lx: &mut Lexer, n: usize) -> Result<Poly> {
    let base = poly_atom(lx, n)?;
    if lx.eat('^') {
        let e = lx.index()?;
        return Ok(base.pow(u32::try_from(e).unwrap_or(u32::MAX)));
    }
    Ok(base)
}

fn poly_atom(lx: &mut Lexer, n: usize) -> Result<Poly> {
    let pos = {
        lx.skip_ws();
        lx.pos
    };
    match lx.peek() {
        Some('-') => {
            lx.pos += 1;
            Ok(-&poly_power(lx, n)?)
        }
        Some('(') => {
            lx.pos += 1;
            let p = poly_expr(lx, n)?;
            lx.expect(')')?;
            Ok(p)
        }
        Some('e') => {
            lx.pos += 1;
            let k = lx.index()?;
            if k == 0 || k > n {
                return Err(unknown(pos, format!("variable e{k} out of range 1..={n}")));
            }
            Ok(Poly::var(n, k - 1))
        }
        Some(c) if c.is_ascii_digit() => Ok(Poly::constant(n, lx.rational()?)),
        Some(c) => lx.err(format!("unexpected '{c}'")),
        None => lx.err("unexpected end of input"),
    }
}
