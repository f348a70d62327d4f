//! Text form of calculus elements, shared by fixtures and the command line.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := jux (('*' | '/') jux)*        '*' is the star product when enabled
//! jux   := unary power*                  juxtaposition is the plain product
//! unary := '-' unary | power
//! power := atom ('^' int)?
//! atom  := int | ident | '(' expr ')'
//! ```
//!
//! Identifiers: `x0` (the unit), `x1..`, `xi1..`, `d1..` (Cartesian);
//! `y+ y- y0`, `eta+ eta- eta0`, `d+ d- d0`, upper derivatives
//! `D+ = 2a d-`, `D- = 2a d+`, `D0 = d0`, the vector fields `H E+ E-`
//! (weight frame); scalars `nu I sqrtA sqrtB c a b`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::calculus::{CalcElement, Frame, Monomial, MINUS, PLUS, ZERO};
use crate::error::{Error, Result};
use crate::scalar::{fmt_atom, join_signed, Scalar, Surds};

type StarFn<'a> = dyn Fn(&CalcElement, &CalcElement) -> Result<CalcElement> + 'a;

/// Everything the parser needs to resolve identifiers.
pub struct ExprContext<'a> {
    pub surds: Arc<Surds>,
    /// Dimension used for Cartesian identifiers.
    pub n: usize,
    /// Frame for expressions that contain no frame-specific generator.
    pub default_frame: Frame,
    /// Value substituted for `c`.
    pub c: Scalar,
    /// When set, `*` means this product instead of the plain one.
    pub star: Option<Box<StarFn<'a>>>,
}

impl<'a> ExprContext<'a> {
    pub fn new(surds: Arc<Surds>) -> Self {
        ExprContext { surds, n: 3, default_frame: Frame::Weight, c: Scalar::c_pow(1), star: None }
    }

    pub fn cartesian(surds: Arc<Surds>, n: usize) -> Self {
        ExprContext { surds, n, default_frame: Frame::Cartesian, c: Scalar::c_pow(1), star: None }
    }

    pub fn with_star(mut self, f: impl Fn(&CalcElement, &CalcElement) -> Result<CalcElement> + 'a) -> Self {
        self.star = Some(Box::new(f));
        self
    }

    pub fn with_c(mut self, c: Scalar) -> Self {
        self.c = c;
        self
    }
}

/// The weight-frame vector fields `H`, `E+`, `E-`.
pub fn sl2_fields(surds: &Arc<Surds>) -> [CalcElement; 3] {
    let w = Frame::Weight;
    let y = |i| CalcElement::x(w, 3, i);
    let d = |i| CalcElement::d(w, 3, i);
    let sa = Scalar::sqrt_a(surds);
    let inv_sa = sa.inverse_unit().expect("sqrtA invertible");
    let two_sa = &Scalar::from_int(2) * &sa;
    let h = &(&y(PLUS) * &d(PLUS)).scale(&Scalar::from_int(2)) - &(&y(MINUS) * &d(MINUS)).scale(&Scalar::from_int(2));
    let ep = &(&y(PLUS) * &d(ZERO)).scale(&inv_sa) - &(&y(ZERO) * &d(MINUS)).scale(&two_sa);
    let em = &(&y(MINUS) * &d(ZERO)).scale(&inv_sa) - &(&y(ZERO) * &d(PLUS)).scale(&two_sa);
    [h, ep, em]
}

/// Upper-index derivative `D^i`: `D+ = 2a d-`, `D- = 2a d+`, `D0 = d0`.
pub fn upper_derivative(i: usize, surds: &Arc<Surds>) -> CalcElement {
    let two_a = Scalar::from_rational(&surds.a * BigRational::from_integer(2.into()));
    match i {
        PLUS => CalcElement::d(Frame::Weight, 3, MINUS).scale(&two_a),
        MINUS => CalcElement::d(Frame::Weight, 3, PLUS).scale(&two_a),
        _ => CalcElement::d(Frame::Weight, 3, ZERO),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if ch.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].parse().unwrap())));
            continue;
        }
        if ch.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                i += 1;
            }
            let base = &src[start..i];
            let digits_start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i == digits_start
                && matches!(base, "y" | "eta" | "d" | "D" | "E")
                && i < bytes.len()
                && matches!(bytes[i], b'+' | b'-')
            {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        }
        if "+-*/^()".contains(ch) {
            out.push((start, Tok::Op(ch)));
            i += 1;
            continue;
        }
        return Err(Error::Parse { pos: start, msg: format!("unexpected character '{ch}'") });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Scalar),
    Elem(CalcElement),
}

struct Parser<'c, 'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'c ExprContext<'a>,
}

impl<'c, 'a> Parser<'c, 'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let at = self.here();
            if self.eat_op('+') {
                let rhs = self.term()?;
                acc = self.combine(acc, rhs, at, |a, b| Ok(a + b), |a, b| Ok(a + b))?;
            } else if self.eat_op('-') {
                let rhs = self.term()?;
                acc = self.combine(acc, rhs, at, |a, b| Ok(a - b), |a, b| Ok(a - b))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.jux()?;
        loop {
            let at = self.here();
            if self.eat_op('*') {
                let rhs = self.jux()?;
                acc = match &self.ctx.star {
                    Some(star) => self.combine(acc, rhs, at, |a, b| Ok(a * b), |a, b| star(a, b))?,
                    None => self.combine(acc, rhs, at, |a, b| Ok(a * b), |a, b| a.try_mul(b, None))?,
                };
            } else if self.eat_op('/') {
                let rhs = self.jux()?;
                let inv = match rhs {
                    Value::Scalar(s) => s.inverse_unit(),
                    Value::Elem(_) => None,
                };
                match inv {
                    Some(inv) => acc = self.scale(acc, &inv),
                    None => {
                        return Err(Error::Parse {
                            pos: at,
                            msg: "division needs an invertible scalar monomial".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn jux(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        while self.starts_atom() {
            let at = self.here();
            let rhs = self.power()?;
            acc = self.combine(acc, rhs, at, |a, b| Ok(a * b), |a, b| a.try_mul(b, None))?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat_op('-') {
            let v = self.unary()?;
            return Ok(self.scale(v, &Scalar::from_int(-1)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let exp = match self.peek() {
            Some(Tok::Num(k)) => k.to_u32(),
            _ => None,
        };
        let Some(exp) = exp else {
            return self.err("exponent must be a non-negative integer");
        };
        self.pos += 1;
        Ok(match base {
            Value::Scalar(s) => Value::Scalar(s.pow(exp)),
            Value::Elem(e) => {
                let mut acc = e.one_like();
                for _ in 0..exp {
                    acc = &acc * &e;
                }
                Value::Elem(acc)
            }
        })
    }

    fn atom(&mut self) -> Result<Value> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                // `p/q` directly between digits is a single rational literal
                if let (Some(Tok::Op('/')), Some((_, Tok::Num(q)))) = (self.peek(), self.toks.get(self.pos + 1)) {
                    let q = q.clone();
                    if q == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    self.pos += 2;
                    return Ok(Value::Scalar(Scalar::from_rational(BigRational::new(k, q))));
                }
                Ok(Value::Scalar(Scalar::from_rational(BigRational::from_integer(k))))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat_op(')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ident(&name).ok_or_else(|| Error::Parse { pos: at, msg: format!("unknown identifier '{name}'") })
            }
            Some(Tok::Op(op)) => self.err(format!("unexpected '{op}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn ident(&self, name: &str) -> Option<Value> {
        let s = &self.ctx.surds;
        let n = self.ctx.n;
        let w = Frame::Weight;
        let c = Frame::Cartesian;
        let weight_index = |suffix: &str| match suffix {
            "+" => Some(PLUS),
            "-" => Some(MINUS),
            "0" => Some(ZERO),
            _ => None,
        };
        let cart_index = |suffix: &str| -> Option<usize> {
            let i: usize = suffix.parse().ok()?;
            (1..=n).contains(&i).then(|| i - 1)
        };
        let scalar = |v: Scalar| Some(Value::Scalar(v));
        match name {
            "x0" => return scalar(Scalar::one()),
            "nu" => return scalar(Scalar::nu()),
            "I" => return scalar(Scalar::i()),
            "sqrtA" => return scalar(Scalar::sqrt_a(s)),
            "sqrtB" => return scalar(Scalar::sqrt_b(s)),
            "a" => return scalar(Scalar::a(s)),
            "b" => return scalar(Scalar::b(s)),
            "c" => return scalar(self.ctx.c.clone()),
            "H" => return Some(Value::Elem(sl2_fields(s)[0].clone())),
            "E+" => return Some(Value::Elem(sl2_fields(s)[1].clone())),
            "E-" => return Some(Value::Elem(sl2_fields(s)[2].clone())),
            _ => {}
        }
        let elem = |e: CalcElement| Some(Value::Elem(e));
        if let Some(rest) = name.strip_prefix("eta") {
            return elem(CalcElement::xi(w, 3, weight_index(rest)?));
        }
        if let Some(rest) = name.strip_prefix("xi") {
            return elem(CalcElement::xi(c, n, cart_index(rest)?));
        }
        if let Some(rest) = name.strip_prefix('y') {
            return elem(CalcElement::x(w, 3, weight_index(rest)?));
        }
        if let Some(rest) = name.strip_prefix('D') {
            return elem(upper_derivative(weight_index(rest)?, s));
        }
        if let Some(rest) = name.strip_prefix('x') {
            return elem(CalcElement::x(c, n, cart_index(rest)?));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(i) = weight_index(rest) {
                return elem(CalcElement::d(w, 3, i));
            }
            return elem(CalcElement::d(c, n, cart_index(rest)?));
        }
        None
    }

    fn scale(&self, v: Value, s: &Scalar) -> Value {
        match v {
            Value::Scalar(x) => Value::Scalar(&x * s),
            Value::Elem(e) => Value::Elem(e.scale(s)),
        }
    }

    fn combine(
        &self,
        a: Value,
        b: Value,
        at: usize,
        on_scalars: impl Fn(Scalar, Scalar) -> Result<Scalar>,
        on_elems: impl Fn(&CalcElement, &CalcElement) -> Result<CalcElement>,
    ) -> Result<Value> {
        let locate = |e: Error| match e {
            Error::Frame(msg) => Error::Parse { pos: at, msg: format!("cannot mix frames: {msg}") },
            other => other,
        };
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(on_scalars(x, y)?)),
            (Value::Scalar(x), Value::Elem(e)) => {
                let lift = CalcElement::scalar(e.frame(), e.dim(), x);
                Ok(Value::Elem(on_elems(&lift, &e).map_err(locate)?))
            }
            (Value::Elem(e), Value::Scalar(y)) => {
                let lift = CalcElement::scalar(e.frame(), e.dim(), y);
                Ok(Value::Elem(on_elems(&e, &lift).map_err(locate)?))
            }
            (Value::Elem(e), Value::Elem(f)) => {
                e.check_compatible(&f).map_err(locate)?;
                Ok(Value::Elem(on_elems(&e, &f).map_err(locate)?))
            }
        }
    }
}

fn run_parser(src: &str, ctx: &ExprContext<'_>) -> Result<Value> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: src.len(), ctx };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parse an expression into a calculus element.
pub fn parse(src: &str, ctx: &ExprContext<'_>) -> Result<CalcElement> {
    Ok(match run_parser(src, ctx)? {
        Value::Scalar(s) => CalcElement::scalar(ctx.default_frame, default_dim(ctx), s),
        Value::Elem(e) => e,
    })
}

fn default_dim(ctx: &ExprContext<'_>) -> usize {
    match ctx.default_frame {
        Frame::Weight => 3,
        Frame::Cartesian => ctx.n,
    }
}

/// Parse a scalar-valued expression such as `"-1/2"` or `"2*I*sqrtA"`.
pub fn parse_scalar(src: &str, surds: &Arc<Surds>) -> Result<Scalar> {
    let ctx = ExprContext::new(surds.clone());
    match run_parser(src, &ctx)? {
        Value::Scalar(s) => Ok(s),
        Value::Elem(_) => Err(Error::Parse { pos: 0, msg: format!("'{src}' is not a scalar") }),
    }
}

/// Text of a basis monomial, e.g. `eta+ y+^2 d0`. The unit renders empty.
pub fn monomial_text(m: &Monomial, frame: Frame, n: usize) -> String {
    let mut parts = Vec::new();
    let name = |prefix: &str, wprefix: &str, i: usize| -> String {
        match frame {
            Frame::Cartesian => format!("{prefix}{}", i + 1),
            Frame::Weight => format!("{wprefix}{}", ["+", "-", "0"][i]),
        }
    };
    let power = |base: String, e: u16| if e == 1 { base } else { format!("{base}^{e}") };
    for i in m.xi_indices() {
        parts.push(name("xi", "eta", i));
    }
    for i in 0..n {
        if m.x[i] > 0 {
            parts.push(power(name("x", "y", i), m.x[i]));
        }
    }
    for i in 0..n {
        if m.d[i] > 0 {
            parts.push(power(name("d", "d", i), m.d[i]));
        }
    }
    parts.join(" ")
}

impl fmt::Display for CalcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows = Vec::new();
        for (m, c) in self.terms() {
            for (k, r, im) in c.atoms() {
                rows.push((k.nu, *m, k, im, r));
            }
        }
        rows.sort_by(|a, b| (a.0, &a.1, &a.2, a.3).cmp(&(b.0, &b.1, &b.2, b.3)));
        let items = rows
            .iter()
            .map(|(_, m, k, im, r)| {
                let text = monomial_text(m, self.frame(), self.dim());
                let tail = (!m.is_unit()).then_some(text.as_str());
                fmt_atom(k, r, *im, tail)
            })
            .collect();
        f.write_str(&join_signed(items))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ExprContext<'static> {
        ExprContext::new(Surds::unit())
    }

    #[test]
    fn juxtaposition_is_plain_product() {
        let e = parse("d0 y0", &ctx()).unwrap();
        assert_eq!(e.to_string(), "1 + y0 d0");
    }

    #[test]
    fn rendering_order() {
        let e = parse("2*nu^2*y+^2 + y+ y- + 2*I*nu*sqrtA*y+ y0", &ctx()).unwrap();
        assert_eq!(e.to_string(), "y+ y- + 2*I*nu*sqrtA*y+ y0 + 2*nu^2*y+^2");
    }

    #[test]
    fn unit_and_zero() {
        assert_eq!(parse("x0", &ctx()).unwrap().to_string(), "1");
        assert_eq!(parse("y+ - y+", &ctx()).unwrap().to_string(), "0");
        assert_eq!(parse("-1/2 y0", &ctx()).unwrap().to_string(), "-1/2*y0");
    }

    #[test]
    fn upper_derivatives() {
        let s = Surds::from_ints(3, 1);
        let c = ExprContext::new(s);
        assert_eq!(parse("D+", &c).unwrap().to_string(), "6*d-");
        assert_eq!(parse("D0", &c).unwrap().to_string(), "d0");
    }

    #[test]
    fn frame_mixing_is_an_error() {
        let err = parse("x1 + y+", &ctx()).unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 3, .. }), "{err:?}");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(parse("y+ + ", &ctx()), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse("y+ $", &ctx()), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("q7", &ctx()), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn round_trip_text() {
        let c = ctx();
        for src in ["eta+ eta0 y-^2 d+", "3/4*I*nu*y0 - sqrtA*c", "H", "E+ + E-"] {
            let e = parse(src, &c).unwrap();
            assert_eq!(parse(&e.to_string(), &c).unwrap(), e, "{src}");
        }
    }

    #[test]
    fn sl2_fields_text() {
        let [h, ep, _] = sl2_fields(&Surds::unit());
        assert_eq!(h.to_string(), "2*y+ d+ - 2*y- d-");
        // with a = 1 the formal surd still prints: 1/sqrtA = sqrtA/a
        assert_eq!(ep.to_string(), "sqrtA*y+ d0 - 2*sqrtA*y0 d-");
    }
}
