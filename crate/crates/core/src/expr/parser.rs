use std::fmt;

use thiserror::Error;

use super::{BinOp, Constant, Expr, Func};

/// A syntax error at byte `offset` of the source.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    Comma,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent only when digits follow, so `2e` stays `2` then `e`
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| ParseError::new(start, format!("malformed number `{text}`")))?;
                out.push((start, Tok::Num(v)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'.')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => out.push((start, Tok::Op(c as char))),
            b',' => out.push((start, Tok::Comma)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::new(
                    start,
                    format!("unexpected character `{ch}`"),
                ));
            }
        }
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::new(
            self.offset(),
            format!("expected {expected}, found {}", self.peek()),
        )
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::negation(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Number(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                self.ident(&name, at)
            }
            _ => Err(self.unexpected("a number, `x`, `u`, a function call or `(`")),
        }
    }

    fn ident(&mut self, name: &str, at: usize) -> Result<Expr, ParseError> {
        match name {
            "x" => return Ok(Expr::X),
            "u" => return Ok(Expr::Diff(0)),
            "pi" | "math.pi" => return Ok(Expr::Const(Constant::Pi)),
            "e" | "math.e" => return Ok(Expr::Const(Constant::E)),
            "diff" => return self.diff(),
            _ => {}
        }
        let bare = name.strip_prefix("math.").unwrap_or(name);
        let func = Func::from_name(bare).ok_or_else(|| {
            ParseError::new(
                at,
                format!(
                    "unknown function or variable `{name}` (supported: x, u, pi, e, diff, {})",
                    Func::ALL.map(Func::name).join(", ")
                ),
            )
        })?;
        self.expect(Tok::LParen, &format!("`(` after `{bare}`"))?;
        let arg = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(Expr::call(func, arg))
    }

    fn diff(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "`(` after `diff`")?;
        match self.peek() {
            Tok::Ident(s) if s == "u" => {
                self.bump();
            }
            _ => return Err(self.unexpected("`u` as the first argument of diff")),
        }
        let mut order = 1;
        if *self.peek() == Tok::Comma {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Tok::Num(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    order = v as u32;
                }
                Tok::Num(v) => {
                    return Err(ParseError::new(
                        at,
                        format!("diff order must be a non-negative integer, found {v}"),
                    ))
                }
                t => {
                    return Err(ParseError::new(
                        at,
                        format!("expected integer diff order, found {t}"),
                    ))
                }
            }
        }
        self.expect(Tok::RParen, "`)` closing diff")?;
        Ok(Expr::Diff(order))
    }
}

/// Parse an expression in the ODE language.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(source)?;
    if toks.len() == 1 {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(v: f64) -> Expr {
        Expr::Number(v)
    }

    #[test]
    fn example_inputs() {
        assert_eq!(parse("diff(u,2)").unwrap(), Expr::Diff(2));
        assert_eq!(
            parse("math.exp(2*x)").unwrap(),
            Expr::call(Func::Exp, Expr::binary(BinOp::Mul, num(2.0), Expr::X))
        );
        assert_eq!(
            parse("diff(u,2) + 2*diff(u) + 3*u").unwrap(),
            Expr::binary(
                BinOp::Add,
                Expr::binary(
                    BinOp::Add,
                    Expr::Diff(2),
                    Expr::binary(BinOp::Mul, num(2.0), Expr::Diff(1))
                ),
                Expr::binary(BinOp::Mul, num(3.0), Expr::Diff(0))
            )
        );
    }

    #[test]
    fn diff_forms() {
        assert_eq!(parse("diff(u)").unwrap(), Expr::Diff(1));
        assert_eq!(parse("diff( u , 0 )").unwrap(), Expr::Diff(0));
        assert_eq!(parse("diff(u,3)").unwrap(), Expr::Diff(3));
    }

    #[test]
    fn precedence_shapes() {
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::negation(Expr::binary(BinOp::Pow, Expr::X, num(2.0)))
        );
        assert_eq!(
            parse("2^3^2").unwrap(),
            Expr::binary(
                BinOp::Pow,
                num(2.0),
                Expr::binary(BinOp::Pow, num(3.0), num(2.0))
            )
        );
    }

    #[test]
    fn errors_are_positioned() {
        let cases: [(&str, usize); 12] = [
            ("", 0),
            ("   ", 0),
            ("2 +", 3),
            ("(x", 2),
            ("x)", 1),
            ("foo(x)", 0),
            ("diff(u, 1.5)", 8),
            ("diff(u, x)", 8),
            ("diff(x, 2)", 5),
            ("exp x", 4),
            ("x $ 2", 2),
            ("2 3", 2),
        ];
        for (src, offset) in cases {
            let err = parse(src).unwrap_err();
            assert_eq!(err.offset, offset, "{src}: {err}");
        }
        assert!(parse("foo(x)")
            .unwrap_err()
            .message
            .contains("unknown function"));
        assert!(parse("diff(u,-1)").is_err());
    }

    #[test]
    fn scientific_notation_and_e() {
        assert_eq!(parse("1e-5").unwrap(), num(1e-5));
        assert_eq!(
            parse("2e").unwrap_err().offset,
            1,
            "`2e` is a number followed by the constant e"
        );
        assert_eq!(
            parse("2*e").unwrap(),
            Expr::binary(BinOp::Mul, num(2.0), Expr::Const(Constant::E))
        );
    }

    proptest! {
        #[test]
        fn never_panics(s in "[-+*/^().,0-9a-z ]{0,40}") {
            let _ = parse(&s);
        }

        #[test]
        fn deterministic(s in "[-+*/^()0-9xu ]{1,30}") {
            prop_assert_eq!(parse(&s), parse(&s));
        }
    }
}
