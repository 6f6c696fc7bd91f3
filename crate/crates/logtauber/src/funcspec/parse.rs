//! Recursive-descent parser for the function DSL.
//!
//! ```text
//! spec     := piece+ | expr
//! piece    := "piece" interval ":" expr ";"?     (";" separates pieces)
//! interval := "[" bound "," bound ")"
//! bound    := "inf" | constant expression        (e.g. 1, e, e^2, 2*pi)
//! expr     := usual precedence over + - * / ^, unary minus,
//!             sin cos exp log loglog abs pow(a,b) indicator([a,b)),
//!             constants pi and e, variable x
//! ```

use crate::error::Error;
use crate::funcspec::expr::Expr;
use crate::funcspec::{FunctionSpec, Interval};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    Comma,
    Colon,
    Semi,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push(Spanned { tok: Tok::Eof, line, col });
                return Ok(out);
            };
            let tok = match c {
                b'+' => { self.bump(); Tok::Plus }
                b'-' => { self.bump(); Tok::Minus }
                b'*' => { self.bump(); Tok::Star }
                b'/' => { self.bump(); Tok::Slash }
                b'^' => { self.bump(); Tok::Caret }
                b'(' => { self.bump(); Tok::LParen }
                b')' => { self.bump(); Tok::RParen }
                b'[' => { self.bump(); Tok::LBracket }
                b',' => { self.bump(); Tok::Comma }
                b':' => { self.bump(); Tok::Colon }
                b';' => { self.bump(); Tok::Semi }
                b'0'..=b'9' | b'.' => self.lex_number()?,
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut s = String::new();
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                        s.push(self.bump().unwrap() as char);
                    }
                    Tok::Ident(s)
                }
                other => return Err(self.err(format!("unexpected character '{}'", other as char))),
            };
            out.push(Spanned { tok, line, col });
        }
    }

    fn lex_number(&mut self) -> Result<Tok> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if self.peek() == Some(b'.') {
            self.bump();
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.bump();
            }
        }
        // exponent only when digits follow, so that `2e` lexes as `2`, `e`
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = (self.pos, self.line, self.col);
            self.bump();
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.bump();
            }
            if matches!(self.peek(), Some(b'0'..=b'9')) {
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.bump();
                }
            } else {
                (self.pos, self.line, self.col) = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Tok::Num)
            .map_err(|_| self.err(format!("invalid number literal '{text}'")))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].tok
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        s
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let s = &self.toks[self.idx];
        Error::Parse { line: s.line, col: s.col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn parse_spec(&mut self) -> Result<Vec<(Interval, Expr)>> {
        if matches!(self.peek(), Tok::Ident(s) if s == "piece") {
            let mut pieces = Vec::new();
            while matches!(self.peek(), Tok::Ident(s) if s == "piece") {
                self.bump();
                let iv = self.parse_interval()?;
                self.expect(Tok::Colon, "':' after piece interval")?;
                let e = self.parse_expr()?;
                if *self.peek() == Tok::Semi {
                    self.bump();
                }
                pieces.push((iv, e));
            }
            self.expect(Tok::Eof, "end of input after pieces")?;
            Ok(pieces)
        } else {
            let e = self.parse_expr()?;
            self.expect(Tok::Eof, "end of input after expression")?;
            Ok(vec![(Interval::new(1.0, f64::INFINITY), e)])
        }
    }

    fn parse_interval(&mut self) -> Result<Interval> {
        self.expect(Tok::LBracket, "'[' opening an interval")?;
        let lo = self.parse_bound()?;
        self.expect(Tok::Comma, "',' between interval bounds")?;
        let hi = self.parse_bound()?;
        self.expect(Tok::RParen, "')' closing a half-open interval")?;
        if !(lo < hi) {
            return Err(self.err_here(format!("empty interval [{lo}, {hi})")));
        }
        Ok(Interval::new(lo, hi))
    }

    fn parse_bound(&mut self) -> Result<f64> {
        if matches!(self.peek(), Tok::Ident(s) if s == "inf") {
            self.bump();
            return Ok(f64::INFINITY);
        }
        let at = self.idx;
        let e = self.parse_expr()?;
        e.eval_const().map_err(|_| {
            let s = &self.toks[at];
            Error::Parse {
                line: s.line,
                col: s.col,
                msg: "interval bound must be a constant expression".into(),
            }
        })
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.parse_term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.parse_term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.parse_factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.parse_factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.parse_factor()?));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.parse_factor()?; // right-associative, allows -n
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::c(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "x" => Ok(Expr::x()),
                    "pi" => Ok(Expr::c(std::f64::consts::PI)),
                    "e" => Ok(Expr::c(std::f64::consts::E)),
                    "sin" | "cos" | "exp" | "log" | "loglog" | "abs" => {
                        self.expect(Tok::LParen, &format!("'(' after {name}"))?;
                        let arg = self.parse_expr()?;
                        self.expect(Tok::RParen, "')' closing the call")?;
                        Ok(match name.as_str() {
                            "sin" => Expr::sin(arg),
                            "cos" => Expr::cos(arg),
                            "exp" => Expr::exp(arg),
                            "log" => Expr::log(arg),
                            "loglog" => Expr::loglog(arg),
                            _ => Expr::abs(arg),
                        })
                    }
                    "pow" => {
                        self.expect(Tok::LParen, "'(' after pow")?;
                        let a = self.parse_expr()?;
                        self.expect(Tok::Comma, "',' between pow arguments")?;
                        let b = self.parse_expr()?;
                        self.expect(Tok::RParen, "')' closing pow")?;
                        Ok(Expr::pow(a, b))
                    }
                    "indicator" => {
                        self.expect(Tok::LParen, "'(' after indicator")?;
                        let iv = self.parse_interval()?;
                        self.expect(Tok::RParen, "')' closing indicator")?;
                        Ok(Expr::Indicator(iv))
                    }
                    other => Err(self.err_here(format!("unknown identifier '{other}'"))),
                }
            }
            _ => Err(self.err_here("expected a number, 'x', a constant or a function call")),
        }
    }
}

/// Parses DSL source into a (real-codomain) [`FunctionSpec`] named `name`.
pub fn parse_spec(name: &str, source: &str) -> Result<FunctionSpec> {
    let toks = Lexer::new(source).tokenize()?;
    let mut p = Parser { toks, idx: 0 };
    let pieces = p.parse_spec()?;
    FunctionSpec::from_real_pieces(name, pieces)
}

/// Parses a single expression (no `piece` clauses).
pub fn parse_expr(source: &str) -> Result<Expr> {
    let toks = Lexer::new(source).tokenize()?;
    let mut p = Parser { toks, idx: 0 };
    let e = p.parse_expr()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::expr::EvalPoint;

    #[test]
    fn single_expression_becomes_one_piece() {
        let spec = parse_spec("s", "sin(log(x))").unwrap();
        assert_eq!(spec.piece_count(), Some(1));
        let v = spec.evaluate(std::f64::consts::E).unwrap();
        assert!((v.re() - 1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn two_piece_grammar() {
        let spec = parse_spec("s", "piece [1, e): 0; piece [e, inf): loglog(x)").unwrap();
        assert_eq!(spec.piece_count(), Some(2));
        assert_eq!(spec.evaluate(2.0).unwrap().re(), 0.0);
        let v = spec.evaluate(100.0).unwrap().re();
        assert!((v - 100f64.ln().ln()).abs() < 1e-15);
    }

    #[test]
    fn statically_detectable_domain_error() {
        // log undefined on [1, 2) — rejected while parsing
        let err = parse_spec("s", "log(x - 2)").unwrap_err();
        assert!(matches!(err, Error::Domain { .. }), "got {err:?}");
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_spec("s", "sin(log(x)").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col >= 10);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bounds_accept_constant_expressions() {
        let spec = parse_spec("s", "piece [1, e^2): 1; piece [e^2, inf): 2").unwrap();
        assert_eq!(spec.evaluate(7.0).unwrap().re(), 1.0);
        assert_eq!(spec.evaluate(8.0).unwrap().re(), 2.0);
    }

    #[test]
    fn scientific_notation_vs_e_constant() {
        let e = parse_expr("2e3").unwrap();
        assert_eq!(e.eval(EvalPoint::at(2.0)).unwrap(), 2000.0);
        let e = parse_expr("2*e").unwrap();
        assert!((e.eval(EvalPoint::at(2.0)).unwrap() - 2.0 * std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn overlap_and_gap_are_rejected() {
        let err = parse_spec("s", "piece [1, 3): 0; piece [2, inf): 1").unwrap_err();
        assert!(matches!(err, Error::PieceLayout(_)), "got {err:?}");
        let err = parse_spec("s", "piece [1, 2): 0; piece [3, inf): 1").unwrap_err();
        assert!(matches!(err, Error::PieceLayout(_)), "got {err:?}");
    }
}
