use super::Expr;
use std::fmt;
use thiserror::Error;

/// Parse failure, with the byte offset of the offending token and the set of
/// token descriptions that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" | "))]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Eq,
    DotDot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Int(i64),
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Eq => write!(f, "'='"),
            Tok::DotDot => write!(f, "'..'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token plus its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), SyntaxError> {
        self.skip_ws();
        let at = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::Eof, at));
        }
        let c = self.src[self.pos];
        let simple = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'=' => Some(Tok::Eq),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = simple {
            self.pos += 1;
            return Ok((t, at));
        }
        if c == b'.' {
            if self.pos + 1 < self.src.len() && self.src[self.pos + 1] == b'.' {
                self.pos += 2;
                return Ok((Tok::DotDot, at));
            }
            return Err(SyntaxError {
                offset: at,
                expected: vec!["'..'"],
                found: "'.'".to_string(),
            });
        }
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: i64 = text.parse().map_err(|_| SyntaxError {
                offset: at,
                expected: vec!["integer"],
                found: format!("out-of-range integer '{text}'"),
            })?;
            return Ok((Tok::Int(n), at));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
            return Ok((Tok::Ident(text), at));
        }
        Err(SyntaxError {
            offset: at,
            expected: vec!["token"],
            found: format!("character {:?}", c as char),
        })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.idx]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn err(&self, expected: Vec<&'static str>) -> SyntaxError {
        let (tok, off) = self.peek();
        SyntaxError { offset: *off, expected, found: tok.to_string() }
    }

    fn expect(&mut self, tok: Tok, desc: &'static str) -> Result<(), SyntaxError> {
        if self.peek().0 == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(vec![desc]))
        }
    }

    fn expect_ident(&mut self, desc: &'static str) -> Result<String, SyntaxError> {
        match self.peek().0.clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.err(vec![desc])),
        }
    }

    fn expect_int(&mut self, desc: &'static str) -> Result<i64, SyntaxError> {
        match self.peek().0 {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.err(vec![desc])),
        }
    }

    /// series := "sum(" ident "=" int ".." "inf" "," expr ")"
    fn series(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().0.clone() {
            Tok::Ident(s) if s == "sum" => {
                self.bump();
            }
            _ => return Err(self.err(vec!["'sum'"])),
        }
        self.expect(Tok::LParen, "'('")?;
        let var = self.expect_ident("index identifier")?;
        if var == "x" || var == "sum" || var == "inf" || var == "sin" || var == "cos" {
            return Err(SyntaxError {
                offset: self.toks[self.idx - 1].1,
                expected: vec!["index identifier distinct from reserved names"],
                found: format!("identifier '{var}'"),
            });
        }
        self.expect(Tok::Eq, "'='")?;
        let lo = self.expect_int("integer lower bound")?;
        self.expect(Tok::DotDot, "'..'")?;
        let inf = self.expect_ident("'inf'")?;
        if inf != "inf" {
            return Err(SyntaxError {
                offset: self.toks[self.idx - 1].1,
                expected: vec!["'inf'"],
                found: format!("identifier '{inf}'"),
            });
        }
        self.expect(Tok::Comma, "','")?;
        let body = self.expr(&var)?;
        self.expect(Tok::RParen, "')'")?;
        if self.peek().0 != Tok::Eof {
            return Err(self.err(vec!["end of input"]));
        }
        Ok(Expr::Sum { var, lo, body: Box::new(body) })
    }

    fn expr(&mut self, var: &str) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term(var)?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term(var)?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term(var)?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, var: &str) -> Result<Expr, SyntaxError> {
        let mut lhs = self.factor(var)?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor(var)?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor(var)?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self, var: &str) -> Result<Expr, SyntaxError> {
        let base = self.base(var)?;
        if self.peek().0 == Tok::Caret {
            self.bump();
            let e = self.expect_int("integer exponent")?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&mut self, var: &str) -> Result<Expr, SyntaxError> {
        match self.peek().0.clone() {
            Tok::LParen => {
                self.bump();
                // "(-1)^ident" or a parenthesized expression
                if self.peek().0 == Tok::Minus {
                    self.bump();
                    let one = self.expect_int("'1'")?;
                    if one != 1 {
                        return Err(SyntaxError {
                            offset: self.toks[self.idx - 1].1,
                            expected: vec!["'1'"],
                            found: format!("integer {one}"),
                        });
                    }
                    self.expect(Tok::RParen, "')'")?;
                    self.expect(Tok::Caret, "'^'")?;
                    let v = self.expect_ident("index identifier")?;
                    if v != var {
                        return Err(SyntaxError {
                            offset: self.toks[self.idx - 1].1,
                            expected: vec!["the bound index variable"],
                            found: format!("identifier '{v}'"),
                        });
                    }
                    return Ok(Expr::AltSign(v));
                }
                let inner = self.expr(var)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "sin" | "cos" => {
                        self.expect(Tok::LParen, "'('")?;
                        let arg = self.expr(var)?;
                        self.expect(Tok::RParen, "')'")?;
                        if s == "sin" {
                            Ok(Expr::Sin(Box::new(arg)))
                        } else {
                            Ok(Expr::Cos(Box::new(arg)))
                        }
                    }
                    "x" => Ok(Expr::X),
                    _ if s == var => Ok(Expr::Var(s)),
                    _ => Err(SyntaxError {
                        offset: self.toks[self.idx - 1].1,
                        expected: vec!["'x'", "the bound index variable", "'sin'", "'cos'"],
                        found: format!("identifier '{s}'"),
                    }),
                }
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            _ => Err(self.err(vec!["'('", "'sin'", "'cos'", "identifier", "number", "'x'"])),
        }
    }
}

/// Parse a series expression. Total over the fixed grammar; everything else
/// is rejected with a [`SyntaxError`] carrying the byte offset.
pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let mut lx = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let (t, off) = lx.next()?;
        let eof = t == Tok::Eof;
        toks.push((t, off));
        if eof {
            break;
        }
    }
    Parser { toks, idx: 0 }.series()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_series() {
        let e = parse("sum(n=1..inf, cos(n*x)/n)").unwrap();
        let expect = Expr::Sum {
            var: "n".into(),
            lo: 1,
            body: Box::new(Expr::Div(
                Box::new(Expr::Cos(Box::new(Expr::Mul(
                    Box::new(Expr::Var("n".into())),
                    Box::new(Expr::X),
                )))),
                Box::new(Expr::Var("n".into())),
            )),
        };
        assert_eq!(e, expect);
    }

    #[test]
    fn parses_alternating_odd_series() {
        let e = parse("sum(n=0..inf, (-1)^n * sin((2*n+1)*x)/(2*n+1)^2)").unwrap();
        match e {
            Expr::Sum { var, lo, body } => {
                assert_eq!(var, "n");
                assert_eq!(lo, 0);
                // (((-1)^n * sin(...)) / (2n+1)^2)
                match *body {
                    Expr::Div(num, den) => {
                        assert!(matches!(*num, Expr::Mul(..)));
                        assert!(matches!(*den, Expr::Pow(_, 2)));
                    }
                    other => panic!("unexpected body {other:?}"),
                }
            }
            other => panic!("unexpected ast {other:?}"),
        }
    }

    #[test]
    fn truncated_input_reports_offset_at_end() {
        let s = "sum(n=1..inf, cos(n*x)/";
        let err = parse(s).unwrap_err();
        assert_eq!(err.offset, s.len());
        assert!(!err.expected.is_empty());
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn rejects_free_identifiers() {
        assert!(parse("sum(n=1..inf, cos(m*x)/n)").is_err());
        assert!(parse("sum(n=1..inf, cos(n*y)/n)").is_err());
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse("sum(n=1..inf, sin(n*x)/n)").unwrap();
        let b = parse("  sum( n = 1 .. inf ,sin( n * x ) / n )  ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pretty_print_round_trips() {
        for s in [
            "sum(n=1..inf, cos(n*x)/n)",
            "sum(n=0..inf, (-1)^n * sin((2*n+1)*x)/(2*n+1)^2)",
            "sum(k=1..inf, (-1)^k*cos(k*x)/k^2)",
            "sum(n=1..inf, sin(n*x)/n^8)",
            "sum(n=1..inf, (1+2)*cos(n*x)/n-x/n^2)",
        ] {
            let ast = parse(s).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(ast, reparsed, "round trip failed for {s} -> {printed}");
        }
    }
}
