//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = atom { "^" int } ;
//! int     = ["+" | "-"] digits | "(" ["+" | "-"] digits ")" ;
//! atom    = number | var | func "(" expr ")" | "(" expr ")" ;
//! var     = "u" | "v" | "x" | "y" ;
//! func    = "exp" | "ln" | "sin" | "cos" | "sinh" | "cosh" ;
//! number  = digits [ "." digits ] [ ("e" | "E") ["+" | "-"] digits ] ;
//! ```

use super::ast::{Expr, Func, Var};
use crate::error::{Error, Result};

/// Parse an expression string.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err(format!("unexpected `{}`", p.peek_char())));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let rhs = self.unary()?;
                if is_literal_zero(&rhs) {
                    return Err(Error::Syntax { offset: at, message: "division by literal zero".into() });
                }
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let n = self.int_exponent()?;
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn int_exponent(&mut self) -> Result<i32> {
        self.skip_ws();
        let parenthesized = self.eat(b'(');
        self.skip_ws();
        let mut sign = 1i64;
        if self.eat(b'-') {
            sign = -1;
        } else {
            self.eat(b'+');
        }
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        if matches!(self.peek(), Some(b'.' | b'e' | b'E')) {
            return Err(self.err("exponents must be integers"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let n: i64 = digits
            .parse()
            .map_err(|_| Error::Syntax { offset: start, message: "exponent out of range".into() })?;
        if parenthesized && !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        i32::try_from(sign * n).map_err(|_| Error::Syntax { offset: start, message: "exponent out of range".into() })
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(b'0'..=b'9' | b'.') => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.err(format!("unexpected `{}`", self.peek_char()))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(b'0'..=b'9')) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(Error::Syntax { offset: start, message: "malformed number".into() });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.err("malformed exponent in number"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Syntax { offset: start, message: format!("malformed number `{text}`") })?;
        if !value.is_finite() {
            return Err(Error::Syntax { offset: start, message: "number out of range".into() });
        }
        Ok(Expr::Const(value))
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(v) = Var::from_name(name) {
            return Ok(Expr::Var(v));
        }
        if let Some(f) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(self.err(format!("expected `(` after `{name}`")));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        Err(Error::UnknownIdentifier { name: name.to_string(), offset: start })
    }
}

fn is_literal_zero(e: &Expr) -> bool {
    match e {
        Expr::Const(c) => *c == 0.0,
        Expr::Neg(inner) => is_literal_zero(inner),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("1 - 2 - 3"), p("(1 - 2) - 3"));
        assert_eq!(p("8/4/2"), p("(8/4)/2"));
        assert_eq!(p("-u^2"), Expr::Neg(Box::new(p("u^2"))));
        assert_eq!(p("2*u + v"), p("(2*u) + v"));
        assert_eq!(p("u^-2"), Expr::Pow(Box::new(Expr::Var(Var::U)), -2));
        assert_eq!(p("u^(-2)"), p("u^-2"));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_expr("u + * v") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse_expr("u + w") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "w");
                assert_eq!(offset, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("u^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("(u"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("tan(u)"), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn literal_zero_divisor_rejected() {
        assert!(matches!(parse_expr("u/0"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("u/(0.0)"), Err(Error::Syntax { .. })));
        assert!(parse_expr("u/(0 + v)").is_ok());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "2*u*x + v^2",
            "u^-2*(2/3)",
            "exp(4*x)*u^4/(3*v^2)",
            "-(u - v) - -x",
            "(u^2)^3 - sinh(cos(y))/ln(v)",
            "1 - (2 - 3)",
            "u/(v/x)",
            "1e-7*u + 2.5e10",
        ] {
            let e = p(s);
            let printed = e.to_string();
            assert_eq!(p(&printed), e, "{s} -> {printed}");
        }
    }
}
