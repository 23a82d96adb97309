//! Arithmetic over `S` for gap rules such as `2S+1`.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*'? factor)*
//! factor := INT | 'S' | '(' expr ')'
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Int(u64),
    S,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRule {
    source: String,
    expr: Expr,
}

impl GapRule {
    pub fn eval(&self, s: f64) -> f64 {
        fn go(e: &Expr, s: f64) -> f64 {
            match e {
                Expr::Int(k) => *k as f64,
                Expr::S => s,
                Expr::Add(a, b) => go(a, s) + go(b, s),
                Expr::Mul(a, b) => go(a, s) * go(b, s),
            }
        }
        go(&self.expr, s)
    }
}

impl fmt::Display for GapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FromStr for GapRule {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { tokens: &tokens, pos: 0 };
        let expr = p.expr()?;
        if p.pos != tokens.len() {
            return Err(p.error("trailing input"));
        }
        Ok(GapRule { source: text.trim().to_owned(), expr })
    }
}

struct Parser<'a> {
    tokens: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).copied()
    }

    fn error(&self, what: &str) -> Error {
        Error::malformed(format!("gap rule: {what} at position {}", self.pos))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            e = Expr::Add(Box::new(e), Box::new(self.term()?));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => self.pos += 1,
                Some(c) if c == 'S' || c == '(' || c.is_ascii_digit() => {}
                _ => return Ok(e),
            }
            e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('S') => {
                self.pos += 1;
                Ok(Expr::S)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.tokens[start..self.pos].iter().collect();
                digits.parse().map(Expr::Int).map_err(|_| self.error("integer too large"))
            }
            _ => Err(self.error("expected an integer, 'S' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(rule: &str, s: f64) -> f64 {
        rule.parse::<GapRule>().unwrap().eval(s)
    }

    #[test]
    fn grammar() {
        assert_eq!(eval("2S+1", 5.0), 11.0);
        assert_eq!(eval("2 * S + 1", 5.0), 11.0);
        assert_eq!(eval("S", 3.0), 3.0);
        assert_eq!(eval("3(S+1)", 2.0), 9.0);
        assert_eq!(eval("S*S+S", 3.0), 12.0);
        assert_eq!(eval("7", 100.0), 7.0);
    }

    #[test]
    fn rejects() {
        for bad in ["", "2S+", "S-1", "(S", "x", "2..", "S)"] {
            assert!(bad.parse::<GapRule>().is_err(), "{bad}");
        }
    }
}
