//! Expression parsing shared by the ODE reader and the formula reader.
//!
//! Grammar: `EXPR ::= rational-number | x | y | identifier | EXPR (+|-|*|/)
//! EXPR | EXPR ^ signed-integer | ( EXPR )`, plus the formula-only forms
//! `ln(EXPR)`, `exp(EXPR)` and `int(EXPR, x|y, rational)`. Which extensions
//! are admitted is decided by the lowering step, not here.

use crate::error::{Error, Result};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Abstract syntax; positions are byte offsets into the original text and
/// are kept only where later stages may need to report errors.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rat),
    X,
    Y,
    Ident(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Ln(Box<Expr>, usize),
    Exp(Box<Expr>, usize),
    /// `int(integrand, y, anchor)`: integral from the anchor to the current
    /// `y`, the integrand's `y` being the dummy. `IntX` likewise in `x`.
    IntY {
        integrand: Box<Expr>,
        anchor: Rat,
        pos: usize,
    },
    IntX {
        integrand: Box<Expr>,
        anchor: Rat,
        pos: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, base: usize) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            base,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, at: usize, msg: &str) -> Error {
        Error::Parse {
            pos: self.base + at,
            msg: msg.to_string(),
        }
    }

    /// Next token with its start position; `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let at = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b',' => {
                self.pos += 1;
                Tok::Comma
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let mut int_part = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .to_string();
                let mut den = BigInt::one();
                if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                    self.pos += 1;
                    let fstart = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos == fstart {
                        return Err(self.err(at, "digits expected after decimal point"));
                    }
                    let frac = std::str::from_utf8(&self.src[fstart..self.pos]).unwrap();
                    for _ in 0..frac.len() {
                        den *= 10;
                    }
                    int_part.push_str(frac);
                }
                let num: BigInt = int_part.parse().unwrap();
                Tok::Num(Rat::new(num, den))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric()
                        || self.src[self.pos] == b'_'
                        || self.src[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .to_string(),
                )
            }
            _ => return Err(self.err(at, "unexpected character")),
        };
        Ok(Some((tok, self.base + at)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn err_here(&self, msg: &str) -> Error {
        let pos = self.peek().map_or(self.end, |(_, p)| *p);
        Error::Parse {
            pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some((t, _)) if t == want => {
                self.bump();
                Ok(())
            }
            _ => Err(self.err_here(what)),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some((t, _)) = self.peek() {
            let op = match t {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = if op {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some((t, _)) = self.peek() {
            let op = match t {
                Tok::Star => true,
                Tok::Slash => false,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = if op {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while let Some((Tok::Caret, _)) = self.peek() {
            self.bump();
            let e = self.signed_int()?;
            base = Expr::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        match self.peek() {
            Some((Tok::Num(r), pos)) => {
                let (r, pos) = (r.clone(), *pos);
                self.bump();
                if !r.is_integer() {
                    return Err(Error::Parse {
                        pos,
                        msg: "exponent must be an integer".to_string(),
                    });
                }
                let v: i64 = crate::rat::as_i64(&r).ok_or(Error::Parse {
                    pos,
                    msg: "exponent out of range".to_string(),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err_here("integer exponent expected")),
        }
    }

    fn rational_arg(&mut self) -> Result<Rat> {
        // A literal rational: optional sign, number, optional /number.
        let neg = if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        let n = match self.peek() {
            Some((Tok::Num(r), _)) => {
                let r = r.clone();
                self.bump();
                r
            }
            _ => return Err(self.err_here("rational literal expected")),
        };
        let val = if let Some((Tok::Slash, _)) = self.peek() {
            self.bump();
            match self.peek() {
                Some((Tok::Num(d), pos)) => {
                    let (d, pos) = (d.clone(), *pos);
                    self.bump();
                    if d.is_zero() {
                        return Err(Error::Parse {
                            pos,
                            msg: "zero denominator in literal".to_string(),
                        });
                    }
                    n / d
                }
                _ => return Err(self.err_here("denominator expected")),
            }
        } else {
            n
        };
        Ok(if neg { -val } else { val })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some((Tok::Num(r), _)) => Ok(Expr::Num(r)),
            Some((Tok::Ident(name), pos)) => match name.as_str() {
                "x" => Ok(Expr::X),
                "y" => Ok(Expr::Y),
                "ln" | "exp" if matches!(self.peek(), Some((Tok::LParen, _))) => {
                    self.bump();
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen, "closing parenthesis expected")?;
                    Ok(if name == "ln" {
                        Expr::Ln(Box::new(inner), pos)
                    } else {
                        Expr::Exp(Box::new(inner), pos)
                    })
                }
                "int" if matches!(self.peek(), Some((Tok::LParen, _))) => {
                    self.bump();
                    let integrand = self.expr()?;
                    self.expect(&Tok::Comma, "comma expected after integrand")?;
                    let var = match self.peek() {
                        Some((Tok::Ident(v), _)) if v == "x" || v == "y" => {
                            let v = v.clone();
                            self.bump();
                            v
                        }
                        _ => return Err(self.err_here("integration variable x or y expected")),
                    };
                    self.expect(&Tok::Comma, "comma expected after variable")?;
                    let anchor = self.rational_arg()?;
                    // An optional fourth argument restates the upper limit,
                    // which must be the integration variable itself.
                    if let Some((Tok::Comma, _)) = self.peek() {
                        self.bump();
                        match self.peek() {
                            Some((Tok::Ident(v), _)) if *v == var => {
                                self.bump();
                            }
                            _ => {
                                return Err(
                                    self.err_here("upper limit must be the integration variable")
                                )
                            }
                        }
                    }
                    self.expect(&Tok::RParen, "closing parenthesis expected")?;
                    Ok(if var == "y" {
                        Expr::IntY {
                            integrand: Box::new(integrand),
                            anchor,
                            pos,
                        }
                    } else {
                        Expr::IntX {
                            integrand: Box::new(integrand),
                            anchor,
                            pos,
                        }
                    })
                }
                _ => Ok(Expr::Ident(name, pos)),
            },
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "closing parenthesis expected")?;
                Ok(inner)
            }
            Some((_, pos)) => Err(Error::Parse {
                pos,
                msg: "expression expected".to_string(),
            }),
            None => Err(self.err_here("expression expected")),
        }
    }
}

/// Parses one expression occupying the whole input; `base` offsets reported
/// positions (for text embedded in a larger line).
pub fn parse_expr(text: &str, base: usize) -> Result<Expr> {
    let mut lx = Lexer::new(text, base);
    let mut toks = vec![];
    while let Some(t) = lx.next()? {
        toks.push(t);
    }
    let end = base + text.len();
    let mut p = Parser { toks, idx: 0, end };
    let e = p.expr()?;
    if let Some((_, pos)) = p.peek() {
        return Err(Error::Parse {
            pos: *pos,
            msg: "trailing input after expression".to_string(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("1 + 2*y^2", 0).unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Num(rat(1))),
                Box::new(Expr::Mul(
                    Box::new(Expr::Num(rat(2))),
                    Box::new(Expr::Pow(Box::new(Expr::Y), 2)),
                )),
            )
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse_expr("-x^2", 0).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::X), 2))));
    }

    #[test]
    fn negative_exponent() {
        let e = parse_expr("y^-2", 0).unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::Y), -2));
    }

    #[test]
    fn decimals_become_exact_rationals() {
        let e = parse_expr("0.25", 0).unwrap();
        assert_eq!(e, Expr::Num(ratio(1, 4)));
    }

    #[test]
    fn function_forms() {
        let e = parse_expr("ln(y/(1 - y))", 0).unwrap();
        assert!(matches!(e, Expr::Ln(_, _)));
        let e = parse_expr("int(1/y, y, 1)", 0).unwrap();
        match e {
            Expr::IntY { anchor, .. } => assert_eq!(anchor, rat(1)),
            other => panic!("unexpected parse: {:?}", other),
        }
    }

    #[test]
    fn error_positions() {
        match parse_expr("1 + $", 0) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected: {:?}", other),
        }
        match parse_expr("(1 + 2", 0) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected: {:?}", other),
        }
    }
}
