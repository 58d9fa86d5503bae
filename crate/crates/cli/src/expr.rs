//! Polynomial expressions: variables `z` (one variable) or `z1`, `z2`,
//! complex literals such as `0.5`, `2i`, `1e-3`, `i`, the operators
//! `+ - *`, integer powers `^k` and parentheses.

use plurinorm::{Error, Polynomial, C64};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Expression(msg.into())
}

fn lex(src: &str, vars: usize) -> Result<Vec<Tok>, Error> {
    let b = src.as_bytes();
    let mut out = vec![];
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            'i' => {
                out.push(Tok::Imag(1.0));
                i += 1
            }
            'z' => {
                let d = b.get(i + 1).copied();
                let (v, len) = match d {
                    Some(b'1') => (0, 2),
                    Some(b'2') => (1, 2),
                    Some(x) if x.is_ascii_alphanumeric() => {
                        return Err(err(format!("unknown variable starting at column {}", i + 1)))
                    }
                    _ => {
                        if vars != 1 {
                            return Err(err("use z1 and z2 for two variables"));
                        }
                        (0, 1)
                    }
                };
                if len == 2 && vars != 2 {
                    return Err(err("use z for one variable"));
                }
                out.push(Tok::Var(v));
                i += len;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        i = j;
                        while i < b.len() && b[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let x: f64 = src[start..i].parse().map_err(|_| err(format!("bad number `{}`", &src[start..i])))?;
                if i < b.len() && b[i] == b'i' {
                    out.push(Tok::Imag(x));
                    i += 1;
                } else {
                    out.push(Tok::Num(x));
                }
            }
            _ => return Err(err(format!("unexpected character `{c}` at column {}", i + 1))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    vars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, Error> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.scale(C64::new(-1.0, 0.0)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, Error> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(k)) if k >= 0.0 && k.fract() == 0.0 && k <= 64.0 => return base.pow(k as u32),
                _ => return Err(err("exponents must be non-negative integers")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, Error> {
        match self.next() {
            Some(Tok::Num(x)) => Ok(Polynomial::constant(self.vars, C64::new(x, 0.0))),
            Some(Tok::Imag(y)) => Ok(Polynomial::constant(self.vars, C64::new(0.0, y))),
            Some(Tok::Var(v)) => Ok(Polynomial::var(self.vars, v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(err("missing `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(err(format!("unexpected token {t:?}"))),
            None => Err(err("unexpected end of expression")),
        }
    }
}

/// Parses `src` as a polynomial in `vars` variables.
pub fn parse_polynomial(src: &str, vars: usize) -> Result<Polynomial, Error> {
    if vars != 1 && vars != 2 {
        return Err(err(format!("expressions need 1 or 2 variables, got {vars}")));
    }
    let toks = lex(src, vars)?;
    if toks.is_empty() {
        return Err(err("empty expression"));
    }
    let mut p = Parser { toks, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input after token {}", p.pos)));
    }
    Ok(out)
}

/// Parses a constant expression such as `0.3-0.1i`.
pub fn parse_complex(src: &str) -> Result<C64, Error> {
    let p = parse_polynomial(src, 1).map_err(|e| err(format!("`{src}`: {e}")))?;
    if !p.is_constant() {
        return Err(err(format!("`{src}` is not a constant")));
    }
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn literals() {
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), c(0.5, 0.25));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3 - 2e1i").unwrap(), c(1e-3, -20.0));
        assert_eq!(parse_complex("(1+i)^2").unwrap(), c(0.0, 2.0));
        assert!(parse_complex("z").is_err());
    }

    #[test]
    fn polynomials() {
        let p = parse_polynomial("z^2", 1).unwrap();
        assert_eq!(p, Polynomial::var(1, 0).pow(2).unwrap());
        let q = parse_polynomial("(z1 + z2)*0.5", 2).unwrap();
        let z = [c(0.2, 0.1), c(-0.3, 0.4)];
        assert!((q.eval(&z) - (z[0] + z[1]) * 0.5).norm() < 1e-15);
        let r = parse_polynomial("z1^2+z2^2 - (0.1+0.2i)*z1*z2", 2).unwrap();
        let e = z[0] * z[0] + z[1] * z[1] - c(0.1, 0.2) * z[0] * z[1];
        assert!((r.eval(&z) - e).norm() < 1e-15);
        assert_eq!(parse_polynomial("-2*z + 3", 1).unwrap().eval(&[c(1.0, 0.0)]), c(1.0, 0.0));
    }

    #[test]
    fn rejects() {
        for bad in ["", "z^", "z^1.5", "z^-1", "(z", "z + ", "w", "z1", "2 z"] {
            assert!(parse_polynomial(bad, 1).is_err(), "{bad}");
        }
        assert!(parse_polynomial("z", 2).is_err());
    }
}
