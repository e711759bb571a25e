//! Textual polynomial syntax: `3*x0^2*x1 + (1/2)*h*x2 - z4^1*x0`.
//!
//! `h` is the deformation parameter, `i` the imaginary unit, `zM` a
//! primitive `M`-th root of unity (`M` must divide the field order).
//! Division is allowed by invertible monomials in `h` with constant
//! coefficient; negative powers likewise.

use num_bigint::BigInt;

use super::poly::Polynomial;
use super::PolyError;
use crate::scalar::{CyclotomicScalar, HbarScalar, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Hbar,
    Imag,
    Root(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    let err = |p: usize, m: &str| PolyError::Parse {
        position: p,
        message: m.to_string(),
    };
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let digits_from = |p: usize| {
            let mut q = p;
            while q < bytes.len() && bytes[q].is_ascii_digit() {
                q += 1;
            }
            q
        };
        let tok = match c {
            b'0'..=b'9' => {
                let end = digits_from(pos);
                let n: BigInt = src[pos..end].parse().map_err(|_| err(start, "bad integer"))?;
                pos = end;
                Tok::Num(n)
            }
            b'x' => {
                let end = digits_from(pos + 1);
                if end == pos + 1 {
                    return Err(err(start, "variable needs an index, e.g. x0"));
                }
                let i: usize = src[pos + 1..end]
                    .parse()
                    .map_err(|_| err(start, "variable index too large"))?;
                pos = end;
                Tok::Var(i)
            }
            b'z' => {
                let end = digits_from(pos + 1);
                if end == pos + 1 {
                    return Err(err(start, "root of unity needs an order, e.g. z4"));
                }
                let m: u32 = src[pos + 1..end]
                    .parse()
                    .map_err(|_| err(start, "root order too large"))?;
                if m == 0 {
                    return Err(err(start, "root order must be positive"));
                }
                pos = end;
                Tok::Root(m)
            }
            b'h' => {
                pos += 1;
                Tok::Hbar
            }
            b'i' => {
                pos += 1;
                Tok::Imag
            }
            b'+' => {
                pos += 1;
                Tok::Plus
            }
            b'-' => {
                pos += 1;
                Tok::Minus
            }
            b'*' => {
                pos += 1;
                Tok::Star
            }
            b'/' => {
                pos += 1;
                Tok::Slash
            }
            b'^' => {
                pos += 1;
                Tok::Caret
            }
            b'(' => {
                pos += 1;
                Tok::LParen
            }
            b')' => {
                pos += 1;
                Tok::RParen
            }
            _ => {
                let ch = src[pos..].chars().next().unwrap_or('?');
                return Err(err(start, &format!("unexpected character '{ch}'")));
            }
        };
        if matches!(tok, Tok::Hbar | Tok::Imag) && pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
            return Err(err(start, "unknown identifier"));
        }
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    nvars: usize,
    order: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err(&self, m: &str) -> PolyError {
        PolyError::Parse {
            position: self.here(),
            message: m.to_string(),
        }
    }

    fn constant(&self, c: CyclotomicScalar) -> Polynomial {
        Polynomial::constant(self.nvars, HbarScalar::constant(c))
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let inv = invert_monomial(&d).ok_or(PolyError::Parse {
                        position: at,
                        message: "can only divide by a nonzero constant times a power of h".into(),
                    })?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e: u32 = match self.peek() {
            Some(Tok::Num(n)) => {
                let e = u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?;
                if e > 4096 {
                    return Err(self.err("exponent too large"));
                }
                e
            }
            _ => return Err(self.err("expected an integer exponent")),
        };
        let at = self.here();
        self.pos += 1;
        let b = if neg {
            invert_monomial(&base).ok_or(PolyError::Parse {
                position: at,
                message: "negative powers need an invertible monomial".into(),
            })?
        } else {
            base
        };
        Ok(b.pow(e))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        let at = self.here();
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(self.constant(CyclotomicScalar::from_rational(
                self.order,
                Rational::from_integer(n),
            ))),
            Tok::Var(i) => {
                if i >= self.nvars {
                    return Err(PolyError::Parse {
                        position: at,
                        message: format!("variable x{i} out of range (have {} variables)", self.nvars),
                    });
                }
                Ok(Polynomial::var(self.nvars, self.order, i))
            }
            Tok::Hbar => Ok(Polynomial::constant(self.nvars, HbarScalar::hbar(self.order))),
            Tok::Imag => {
                let i = CyclotomicScalar::imag_unit(self.order).map_err(|_| PolyError::Parse {
                    position: at,
                    message: format!("i is not in Q(zeta_{})", self.order),
                })?;
                Ok(self.constant(i))
            }
            Tok::Root(m) => {
                if self.order % m != 0 {
                    return Err(PolyError::Parse {
                        position: at,
                        message: format!("z{m} is not in Q(zeta_{})", self.order),
                    });
                }
                Ok(self.constant(CyclotomicScalar::root_of_unity(
                    self.order,
                    (self.order / m) as i64,
                )))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(PolyError::Parse {
                position: at,
                message: "expected a number, variable, h, i, root of unity or '('".into(),
            }),
        }
    }
}

fn invert_monomial(p: &Polynomial) -> Option<Polynomial> {
    if p.len() != 1 || !p.is_constant() {
        return None;
    }
    let c = p.constant_term();
    let terms: Vec<_> = c.terms().collect();
    if terms.len() != 1 || c.precision().is_some() {
        return None;
    }
    let (k, a) = terms[0];
    let inv = a.inv().ok()?;
    Some(Polynomial::constant(p.nvars(), HbarScalar::monomial(inv, -k)))
}

/// Parses a polynomial in `nvars` variables over Q(zeta_order)[h, 1/h].
pub fn parse_polynomial(src: &str, nvars: usize, order: u32) -> Result<Polynomial, PolyError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(PolyError::Parse {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        nvars,
        order,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a constant of Q(zeta_order), e.g. `-1`, `(1/2)*z8^3`, `1 - i`.
pub fn parse_scalar(src: &str, order: u32) -> Result<CyclotomicScalar, PolyError> {
    let p = parse_polynomial(src, 0, order)?;
    let c = p.constant_term();
    match c.terms().collect::<Vec<_>>().as_slice() {
        [] => Ok(CyclotomicScalar::zero(order)),
        [(0, x)] => Ok((*x).clone()),
        _ => Err(PolyError::Parse {
            position: 0,
            message: "expected a constant without h".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn parses_documented_example() {
        let p = parse_polynomial("3*x0^2*x1 + (1/2)*h*x2", 3, 4).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(
            p.coeff(&[2, 1, 0]),
            HbarScalar::constant(CyclotomicScalar::from_int(4, 3))
        );
        assert_eq!(
            p.coeff(&[0, 0, 1]),
            HbarScalar::monomial(CyclotomicScalar::from_frac(4, 1, 2), 1)
        );
    }

    #[test]
    fn reports_positions() {
        match parse_polynomial("x0 + * x1", 2, 4) {
            Err(PolyError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polynomial("x0 + x7", 2, 4) {
            Err(PolyError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("(x0", 1, 4).is_err());
        assert!(parse_polynomial("x0 / x0", 1, 4).is_err());
        assert!(parse_polynomial("", 1, 4).is_err());
        assert!(parse_polynomial("z3", 1, 4).is_err());
        assert!(parse_polynomial("x0 $", 1, 4).is_err());
    }

    #[test]
    fn scalars_and_roots() {
        let s = parse_scalar("(1/2) - (1/2)*z4^1", 4).unwrap();
        let i = CyclotomicScalar::imag_unit(4).unwrap();
        assert_eq!(s, (&CyclotomicScalar::one(4) + &i).inv().unwrap());
        assert_eq!(parse_scalar("z2", 8).unwrap(), CyclotomicScalar::from_int(8, -1));
        assert_eq!(parse_scalar("-3/6", 1).unwrap(), CyclotomicScalar::from_rational(1, rational(-1, 2)));
        assert!(parse_scalar("h", 4).is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["3*x0^2*x1 - (1/2)*h*x2", "(1/2 + z4^1)*x0 - h^-1", "0", "-x1^3 + 7"] {
            let p = parse_polynomial(src, 3, 4).unwrap();
            let again = parse_polynomial(&p.to_string(), 3, 4).unwrap();
            assert_eq!(p, again, "{src} -> {p}");
        }
    }
}
