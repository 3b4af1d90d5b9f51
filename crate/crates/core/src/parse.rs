//! Polynomial expressions such as `4*x^3 - 3*x` or `(x + 1)^2 - 1`.
//!
//! Grammar, by precedence climbing:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INTEGER)?
//! primary := INTEGER | 'x' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::IntPolynomial;

/// Exponents above this are rejected to keep expansion bounded.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source text.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected token {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("exponent must be a nonnegative integer literal")]
    NonIntegerExponent,
    #[error("exponent exceeds {MAX_EXPONENT}")]
    ExponentTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(v) => v.to_string(),
            Token::X => "x".into(),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let single = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let value: BigInt = text[start..i].parse().expect("ascii digits");
            out.push((Token::Int(value), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &text[start..i] {
                "x" => out.push((Token::X, start)),
                ident => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(ident.to_string()),
                        position: start,
                    })
                }
            }
        } else {
            let ch = text[start..].chars().next().expect("in bounds");
            return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(ch), position: start });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, position: self.offset() }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::UnexpectedToken(t.describe())),
            None => self.error(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPolynomial, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<IntPolynomial, ParseError> {
        let base = self.primary()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(Token::Int(e)) => {
                let exp = u32::try_from(e.clone())
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| self.error(ParseErrorKind::ExponentTooLarge))?;
                self.pos += 1;
                Ok(base.pow(exp))
            }
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
            Some(_) => Err(self.error(ParseErrorKind::NonIntegerExponent)),
        }
    }

    fn primary(&mut self) -> Result<IntPolynomial, ParseError> {
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(IntPolynomial::constant(v))
            }
            Some(Token::X) => {
                self.pos += 1;
                Ok(IntPolynomial::x())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

pub fn parse_poly(text: &str) -> Result<IntPolynomial, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError { kind: ParseErrorKind::Empty, position: 0 });
    }
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.unexpected());
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev_recurrence;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_poly("4*x^3 - 3*x").unwrap(), chebyshev_recurrence(3));
        assert_eq!(parse_poly("x").unwrap(), IntPolynomial::x());
        assert_eq!(parse_poly("2*x^2 - 1").unwrap(), chebyshev_recurrence(2));
    }

    #[test]
    fn precedence_and_parentheses() {
        assert_eq!(parse_poly("-x^2").unwrap(), IntPolynomial::from_i64s(&[0, 0, -1]));
        assert_eq!(parse_poly("(x+1)^2").unwrap(), IntPolynomial::from_i64s(&[1, 2, 1]));
        assert_eq!(parse_poly("2*x+3*x*x").unwrap(), IntPolynomial::from_i64s(&[0, 2, 3]));
        assert_eq!(parse_poly("1 - x - x").unwrap(), IntPolynomial::from_i64s(&[1, -2]));
        assert_eq!(parse_poly("--x").unwrap(), IntPolynomial::x());
        assert_eq!(parse_poly("x^0").unwrap(), IntPolynomial::from_i64s(&[1]));
    }

    #[test]
    fn big_literals() {
        let p = parse_poly("340282366920938463463374607431768211456*x").unwrap();
        assert_eq!(p.coeff(1), BigInt::from(1u8) << 128u32);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_poly("x^y").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(_)));
        let err = parse_poly("x^(2)").unwrap_err();
        assert_eq!((err.kind, err.position), (ParseErrorKind::NonIntegerExponent, 2));
        let err = parse_poly("x^-1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonIntegerExponent);
        let err = parse_poly("3*y").unwrap_err();
        assert_eq!(err.position, 2);
        assert_eq!(parse_poly("  ").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_poly("x +").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse_poly("(x").unwrap_err().position, 2);
        assert!(matches!(parse_poly("x $").unwrap_err().kind, ParseErrorKind::UnexpectedChar('$')));
        assert_eq!(parse_poly("2x").unwrap_err().position, 1);
        assert_eq!(parse_poly("x^99999").unwrap_err().kind, ParseErrorKind::ExponentTooLarge);
        assert!(matches!(parse_poly("x x").unwrap_err().kind, ParseErrorKind::UnexpectedToken(_)));
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(coeffs in prop::collection::vec(any::<i64>(), 0..10)) {
            let p = IntPolynomial::from_i64s(&coeffs);
            let printed = p.to_string();
            let reparsed = parse_poly(&printed).unwrap();
            prop_assert_eq!(&reparsed, &p);
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
