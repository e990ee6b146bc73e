//! Parser for human-written polynomial expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | VAR | '(' expr ')'
//! ```
//!
//! Variables are `x1, x2, ...` for multivariate input and `t` for weight
//! profiles. `^` binds tighter than `*` and unary minus, so `-x1^2` is
//! `-(x1^2)`. Only integer and rational literals are accepted, and `/` is
//! only legal between two integer literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{Exponent, Polynomial, UnivariatePolynomial};
use crate::Rational;

/// Exponents above this are rejected to keep accidental inputs bounded.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnbalancedParen,
    ZeroDenominator,
    /// `/` applied to something other than two integer literals.
    Division,
    NegativeExponent,
    NonIntegerExponent,
    ExponentTooLarge(String),
    ChainedExponent,
    /// Variable index 0 or exceeding the expected dimension.
    VariableOutOfRange {
        index: usize,
        dim: usize,
    },
    UnknownVariable(String),
    /// A multivariate variable in a univariate expression.
    Multivariate(String),
}

/// Structured parse diagnostic; `offset` is a byte offset into the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        write!(f, "parse error at byte {}: ", self.offset)?;
        match &self.kind {
            Empty => write!(f, "empty expression"),
            UnexpectedChar(c) => write!(f, "unexpected character {:?}", c),
            UnexpectedToken(t) => write!(f, "unexpected token {:?}", t),
            UnexpectedEnd => write!(f, "unexpected end of input"),
            UnbalancedParen => write!(f, "unbalanced parenthesis"),
            ZeroDenominator => write!(f, "zero denominator in rational literal"),
            Division => write!(f, "'/' is only allowed inside rational literals like 3/4"),
            NegativeExponent => write!(f, "negative exponent"),
            NonIntegerExponent => write!(f, "exponent must be a non-negative integer literal"),
            ExponentTooLarge(e) => write!(f, "exponent {} exceeds {}", e, MAX_EXPONENT),
            ChainedExponent => write!(f, "chained exponents are ambiguous; use parentheses"),
            VariableOutOfRange { index, dim } => {
                write!(f, "variable x{} out of range for dimension {}", index, dim)
            }
            UnknownVariable(v) => write!(f, "unknown variable {:?}", v),
            Multivariate(v) => write!(f, "variable {:?} in a univariate expression (use t)", v),
        }
    }
}

impl std::error::Error for ParseError {}

/// Text to parse plus the dimension it must live in, if known.
#[derive(Debug, Clone, Copy)]
pub struct ExprSource<'a> {
    pub text: &'a str,
    pub expected_dim: Option<usize>,
}

impl<'a> ExprSource<'a> {
    pub fn new(text: &'a str) -> Self {
        ExprSource {
            text,
            expected_dim: None,
        }
    }

    pub fn with_dim(text: &'a str, dim: usize) -> Self {
        ExprSource {
            text,
            expected_dim: Some(dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    /// 1-based multivariate index (`x3` -> 3), or 0 for `t`.
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{}", n),
            Tok::Var(0) => f.write_str("t"),
            Tok::Var(k) => write!(f, "x{}", k),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Multi,
    Uni,
}

fn err(offset: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { offset, kind }
}

fn lex(text: &str, mode: Mode) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
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
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(err(i, ParseErrorKind::UnexpectedChar('.')));
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((classify_word(word, start, mode)?, start));
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, ParseErrorKind::UnexpectedChar(ch)));
            }
        }
        i += 1;
    }
    Ok(out)
}

fn classify_word(word: &str, offset: usize, mode: Mode) -> Result<Tok, ParseError> {
    let multi_index = word
        .strip_prefix('x')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .map(|d| d.parse::<usize>());
    match (mode, word, multi_index) {
        (Mode::Uni, "t", _) => Ok(Tok::Var(0)),
        (Mode::Uni, _, Some(_)) => Err(err(offset, ParseErrorKind::Multivariate(word.to_string()))),
        (Mode::Multi, _, Some(Ok(k))) => Ok(Tok::Var(k)),
        (Mode::Multi, _, Some(Err(_))) => Err(err(
            offset,
            ParseErrorKind::VariableOutOfRange {
                index: usize::MAX,
                dim: 0,
            },
        )),
        _ => Err(err(offset, ParseErrorKind::UnknownVariable(word.to_string()))),
    }
}

struct Parser<'t> {
    toks: &'t [(Tok, usize)],
    pos: usize,
    end: usize,
    dim: usize,
}

type Poly = Polynomial<Rational>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            let negate = match op {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            acc = if negate { &acc - &rhs } else { &acc + &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            let exp = match self.bump() {
                Some((Tok::Int(n), _)) => n,
                Some((Tok::Minus, o)) => return Err(err(o, ParseErrorKind::NegativeExponent)),
                Some(_) => return Err(err(at, ParseErrorKind::NonIntegerExponent)),
                None => return Err(err(at, ParseErrorKind::UnexpectedEnd)),
            };
            match self.peek() {
                Some(Tok::Slash) => return Err(err(self.offset(), ParseErrorKind::NonIntegerExponent)),
                Some(Tok::Caret) => return Err(err(self.offset(), ParseErrorKind::ChainedExponent)),
                _ => {}
            }
            let e: u32 = u32::try_from(&exp)
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| err(at, ParseErrorKind::ExponentTooLarge(exp.to_string())))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some((Tok::Int(num), _)) => {
                let mut value = Rational::from_integer(num);
                if let Some(Tok::Slash) = self.peek() {
                    let slash_at = self.offset();
                    self.bump();
                    match self.bump() {
                        Some((Tok::Int(den), o)) => {
                            if den.is_zero() {
                                return Err(err(o, ParseErrorKind::ZeroDenominator));
                            }
                            value /= Rational::from_integer(den);
                        }
                        _ => return Err(err(slash_at, ParseErrorKind::Division)),
                    }
                }
                if let Some(Tok::Slash) = self.peek() {
                    return Err(err(self.offset(), ParseErrorKind::Division));
                }
                Ok(Poly::constant(self.dim, value))
            }
            Some((Tok::Var(k), _)) => {
                // `t` lexes as index 0 and lives on the single axis.
                let axis = k.saturating_sub(1);
                let p = Poly::monomial(Rational::one(), Exponent::unit(self.dim, axis));
                if let Some(Tok::Slash) = self.peek() {
                    return Err(err(self.offset(), ParseErrorKind::Division));
                }
                Ok(p)
            }
            Some((Tok::LParen, open)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => {}
                    Some((t, o)) => return Err(err(o, ParseErrorKind::UnexpectedToken(t.to_string()))),
                    None => return Err(err(open, ParseErrorKind::UnbalancedParen)),
                }
                if let Some(Tok::Slash) = self.peek() {
                    return Err(err(self.offset(), ParseErrorKind::Division));
                }
                Ok(inner)
            }
            Some((Tok::Slash, o)) => Err(err(o, ParseErrorKind::Division)),
            Some((Tok::RParen, o)) => Err(err(o, ParseErrorKind::UnbalancedParen)),
            Some((t, o)) => Err(err(o, ParseErrorKind::UnexpectedToken(t.to_string()))),
            None => Err(err(at, ParseErrorKind::UnexpectedEnd)),
        }
    }
}

fn parse_with(text: &str, mode: Mode, expected_dim: Option<usize>) -> Result<Poly, ParseError> {
    if text.trim().is_empty() {
        return Err(err(0, ParseErrorKind::Empty));
    }
    let toks = lex(text, mode)?;
    let dim = match mode {
        Mode::Uni => 1,
        Mode::Multi => {
            let max_seen = toks
                .iter()
                .filter_map(|(t, o)| match t {
                    Tok::Var(k) => Some((*k, *o)),
                    _ => None,
                })
                .try_fold(0usize, |acc, (k, o)| {
                    if k == 0 {
                        return Err(err(
                            o,
                            ParseErrorKind::VariableOutOfRange {
                                index: 0,
                                dim: expected_dim.unwrap_or(0),
                            },
                        ));
                    }
                    if let Some(d) = expected_dim {
                        if k > d {
                            return Err(err(o, ParseErrorKind::VariableOutOfRange { index: k, dim: d }));
                        }
                    }
                    Ok(acc.max(k))
                })?;
            expected_dim.unwrap_or(max_seen.max(1))
        }
    };
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        dim,
    };
    let p = parser.expr()?;
    if let Some((t, o)) = toks.get(parser.pos) {
        let kind = match t {
            Tok::RParen => ParseErrorKind::UnbalancedParen,
            _ => ParseErrorKind::UnexpectedToken(t.to_string()),
        };
        return Err(err(*o, kind));
    }
    Ok(p)
}

/// Parses a multivariate polynomial in `x1..xn`.
///
/// The dimension is `expected_dim` when given, otherwise the largest
/// variable index that occurs (at least 1).
pub fn parse_poly(src: ExprSource<'_>) -> Result<Polynomial<Rational>, ParseError> {
    parse_with(src.text, Mode::Multi, src.expected_dim)
}

/// Parses a univariate weight profile in `t`.
pub fn parse_unipoly(src: ExprSource<'_>) -> Result<UnivariatePolynomial<Rational>, ParseError> {
    let p = parse_with(src.text, Mode::Uni, None)?;
    let degree = p.degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Rational::zero(); degree + 1];
    for (e, c) in p.terms() {
        coeffs[e.as_slice()[0] as usize] = c.clone();
    }
    Ok(UnivariatePolynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Poly, UniPoly};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn poly(s: &str) -> Poly {
        parse_poly(ExprSource::new(s)).unwrap()
    }

    fn kind(s: &str, dim: Option<usize>) -> ParseErrorKind {
        parse_poly(ExprSource {
            text: s,
            expected_dim: dim,
        })
        .unwrap_err()
        .kind
    }

    #[test]
    fn sample_inputs() {
        let f1 = poly("x1^2*x2^2");
        assert_eq!(f1.dim(), 2);
        assert_eq!(f1.coeff(&Exponent::new(vec![2, 2])), q(1, 1));
        assert!(poly("0").is_zero());

        let h = poly("-1/4*x1^4 + 3/2*x1^2*x2^2 - 1/4*x2^4");
        assert_eq!(h.len(), 3);
        assert_eq!(h.coeff(&Exponent::new(vec![4, 0])), q(-1, 4));
        assert_eq!(h.coeff(&Exponent::new(vec![2, 2])), q(3, 2));
        assert_eq!(h.coeff(&Exponent::new(vec![0, 4])), q(-1, 4));
    }

    #[test]
    fn precedence_and_grouping() {
        assert_eq!(poly("-x1^2"), -&poly("x1*x1"));
        assert_eq!(poly("2*x1^2"), poly("x1^2 + x1^2"));
        assert_eq!(poly("(x1 - x2)*(x1 + x2)"), poly("x1^2 - x2^2"));
        assert_eq!(poly("(x1^2-x2^2)^2"), poly("x1^4 - 2*x1^2*x2^2 + x2^4"));
        assert_eq!(poly("  x1 *  x2 "), poly("x1*x2"));
        assert_eq!(poly("--x1"), poly("x1"));
    }

    #[test]
    fn dimension_handling() {
        assert_eq!(poly("x3").dim(), 3);
        let p = parse_poly(ExprSource::with_dim("x1", 4)).unwrap();
        assert_eq!(p.dim(), 4);
        assert_eq!(
            kind("x3", Some(2)),
            ParseErrorKind::VariableOutOfRange { index: 3, dim: 2 }
        );
        assert!(matches!(
            kind("x0", None),
            ParseErrorKind::VariableOutOfRange { index: 0, .. }
        ));
    }

    #[test]
    fn error_diagnostics_carry_offsets() {
        let e = parse_poly(ExprSource::new("x1^-2")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NegativeExponent);
        assert_eq!(e.offset, 3);
        assert_eq!(kind("x1^1/2", None), ParseErrorKind::NonIntegerExponent);
        assert_eq!(kind("x1^x2", None), ParseErrorKind::NonIntegerExponent);
        assert_eq!(kind("x1^2^3", None), ParseErrorKind::ChainedExponent);
        assert_eq!(kind("0.5*x1", None), ParseErrorKind::UnexpectedChar('.'));
        assert_eq!(kind("x1/2", None), ParseErrorKind::Division);
        assert_eq!(kind("1/0", None), ParseErrorKind::ZeroDenominator);
        assert_eq!(kind("", None), ParseErrorKind::Empty);
        assert_eq!(kind("x1 +", None), ParseErrorKind::UnexpectedEnd);
        assert_eq!(kind("(x1", None), ParseErrorKind::UnbalancedParen);
        assert_eq!(kind("x1)", None), ParseErrorKind::UnbalancedParen);
        assert_eq!(kind("x1 x2", None), ParseErrorKind::UnexpectedToken("x2".into()));
        assert_eq!(kind("y", None), ParseErrorKind::UnknownVariable("y".into()));
        assert_eq!(kind("sin(x1)", None), ParseErrorKind::UnknownVariable("sin".into()));
        let e = parse_poly(ExprSource::new("x1 + $")).unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(e.to_string().contains("byte 5"));
    }

    #[test]
    fn univariate_profiles() {
        let parse = |s| parse_unipoly(ExprSource::new(s)).unwrap();
        assert_eq!(parse("t^2").coeffs(), &[q(0, 1), q(0, 1), q(1, 1)]);
        assert_eq!(parse("1/2*t^2").coeffs(), &[q(0, 1), q(0, 1), q(1, 2)]);
        assert_eq!(
            parse("t^4 - 2*t^5").coeffs(),
            &[q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(-2, 1)]
        );
        assert_eq!(parse("1/24*t^4"), UniPoly::omega(4));
        let e = parse_unipoly(ExprSource::new("t*x1")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Multivariate("x1".into()));
        assert_eq!(e.offset, 2);
    }

    #[test]
    fn canonical_text_round_trips() {
        let p = poly("-1/4*x1^4 + 3/2*x1^2*x2^2 - 1/4*x2^4 + x1 - 7");
        let text = p.to_string();
        assert_eq!(parse_poly(ExprSource::with_dim(&text, 2)).unwrap(), p);
        assert_eq!(parse_poly(ExprSource::with_dim(&text, 2)).unwrap().to_string(), text);
        let phi = UniPoly::new(vec![q(0, 1), q(0, 1), q(-3, 7), q(1, 6)]);
        assert_eq!(parse_unipoly(ExprSource::new(&phi.to_string())).unwrap(), phi);
    }
}
