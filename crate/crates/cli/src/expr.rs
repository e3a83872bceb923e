//! Text form of polynomials and rationals.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'x' | 'y' | '(' expr ')'
//! number := digits ('/' digits)?
//! ```
//!
//! There is no implicit multiplication, and exponents are nonnegative integer
//! literals. `-x^2` therefore reads as `-(x^2)`.

use std::fmt;

use lpdo_core::poly::{Poly2, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Largest exponent accepted by the parser.
const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("parse error at position {pos}: expected {}, found {found}", ExpectedList(.expected))]
    Parse {
        pos: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("exponent error at position {pos}: {reason}")]
    Exponent { pos: usize, reason: &'static str },
}

struct ExpectedList<'a>(&'a [&'static str]);

impl fmt::Display for ExpectedList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            [] => f.write_str("nothing"),
            [one] => f.write_str(one),
            many => write!(f, "one of {}", many.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num { value: Rational, fraction: bool },
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number `{value}`"),
            Tok::X => "`x`".into(),
            Tok::Y => "`y`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Parsing options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept finite decimals such as `0.25`, converted exactly.
    pub decimals: bool,
}

fn lex(text: &str, opts: ParseOptions) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'x' => Tok::X,
            b'y' => Tok::Y,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let (tok, len) = lex_number(&text[i..], start, opts)?;
                out.push((start, tok));
                i += len;
                continue;
            }
            _ => {
                let found = text[i..].chars().next().map(|ch| format!("`{ch}`")).unwrap_or_default();
                return Err(ExprError::Parse {
                    pos: start,
                    expected: vec!["number", "`x`", "`y`", "operator", "parenthesis"],
                    found,
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn digits_len(s: &str) -> usize {
    s.bytes().take_while(u8::is_ascii_digit).count()
}

fn lex_number(s: &str, pos: usize, opts: ParseOptions) -> Result<(Tok, usize), ExprError> {
    let int_len = digits_len(s);
    let rest = &s[int_len..];
    if let Some(after_dot) = rest.strip_prefix('.') {
        let frac_len = digits_len(after_dot);
        if !opts.decimals {
            return Err(ExprError::Parse {
                pos: pos + int_len,
                expected: vec!["`/`", "operator", "end of input"],
                found: "`.` (decimals need --decimal-as-rational)".into(),
            });
        }
        if int_len + frac_len == 0 {
            return Err(ExprError::Parse { pos, expected: vec!["digit"], found: "`.`".into() });
        }
        let text = &s[..int_len + 1 + frac_len];
        let value = decimal_to_rational(text).expect("digits checked");
        return Ok((Tok::Num { value, fraction: true }, text.len()));
    }
    if int_len == 0 {
        return Err(ExprError::Parse { pos, expected: vec!["digit"], found: "`.`".into() });
    }
    let numer: BigInt = s[..int_len].parse().expect("digits");
    if let Some(after_slash) = rest.strip_prefix('/') {
        let den_len = digits_len(after_slash);
        if den_len == 0 {
            let found = after_slash
                .chars()
                .next()
                .map(|c| format!("`{c}`"))
                .unwrap_or_else(|| "end of input".into());
            return Err(ExprError::Parse { pos: pos + int_len + 1, expected: vec!["denominator digits"], found });
        }
        let denom: BigInt = after_slash[..den_len].parse().expect("digits");
        if denom.is_zero() {
            return Err(ExprError::Parse {
                pos: pos + int_len + 1,
                expected: vec!["nonzero denominator"],
                found: "`0`".into(),
            });
        }
        let value = Rational::new(numer, denom);
        return Ok((Tok::Num { value, fraction: true }, int_len + 1 + den_len));
    }
    Ok((Tok::Num { value: Rational::from_integer(numer), fraction: false }, int_len))
}

fn decimal_to_rational(text: &str) -> Option<Rational> {
    let (int_part, frac_part) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(Rational::new(numer, denom))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, ExprError> {
        Err(ExprError::Parse { pos: self.pos(), expected, found: self.peek().describe() })
    }

    fn expr(&mut self) -> Result<Poly2, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2, ExprError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly2, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly2, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let exp = match self.peek().clone() {
            Tok::Minus => {
                return Err(ExprError::Exponent { pos, reason: "exponent must be nonnegative" })
            }
            Tok::Num { fraction: true, .. } => {
                return Err(ExprError::Exponent { pos, reason: "exponent must be an integer" })
            }
            Tok::Num { value, fraction: false } => {
                self.bump();
                u32::try_from(value.to_integer())
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or(ExprError::Exponent { pos, reason: "exponent is too large" })?
            }
            _ => return self.fail(vec!["integer exponent"]),
        };
        let mut out = Poly2::constant(Rational::one());
        for _ in 0..exp {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly2, ExprError> {
        match self.peek().clone() {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Poly2::constant(value))
            }
            Tok::X => {
                self.bump();
                Ok(Poly2::x())
            }
            Tok::Y => {
                self.bump();
                Ok(Poly2::y())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(vec!["`)`", "operator"]);
                }
                self.bump();
                Ok(inner)
            }
            _ => self.fail(vec!["number", "`x`", "`y`", "`(`", "`-`"]),
        }
    }
}

pub fn parse_poly_with(text: &str, opts: ParseOptions) -> Result<Poly2, ExprError> {
    let mut p = Parser { toks: lex(text, opts)?, at: 0 };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(vec!["operator", "end of input"]);
    }
    Ok(poly)
}

/// Parses a polynomial in `x`, `y` with exact rational coefficients.
pub fn parse_poly(text: &str) -> Result<Poly2, ExprError> {
    parse_poly_with(text, ParseOptions::default())
}

/// Canonical text: total degree descending, then `x`-degree descending.
pub fn format_poly(p: &Poly2) -> String {
    p.to_string()
}

/// Parses a signed rational such as `-5/3`, `7`, or (with decimals enabled)
/// `0.25`.
pub fn parse_rational(text: &str, opts: ParseOptions) -> Result<Rational, ExprError> {
    let p = parse_poly_with(text, opts)?;
    let trimmed = text.trim();
    let body = trimmed.strip_prefix('-').unwrap_or(trimmed).trim_start();
    let is_literal = !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit() || b == b'/' || b == b'.');
    if !is_literal || p.total_degree() > 0 {
        return Err(ExprError::Parse { pos: 0, expected: vec!["rational number"], found: format!("`{trimmed}`") });
    }
    Ok(p.coeff(0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lpdo_core::poly::{int, rat};

    #[test]
    fn parse_examples() {
        assert_eq!(parse_poly("x").unwrap(), Poly2::x());
        let p = parse_poly("3*x^2 + 2*x*y - 1/2").unwrap();
        let expected = Poly2::from_terms([(2, 0, int(3)), (1, 1, int(2)), (0, 0, rat(-1, 2))]);
        assert_eq!(p, expected);
        assert!(matches!(parse_poly("x^-1"), Err(ExprError::Exponent { pos: 2, .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_poly("-x^2").unwrap(), -(&Poly2::x() * &Poly2::x()));
        assert_eq!(parse_poly("(-x)^2").unwrap(), &Poly2::x() * &Poly2::x());
        assert_eq!(parse_poly("2*x + 3*y").unwrap(), Poly2::affine(int(2), int(3), int(0)));
        assert_eq!(parse_poly("1 - 2 - 3").unwrap(), Poly2::constant(int(-4)));
        assert_eq!(parse_poly("--x").unwrap(), Poly2::x());
        assert_eq!(parse_poly("2*-x").unwrap(), Poly2::x().scale(&int(-2)));
        assert_eq!(parse_poly("(x+y)^0").unwrap(), Poly2::constant(int(1)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("2 x") {
            Err(ExprError::Parse { pos, expected, .. }) => {
                assert_eq!(pos, 2);
                assert!(expected.contains(&"operator"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x^1/2"), Err(ExprError::Exponent { .. })));
        assert!(matches!(parse_poly("x^y"), Err(ExprError::Parse { pos: 2, .. })));
        assert!(matches!(parse_poly("(x + 1"), Err(ExprError::Parse { pos: 6, .. })));
        assert!(matches!(parse_poly("1/0"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse_poly(""), Err(ExprError::Parse { pos: 0, .. })));
        assert!(matches!(parse_poly("z"), Err(ExprError::Parse { pos: 0, .. })));
        assert!(matches!(parse_poly("x^100"), Err(ExprError::Exponent { .. })));
        assert!(matches!(parse_poly("0.5"), Err(ExprError::Parse { pos: 1, .. })));
    }

    #[test]
    fn decimals_when_enabled() {
        let opts = ParseOptions { decimals: true };
        assert_eq!(parse_poly_with("0.25*x", opts).unwrap(), Poly2::x().scale(&rat(1, 4)));
        assert_eq!(parse_rational("-1.5", opts).unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(".5", opts).unwrap(), rat(1, 2));
    }

    #[test]
    fn rationals() {
        let opts = ParseOptions::default();
        assert_eq!(parse_rational("-5/3", opts).unwrap(), rat(-5, 3));
        assert_eq!(parse_rational("4/2", opts).unwrap(), int(2));
        assert!(parse_rational("x", opts).is_err());
        assert!(parse_rational("1+1", opts).is_err());
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_poly(&Poly2::zero()), "0");
        let p = parse_poly("(x+y)^2/4").err();
        assert!(p.is_some(), "division is only part of number literals");
        let p = parse_poly("1/4*(x+y)^2").unwrap();
        assert_eq!(format_poly(&p), "1/4*x^2 + 1/2*x*y + 1/4*y^2");
        assert_eq!(format_poly(&Poly2::constant(int(4))), "4");
    }
}
