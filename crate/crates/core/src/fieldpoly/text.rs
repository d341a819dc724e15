//! Canonical text forms of polynomials.
//!
//! Two forms are supported and both round-trip:
//! - the algebraic form `2*T^3 + T + 1` (terms from the top, unit coefficients
//!   dropped, `0` for the zero polynomial);
//! - the digit form, the base-q coefficient string with the leading
//!   coefficient first (`"121"` over F_3 is `T^2 + 2*T + 1`). Digits above 9
//!   use `a`-`z` then `A`-`Z`, which covers every q up to 61.

use std::fmt;

use super::field::PrimeField;
use super::poly::Poly;
use crate::error::{Error, Result};

const DIGITS: &[u8; 62] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs().iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("T")?,
                (1, c) => write!(f, "{c}*T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    /// Digit form, leading coefficient first; `"0"` for the zero polynomial.
    pub fn to_digits(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs()
            .iter()
            .rev()
            .map(|&c| DIGITS[c as usize] as char)
            .collect()
    }

    pub fn from_digits(field: PrimeField, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty digit string".into()));
        }
        let mut coeffs = Vec::with_capacity(s.len());
        for ch in s.bytes().rev() {
            let v = DIGITS
                .iter()
                .position(|&d| d == ch)
                .ok_or_else(|| Error::Parse(format!("bad digit {:?} in {s:?}", ch as char)))?
                as u32;
            if v >= field.q() {
                return Err(Error::Parse(format!(
                    "digit {:?} out of range for q = {}",
                    ch as char,
                    field.q()
                )));
            }
            coeffs.push(v);
        }
        Ok(Poly::new(field, coeffs))
    }

    /// Parses the algebraic form. Accepts `+`/`-` between terms, optional `*`,
    /// and repeated powers; coefficients are reduced mod q.
    pub fn parse_text(field: PrimeField, s: &str) -> Result<Poly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let q = i64::from(field.q());
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = compact.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        loop {
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            let (c, e) = parse_term(term).ok_or_else(|| Error::Parse(format!("bad term {term:?} in {s:?}")))?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, 0);
            }
            coeffs[e] = (coeffs[e] + sign * (c % q)).rem_euclid(q);
            if end == rest.len() {
                break;
            }
            sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
            rest = &rest[end + 1..];
        }
        Ok(Poly::from_signed(field, &coeffs))
    }

    /// Algebraic form if the string mentions `T`, digit form otherwise.
    pub fn parse(field: PrimeField, s: &str) -> Result<Poly> {
        if s.contains(['T', 't', '+', '*', '^']) {
            Self::parse_text(field, s)
        } else {
            Self::from_digits(field, s)
        }
    }
}

fn parse_term(term: &str) -> Option<(i64, usize)> {
    if term.is_empty() {
        return None;
    }
    let lower = term.replace('t', "T");
    match lower.find('T') {
        None => Some((lower.parse().ok()?, 0)),
        Some(pos) => {
            let coef = lower[..pos].trim_end_matches('*');
            let c = if coef.is_empty() { 1 } else { coef.parse().ok()? };
            let tail = &lower[pos + 1..];
            let e = if tail.is_empty() {
                1
            } else {
                tail.strip_prefix('^')?.parse().ok()?
            };
            Some((c, e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn digit_form_examples() {
        let p = Poly::from_digits(f(3), "121").unwrap();
        assert_eq!(p, Poly::new(f(3), [1, 2, 1]));
        assert_eq!(p.to_string(), "T^2 + 2*T + 1");
        assert_eq!(p.to_digits(), "121");
        assert_eq!(Poly::zero(f(3)).to_digits(), "0");
        assert!(Poly::from_digits(f(3), "13").is_err());
        assert!(Poly::from_digits(f(3), "").is_err());
        let big = Poly::from_digits(f(61), "1Y0").unwrap();
        assert_eq!(big.coeffs(), &[0, 60, 1]);
    }

    #[test]
    fn text_form_examples() {
        let p = Poly::parse_text(f(5), "3*T^3 + T + 4").unwrap();
        assert_eq!(p.coeffs(), &[4, 1, 0, 3]);
        assert_eq!(p.to_string(), "3*T^3 + T + 4");
        let q = Poly::parse_text(f(3), "-T - 1").unwrap();
        assert_eq!(q, Poly::new(f(3), [2, 2]));
        assert_eq!(Poly::parse_text(f(3), "2T^2+T").unwrap().to_string(), "2*T^2 + T");
        assert_eq!(Poly::parse(f(3), "T+1").unwrap(), Poly::parse(f(3), "11").unwrap());
        assert!(Poly::parse_text(f(3), "T^").is_err());
        assert!(Poly::parse_text(f(3), "x+1").is_err());
    }

    proptest! {
        #[test]
        fn both_forms_round_trip(q in prop::sample::select(vec![3u32, 5, 7, 31, 61]),
                                 coeffs in prop::collection::vec(0u32..61, 0..9)) {
            let field = f(q);
            let p = Poly::new(field, coeffs);
            prop_assert_eq!(Poly::from_digits(field, &p.to_digits()).unwrap(), p.clone());
            prop_assert_eq!(Poly::parse_text(field, &p.to_string()).unwrap(), p);
        }
    }
}
