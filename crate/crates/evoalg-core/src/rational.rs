//! Exact rational scalars.
//!
//! Every scalar in this crate is an arbitrary-precision rational. `BigRational`
//! keeps values reduced with a positive denominator, so equality and zero tests
//! are exact and decidable, which the decision procedures rely on.

use num_bigint::BigInt;
use num_traits::Zero;

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`; intended for literals in code and tests.
pub fn qr(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optionally signed, ASCII) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".to_string());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid integer `{num_str}` in rational literal `{s}`"))?;
    let denom: BigInt = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid integer `{d}` in rational literal `{s}`"))?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in rational literal `{s}`"));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats in lowest terms as `"p"` or `"p/q"` with `q > 0`.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// `x^3`, kept separate because cubes of the proportionality constants show up
/// in several hypotheses.
pub fn cube(x: &Rational) -> Rational {
    x * x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_rational("2/4").unwrap(), qr(1, 2));
        assert_eq!(parse_rational("-3/4").unwrap(), qr(-3, 4));
        assert_eq!(parse_rational("6/-4").unwrap(), qr(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert_eq!(parse_rational(" 0 ").unwrap(), q(0));
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["0", "1", "-3/4", "22/7", "-5"] {
            let v = parse_rational(s).unwrap();
            assert_eq!(format_rational(&v), s);
            assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
    }
}
