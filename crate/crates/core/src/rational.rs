//! Rational scalar helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qzero() -> Q {
    Q::zero()
}

pub fn qone() -> Q {
    Q::one()
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational literal"));
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::parse(format!(
            "'{s}' is not an exact rational literal (floats are not accepted)"
        )));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("bad numerator in '{s}'")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("bad denominator in '{s}'")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in '{s}'")));
    }
    Ok(Q::new(num, den))
}

pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs_max<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(Q::zero(), |acc, v| if v > acc { v } else { acc })
}

pub fn sign_q(negative: bool) -> Q {
    if negative {
        -Q::one()
    } else {
        Q::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), qr(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), qr(-3, 4));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
        assert_eq!(format_rational(&qr(-3, 4)), "-3/4");
        assert_eq!(format_rational(&q(5)), "5");
    }

    #[test]
    fn rejects_floats() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
