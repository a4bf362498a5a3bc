//! Text form of superfunctions: a sum of terms, each a `*`-product of factors
//! `3/4`, `e2` (Λ generator), `{0x3:1/2, 0x0:1}` (Λ element), `x1^2`, `th3`.
//! Factors multiply left to right in the superalgebra. Output is canonical:
//! coefficient, then Λ generators, x powers and θ's in ascending order.

use num_traits::{One, Signed};

use super::{Chart, Key, SuperFunction};
use crate::error::{Error, Result};
use crate::lambda::{Blade, LambdaElement};
use crate::rational::{format_rational, parse_rational, Q};

pub(crate) fn format_function(f: &SuperFunction) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (k, c)) in f.terms().enumerate() {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !magnitude.is_one() || *k == Key::ONE {
            factors.push(format_rational(&magnitude));
        }
        for g in Blade(k.blade).indices() {
            factors.push(format!("e{g}"));
        }
        for v in 0..f.chart().n {
            match k.exponent(v) {
                0 => {}
                1 => factors.push(format!("x{}", v + 1)),
                e => factors.push(format!("x{}^{e}", v + 1)),
            }
        }
        for a in Blade(k.theta).indices() {
            factors.push(format!("th{a}"));
        }
        out.push_str(&factors.join("*"));
    }
    out
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

fn parse_factor(chart: &Chart, text: &str, column: usize) -> Result<SuperFunction> {
    let t = text.trim();
    if t.is_empty() {
        return Err(err(column, "empty factor"));
    }
    if t.starts_with('{') {
        let l = LambdaElement::from_inline(chart.generators, t).map_err(|e| err(column, e.to_string()))?;
        return SuperFunction::lambda(chart, &l);
    }
    if let Some(rest) = t.strip_prefix("th") {
        let a: usize = rest
            .parse()
            .map_err(|_| err(column, format!("bad odd coordinate '{t}'")))?;
        if a == 0 {
            return Err(err(column, "odd coordinates are numbered from 1"));
        }
        return SuperFunction::theta(chart, a - 1).map_err(|e| err(column, e.to_string()));
    }
    if let Some(rest) = t.strip_prefix('x') {
        let (idx, pow) = match rest.split_once('^') {
            Some((i, p)) => (i, p),
            None => (rest, "1"),
        };
        let i: usize = idx
            .parse()
            .map_err(|_| err(column, format!("bad even coordinate '{t}'")))?;
        let p: u32 = pow
            .parse()
            .map_err(|_| err(column, format!("bad exponent in '{t}'")))?;
        if i == 0 {
            return Err(err(column, "even coordinates are numbered from 1"));
        }
        let x = SuperFunction::x(chart, i - 1).map_err(|e| err(column, e.to_string()))?;
        let mut acc = SuperFunction::one(chart);
        for _ in 0..p {
            acc = &acc * &x;
        }
        return Ok(acc);
    }
    if let Some(rest) = t.strip_prefix('e') {
        let k: u32 = rest
            .parse()
            .map_err(|_| err(column, format!("bad Λ generator '{t}'")))?;
        return SuperFunction::generator(chart, k).map_err(|e| err(column, e.to_string()));
    }
    let c: Q = parse_rational(t).map_err(|e| err(column, e.to_string()))?;
    Ok(SuperFunction::constant(chart, c))
}

/// Parses the text form; columns in errors are 1-based character offsets.
pub fn parse_function(chart: &Chart, text: &str) -> Result<SuperFunction> {
    let chars: Vec<char> = text.chars().collect();
    let mut terms: Vec<(bool, usize, String)> = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    let mut pending_sign = false;
    let mut start = 1;
    let mut prev: Option<char> = None;
    for (pos, &ch) in chars.iter().enumerate() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        let separator = (ch == '+' || ch == '-')
            && depth == 0
            && !matches!(prev, Some('/') | Some('^') | Some('*') | Some(':'));
        if separator {
            if !current.trim().is_empty() {
                terms.push((negative, start, std::mem::take(&mut current)));
                negative = false;
            }
            current.clear();
            negative ^= ch == '-';
            pending_sign = true;
        } else {
            if !ch.is_whitespace() {
                pending_sign = false;
                if current.trim().is_empty() {
                    start = pos + 1;
                }
            }
            current.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if depth != 0 {
        return Err(err(chars.len(), "unbalanced braces"));
    }
    if current.trim().is_empty() {
        if pending_sign {
            return Err(err(chars.len(), "expression ends with a sign"));
        }
        return Err(err(1, "empty expression"));
    }
    terms.push((negative, start, current));
    let mut total = SuperFunction::zero(chart);
    for (neg, col, term) in terms {
        let mut acc = SuperFunction::one(chart);
        let mut offset = col - term.chars().take_while(|c| c.is_whitespace()).count();
        for factor in term.split('*') {
            let lead = factor.chars().take_while(|c| c.is_whitespace()).count();
            let f = parse_factor(chart, factor, offset + lead)?;
            acc = &acc * &f;
            offset += factor.chars().count() + 1;
        }
        if neg {
            acc = -&acc;
        }
        total = &total + &acc;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn chart() -> Chart {
        Chart::new(3, 2, 4, 6).unwrap()
    }

    #[test]
    fn round_trip_is_canonical() {
        let c = chart();
        let f = parse_function(&c, "3/4*x1^2*th2 - e1*e2*x3 + 2 + th2*e3*th1").unwrap();
        let text = format_function(&f);
        assert_eq!(parse_function(&c, &text).unwrap(), f);
        assert_eq!(format_function(&parse_function(&c, &text).unwrap()), text);
    }

    #[test]
    fn factor_order_carries_the_koszul_sign() {
        let c = chart();
        // θ²·e3·θ¹ = −e3·θ²θ¹ = e3·θ¹θ²
        let f = parse_function(&c, "th2*e3*th1").unwrap();
        assert_eq!(format_function(&f), "e3*th1*th2");
        let g = parse_function(&c, "th1*e1").unwrap();
        assert_eq!(format_function(&g), "-e1*th1");
    }

    #[test]
    fn lambda_literals_and_negative_exponent_guard() {
        let c = chart();
        let f = parse_function(&c, "{0x3:1/2, 0x0:-1}*x2").unwrap();
        assert_eq!(format_function(&f), "-x2 + 1/2*e1*e2*x2");
        assert_eq!(parse_function(&c, "-1/3").unwrap(), SuperFunction::constant(&c, qr(-1, 3)));
    }

    #[test]
    fn errors_report_columns() {
        let c = chart();
        match parse_function(&c, "x1 + th9") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_function(&c, "x1 +").is_err());
        assert!(parse_function(&c, "0.5*x1").is_err());
        assert!(parse_function(&c, "").is_err());
    }
}
