//! Exact arithmetic in the exterior algebra `Λ = Λ*W`, `W = ℝ^N`.
//!
//! Elements are sparse maps from blades (bitmasks of generator indices) to
//! rational coefficients. Every element carries its generator count `N`, and
//! binary operations refuse to mix different `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Q};

/// Maximum number of generators: one blade must fit in a `u64`.
pub const MAX_GENERATORS: u32 = 64;

/// Number of transpositions needed to sort the concatenation `a ++ b` of two
/// increasing index lists (given as bitmasks), modulo 2. Overlap is not checked.
#[inline]
pub fn reorder_parity(a: u64, b: u64) -> u32 {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 63 { 0 } else { a >> (j + 1) };
        count += above.count_ones();
    }
    count & 1
}

/// Basis monomial `e_{i1} ∧ … ∧ e_{ik}`, `i1 < … < ik`, stored as a bitmask
/// (bit `i-1` for generator `e_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_indices(indices: &[u32]) -> Result<(bool, Blade)> {
        // Returns (negative, blade) for the product e_{indices[0]} ∧ e_{indices[1]} ∧ …
        let mut mask = 0u64;
        let mut negative = false;
        for &i in indices {
            if i == 0 || i > MAX_GENERATORS {
                return Err(Error::Index(format!("generator e{i}")));
            }
            let bit = 1u64 << (i - 1);
            if mask & bit != 0 {
                return Ok((false, Blade(u64::MAX)));
            }
            negative ^= reorder_parity(mask, bit) == 1;
            mask |= bit;
        }
        Ok((negative, Blade(mask)))
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn indices(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        let mut rest = self.0;
        while rest != 0 {
            out.push(rest.trailing_zeros() + 1);
            rest &= rest - 1;
        }
        out
    }

    /// Product of two blades: `None` when they share a generator, otherwise
    /// the sign (true = negative) and the merged blade.
    #[inline]
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        Some((reorder_parity(self.0, other.0) == 1, Blade(self.0 | other.0)))
    }

    /// Sign `(−1)^{k(k−1)/2}` picked up by reversing the order of the factors.
    pub fn reversal_negative(self) -> bool {
        let k = self.degree() as u64;
        (k * k.saturating_sub(1) / 2) % 2 == 1
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Element of `Λ*ℝ^N` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaElement {
    generators: u32,
    terms: BTreeMap<Blade, Q>,
}

impl LambdaElement {
    pub fn zero(generators: u32) -> Self {
        assert!(
            (1..=MAX_GENERATORS).contains(&generators),
            "generator count must be in 1..=64"
        );
        LambdaElement {
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(generators: u32, value: Q) -> Self {
        let mut out = Self::zero(generators);
        out.add_term(Blade::SCALAR, value);
        out
    }

    pub fn one(generators: u32) -> Self {
        Self::scalar(generators, Q::one())
    }

    /// The generator `e_i`, `1 ≤ i ≤ N`.
    pub fn generator(generators: u32, i: u32) -> Result<Self> {
        if i == 0 || i > generators {
            return Err(Error::Index(format!("generator e{i} with N = {generators}")));
        }
        let mut out = Self::zero(generators);
        out.add_term(Blade(1u64 << (i - 1)), Q::one());
        Ok(out)
    }

    pub fn from_terms(generators: u32, terms: impl IntoIterator<Item = (Blade, Q)>) -> Result<Self> {
        let mut out = Self::zero(generators);
        let limit = if generators == 64 { u64::MAX } else { (1u64 << generators) - 1 };
        for (b, c) in terms {
            if b.0 & !limit != 0 {
                return Err(Error::Dimension(format!(
                    "blade {b} uses generators beyond N = {generators}"
                )));
            }
            out.add_term(b, c);
        }
        Ok(out)
    }

    pub fn generators(&self) -> u32 {
        self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> Q {
        self.terms.get(&blade).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, blade: Blade, value: Q) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.generators != other.generators {
            return Err(Error::Dimension(format!(
                "Λ elements over N = {} and N = {}",
                self.generators, other.generators
            )));
        }
        Ok(())
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.generators);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if let Some((neg, b)) = ba.wedge(*bb) {
                    let c = ca * cb;
                    out.add_term(b, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for b in self.terms.keys() {
            if b.is_odd() {
                odd = true;
            } else {
                even = true;
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    pub fn even_part(&self) -> Self {
        self.filter(|b| !b.is_odd())
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|b| b.is_odd())
    }

    fn filter(&self, keep: impl Fn(Blade) -> bool) -> Self {
        LambdaElement {
            generators: self.generators,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(**b))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Grade involution: `+1` on even blades, `−1` on odd blades.
    pub fn involution(&self) -> Self {
        let mut out = self.clone();
        for (b, c) in out.terms.iter_mut() {
            if b.is_odd() {
                *c = -c.clone();
            }
        }
        out
    }

    /// Standard conjugation for real `W`: identity on `Λ^0 + Λ^1`, reversal
    /// sign `(−1)^{k(k−1)/2}` on degree-`k` blades. Anti-homomorphism and involution.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        for (b, c) in out.terms.iter_mut() {
            if b.reversal_negative() {
                *c = -c.clone();
            }
        }
        out
    }

    /// Component in `ℝ ⊂ Λ` (the body of the element).
    pub fn real_part(&self) -> Q {
        self.coefficient(Blade::SCALAR)
    }

    pub fn is_invertible(&self) -> bool {
        !self.real_part().is_zero()
    }

    /// Two-sided inverse via the finite geometric series in the nilpotent part.
    pub fn invert(&self) -> Result<Self> {
        let r = self.real_part();
        if r.is_zero() {
            return Err(Error::NonInvertible);
        }
        let r_inv = Q::one() / &r;
        // a = r (1 + y), y = (a − r)/r nilpotent; a⁻¹ = r⁻¹ Σ (−y)^k
        let mut minus_y = self.clone();
        minus_y.add_term(Blade::SCALAR, -r.clone());
        let minus_y = minus_y.scale(&-r_inv.clone());
        let mut sum = Self::one(self.generators);
        let mut power = Self::one(self.generators);
        for _ in 0..=self.generators {
            power = power.wedge(&minus_y)?;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&r_inv))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.generators);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    /// Highest blade degree present (0 for scalars and for zero).
    pub fn top_degree(&self) -> u32 {
        self.terms.keys().map(|b| b.degree()).max().unwrap_or(0)
    }

    /// Serialization: blade mask as hexadecimal → `"p/q"`.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(b, c)| (format!("0x{:x}", b.0), format_rational(c)))
            .collect()
    }

    pub fn from_map(generators: u32, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut terms = Vec::new();
        for (k, v) in map {
            let hex = k.trim().trim_start_matches("0x").trim_start_matches("0X");
            let mask = u64::from_str_radix(hex, 16)
                .map_err(|_| Error::parse(format!("bad blade mask '{k}'")))?;
            terms.push((Blade(mask), parse_rational(v)?));
        }
        Self::from_terms(generators, terms)
    }

    /// Compact inline form `{0x3:1/2, 0x0:1}` used inside superfunction text.
    pub fn to_inline(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("0x{:x}:{}", b.0, format_rational(c)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn from_inline(generators: u32, text: &str) -> Result<Self> {
        let body = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::parse(format!("Λ literal must be braced: '{text}'")))?;
        let mut map = BTreeMap::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("expected mask:value in '{part}'")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Self::from_map(generators, &map)
    }
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                if b.0 == 0 {
                    format_rational(c)
                } else if c.is_one() {
                    b.to_string()
                } else {
                    format!("{}*{}", format_rational(c), b)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a LambdaElement> for &'a LambdaElement {
    type Output = LambdaElement;
    fn add(self, rhs: &'a LambdaElement) -> LambdaElement {
        self.check_same(rhs).expect("Λ addition");
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, c.clone());
        }
        out
    }
}

impl AddAssign<&LambdaElement> for LambdaElement {
    fn add_assign(&mut self, rhs: &LambdaElement) {
        self.check_same(rhs).expect("Λ addition");
        for (b, c) in &rhs.terms {
            self.add_term(*b, c.clone());
        }
    }
}

impl<'a> Sub<&'a LambdaElement> for &'a LambdaElement {
    type Output = LambdaElement;
    fn sub(self, rhs: &'a LambdaElement) -> LambdaElement {
        self + &(-rhs)
    }
}

impl Neg for &LambdaElement {
    type Output = LambdaElement;
    fn neg(self) -> LambdaElement {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl<'a> Mul<&'a LambdaElement> for &'a LambdaElement {
    type Output = LambdaElement;
    fn mul(self, rhs: &'a LambdaElement) -> LambdaElement {
        self.wedge(rhs).expect("Λ product")
    }
}
