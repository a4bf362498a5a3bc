use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Chart;
use crate::error::{Error, Result};
use crate::lambda::{reorder_parity, Blade, LambdaElement, Parity};
use crate::rational::{q, Q};

/// Term key `η_blade ⊗ x^exps θ^theta`. `exps` packs 4 bits per even coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub blade: u64,
    pub exps: u64,
    pub theta: u64,
}

impl Key {
    pub const ONE: Key = Key {
        blade: 0,
        exps: 0,
        theta: 0,
    };

    pub fn exponent(&self, i: usize) -> u32 {
        ((self.exps >> (4 * i)) & 0xf) as u32
    }

    pub fn x_degree(&self) -> u32 {
        let mut d = 0;
        let mut e = self.exps;
        while e != 0 {
            d += (e & 0xf) as u32;
            e >>= 4;
        }
        d
    }

    /// Parity of the term: Λ degree plus θ weight, mod 2.
    pub fn is_odd(&self) -> bool {
        (self.blade.count_ones() + self.theta.count_ones()) % 2 == 1
    }

    pub fn with_exponent(mut self, i: usize, e: u32) -> Key {
        self.exps &= !(0xf << (4 * i));
        self.exps |= (e as u64) << (4 * i);
        self
    }
}

/// Product of two term keys: `None` when a generator or θ repeats or the
/// x-degree exceeds `max`, otherwise `(negative, key)`.
#[inline]
pub(crate) fn key_product(a: &Key, b: &Key, max: u32) -> std::result::Result<(bool, Key), bool> {
    if a.blade & b.blade != 0 || a.theta & b.theta != 0 {
        return Err(false);
    }
    if a.x_degree() + b.x_degree() > max {
        return Err(true);
    }
    let sign = reorder_parity(a.blade, b.blade)
        + reorder_parity(a.theta, b.theta)
        + a.theta.count_ones() * b.blade.count_ones();
    Ok((
        sign % 2 == 1,
        Key {
            blade: a.blade | b.blade,
            exps: a.exps + b.exps,
            theta: a.theta | b.theta,
        },
    ))
}

/// Element of `Λ ⊗ ℝ[x] ⊗ Λ[θ]` on a chart.
#[derive(Debug, Clone, Eq)]
pub struct SuperFunction {
    chart: Chart,
    terms: BTreeMap<Key, Q>,
    truncated: bool,
}

impl PartialEq for SuperFunction {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.terms == other.terms
    }
}

impl std::hash::Hash for SuperFunction {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.chart.hash(state);
        self.terms.hash(state);
    }
}

impl SuperFunction {
    pub fn zero(chart: &Chart) -> Self {
        SuperFunction {
            chart: *chart,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn constant(chart: &Chart, c: Q) -> Self {
        let mut f = Self::zero(chart);
        f.add_term(Key::ONE, c);
        f
    }

    pub fn one(chart: &Chart) -> Self {
        Self::constant(chart, Q::one())
    }

    /// The Λ-valued constant `λ`.
    pub fn lambda(chart: &Chart, l: &LambdaElement) -> Result<Self> {
        if l.generators() != chart.generators {
            return Err(Error::Dimension(format!(
                "Λ element over N = {} on a chart with N = {}",
                l.generators(),
                chart.generators
            )));
        }
        let mut f = Self::zero(chart);
        for (b, c) in l.terms() {
            f.add_term(
                Key {
                    blade: b.0,
                    ..Key::ONE
                },
                c.clone(),
            );
        }
        Ok(f)
    }

    /// `x^{i+1}` (0-based index).
    pub fn x(chart: &Chart, i: usize) -> Result<Self> {
        if i >= chart.n {
            return Err(Error::Index(format!("even coordinate {} of {}", i + 1, chart.n)));
        }
        if chart.max_x_degree == 0 {
            let mut f = Self::zero(chart);
            f.truncated = true;
            return Ok(f);
        }
        let mut f = Self::zero(chart);
        f.add_term(Key::ONE.with_exponent(i, 1), Q::one());
        Ok(f)
    }

    /// `θ^{α+1}` (0-based index).
    pub fn theta(chart: &Chart, alpha: usize) -> Result<Self> {
        if alpha >= chart.m {
            return Err(Error::Index(format!("odd coordinate {} of {}", alpha + 1, chart.m)));
        }
        let mut f = Self::zero(chart);
        f.add_term(
            Key {
                theta: 1 << alpha,
                ..Key::ONE
            },
            Q::one(),
        );
        Ok(f)
    }

    /// Coordinate `ξ^B` in the combined numbering (`x` first, then `θ`).
    pub fn coordinate(chart: &Chart, b: usize) -> Result<Self> {
        if b < chart.n {
            Self::x(chart, b)
        } else {
            Self::theta(chart, b - chart.n)
        }
    }

    /// Λ generator `e_k` (1-based) as a constant function.
    pub fn generator(chart: &Chart, k: u32) -> Result<Self> {
        Self::lambda(chart, &LambdaElement::generator(chart.generators, k)?)
    }

    pub fn from_terms(chart: &Chart, terms: impl IntoIterator<Item = (Key, Q)>) -> Result<Self> {
        let mut f = Self::zero(chart);
        let gen_limit = if chart.generators == 64 {
            u64::MAX
        } else {
            (1u64 << chart.generators) - 1
        };
        let theta_limit = if chart.m == 64 { u64::MAX } else { (1u64 << chart.m) - 1 };
        for (k, c) in terms {
            if k.blade & !gen_limit != 0 || k.theta & !theta_limit != 0 {
                return Err(Error::Dimension(format!("term {k:?} outside the chart")));
            }
            if chart.n < 16 && k.exps >> (4 * chart.n) != 0 {
                return Err(Error::Dimension(format!("term {k:?} uses unknown even coordinates")));
            }
            if k.x_degree() > chart.max_x_degree {
                f.truncated = true;
                continue;
            }
            f.add_term(k, c);
        }
        Ok(f)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &Key) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set when some product dropped terms above `max_x_degree`.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub(crate) fn add_term(&mut self, key: Key, value: Q) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    /// Returns the constant value when the function is a real constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Key::ONE).cloned(),
            _ => None,
        }
    }

    pub fn parity(&self) -> Parity {
        let odd = self.terms.keys().filter(|k| k.is_odd()).count();
        match (odd, self.terms.len() - odd) {
            (0, _) => Parity::Even,
            (_, 0) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    pub fn even_part(&self) -> Self {
        self.filter(|k| !k.is_odd())
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|k| k.is_odd())
    }

    pub(crate) fn filter(&self, keep: impl Fn(&Key) -> bool) -> Self {
        SuperFunction {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            truncated: self.truncated,
        }
    }

    /// `(−1)^{|f|}` on homogeneous parts.
    pub fn involution(&self) -> Self {
        let mut out = self.clone();
        for (k, v) in out.terms.iter_mut() {
            if k.is_odd() {
                *v = -v.clone();
            }
        }
        out
    }

    /// `(−1)^{|f|}` applied when `flag` is set.
    pub fn involution_if(&self, flag: bool) -> Self {
        if flag {
            self.involution()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(&self.chart);
            z.truncated = self.truncated;
            return z;
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.check(&other.chart)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out.truncated |= other.truncated;
        Ok(out)
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        self.chart.check(&other.chart).expect("superfunction chart");
        for (k, v) in &other.terms {
            self.add_term(*k, v.clone());
        }
        self.truncated |= other.truncated;
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        self.chart.check(&other.chart).expect("superfunction chart");
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(*k, v * c);
        }
        self.truncated |= other.truncated;
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.chart.check(&other.chart)?;
        let mut out = Self::zero(&self.chart);
        out.truncated = self.truncated || other.truncated;
        let max = self.chart.max_x_degree;
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                match key_product(ka, kb, max) {
                    Ok((neg, k)) => {
                        let c = va * vb;
                        out.add_term(k, if neg { -c } else { c });
                    }
                    Err(trunc) => out.truncated |= trunc,
                }
            }
        }
        Ok(out)
    }

    /// `∂/∂x^{i+1}`.
    pub fn partial_x(&self, i: usize) -> Result<Self> {
        if i >= self.chart.n {
            return Err(Error::Index(format!("even coordinate {} of {}", i + 1, self.chart.n)));
        }
        let mut out = Self::zero(&self.chart);
        out.truncated = self.truncated;
        for (k, v) in &self.terms {
            let e = k.exponent(i);
            if e > 0 {
                out.add_term(k.with_exponent(i, e - 1), v * q(e as i64));
            }
        }
        Ok(out)
    }

    /// `∂/∂θ^{α+1}` as a left derivation: passing the Λ factor and the
    /// preceding θ's contributes `(−1)^{|η| + #{β < α in I}}`.
    pub fn partial_theta(&self, alpha: usize) -> Result<Self> {
        if alpha >= self.chart.m {
            return Err(Error::Index(format!("odd coordinate {} of {}", alpha + 1, self.chart.m)));
        }
        let bit = 1u64 << alpha;
        let below = bit - 1;
        let mut out = Self::zero(&self.chart);
        out.truncated = self.truncated;
        for (k, v) in &self.terms {
            if k.theta & bit == 0 {
                continue;
            }
            let passes = k.blade.count_ones() + (k.theta & below).count_ones();
            let key = Key {
                theta: k.theta & !bit,
                ..*k
            };
            out.add_term(key, if passes % 2 == 1 { -v.clone() } else { v.clone() });
        }
        Ok(out)
    }

    /// `∂/∂ξ^B` in the combined numbering.
    pub fn partial(&self, b: usize) -> Result<Self> {
        if b < self.chart.n {
            self.partial_x(b)
        } else {
            self.partial_theta(b - self.chart.n)
        }
    }

    /// Whether `f` depends on coordinate `b` at all.
    pub fn depends_on(&self, b: usize) -> bool {
        if b < self.chart.n {
            self.terms.keys().any(|k| k.exponent(b) > 0)
        } else {
            let bit = 1u64 << (b - self.chart.n);
            self.terms.keys().any(|k| k.theta & bit != 0)
        }
    }

    /// Evaluation at the body: all θ set to zero.
    pub fn eval_body(&self) -> Self {
        self.filter(|k| k.theta == 0)
    }

    /// Λ-valued value at a rational body point (θ = 0).
    pub fn eval_at(&self, point: &[Q]) -> Result<LambdaElement> {
        if point.len() != self.chart.n {
            return Err(Error::Dimension(format!(
                "point of length {} on a chart with n = {}",
                point.len(),
                self.chart.n
            )));
        }
        let mut terms: BTreeMap<Blade, Q> = BTreeMap::new();
        for (k, v) in &self.terms {
            if k.theta != 0 {
                continue;
            }
            let mut c = v.clone();
            for (i, p) in point.iter().enumerate() {
                let e = k.exponent(i);
                if e > 0 {
                    c *= num_traits::pow(p.clone(), e as usize);
                }
            }
            *terms.entry(Blade(k.blade)).or_insert_with(Q::zero) += c;
        }
        LambdaElement::from_terms(self.chart.generators, terms)
    }

    /// Standard conjugation of the Λ coefficients (reversal sign on blades).
    pub fn conjugate_lambda(&self) -> Self {
        let mut out = self.clone();
        for (k, v) in out.terms.iter_mut() {
            if Blade(k.blade).reversal_negative() {
                *v = -v.clone();
            }
        }
        out
    }

    /// Highest total x-degree present.
    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(Key::x_degree).max().unwrap_or(0)
    }

    /// Substitutes `ξ^B ↦ images[B]` (`x` images even, `θ` images odd),
    /// keeping Λ coefficients in front. An algebra homomorphism.
    pub fn substitute(&self, images: &[SuperFunction]) -> Result<Self> {
        if images.len() != self.chart.dim() {
            return Err(Error::Dimension("one image per coordinate is required".into()));
        }
        let target = *images
            .first()
            .map(|f| f.chart())
            .unwrap_or(&self.chart);
        for img in images {
            target.check(img.chart())?;
        }
        if target.generators != self.chart.generators {
            return Err(Error::ChartMismatch("substitution across Λ sizes".into()));
        }
        let mut out = Self::zero(&target);
        out.truncated = self.truncated;
        let mut powers: BTreeMap<(usize, u32), SuperFunction> = BTreeMap::new();
        for (k, v) in &self.terms {
            let mut t = SuperFunction::zero(&target);
            t.add_term(
                Key {
                    blade: k.blade,
                    ..Key::ONE
                },
                v.clone(),
            );
            for i in 0..self.chart.n {
                let e = k.exponent(i);
                if e == 0 {
                    continue;
                }
                let p = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let mut p = SuperFunction::one(&target);
                        for _ in 0..e {
                            p = p.checked_mul(&images[i])?;
                        }
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                t = t.checked_mul(&p)?;
            }
            let mut rest = k.theta;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                t = t.checked_mul(&images[self.chart.n + a])?;
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Re-expresses the function on a chart with `extra` even parameters
    /// appended after the last even coordinate.
    pub fn embed(&self, chart: &Chart) -> Result<Self> {
        if chart.n < self.chart.n
            || chart.m != self.chart.m
            || chart.generators != self.chart.generators
        {
            return Err(Error::ChartMismatch("embedding needs a parameter extension".into()));
        }
        let mut out = Self::zero(chart);
        out.truncated = self.truncated;
        for (k, v) in &self.terms {
            out.add_term(*k, v.clone());
        }
        Ok(out)
    }

    /// Coefficient of `(x^{p+1})^e` for a parameter coordinate `p`, restricted
    /// back to `chart` (the parameters removed).
    pub fn parameter_coefficient(&self, p: usize, e: u32, chart: &Chart) -> Result<Self> {
        let mut out = Self::zero(chart);
        out.truncated = self.truncated;
        for (k, v) in &self.terms {
            if k.exponent(p) != e {
                continue;
            }
            let key = k.with_exponent(p, 0);
            if chart.n < 16 && key.exps >> (4 * chart.n) != 0 {
                return Err(Error::ChartMismatch(
                    "restriction would drop other parameters".into(),
                ));
            }
            out.add_term(key, v.clone());
        }
        Ok(out)
    }

    /// Drops terms whose combined degree in the parameter coordinates exceeds `order`.
    pub fn truncate_parameters(&self, params: &[usize], order: u32) -> Self {
        self.filter(|k| params.iter().map(|&p| k.exponent(p)).sum::<u32>() <= order)
    }
}

/// `φ_even · f + φ_odd · (−1)^{extra} · (−1)^{|f|} f`: the product `φ·f`
/// after `φ` has been moved past an object of parity `|f| + extra`.
pub(crate) fn koszul_mul(phi: &SuperFunction, f: &SuperFunction, extra: bool) -> SuperFunction {
    let even = phi.even_part();
    let odd = phi.odd_part();
    let mut out = &even * f;
    if !odd.is_zero() {
        let g = f.involution_if(true);
        let prod = &odd * &g;
        if extra {
            out = &out - &prod;
        } else {
            out = &out + &prod;
        }
    }
    out
}

impl<'a> Add<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn add(self, rhs: &'a SuperFunction) -> SuperFunction {
        self.checked_add(rhs).expect("superfunction addition")
    }
}

impl<'a> Sub<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn sub(self, rhs: &'a SuperFunction) -> SuperFunction {
        self.checked_add(&-rhs).expect("superfunction subtraction")
    }
}

impl Neg for &SuperFunction {
    type Output = SuperFunction;
    fn neg(self) -> SuperFunction {
        self.scale(&-Q::one())
    }
}

impl<'a> Mul<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn mul(self, rhs: &'a SuperFunction) -> SuperFunction {
        self.checked_mul(rhs).expect("superfunction product")
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::format_function(self))
    }
}
