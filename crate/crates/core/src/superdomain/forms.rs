//! Differential forms `ω = Σ ω_I dξ^I` with coefficients on the left.
//!
//! Basis indices follow the combined numbering (even indices `< n` first, then
//! odd ones). A basis monomial is a sorted multiset: even indices appear at
//! most once, odd indices may repeat because `dθ∧dθ ≠ 0`. Swapping adjacent
//! factors `dξ^A, dξ^B` costs `(−1)^{1+|A||B|}`, and moving a coefficient `g`
//! past `dξ^I` costs `(−1)^{p(I)|g|}` with `p(I)` the number of odd indices.
//! Forms act as Koszul-multilinear maps, `ω(…, φX, …)` pulling `φ` left past
//! `ω` and the earlier arguments, and `(fω)(X, …) = f ω(X, …)`; wedge products
//! evaluate by graded shuffles, so values do not depend on the basis. On sorted
//! `I` with `p` odd entries, `dξ^I(∂_{I_1},…,∂_{I_k}) = (−1)^{p(p−1)/2} μ(I)`,
//! `μ(I)` the product of the factorials of the multiplicities. The same type
//! carries frame forms `Σ ω_I E^I`.

use std::collections::BTreeMap;

use super::function::koszul_mul;
use super::{Chart, SuperFunction, SuperVectorField};
use crate::error::{Error, Result};
use crate::rational::{q, Q};

pub type Index = Vec<u16>;

/// `μ(I) = Π (multiplicity)!` of a sorted multi-index.
pub fn multiplicity(index: &[u16]) -> Q {
    let mut out = Q::from_integer(1.into());
    let mut run = 1i64;
    for w in index.windows(2) {
        if w[0] == w[1] {
            run += 1;
            out *= q(run);
        } else {
            run = 1;
        }
    }
    out
}

/// `dξ^I(∂_{I_1}, …, ∂_{I_k}) = (−1)^{p(p−1)/2} μ(I)` for sorted `I` with `p` odd entries.
pub fn basis_value(index: &[u16], n: usize) -> Q {
    let p = odd_count(index, n);
    let mu = multiplicity(index);
    if (p * p.saturating_sub(1) / 2) % 2 == 1 {
        -mu
    } else {
        mu
    }
}

/// Sorts a list of basis indices with the super-sign; `None` when an even index repeats.
pub(crate) fn sort_basis(indices: &[u16], n: usize) -> Option<(bool, Index)> {
    let mut v: Index = indices.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            let (a, b) = (v[j - 1] as usize >= n, v[j] as usize >= n);
            if !(a && b) {
                negative = !negative;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && (w[0] as usize) < n) {
        return None;
    }
    Some((negative, v))
}

fn odd_count(index: &[u16], n: usize) -> usize {
    index.iter().filter(|&&i| i as usize >= n).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperForm {
    chart: Chart,
    terms: BTreeMap<Index, SuperFunction>,
}

impl SuperForm {
    pub fn zero(chart: &Chart) -> Self {
        SuperForm {
            chart: *chart,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(f: &SuperFunction) -> Self {
        let mut out = Self::zero(f.chart());
        out.add_term(Vec::new(), f.clone());
        out
    }

    /// `f · dξ^{i_1}∧…∧dξ^{i_k}` for an arbitrary index order.
    pub fn monomial(f: &SuperFunction, indices: &[usize]) -> Result<Self> {
        let chart = *f.chart();
        if let Some(&bad) = indices.iter().find(|&&i| i >= chart.dim()) {
            return Err(Error::Index(format!("basis index {bad} of {}", chart.dim())));
        }
        let raw: Index = indices.iter().map(|&i| i as u16).collect();
        let mut out = Self::zero(&chart);
        if let Some((neg, sorted)) = sort_basis(&raw, chart.n) {
            out.add_term(sorted, if neg { -f } else { f.clone() });
        }
        Ok(out)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &SuperFunction)> {
        self.terms.iter()
    }

    pub fn component(&self, index: &[u16]) -> SuperFunction {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.chart))
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

    pub(crate) fn absorb(&mut self, other: Self) {
        for (i, f) in other.terms {
            self.add_term(i, f);
        }
    }

    pub(crate) fn add_term(&mut self, index: Index, f: SuperFunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&f);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Degrees present (a homogeneous form has exactly one).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_odd_index(&self, i: u16) -> bool {
        i as usize >= self.chart.n
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.check(&other.chart)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.scale(c));
        }
        out
    }

    /// `φ·ω`, coefficient multiplied on the left.
    pub fn left_mul(&self, phi: &SuperFunction) -> Result<Self> {
        let mut out = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), phi.checked_mul(v)?);
        }
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&SuperFunction) -> Result<SuperFunction>) -> Result<Self> {
        let mut out = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v)?);
        }
        Ok(out)
    }

    pub fn eval_body(&self) -> Self {
        self.map_coefficients(|f| Ok(f.eval_body())).expect("body evaluation")
    }

    /// `(f dξ^I)∧(g dξ^J) = (−1)^{p(I)|g|} f g dξ^I∧dξ^J`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.chart.check(&other.chart)?;
        let n = self.chart.n;
        let mut out = Self::zero(&self.chart);
        for (i, f) in &self.terms {
            let pi = odd_count(i, n) % 2 == 1;
            for (j, g) in &other.terms {
                let mut cat = i.clone();
                cat.extend_from_slice(j);
                let Some((neg, sorted)) = sort_basis(&cat, n) else {
                    continue;
                };
                let coeff = f.checked_mul(&g.involution_if(pi))?;
                out.add_term(sorted, if neg { -&coeff } else { coeff });
            }
        }
        Ok(out)
    }

    /// Exterior derivative in a basis of derivations: `deriv(B, f)` applies the
    /// `B`-th basis field to `f`, and `d_basis(B)` is the 2-form `d(E^B)`
    /// (`None` for a closed basis). For a coefficient `f`,
    /// `df = Σ_B (−1)^{|B||f|} E_B(f) E^B`.
    pub fn exterior_d_with(
        &self,
        deriv: &dyn Fn(usize, &SuperFunction) -> Result<SuperFunction>,
        d_basis: &dyn Fn(usize) -> Result<Option<SuperForm>>,
    ) -> Result<Self> {
        let n = self.chart.n;
        let dim = self.chart.dim();
        let mut out = Self::zero(&self.chart);
        let mut d_cache: BTreeMap<usize, Option<SuperForm>> = BTreeMap::new();
        for (index, f) in &self.terms {
            let basis = Self::monomial(&SuperFunction::one(&self.chart), &to_usize(index))?;
            for b in 0..dim {
                let g = deriv(b, &f.involution_if(b >= n))?;
                if g.is_zero() {
                    continue;
                }
                out.absorb(Self::monomial(&g, &[b])?.wedge(&basis)?);
            }
            for p in 0..index.len() {
                let ip = index[p] as usize;
                if let std::collections::btree_map::Entry::Vacant(e) = d_cache.entry(ip) {
                    e.insert(d_basis(ip)?);
                }
                let Some(dip) = d_cache[&ip].as_ref() else {
                    continue;
                };
                let one = SuperFunction::one(&self.chart);
                let head = Self::monomial(&one, &to_usize(&index[..p]))?;
                let tail = Self::monomial(&one, &to_usize(&index[p + 1..]))?;
                let mut piece = head.wedge(dip)?.wedge(&tail)?;
                if p % 2 == 1 {
                    piece = piece.scale(&q(-1));
                }
                out.absorb(piece.left_mul(f)?);
            }
        }
        Ok(out)
    }

    /// Coordinate exterior derivative.
    pub fn exterior_d(&self) -> Result<Self> {
        self.exterior_d_with(&|b, f| f.partial(b), &|_| Ok(None))
    }

    /// `d` of a function, as a 1-form.
    pub fn d_function(f: &SuperFunction) -> Result<Self> {
        Self::function(f).exterior_d()
    }

    /// Interior product with a field given by components in the form's basis:
    /// `ι_{φ E_C}ω = (−1)^{|φ||ω|} φ ι_{E_C}ω` and
    /// `ι_{E_C}(f E^I) = f ι_{E_C}E^I`.
    pub fn interior_components(&self, comps: &[SuperFunction]) -> Result<Self> {
        if comps.len() != self.chart.dim() {
            return Err(Error::Dimension("one component per basis direction".into()));
        }
        let n = self.chart.n;
        let mut out = Self::zero(&self.chart);
        for (index, f) in &self.terms {
            let p_odd = odd_count(index, n) % 2 == 1;
            let mut seen: Option<u16> = None;
            for (pos, &c) in index.iter().enumerate() {
                if seen == Some(c) {
                    continue;
                }
                seen = Some(c);
                let phi = &comps[c as usize];
                if phi.is_zero() {
                    continue;
                }
                let c_odd = c as usize >= n;
                let mut negative = false;
                for &prev in &index[..pos] {
                    let prev_odd = prev as usize >= n;
                    if !(c_odd && prev_odd) {
                        negative = !negative;
                    }
                }
                if c_odd && !p_odd {
                    negative = !negative;
                }
                let mult = index.iter().filter(|&&x| x == c).count() as i64;
                let mut rest = index.clone();
                rest.remove(pos);
                let coeff = koszul_mul(phi, f, p_odd).scale(&q(if negative { -mult } else { mult }));
                out.add_term(rest, coeff);
            }
        }
        Ok(out)
    }

    pub fn interior(&self, x: &SuperVectorField) -> Result<Self> {
        self.chart.check(x.chart())?;
        self.interior_components(x.components())
    }

    /// `ω(X_1, …, X_k) = ι_{X_k}⋯ι_{X_1}ω` restricted to degree `k`.
    pub fn evaluate_components(&self, args: &[Vec<SuperFunction>]) -> Result<SuperFunction> {
        let mut cur = self.restrict_degree(args.len());
        for a in args {
            cur = cur.interior_components(a)?;
        }
        Ok(cur.component(&[]))
    }

    pub fn evaluate(&self, args: &[SuperVectorField]) -> Result<SuperFunction> {
        let comps: Vec<Vec<SuperFunction>> = args.iter().map(|a| a.components().to_vec()).collect();
        self.evaluate_components(&comps)
    }

    /// Value on basis directions `(E_{c_1}, …, E_{c_k})` in any order.
    pub fn evaluate_basis(&self, dirs: &[usize]) -> Result<SuperFunction> {
        let raw: Index = dirs.iter().map(|&d| d as u16).collect();
        let Some((neg, sorted)) = sort_basis(&raw, self.chart.n) else {
            return Ok(SuperFunction::zero(&self.chart));
        };
        let v = self.component(&sorted).scale(&basis_value(&sorted, self.chart.n));
        Ok(if neg { -&v } else { v })
    }

    pub fn restrict_degree(&self, k: usize) -> Self {
        SuperForm {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.len() == k)
                .map(|(i, f)| (i.clone(), f.clone()))
                .collect(),
        }
    }

    /// Keeps only terms whose indices satisfy `keep`.
    pub fn filter_indices(&self, keep: impl Fn(&[u16]) -> bool) -> Self {
        SuperForm {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, f)| (i.clone(), f.clone()))
                .collect(),
        }
    }

    /// Rebuilds a form from its values on sorted basis tuples of degree `k`.
    pub fn from_basis_values(
        chart: &Chart,
        k: usize,
        value: &dyn Fn(&[u16]) -> Result<SuperFunction>,
    ) -> Result<Self> {
        let mut out = Self::zero(chart);
        for index in sorted_indices(chart, k)? {
            let v = value(&index)?;
            if v.is_zero() {
                continue;
            }
            let mu = basis_value(&index, chart.n);
            out.add_term(index, v.scale(&(Q::from_integer(1.into()) / mu)));
        }
        Ok(out)
    }

    /// Largest parity-homogeneous split: `(even part, odd part)` by total parity.
    pub fn parity_parts(&self) -> (Self, Self) {
        let n = self.chart.n;
        let mut even = Self::zero(&self.chart);
        let mut odd = Self::zero(&self.chart);
        for (i, f) in &self.terms {
            let p = odd_count(i, n) % 2 == 1;
            even.add_term(i.clone(), if p { f.odd_part() } else { f.even_part() });
            odd.add_term(i.clone(), if p { f.even_part() } else { f.odd_part() });
        }
        (even, odd)
    }

    pub fn any_truncated(&self) -> bool {
        self.terms.values().any(SuperFunction::truncated)
    }
}

fn to_usize(index: &[u16]) -> Vec<usize> {
    index.iter().map(|&i| i as usize).collect()
}

/// All sorted basis multi-indices of degree `k` on the chart.
pub(crate) fn sorted_indices(chart: &Chart, k: usize) -> Result<Vec<Index>> {
    let dim = chart.dim();
    let mut out = Vec::new();
    let mut cur: Index = Vec::new();
    fn go(chart: &Chart, dim: usize, k: usize, start: usize, cur: &mut Index, out: &mut Vec<Index>) -> bool {
        if out.len() > 200_000 {
            return false;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return true;
        }
        for i in start..dim {
            let next = if i < chart.n { i + 1 } else { i };
            cur.push(i as u16);
            let ok = go(chart, dim, k, next, cur, out);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if !go(chart, dim, k, 0, &mut cur, &mut out) {
        return Err(Error::Unsupported(format!(
            "too many basis {k}-forms on a chart of dimension {dim}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superdomain::text::parse_function;

    fn chart() -> Chart {
        Chart::new(3, 2, 4, 8).unwrap()
    }

    fn f(text: &str) -> SuperFunction {
        parse_function(&chart(), text).unwrap()
    }

    #[test]
    fn d_of_a_coordinate_evaluates_to_one() {
        let c = chart();
        let dx1 = SuperForm::d_function(&f("x1")).unwrap();
        let v = SuperVectorField::coordinate(&c, 0).unwrap();
        assert_eq!(dx1.evaluate(&[v]).unwrap(), f("1"));
        // dφ(X) = (−1)^{|X||φ|} X·φ for φ = θ¹, X = ∂_{θ¹}
        let dth = SuperForm::d_function(&f("th1")).unwrap();
        let w = SuperVectorField::coordinate(&c, 3).unwrap();
        assert_eq!(dth.evaluate(&[w]).unwrap(), f("-1"));
    }

    #[test]
    fn d_squared_vanishes_on_examples() {
        for text in ["th1", "x1*x2*th1*th2", "e1*x3^2*th2 + x1*e2*e3"] {
            let df = SuperForm::d_function(&f(text)).unwrap();
            assert!(df.exterior_d().unwrap().is_zero(), "{text}");
        }
    }

    #[test]
    fn interior_with_odd_directions() {
        let c = chart();
        let one = f("1");
        // dθ¹∧dθ² and dθ¹∧dθ¹
        let w12 = SuperForm::monomial(&one, &[3, 4]).unwrap();
        let w11 = SuperForm::monomial(&one, &[3, 3]).unwrap();
        let d1 = SuperVectorField::coordinate(&c, 3).unwrap();
        let d2 = SuperVectorField::coordinate(&c, 4).unwrap();
        assert_eq!(w12.interior(&d1).unwrap(), SuperForm::monomial(&one, &[4]).unwrap().scale(&q(-1)));
        assert_eq!(w12.interior(&d2).unwrap(), SuperForm::monomial(&one, &[3]).unwrap().scale(&q(-1)));
        assert_eq!(w11.interior(&d1).unwrap(), SuperForm::monomial(&one, &[3]).unwrap().scale(&q(-2)));
        assert_eq!(w11.evaluate(&[d1.clone(), d1]).unwrap(), f("-2"));
        assert_eq!(w11.evaluate_basis(&[3, 3]).unwrap(), f("-2"));
        // even directions are classically skew
        let dx12 = SuperForm::monomial(&one, &[1, 0]).unwrap();
        assert_eq!(dx12, SuperForm::monomial(&one, &[0, 1]).unwrap().scale(&q(-1)));
        assert!(SuperForm::monomial(&one, &[0, 0]).unwrap().is_zero());
    }

    #[test]
    fn basis_evaluation_matches_interior_products() {
        let c = chart();
        let omega = SuperForm::monomial(&f("x1 + e1*th2"), &[0, 3, 4])
            .unwrap()
            .checked_add(&SuperForm::monomial(&f("th1"), &[1, 3, 3]).unwrap())
            .unwrap();
        for dirs in [[0usize, 3, 4], [3, 0, 4], [4, 3, 0], [3, 3, 1], [1, 3, 3], [3, 1, 3]] {
            let fields: Vec<SuperVectorField> = dirs
                .iter()
                .map(|&d| SuperVectorField::coordinate(&c, d).unwrap())
                .collect();
            assert_eq!(
                omega.evaluate(&fields).unwrap(),
                omega.evaluate_basis(&dirs).unwrap(),
                "{dirs:?}"
            );
        }
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&[3, 3, 3, 4, 4]), q(12));
        assert_eq!(multiplicity(&[0, 1]), q(1));
    }
}
