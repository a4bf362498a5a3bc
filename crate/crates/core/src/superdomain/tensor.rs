//! Covariant tensor fields stored by their values on coordinate-field tuples,
//! and Lie derivatives along even vector fields.

use std::collections::BTreeMap;

use super::forms::sorted_indices;
use super::{basis_value, graded_bracket, Chart, SuperForm, SuperFunction, SuperVectorField};
use crate::error::{Error, Result};
use crate::lambda::Parity;
use crate::rational::{q, Q};

const MAX_TUPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorSymmetry {
    None,
    Symmetric,
    Skew,
}

/// A `(0,q)` tensor: `T_C = T(∂_{C_1}, …, ∂_{C_q})` for every tuple `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperTensor {
    chart: Chart,
    degree: usize,
    symmetry: TensorSymmetry,
    comps: BTreeMap<Vec<u16>, SuperFunction>,
}

fn tuple_count(dim: usize, q: usize) -> Result<usize> {
    let mut total = 1usize;
    for _ in 0..q {
        total = total.saturating_mul(dim);
    }
    if total > MAX_TUPLES {
        return Err(Error::Unsupported(format!("{dim}^{q} component tuples")));
    }
    Ok(total)
}

fn all_tuples(dim: usize, q: usize) -> Result<Vec<Vec<u16>>> {
    let total = tuple_count(dim, q)?;
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut t = vec![0u16; q];
        for slot in t.iter_mut().rev() {
            *slot = (code % dim) as u16;
            code /= dim;
        }
        out.push(t);
    }
    Ok(out)
}

impl SuperTensor {
    pub fn zero(chart: &Chart, degree: usize, symmetry: TensorSymmetry) -> Self {
        SuperTensor {
            chart: *chart,
            degree,
            symmetry,
            comps: BTreeMap::new(),
        }
    }

    /// Builds a tensor from explicit components and checks the declared symmetry.
    pub fn new(
        chart: &Chart,
        degree: usize,
        symmetry: TensorSymmetry,
        comps: impl IntoIterator<Item = (Vec<usize>, SuperFunction)>,
    ) -> Result<Self> {
        let mut t = Self::zero(chart, degree, symmetry);
        for (idx, f) in comps {
            if idx.len() != degree {
                return Err(Error::Dimension(format!("index {idx:?} for a degree-{degree} tensor")));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= chart.dim()) {
                return Err(Error::Index(format!("index {bad} of {}", chart.dim())));
            }
            chart.check(f.chart())?;
            t.add_component(idx.iter().map(|&i| i as u16).collect(), f);
        }
        t.check_symmetry()?;
        Ok(t)
    }

    /// `T_C = value(C)` on all tuples.
    pub fn from_fn(
        chart: &Chart,
        degree: usize,
        symmetry: TensorSymmetry,
        value: &dyn Fn(&[usize]) -> Result<SuperFunction>,
    ) -> Result<Self> {
        let mut t = Self::zero(chart, degree, symmetry);
        for idx in all_tuples(chart.dim(), degree)? {
            let u: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            t.add_component(idx, value(&u)?);
        }
        Ok(t)
    }

    /// `f · dξ^{C_1}⊗…⊗dξ^{C_q}`, valued `f` on `(∂_{C_1}, …, ∂_{C_q})` and zero on other basis tuples.
    pub fn basis(f: &SuperFunction, dirs: &[usize]) -> Result<Self> {
        Self::new(f.chart(), dirs.len(), TensorSymmetry::None, [(dirs.to_vec(), f.clone())])
    }

    /// The form as a graded-skew tensor.
    pub fn from_form(form: &SuperForm, degree: usize) -> Result<Self> {
        let chart = *form.chart();
        let mut t = Self::zero(&chart, degree, TensorSymmetry::Skew);
        let restricted = form.restrict_degree(degree);
        if restricted.is_zero() {
            return Ok(t);
        }
        for idx in all_tuples(chart.dim(), degree)? {
            let u: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            t.add_component(idx, restricted.evaluate_basis(&u)?);
        }
        Ok(t)
    }

    /// The form with the same values on coordinate tuples; requires the skew flag.
    pub fn to_form(&self) -> Result<SuperForm> {
        if self.symmetry != TensorSymmetry::Skew {
            return Err(Error::Symmetry("only graded-skew tensors are forms".into()));
        }
        let mut out = SuperForm::zero(&self.chart);
        for idx in sorted_indices(&self.chart, self.degree)? {
            let v = self.component(&idx);
            if v.is_zero() {
                continue;
            }
            let u: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            let inv = Q::from_integer(1.into()) / basis_value(&idx, self.chart.n);
            out.absorb(SuperForm::monomial(&v.scale(&inv), &u)?);
        }
        Ok(out)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn symmetry(&self) -> TensorSymmetry {
        self.symmetry
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<u16>, &SuperFunction)> {
        self.comps.iter()
    }

    pub fn component(&self, idx: &[u16]) -> SuperFunction {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.chart))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn add_component(&mut self, idx: Vec<u16>, f: SuperFunction) {
        if f.is_zero() {
            return;
        }
        match self.comps.entry(idx) {
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

    /// Declared graded (anti)symmetry under every adjacent swap:
    /// `T(…,∂_a,∂_b,…) = ±(−1)^{|a||b|} T(…,∂_b,∂_a,…)`.
    pub fn check_symmetry(&self) -> Result<()> {
        let skew = match self.symmetry {
            TensorSymmetry::None => return Ok(()),
            TensorSymmetry::Symmetric => false,
            TensorSymmetry::Skew => true,
        };
        for (idx, v) in &self.comps {
            for i in 0..idx.len().saturating_sub(1) {
                let both_odd = self.chart.is_odd(idx[i] as usize) && self.chart.is_odd(idx[i + 1] as usize);
                let mut swapped = idx.clone();
                swapped.swap(i, i + 1);
                let other = self.component(&swapped);
                let expected = if skew != both_odd { -&other } else { other };
                if *v != expected {
                    return Err(Error::Symmetry(format!(
                        "component {idx:?} breaks the declared {:?} symmetry",
                        self.symmetry
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(−1)^{|T|}` parity of the tensor: `|T_C| + Σ|C_j|` for every component.
    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (idx, v) in &self.comps {
            let shift = idx.iter().filter(|&&i| self.chart.is_odd(i as usize)).count() % 2 == 1;
            match v.parity() {
                Parity::Even => {
                    if shift {
                        odd = true
                    } else {
                        even = true
                    }
                }
                Parity::Odd => {
                    if shift {
                        even = true
                    } else {
                        odd = true
                    }
                }
                Parity::Mixed => return Parity::Mixed,
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.check(&other.chart)?;
        if self.degree != other.degree {
            return Err(Error::Dimension("tensor degrees differ".into()));
        }
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            TensorSymmetry::None
        };
        let mut out = self.clone();
        out.symmetry = symmetry;
        for (k, v) in &other.comps {
            out.add_component(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.chart, self.degree, self.symmetry);
        for (k, v) in &self.comps {
            out.add_component(k.clone(), v.scale(c));
        }
        out
    }

    pub fn map_components(&self, f: impl Fn(&SuperFunction) -> Result<SuperFunction>) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.degree, self.symmetry);
        for (k, v) in &self.comps {
            out.add_component(k.clone(), f(v)?);
        }
        Ok(out)
    }

    pub fn eval_body(&self) -> Self {
        self.map_components(|f| Ok(f.eval_body())).expect("body evaluation")
    }

    pub fn with_symmetry(mut self, symmetry: TensorSymmetry) -> Result<Self> {
        self.symmetry = symmetry;
        self.check_symmetry()?;
        Ok(self)
    }

    /// `T(X_1, …, X_q)` for `X_k = Σ φ_k^C ∂_C`. Each `φ_k` is pulled out to the
    /// left past `T` and `∂_{C_1}, …, ∂_{C_{k−1}}`.
    pub fn evaluate_components(&self, args: &[Vec<SuperFunction>]) -> Result<SuperFunction> {
        if args.len() != self.degree {
            return Err(Error::Dimension(format!(
                "{} arguments for a degree-{} tensor",
                args.len(),
                self.degree
            )));
        }
        for a in args {
            if a.len() != self.chart.dim() {
                return Err(Error::Dimension("one component per coordinate".into()));
            }
        }
        let mut out = SuperFunction::zero(&self.chart);
        for (idx, value) in &self.comps {
            if idx.iter().enumerate().any(|(k, &c)| args[k][c as usize].is_zero()) {
                continue;
            }
            let odd_dirs: Vec<bool> = idx.iter().map(|&c| self.chart.is_odd(c as usize)).collect();
            for (part, part_odd) in [(value.even_part(), false), (value.odd_part(), true)] {
                if part.is_zero() {
                    continue;
                }
                let mut acc = SuperFunction::one(&self.chart);
                for (k, &c) in idx.iter().enumerate() {
                    let phi = &args[k][c as usize];
                    let flip = odd_dirs[k..].iter().filter(|&&o| o).count() % 2 == 1;
                    let sign_odd = part_odd != flip;
                    let shifted = &phi.even_part()
                        + &(if sign_odd { -&phi.odd_part() } else { phi.odd_part() });
                    acc = acc.checked_mul(&shifted)?;
                }
                out.add_assign_ref(&acc.checked_mul(&part)?);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, args: &[SuperVectorField]) -> Result<SuperFunction> {
        for a in args {
            self.chart.check(a.chart())?;
        }
        let comps: Vec<Vec<SuperFunction>> = args.iter().map(|a| a.components().to_vec()).collect();
        self.evaluate_components(&comps)
    }
}

/// Fields the Lie derivative acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorField {
    Function(SuperFunction),
    Vector(SuperVectorField),
    Covariant(SuperTensor),
    Form(SuperForm),
}

impl TensorField {
    pub fn chart(&self) -> &Chart {
        match self {
            TensorField::Function(f) => f.chart(),
            TensorField::Vector(v) => v.chart(),
            TensorField::Covariant(t) => t.chart(),
            TensorField::Form(w) => w.chart(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TensorField::Function(f) => f.is_zero(),
            TensorField::Vector(v) => v.is_zero(),
            TensorField::Covariant(t) => t.is_zero(),
            TensorField::Form(w) => w.is_zero(),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let minus = q(-1);
        Ok(match (self, other) {
            (TensorField::Function(a), TensorField::Function(b)) => TensorField::Function(a.checked_add(&b.scale(&minus))?),
            (TensorField::Vector(a), TensorField::Vector(b)) => TensorField::Vector(a.checked_add(&b.scale(&minus))?),
            (TensorField::Covariant(a), TensorField::Covariant(b)) => TensorField::Covariant(a.checked_add(&b.scale(&minus))?),
            (TensorField::Form(a), TensorField::Form(b)) => TensorField::Form(a.sub(b)?),
            _ => return Err(Error::Validation("tensor kinds differ".into())),
        })
    }
}

pub(crate) fn require_even(v: &SuperVectorField) -> Result<()> {
    if v.parity() != Parity::Even {
        return Err(Error::OddVectorField);
    }
    Ok(())
}

/// `[V, ∂_A] = −(∂_A V^D) ∂_D` for even `V`.
fn bracket_with_coordinate(v: &SuperVectorField, a: usize) -> Result<Vec<SuperFunction>> {
    v.components()
        .iter()
        .map(|vd| Ok(-&vd.partial(a)?))
        .collect()
}

fn lie_covariant(v: &SuperVectorField, t: &SuperTensor) -> Result<SuperTensor> {
    let chart = *t.chart();
    let dim = chart.dim();
    let brackets: Vec<Vec<SuperFunction>> = (0..dim)
        .map(|a| bracket_with_coordinate(v, a))
        .collect::<Result<_>>()?;
    let coordinate = |b: usize| -> Vec<SuperFunction> {
        let mut c = vec![SuperFunction::zero(&chart); dim];
        c[b] = SuperFunction::one(&chart);
        c
    };
    let mut out = SuperTensor::zero(&chart, t.degree(), t.symmetry());
    for idx in all_tuples(dim, t.degree())? {
        let mut value = v.apply(&t.component(&idx))?;
        for k in 0..idx.len() {
            if brackets[idx[k] as usize].iter().all(SuperFunction::is_zero) {
                continue;
            }
            let args: Vec<Vec<SuperFunction>> = idx
                .iter()
                .enumerate()
                .map(|(j, &c)| {
                    if j == k {
                        brackets[c as usize].clone()
                    } else {
                        coordinate(c as usize)
                    }
                })
                .collect();
            value = &value - &t.evaluate_components(&args)?;
        }
        out.add_component(idx, value);
    }
    Ok(out)
}

/// `L_V` for an even field `V`: `V·f`, `[V,X]`, and the derivation rule
/// `(L_V T)(X…) = V(T(X…)) − Σ_k T(…, [V,X_k], …)` on covariant tensors and forms.
pub fn lie_derivative(v: &SuperVectorField, field: &TensorField) -> Result<TensorField> {
    require_even(v)?;
    v.chart().check(field.chart())?;
    Ok(match field {
        TensorField::Function(f) => TensorField::Function(v.apply(f)?),
        TensorField::Vector(x) => TensorField::Vector(graded_bracket(v, x)?),
        TensorField::Covariant(t) => TensorField::Covariant(lie_covariant(v, t)?),
        TensorField::Form(w) => {
            let mut out = SuperForm::zero(w.chart());
            for k in w.degrees() {
                let t = SuperTensor::from_form(w, k)?;
                out = out.checked_add(&lie_covariant(v, &t)?.to_form()?)?;
            }
            TensorField::Form(out)
        }
    })
}
