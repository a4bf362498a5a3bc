//! Formal flows of even vector fields as order-`K` jets in the flow time `t`.
//!
//! A jet is the list of Taylor coefficients `[a_0, a_1, …, a_K]` of
//! `Σ t^k a_k`. On functions `Φ̂_t φ = Σ t^k/k! V^k φ`; vector fields and
//! covariant tensors are transported by
//! `(Φ^*X)(g) = Φ̂_t(X(Φ̂_{−t} g))` and `(Φ^*T)(X…) = Φ̂_t(T(Φ_{−t}^*X…))`.

use super::tensor::require_even;
use super::{Chart, SuperForm, SuperFunction, SuperTensor, SuperVectorField, TensorField};
use crate::error::{Error, Result};
use crate::rational::{q, Q};

#[derive(Debug, Clone)]
pub struct FlowJet {
    field: SuperVectorField,
    order: usize,
}

/// Jet of the flow of an even field `V` to order `K ≥ 1`.
pub fn flow_jet(v: &SuperVectorField, order: usize) -> Result<FlowJet> {
    require_even(v)?;
    if order == 0 {
        return Err(Error::Validation("jet order must be at least 1".into()));
    }
    Ok(FlowJet {
        field: v.clone(),
        order,
    })
}

fn factorial(k: usize) -> Q {
    (1..=k as i64).fold(q(1), |acc, i| acc * q(i))
}

impl FlowJet {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn field(&self) -> &SuperVectorField {
        &self.field
    }

    pub fn chart(&self) -> &Chart {
        self.field.chart()
    }

    /// `V^k φ / k!` for `k = 0..=K`, with `t ↦ −t` when `backward`.
    fn exp_series(&self, f: &SuperFunction, backward: bool) -> Result<Vec<SuperFunction>> {
        let mut out = Vec::with_capacity(self.order + 1);
        let mut cur = f.clone();
        for k in 0..=self.order {
            let mut c = Q::from_integer(1.into()) / factorial(k);
            if backward && k % 2 == 1 {
                c = -c;
            }
            out.push(cur.scale(&c));
            if k < self.order {
                cur = self.field.apply(&cur)?;
            }
        }
        Ok(out)
    }

    /// `Φ̂_t` applied to a jet: `Σ_{i+j=k} V^i b_j / i!`.
    fn transport(&self, series: &[SuperFunction]) -> Result<Vec<SuperFunction>> {
        let mut out = vec![SuperFunction::zero(self.chart()); self.order + 1];
        for (j, b) in series.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (i, term) in self.exp_series(b, false)?.into_iter().enumerate() {
                if i + j > self.order {
                    break;
                }
                out[i + j].add_assign_ref(&term);
            }
        }
        Ok(out)
    }

    /// Taylor coefficients of `Φ̂_t φ`.
    pub fn function(&self, f: &SuperFunction) -> Result<Vec<SuperFunction>> {
        self.chart().check(f.chart())?;
        self.exp_series(f, false)
    }

    /// Taylor coefficients of `Φ̂_{−t} φ`.
    pub fn function_inverse(&self, f: &SuperFunction) -> Result<Vec<SuperFunction>> {
        self.chart().check(f.chart())?;
        self.exp_series(f, true)
    }

    /// Taylor coefficients of `Φ^*X`, componentwise `Φ̂_t(X(Φ̂_{−t} ξ^B))`.
    pub fn vector(&self, x: &SuperVectorField) -> Result<Vec<SuperVectorField>> {
        self.vector_with(x, false)
    }

    fn vector_with(&self, x: &SuperVectorField, backward: bool) -> Result<Vec<SuperVectorField>> {
        let chart = *self.chart();
        chart.check(x.chart())?;
        let mut comps = vec![Vec::with_capacity(chart.dim()); self.order + 1];
        for b in 0..chart.dim() {
            let coord = SuperFunction::coordinate(&chart, b)?;
            let inner = self.exp_series(&coord, !backward)?;
            let applied = inner
                .iter()
                .map(|a| x.apply(a))
                .collect::<Result<Vec<_>>>()?;
            let outer = if backward {
                self.transport_backward(&applied)?
            } else {
                self.transport(&applied)?
            };
            for (k, c) in outer.into_iter().enumerate() {
                comps[k].push(c);
            }
        }
        comps
            .into_iter()
            .map(|c| SuperVectorField::new(&chart, c))
            .collect()
    }

    fn transport_backward(&self, series: &[SuperFunction]) -> Result<Vec<SuperFunction>> {
        let mut out = vec![SuperFunction::zero(self.chart()); self.order + 1];
        for (j, b) in series.iter().enumerate() {
            for (i, term) in self.exp_series(b, true)?.into_iter().enumerate() {
                if i + j > self.order {
                    break;
                }
                out[i + j].add_assign_ref(&term);
            }
        }
        Ok(out)
    }

    /// Taylor coefficients of `Φ^*T` on coordinate tuples.
    pub fn tensor(&self, t: &SuperTensor) -> Result<Vec<SuperTensor>> {
        let chart = *self.chart();
        chart.check(t.chart())?;
        let backward: Vec<Vec<SuperVectorField>> = (0..chart.dim())
            .map(|b| self.vector_with(&SuperVectorField::coordinate(&chart, b)?, true))
            .collect::<Result<_>>()?;
        let mut values: Vec<Vec<(Vec<usize>, SuperFunction)>> = vec![Vec::new(); self.order + 1];
        let degree = t.degree();
        let mut tuple = vec![0usize; degree];
        loop {
            let mut series = vec![SuperFunction::zero(&chart); self.order + 1];
            self.accumulate(t, &backward, &tuple, 0, &mut Vec::new(), 0, &mut series)?;
            for (k, v) in self.transport(&series)?.into_iter().enumerate() {
                if !v.is_zero() {
                    values[k].push((tuple.clone(), v));
                }
            }
            if !advance(&mut tuple, chart.dim()) {
                break;
            }
        }
        values
            .into_iter()
            .map(|v| SuperTensor::new(&chart, degree, t.symmetry(), v))
            .collect()
    }

    /// Adds `t^{Σk} T(Y_1[k_1], …, Y_q[k_q])` over all order splits.
    #[allow(clippy::too_many_arguments)]
    fn accumulate(
        &self,
        t: &SuperTensor,
        backward: &[Vec<SuperVectorField>],
        tuple: &[usize],
        pos: usize,
        chosen: &mut Vec<Vec<SuperFunction>>,
        used: usize,
        series: &mut [SuperFunction],
    ) -> Result<()> {
        if pos == tuple.len() {
            let v = t.evaluate_components(chosen)?;
            series[used].add_assign_ref(&v);
            return Ok(());
        }
        for k in 0..=self.order - used {
            let y = &backward[tuple[pos]][k];
            if y.is_zero() {
                continue;
            }
            chosen.push(y.components().to_vec());
            self.accumulate(t, backward, tuple, pos + 1, chosen, used + k, series)?;
            chosen.pop();
        }
        Ok(())
    }

    /// Taylor coefficients of `Φ^*ω`.
    pub fn form(&self, w: &SuperForm) -> Result<Vec<SuperForm>> {
        let mut out = vec![SuperForm::zero(self.chart()); self.order + 1];
        for degree in w.degrees() {
            let t = SuperTensor::from_form(w, degree)?;
            for (k, piece) in self.tensor(&t)?.into_iter().enumerate() {
                out[k] = out[k].checked_add(&piece.to_form()?)?;
            }
        }
        Ok(out)
    }

    pub fn field_jet(&self, field: &TensorField) -> Result<Vec<TensorField>> {
        Ok(match field {
            TensorField::Function(f) => self.function(f)?.into_iter().map(TensorField::Function).collect(),
            TensorField::Vector(x) => self.vector(x)?.into_iter().map(TensorField::Vector).collect(),
            TensorField::Covariant(t) => self.tensor(t)?.into_iter().map(TensorField::Covariant).collect(),
            TensorField::Form(w) => self.form(w)?.into_iter().map(TensorField::Form).collect(),
        })
    }

    /// First-order coefficient of the pullback, to compare with `L_V`.
    pub fn first_order(&self, field: &TensorField) -> Result<TensorField> {
        Ok(self.field_jet(field)?.swap_remove(1))
    }

    /// Images `ξ^B_t = Σ t^k (V^k ξ^B)/k!` on `ext`, a chart with parameters
    /// appended; `params` lists the parameter coordinates standing for `t`
    /// (their sum is substituted).
    pub fn coordinate_images(&self, ext: &Chart, params: &[usize]) -> Result<Vec<SuperFunction>> {
        let chart = *self.chart();
        let mut t = SuperFunction::zero(ext);
        for &p in params {
            t.add_assign_ref(&SuperFunction::x(ext, p)?);
        }
        let mut images = Vec::with_capacity(chart.dim());
        for b in 0..chart.dim() {
            let coeffs = self.function(&SuperFunction::coordinate(&chart, b)?)?;
            let mut img = SuperFunction::zero(ext);
            let mut power = SuperFunction::one(ext);
            for c in coeffs {
                img.add_assign_ref(&c.embed(ext)?.checked_mul(&power)?);
                power = power.checked_mul(&t)?;
            }
            images.push(img);
        }
        Ok(images)
    }

    /// `Φ̂_t φ` written as a function on `ext` with `t` the given parameter sum.
    pub fn function_on(&self, f: &SuperFunction, ext: &Chart, params: &[usize]) -> Result<SuperFunction> {
        let mut t = SuperFunction::zero(ext);
        for &p in params {
            t.add_assign_ref(&SuperFunction::x(ext, p)?);
        }
        let mut out = SuperFunction::zero(ext);
        let mut power = SuperFunction::one(ext);
        for c in self.function(f)? {
            out.add_assign_ref(&c.embed(ext)?.checked_mul(&power)?);
            power = power.checked_mul(&t)?;
        }
        Ok(out.truncate_parameters(params, self.order as u32))
    }

    /// `Φ̂_t φ − φ(ξ_t)`: zero exactly when `Φ̂_t` acts as an algebra map up to order `K`.
    pub fn homomorphism_residual(&self, f: &SuperFunction) -> Result<SuperFunction> {
        let ext = self.parameter_chart(1)?;
        let p = [self.chart().n];
        let images = self.coordinate_images(&ext, &p)?;
        let direct = self.function_on(f, &ext, &p)?;
        let composed = f.substitute(&images)?.truncate_parameters(&p, self.order as u32);
        Ok((&direct - &composed).truncate_parameters(&p, self.order as u32))
    }

    /// `(Φ̂_t φ)(ξ_s) − Φ̂_{t+s} φ` truncated at total parameter order `K`.
    pub fn group_law_residual(&self, f: &SuperFunction) -> Result<SuperFunction> {
        let ext = self.parameter_chart(2)?;
        let (t, s) = (self.chart().n, self.chart().n + 1);
        let order = self.order as u32;
        let after_t = self.function_on(f, &ext, &[t])?;
        let mut images = self.coordinate_images(&ext, &[s])?;
        images.insert(t, SuperFunction::x(&ext, t)?);
        images.insert(s, SuperFunction::x(&ext, s)?);
        let composed = after_t.substitute(&images)?.truncate_parameters(&[t, s], order);
        let joint = self.function_on(f, &ext, &[t, s])?;
        Ok((&composed - &joint).truncate_parameters(&[t, s], order))
    }

    fn parameter_chart(&self, extra: usize) -> Result<Chart> {
        let c = self.chart();
        let degree = (c.max_x_degree as usize + self.order).min(super::MAX_X_DEGREE as usize) as u32;
        Chart::new(c.n + extra, c.m, c.generators, degree)
    }
}

fn advance(tuple: &mut [usize], dim: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return true;
        }
        *slot = 0;
    }
    false
}
