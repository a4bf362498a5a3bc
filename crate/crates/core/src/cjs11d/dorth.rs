//! D-orthogonal forms `Σ z_M E^M` (even coframe indices only) with the
//! musical isomorphisms, Hodge star and inner product of a diagonal `η`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rational::{q, qone, qzero};
use crate::superdomain::{Chart, SuperForm, SuperFunction};
use crate::Q;

/// Sign of the permutation sorting `idx`, or `None` on a repeat.
pub fn permutation_sign(idx: &[usize]) -> Option<i8> {
    let mut v = idx.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Strictly increasing `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn eps_product(eps: &[Q], idx: &[u16]) -> Q {
    idx.iter().fold(qone(), |acc, &i| acc * &eps[i as usize])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DOrthForm {
    form: SuperForm,
    degree: usize,
}

impl DOrthForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        DOrthForm {
            form: SuperForm::zero(chart),
            degree,
        }
    }

    /// Wraps a frame form; every index must be even (`< n`) and the degree uniform.
    pub fn new(form: SuperForm, degree: usize) -> Result<Self> {
        let n = form.chart().n;
        for (idx, _) in form.terms() {
            if idx.len() != degree {
                return Err(Error::Validation(format!("term {idx:?} is not of degree {degree}")));
            }
            if idx.iter().any(|&i| i as usize >= n) {
                return Err(Error::Validation(format!(
                    "term {idx:?} has a coframe slot in D; the form is not D-orthogonal"
                )));
            }
        }
        Ok(DOrthForm { form, degree })
    }

    /// From components on increasing even index lists.
    pub fn from_components(
        chart: &Chart,
        degree: usize,
        comps: impl IntoIterator<Item = (Vec<usize>, SuperFunction)>,
    ) -> Result<Self> {
        let mut form = SuperForm::zero(chart);
        for (idx, f) in comps {
            if idx.len() != degree || idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= chart.n) {
                return Err(Error::Validation(format!(
                    "{idx:?} is not an increasing list of {degree} even indices"
                )));
            }
            form.add_term(idx.iter().map(|&i| i as u16).collect(), f);
        }
        Self::new(form, degree)
    }

    pub fn chart(&self) -> &Chart {
        self.form.chart()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form(&self) -> &SuperForm {
        &self.form
    }

    pub fn into_form(self) -> SuperForm {
        self.form
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn component(&self, idx: &[u16]) -> SuperFunction {
        self.form.component(idx)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &SuperFunction)> {
        self.form.terms()
    }

    pub fn is_even(&self) -> bool {
        self.form
            .terms()
            .all(|(_, f)| f.is_zero() || f.parity() == crate::lambda::Parity::Even)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Dimension("adding D-orthogonal forms of different degrees".into()));
        }
        Ok(DOrthForm {
            form: self.form.checked_add(&other.form)?,
            degree: self.degree.max(other.degree),
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        DOrthForm {
            form: self.form.scale(c),
            degree: self.degree,
        }
    }

    /// Components `w^M = ε_{m_1}⋯ε_{m_r} w_M` of `w♯`.
    pub fn sharp(&self, eps: &[Q]) -> BTreeMap<Vec<u16>, SuperFunction> {
        self.form
            .terms()
            .map(|(idx, f)| (idx.clone(), f.scale(&eps_product(eps, idx))))
            .collect()
    }

    /// Inverse of [`sharp`](Self::sharp).
    pub fn flat(chart: &Chart, degree: usize, vector: &BTreeMap<Vec<u16>, SuperFunction>, eps: &[Q]) -> Result<Self> {
        let comps = vector
            .iter()
            .map(|(idx, f)| (idx.iter().map(|&i| i as usize).collect(), f.scale(&eps_product(eps, idx))));
        Self::from_components(chart, degree, comps)
    }

    /// `ι_{E_i}` on a D-orthogonal form.
    pub fn interior_even(&self, i: usize) -> Result<Self> {
        let mut comps = vec![SuperFunction::zero(self.chart()); self.chart().dim()];
        comps[i] = SuperFunction::one(self.chart());
        let form = self.form.interior_components(&comps)?;
        Self::new(form, self.degree.saturating_sub(1))
    }
}

/// `ε_{m_1}` on the diagonal of the even block; errors unless constant, diagonal, `±1`.
pub fn epsilons_of(eta: &Mat, n: usize) -> Result<Vec<Q>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && eta[(i, j)] != qzero() {
                return Err(Error::Validation("the even block of g must be diagonal".into()));
            }
        }
        let e = eta[(i, i)].clone();
        if e != qone() && e != q(-1) {
            return Err(Error::Validation(format!("g(E_{i}, E_{i}) = {e} is not ±1")));
        }
        out.push(e);
    }
    Ok(out)
}

/// A D⊥-volume form `ω = λ E^1∧…∧E^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeForm {
    omega: DOrthForm,
}

impl VolumeForm {
    /// Requires degree `n` and `λ^ℝ ≠ 0` at the origin of the chart.
    pub fn new(omega: DOrthForm) -> Result<Self> {
        let n = omega.chart().n;
        if omega.degree() != n {
            return Err(Error::Validation(format!("a volume form has degree {n}")));
        }
        let v = VolumeForm { omega };
        if v.lambda_real()? == qzero() {
            return Err(Error::Orientation("λ is not invertible at the origin".into()));
        }
        Ok(v)
    }

    /// `E^1∧…∧E^n`.
    pub fn standard(chart: &Chart) -> Result<Self> {
        let all: Vec<usize> = (0..chart.n).collect();
        Self::new(DOrthForm::from_components(chart, chart.n, [(all, SuperFunction::one(chart))])?)
    }

    pub fn lambda(&self) -> SuperFunction {
        let all: Vec<u16> = (0..self.omega.chart().n as u16).collect();
        self.omega.component(&all)
    }

    fn lambda_real(&self) -> Result<Q> {
        let chart = *self.omega.chart();
        Ok(self.lambda().eval_at(&vec![qzero(); chart.n])?.real_part())
    }

    pub fn positively_oriented(&self) -> Result<bool> {
        Ok(self.lambda_real()? > qzero())
    }
}

fn require_oriented(vol: Option<&VolumeForm>) -> Result<()> {
    match vol {
        None => Err(Error::Orientation("the Hodge star needs an oriented scenario".into())),
        Some(v) if !v.positively_oriented()? => {
            Err(Error::Orientation("the frame is not positively oriented".into()))
        }
        Some(_) => Ok(()),
    }
}

/// `∗w = Σ ε_{MJ} w^M E^J` over increasing `M`, `J`.
pub fn hodge_star(w: &DOrthForm, eps: &[Q], vol: Option<&VolumeForm>) -> Result<DOrthForm> {
    require_oriented(vol)?;
    let chart = *w.chart();
    let n = chart.n;
    if eps.len() != n {
        return Err(Error::Dimension(format!("{n} signs ε_i expected")));
    }
    let mut form = SuperForm::zero(&chart);
    for (m, wm) in w.sharp(eps) {
        let comp: Vec<usize> = (0..n).filter(|i| !m.contains(&(*i as u16))).collect();
        let mut all: Vec<usize> = m.iter().map(|&i| i as usize).collect();
        all.extend_from_slice(&comp);
        let sign = permutation_sign(&all).ok_or_else(|| Error::Validation("repeated index".into()))?;
        form.add_term(comp.iter().map(|&i| i as u16).collect(), wm.scale(&q(sign as i64)));
    }
    DOrthForm::new(form, n - w.degree())
}

/// Brute-force `∗w`: every pair of increasing `M`, `J` with the full `ε` contraction.
pub fn hodge_star_oracle(w: &DOrthForm, eps: &[Q], vol: Option<&VolumeForm>) -> Result<DOrthForm> {
    require_oriented(vol)?;
    let chart = *w.chart();
    let n = chart.n;
    let r = w.degree();
    let mut comps = Vec::new();
    for j in combinations(n, n - r) {
        let mut acc = SuperFunction::zero(&chart);
        for m in combinations(n, r) {
            let mut all = m.clone();
            all.extend_from_slice(&j);
            let Some(sign) = permutation_sign(&all) else {
                continue;
            };
            let m16: Vec<u16> = m.iter().map(|&i| i as u16).collect();
            let mut raised = w.component(&m16);
            for &k in &m {
                raised = raised.scale(&eps[k]);
            }
            acc.add_scaled(&raised, &q(sign as i64));
        }
        if !acc.is_zero() {
            comps.push((j, acc));
        }
    }
    DOrthForm::from_components(&chart, n - r, comps)
}

/// `g(z, z′) = Σ_M z_M z′^M`.
pub fn form_inner(z: &DOrthForm, zp: &DOrthForm, eps: &[Q]) -> Result<SuperFunction> {
    if z.degree() != zp.degree() {
        return Err(Error::Dimension(format!(
            "inner product of forms of degrees {} and {}",
            z.degree(),
            zp.degree()
        )));
    }
    let mut acc = SuperFunction::zero(z.chart());
    let raised = zp.sharp(eps);
    for (idx, f) in z.terms() {
        if let Some(g) = raised.get(idx) {
            acc.add_assign_ref(&f.checked_mul(g)?);
        }
    }
    Ok(acc)
}

pub fn norm_sq(z: &DOrthForm, eps: &[Q]) -> Result<SuperFunction> {
    form_inner(z, z, eps)
}

/// `α♯` for a 1-form `α = α_A E^A`, from `g(α♯, E_B) = α_B`.
pub fn sharp_one_form(alpha: &[SuperFunction], eta: &Mat) -> Result<Vec<SuperFunction>> {
    if alpha.len() != eta.rows() {
        return Err(Error::Dimension("one component per frame direction".into()));
    }
    let inv = eta.inverse()?;
    let chart = *alpha[0].chart();
    let mut out = vec![SuperFunction::zero(&chart); alpha.len()];
    for (b, a, v) in inv.entries() {
        out[a].add_scaled(&alpha[b], v);
    }
    Ok(out)
}

/// `X♭ = g(X, ·)`, the inverse of [`sharp_one_form`].
pub fn flat_vector(x: &[SuperFunction], eta: &Mat) -> Result<Vec<SuperFunction>> {
    if x.len() != eta.rows() {
        return Err(Error::Dimension("one component per frame direction".into()));
    }
    let chart = *x[0].chart();
    let mut out = vec![SuperFunction::zero(&chart); x.len()];
    for (a, b, v) in eta.entries() {
        out[b].add_scaled(&x[a], v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superdomain::parse_function;

    fn chart4() -> Chart {
        Chart::new(4, 2, 4, 3).unwrap()
    }

    fn f(t: &str) -> SuperFunction {
        parse_function(&chart4(), t).unwrap()
    }

    fn euclid() -> Vec<Q> {
        vec![q(1); 4]
    }

    fn lorentz() -> Vec<Q> {
        vec![q(-1), q(1), q(1), q(1)]
    }

    #[test]
    fn star_of_e12_is_e34() {
        let c = chart4();
        let vol = VolumeForm::standard(&c).unwrap();
        let w = DOrthForm::from_components(&c, 2, [(vec![0, 1], f("1"))]).unwrap();
        let s = hodge_star(&w, &euclid(), Some(&vol)).unwrap();
        assert_eq!(s, DOrthForm::from_components(&c, 2, [(vec![2, 3], f("1"))]).unwrap());
        assert_eq!(s, hodge_star_oracle(&w, &euclid(), Some(&vol)).unwrap());
    }

    #[test]
    fn star_needs_orientation() {
        let c = chart4();
        let w = DOrthForm::from_components(&c, 1, [(vec![0], f("1"))]).unwrap();
        assert!(matches!(hodge_star(&w, &euclid(), None), Err(Error::Orientation(_))));
        let all = vec![0, 1, 2, 3];
        let neg = VolumeForm::new(DOrthForm::from_components(&c, 4, [(all, f("-2 + e1*e2"))]).unwrap()).unwrap();
        assert!(matches!(hodge_star(&w, &euclid(), Some(&neg)), Err(Error::Orientation(_))));
        let all = vec![0, 1, 2, 3];
        let bad = DOrthForm::from_components(&c, 4, [(all, f("e1*e2"))]).unwrap();
        assert!(matches!(VolumeForm::new(bad), Err(Error::Orientation(_))));
    }

    #[test]
    fn star_star_sign() {
        let c = chart4();
        let vol = VolumeForm::standard(&c).unwrap();
        let w = DOrthForm::from_components(&c, 1, [(vec![1], f("x1 + e1*e2")), (vec![3], f("2"))]).unwrap();
        for (eps, det) in [(euclid(), 1), (lorentz(), -1)] {
            let ss = hodge_star(&hodge_star(&w, &eps, Some(&vol)).unwrap(), &eps, Some(&vol)).unwrap();
            // r(n−r) = 3
            assert_eq!(ss, w.scale(&q(-det)));
        }
    }

    #[test]
    fn inner_products() {
        let c = chart4();
        let z = DOrthForm::from_components(&c, 2, [(vec![0, 1], f("1"))]).unwrap();
        let o = DOrthForm::from_components(&c, 2, [(vec![2, 3], f("1"))]).unwrap();
        assert_eq!(norm_sq(&z, &euclid()).unwrap(), f("1"));
        assert_eq!(norm_sq(&z, &lorentz()).unwrap(), f("-1"));
        assert!(form_inner(&z, &o, &euclid()).unwrap().is_zero());
        let one = DOrthForm::from_components(&c, 1, [(vec![0], f("1"))]).unwrap();
        assert!(matches!(form_inner(&z, &one, &euclid()), Err(Error::Dimension(_))));
    }

    #[test]
    fn sharp_and_flat() {
        let c = chart4();
        let e1 = DOrthForm::from_components(&c, 1, [(vec![0], f("1"))]).unwrap();
        let s = e1.sharp(&lorentz());
        assert_eq!(s[&vec![0u16]], f("-1"));
        assert_eq!(DOrthForm::flat(&c, 1, &s, &lorentz()).unwrap(), e1);
        // mixed V/S one-form with a skew β block
        let mut eta = Mat::zeros(6, 6);
        for (i, e) in lorentz().iter().enumerate() {
            eta[(i, i)] = e.clone();
        }
        eta[(4, 5)] = q(1);
        eta[(5, 4)] = q(-1);
        let alpha = vec![f("1"), f("0"), f("x2"), f("0"), f("e1"), f("3/2")];
        let sharp = sharp_one_form(&alpha, &eta).unwrap();
        assert_eq!(sharp[0], f("-1"));
        assert_eq!(sharp[4], f("3/2"));
        assert_eq!(sharp[5], f("-e1"));
        assert_eq!(flat_vector(&sharp, &eta).unwrap(), alpha);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), Some(1));
        assert_eq!(permutation_sign(&[1, 0, 2]), Some(-1));
        assert_eq!(permutation_sign(&[2, 0, 1]), Some(1));
        assert_eq!(permutation_sign(&[1, 1]), None);
        assert_eq!(combinations(5, 2).len(), 10);
    }
}
