//! Free Dirac Lagrangian density on flat `ℝ^{3,1}` for a fermionic field
//! `ψ = ψ^α e_α` with odd-valued complex components.

use crate::clifford::GammaRep;
use crate::error::{Error, Result};
use crate::lambda::Parity;
use crate::linalg::CMat;
use crate::rational::Q;
use crate::superdomain::SuperFunction;

/// `re + i·im` with both parts Λ-valued functions over the real Λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFunction {
    pub re: SuperFunction,
    pub im: SuperFunction,
}

impl ComplexFunction {
    pub fn new(re: SuperFunction, im: SuperFunction) -> Result<Self> {
        re.chart().check(im.chart())?;
        Ok(ComplexFunction { re, im })
    }

    pub fn real(re: SuperFunction) -> Self {
        let im = SuperFunction::zero(re.chart());
        ComplexFunction { re, im }
    }

    pub fn zero_like(f: &SuperFunction) -> Self {
        ComplexFunction::real(SuperFunction::zero(f.chart()))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexFunction {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let re = &self.re.checked_mul(&o.re)? - &self.im.checked_mul(&o.im)?;
        let im = &self.re.checked_mul(&o.im)? + &self.im.checked_mul(&o.re)?;
        Ok(ComplexFunction { re, im })
    }

    /// `(a + ib)(p + iq)` for a complex rational `p + iq`.
    pub fn scale_complex(&self, p: &Q, q: &Q) -> Self {
        ComplexFunction {
            re: &self.re.scale(p) - &self.im.scale(q),
            im: &self.re.scale(q) + &self.im.scale(p),
        }
    }

    pub fn times_i(&self) -> Self {
        ComplexFunction {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    /// Standard conjugation: complex conjugation together with blade reversal.
    pub fn conjugate(&self) -> Self {
        ComplexFunction {
            re: self.re.conjugate_lambda(),
            im: -&self.im.conjugate_lambda(),
        }
    }

    pub fn partial(&self, b: usize) -> Result<Self> {
        Ok(ComplexFunction {
            re: self.re.partial(b)?,
            im: self.im.partial(b)?,
        })
    }
}

fn apply(m: &CMat, psi: &[ComplexFunction]) -> Vec<ComplexFunction> {
    (0..m.re.rows())
        .map(|r| {
            let mut acc = ComplexFunction::zero_like(&psi[0].re);
            for (c, p) in psi.iter().enumerate() {
                let (a, b) = (&m.re[(r, c)], &m.im[(r, c)]);
                if a == &Q::from_integer(0.into()) && b == &Q::from_integer(0.into()) {
                    continue;
                }
                acc = acc.add(&p.scale_complex(a, b));
            }
            acc
        })
        .collect()
}

/// `⟨a, b⟩ = aᵀ Γ⁰ b`.
fn pairing(g0: &CMat, a: &[ComplexFunction], b: &[ComplexFunction]) -> Result<ComplexFunction> {
    let gb = apply(g0, b);
    let mut acc = ComplexFunction::zero_like(&a[0].re);
    for (x, y) in a.iter().zip(&gb) {
        acc = acc.add(&x.mul(y)?);
    }
    Ok(acc)
}

/// Coefficient of `dx⁰∧dx¹∧dx²∧dx³` in `i⟨ψ̄, Γ^j ∂_j ψ⟩ − m⟨ψ̄, ψ⟩`, where
/// `Γ^j` are the rep matrices and `ψ̄^α = −conj(ψ^α)` since the spinor frame is odd.
pub fn dirac_lagrangian_density(psi: &[ComplexFunction], mass: &Q, rep: &GammaRep) -> Result<ComplexFunction> {
    if rep.n() != 4 || rep.dim_s() != 4 || psi.len() != 4 {
        return Err(Error::Dimension("the Dirac density needs 4 spinor components over a 4D rep".into()));
    }
    let chart = *psi[0].re.chart();
    if chart.n != 4 {
        return Err(Error::Dimension("the Dirac density lives on a chart with 4 even coordinates".into()));
    }
    for p in psi {
        chart.check(p.re.chart())?;
        chart.check(p.im.chart())?;
        for part in [&p.re, &p.im] {
            if part.parity() != Parity::Odd && !part.is_zero() {
                return Err(Error::Parity("Dirac field components must be odd-valued".into()));
            }
        }
    }
    let bar: Vec<ComplexFunction> = psi
        .iter()
        .map(|p| {
            let c = p.conjugate();
            ComplexFunction {
                re: -&c.re,
                im: -&c.im,
            }
        })
        .collect();
    let g0 = rep.gamma(0);
    let mut kinetic = vec![ComplexFunction::zero_like(&psi[0].re); 4];
    for j in 0..4 {
        let d: Vec<ComplexFunction> = psi.iter().map(|p| p.partial(j)).collect::<Result<_>>()?;
        for (k, v) in apply(rep.gamma(j), &d).into_iter().enumerate() {
            kinetic[k] = kinetic[k].add(&v);
        }
    }
    let kin = pairing(g0, &bar, &kinetic)?.times_i();
    let mass_term = pairing(g0, &bar, psi)?;
    let m = -mass.clone();
    Ok(kin.add(&mass_term.scale_complex(&m, &Q::from_integer(0.into()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{gamma_rep, GammaStyle, Signature};
    use crate::rational::q;
    use crate::superdomain::Chart;

    fn setup() -> (Chart, GammaRep) {
        let chart = Chart::new(4, 0, 4, 4).unwrap();
        let rep = gamma_rep(&Signature::lorentzian(4).unwrap(), GammaStyle::Dirac).unwrap();
        (chart, rep)
    }

    fn gen(chart: &Chart, k: u32) -> SuperFunction {
        SuperFunction::generator(chart, k).unwrap()
    }

    #[test]
    fn zero_field() {
        let (c, rep) = setup();
        let psi = vec![ComplexFunction::real(SuperFunction::zero(&c)); 4];
        assert!(dirac_lagrangian_density(&psi, &q(3), &rep).unwrap().is_zero());
    }

    #[test]
    fn single_generator_mass_term_vanishes() {
        let (c, rep) = setup();
        let e1 = gen(&c, 1);
        let psi: Vec<ComplexFunction> = [1, 2, 0, -1]
            .iter()
            .map(|&k| ComplexFunction::real(e1.scale(&q(k))))
            .collect();
        assert!(dirac_lagrangian_density(&psi, &q(5), &rep).unwrap().is_zero());
    }

    #[test]
    fn constant_field_gives_the_mass_term() {
        let (c, rep) = setup();
        let zero = SuperFunction::zero(&c);
        let mut psi = vec![ComplexFunction::real(zero.clone()); 4];
        psi[0] = ComplexFunction::new(gen(&c, 1), gen(&c, 2)).unwrap();
        // ψ̄_0 = −(e1 − i e2), ⟨ψ̄,ψ⟩ = −2i e1e2, ℒ = 2im e1e2
        let l = dirac_lagrangian_density(&psi, &q(3), &rep).unwrap();
        let e12 = gen(&c, 1).checked_mul(&gen(&c, 2)).unwrap();
        assert_eq!(l, ComplexFunction::new(zero, e12.scale(&q(6))).unwrap());
    }

    #[test]
    fn even_components_are_rejected() {
        let (c, rep) = setup();
        let mut psi = vec![ComplexFunction::real(SuperFunction::zero(&c)); 4];
        psi[2] = ComplexFunction::real(SuperFunction::x(&c, 0).unwrap());
        assert!(matches!(dirac_lagrangian_density(&psi, &q(1), &rep), Err(Error::Parity(_))));
    }
}
