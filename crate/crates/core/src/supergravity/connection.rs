use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lambda::Parity;
use crate::linalg::Mat;
use crate::superdomain::{Chart, SuperFunction};
use crate::Q;

use super::frame::FrameField;

/// Frame components keyed `(C, A, B)`: torsion `T^C_{AB}`, Levi-Civita data, etc.
pub type Components3 = BTreeMap<(usize, usize, usize), SuperFunction>;
/// Curvature `R^D_{ABC}` keyed `(D, A, B, C)`, `R(E_A, E_B)E_C = R^D_{ABC} E_D`.
pub type Curvature = BTreeMap<(usize, usize, usize, usize), SuperFunction>;

fn add_into<K: Ord>(map: &mut BTreeMap<K, SuperFunction>, key: K, f: &SuperFunction) {
    if f.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(f.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().add_assign_ref(f);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn sign_if(negative: bool) -> Q {
    Q::from_integer(if negative { -1 } else { 1 }.into())
}

/// Metric in frame components `g_{AB} = g(E_A, E_B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMetric {
    chart: Chart,
    comps: BTreeMap<(usize, usize), SuperFunction>,
}

impl FrameMetric {
    pub fn new(chart: &Chart, comps: BTreeMap<(usize, usize), SuperFunction>) -> Result<Self> {
        for (&(a, b), f) in &comps {
            if a >= chart.dim() || b >= chart.dim() {
                return Err(Error::Index(format!("metric component ({a},{b})")));
            }
            chart.check(f.chart())?;
        }
        let comps = comps.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(FrameMetric { chart: *chart, comps })
    }

    pub fn constant(chart: &Chart, m: &Mat) -> Result<Self> {
        if m.rows() != chart.dim() || m.cols() != chart.dim() {
            return Err(Error::Dimension("metric matrix must be (n+m)×(n+m)".into()));
        }
        let comps = m
            .entries()
            .map(|(a, b, v)| ((a, b), SuperFunction::constant(chart, v.clone())))
            .collect();
        Self::new(chart, comps)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn get(&self, a: usize, b: usize) -> SuperFunction {
        self.comps
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.chart))
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), SuperFunction> {
        &self.comps
    }

    /// `ε_i = g(E_i, E_i)` for even frame indices, as rationals; `None` unless constant.
    pub fn epsilons(&self) -> Option<Vec<Q>> {
        (0..self.chart.n).map(|i| self.get(i, i).as_constant()).collect()
    }

    /// `g(X, Y)` for frame components `X^A`, `Y^B`.
    pub fn apply(&self, x: &[SuperFunction], y: &[SuperFunction]) -> Result<SuperFunction> {
        let mut out = SuperFunction::zero(&self.chart);
        for (&(a, b), g) in &self.comps {
            if x[a].is_zero() || y[b].is_zero() {
                continue;
            }
            // g(X^A E_A, Y^B E_B) = X^A (−1)^{|A||Y^B|} Y^B g_AB
            let yb = y[b].involution_if(self.chart.is_odd(a));
            out.add_assign_ref(&x[a].checked_mul(&yb)?.checked_mul(g)?);
        }
        Ok(out)
    }
}

/// Linear connection in frame components, `∇_{E_A} E_B = Γ^C_{AB} E_C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    chart: Chart,
    coeffs: Components3,
}

impl Connection {
    pub fn zero(chart: &Chart) -> Self {
        Connection {
            chart: *chart,
            coeffs: Components3::new(),
        }
    }

    /// Coefficients keyed `(C, A, B)`; each must have parity `|A| + |B| + |C|`.
    pub fn new(chart: &Chart, coeffs: Components3) -> Result<Self> {
        let mut out = Self::zero(chart);
        for ((c, a, b), f) in coeffs {
            out.set(c, a, b, f)?;
        }
        Ok(out)
    }

    pub fn set(&mut self, c: usize, a: usize, b: usize, f: SuperFunction) -> Result<()> {
        let chart = self.chart;
        if a >= chart.dim() || b >= chart.dim() || c >= chart.dim() {
            return Err(Error::Index(format!("connection coefficient ({c},{a},{b})")));
        }
        chart.check(f.chart())?;
        let odd = [a, b, c].iter().filter(|&&k| chart.is_odd(k)).count() % 2 == 1;
        let want = if odd { Parity::Odd } else { Parity::Even };
        if !f.is_zero() && f.parity() != want {
            return Err(Error::Parity(format!(
                "Γ^{c}_{{{a}{b}}} must be {want:?}, found {:?}",
                f.parity()
            )));
        }
        if f.is_zero() {
            self.coeffs.remove(&(c, a, b));
        } else {
            self.coeffs.insert((c, a, b), f);
        }
        Ok(())
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coefficients(&self) -> &Components3 {
        &self.coeffs
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> SuperFunction {
        self.coeffs
            .get(&(c, a, b))
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.chart))
    }

    /// `∇_X Y` on frame components.
    pub fn covariant_derivative(
        &self,
        frame: &FrameField,
        x: &[SuperFunction],
        y: &[SuperFunction],
    ) -> Result<Vec<SuperFunction>> {
        let chart = self.chart;
        chart.check(frame.chart())?;
        let mut out = vec![SuperFunction::zero(&chart); chart.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                out[b].add_assign_ref(&xa.checked_mul(&frame.derivative(a, yb)?)?);
                let twisted = xa.checked_mul(&yb.involution_if(chart.is_odd(a)))?;
                for c in 0..chart.dim() {
                    if let Some(g) = self.coeffs.get(&(c, a, b)) {
                        out[c].add_assign_ref(&twisted.checked_mul(g)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `T^C_{AB} = Γ^C_{AB} − (−1)^{|A||B|} Γ^C_{BA} − c^C_{AB}`.
    pub fn torsion(&self, frame: &FrameField) -> Result<Components3> {
        self.chart.check(frame.chart())?;
        let chart = self.chart;
        let mut out = Components3::new();
        for (&(c, a, b), g) in &self.coeffs {
            add_into(&mut out, (c, a, b), g);
            let s = sign_if(!(chart.is_odd(a) && chart.is_odd(b)));
            add_into(&mut out, (c, b, a), &g.scale(&s));
        }
        for (&(c, a, b), f) in frame.structure()? {
            add_into(&mut out, (c, a, b), &-f);
        }
        Ok(out)
    }

    /// `R^D_{ABC}` from `R(X,Y)Z = ∇_X∇_Y Z − (−1)^{|X||Y|}∇_Y∇_X Z − ∇_{[X,Y]} Z`.
    pub fn curvature(&self, frame: &FrameField) -> Result<Curvature> {
        self.chart.check(frame.chart())?;
        let chart = self.chart;
        let dim = chart.dim();
        // P(A,B,C,D): E_D-component of ∇_{E_A}∇_{E_B}E_C
        let mut p: Curvature = Curvature::new();
        let mut by_af: BTreeMap<(usize, usize), Vec<(usize, &SuperFunction)>> = BTreeMap::new();
        let mut by_f: BTreeMap<usize, Vec<(usize, usize, &SuperFunction)>> = BTreeMap::new();
        for ((d, a, f), h) in &self.coeffs {
            by_af.entry((*a, *f)).or_default().push((*d, h));
            by_f.entry(*a).or_default().push((*d, *f, h));
        }
        for (&(f, b, c), g) in &self.coeffs {
            for a in 0..dim {
                add_into(&mut p, (a, b, c, f), &frame.derivative(a, g)?);
                if let Some(list) = by_af.get(&(a, f)) {
                    let gi = g.involution_if(chart.is_odd(a));
                    for (d, h) in list {
                        add_into(&mut p, (a, b, c, *d), &gi.checked_mul(h)?);
                    }
                }
            }
        }
        let mut out = Curvature::new();
        for (&(a, b, c, d), v) in &p {
            add_into(&mut out, (d, a, b, c), v);
            let s = sign_if(!(chart.is_odd(a) && chart.is_odd(b)));
            add_into(&mut out, (d, b, a, c), &v.scale(&s));
        }
        for (&(f, a, b), cf) in frame.structure()? {
            if let Some(list) = by_f.get(&f) {
                for (d, c, h) in list {
                    add_into(&mut out, (*d, a, b, *c), &-&cf.checked_mul(h)?);
                }
            }
        }
        Ok(out)
    }
}

/// The six blocks of the torsion by parities of `(C; A, B)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorsionDecomposition {
    /// `T^{D⊥}`: even output on two even arguments.
    pub t_perp: Components3,
    /// `T^D`: odd output on two odd arguments.
    pub t_d: Components3,
    /// `C^{D,D⊥;D}`: odd output on one even and one odd argument.
    pub c_d: Components3,
    /// `C^{D,D⊥;D⊥}`: even output on one even and one odd argument.
    pub c_perp: Components3,
    /// `H^{Λ²D⊥;D}`: odd output on two even arguments.
    pub h_perp_d: Components3,
    /// `H^{Λ²D;D⊥}`: even output on two odd arguments.
    pub h_d_perp: Components3,
}

impl TorsionDecomposition {
    pub fn parts(&self) -> [(&'static str, &Components3); 6] {
        [
            ("T^D_perp", &self.t_perp),
            ("T^D", &self.t_d),
            ("C^{D,D_perp;D}", &self.c_d),
            ("C^{D,D_perp;D_perp}", &self.c_perp),
            ("H^{L2 D_perp;D}", &self.h_perp_d),
            ("H^{L2 D;D_perp}", &self.h_d_perp),
        ]
    }

    pub fn reassemble(&self) -> Components3 {
        let mut out = Components3::new();
        for (_, part) in self.parts() {
            for (k, v) in part {
                add_into(&mut out, *k, v);
            }
        }
        out
    }
}

pub fn decompose_torsion(torsion: &Components3, n: usize) -> TorsionDecomposition {
    let mut dec = TorsionDecomposition::default();
    for (&(c, a, b), v) in torsion {
        if v.is_zero() {
            continue;
        }
        let odd_args = (a >= n) as u8 + (b >= n) as u8;
        let block = match (c >= n, odd_args) {
            (false, 0) => &mut dec.t_perp,
            (true, 2..) => &mut dec.t_d,
            (true, 1) => &mut dec.c_d,
            (false, 1) => &mut dec.c_perp,
            (true, 0) => &mut dec.h_perp_d,
            (false, _) => &mut dec.h_d_perp,
        };
        block.insert((c, a, b), v.clone());
    }
    dec
}
