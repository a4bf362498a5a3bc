use super::{Chart, SuperFunction};
use crate::error::{Error, Result};
use crate::lambda::Parity;

/// `X = X^j ∂/∂x^j + X^α ∂/∂θ^α`, components in the combined numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperVectorField {
    chart: Chart,
    comps: Vec<SuperFunction>,
}

impl SuperVectorField {
    pub fn zero(chart: &Chart) -> Self {
        SuperVectorField {
            chart: *chart,
            comps: vec![SuperFunction::zero(chart); chart.dim()],
        }
    }

    pub fn new(chart: &Chart, comps: Vec<SuperFunction>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "{} components for a chart of dimension {}",
                comps.len(),
                chart.dim()
            )));
        }
        for c in &comps {
            chart.check(c.chart())?;
        }
        Ok(SuperVectorField {
            chart: *chart,
            comps,
        })
    }

    /// Coordinate field `∂/∂ξ^B`.
    pub fn coordinate(chart: &Chart, b: usize) -> Result<Self> {
        if b >= chart.dim() {
            return Err(Error::Index(format!("coordinate {b} of {}", chart.dim())));
        }
        let mut v = Self::zero(chart);
        v.comps[b] = SuperFunction::one(chart);
        Ok(v)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn component(&self, b: usize) -> &SuperFunction {
        &self.comps[b]
    }

    pub fn components(&self) -> &[SuperFunction] {
        &self.comps
    }

    pub fn set_component(&mut self, b: usize, f: SuperFunction) {
        self.chart.check(f.chart()).expect("vector field chart");
        self.comps[b] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(SuperFunction::is_zero)
    }

    /// Even iff `X^j` even and `X^α` odd; odd iff reversed.
    pub fn parity(&self) -> Parity {
        let even = self.even_part();
        let odd = self.odd_part();
        match (even.is_zero(), odd.is_zero()) {
            (_, true) => Parity::Even,
            (true, false) => Parity::Odd,
            (false, false) => Parity::Mixed,
        }
    }

    fn split(&self, odd: bool) -> Self {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(b, f)| {
                if self.chart.is_odd(b) != odd {
                    f.odd_part()
                } else {
                    f.even_part()
                }
            })
            .collect();
        SuperVectorField {
            chart: self.chart,
            comps,
        }
    }

    pub fn even_part(&self) -> Self {
        self.split(false)
    }

    pub fn odd_part(&self) -> Self {
        self.split(true)
    }

    /// `X·f = Σ_B X^B ∂_B f`.
    pub fn apply(&self, f: &SuperFunction) -> Result<SuperFunction> {
        self.chart.check(f.chart())?;
        let mut out = SuperFunction::zero(&self.chart);
        for (b, xb) in self.comps.iter().enumerate() {
            if xb.is_zero() || !f.depends_on(b) {
                continue;
            }
            out.add_assign_ref(&xb.checked_mul(&f.partial(b)?)?);
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.check(&other.chart)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SuperVectorField {
            chart: self.chart,
            comps,
        })
    }

    pub fn scale(&self, c: &crate::rational::Q) -> Self {
        SuperVectorField {
            chart: self.chart,
            comps: self.comps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// `φX` with the coefficient multiplied on the left of every component.
    pub fn left_mul(&self, phi: &SuperFunction) -> Result<Self> {
        let comps = self
            .comps
            .iter()
            .map(|f| phi.checked_mul(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperVectorField {
            chart: self.chart,
            comps,
        })
    }

    pub fn eval_body(&self) -> Self {
        SuperVectorField {
            chart: self.chart,
            comps: self.comps.iter().map(SuperFunction::eval_body).collect(),
        }
    }

    pub fn map_components(&self, f: impl Fn(&SuperFunction) -> Result<SuperFunction>) -> Result<Self> {
        let comps = self.comps.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(SuperVectorField {
            chart: self.chart,
            comps,
        })
    }
}

fn bracket_homogeneous(x: &SuperVectorField, y: &SuperVectorField, both_odd: bool) -> Result<SuperVectorField> {
    let mut comps = Vec::with_capacity(x.chart.dim());
    for b in 0..x.chart.dim() {
        let xy = x.apply(&y.comps[b])?;
        let yx = y.apply(&x.comps[b])?;
        comps.push(if both_odd { &xy + &yx } else { &xy - &yx });
    }
    SuperVectorField::new(&x.chart, comps)
}

/// `[X,Y]·f = X·(Y·f) − (−1)^{|X||Y|} Y·(X·f)`; mixed fields are split by parity.
pub fn graded_bracket(x: &SuperVectorField, y: &SuperVectorField) -> Result<SuperVectorField> {
    x.chart.check(&y.chart)?;
    let (xe, xo) = (x.even_part(), x.odd_part());
    let (ye, yo) = (y.even_part(), y.odd_part());
    let mut out = SuperVectorField::zero(&x.chart);
    for (a, a_odd) in [(&xe, false), (&xo, true)] {
        if a.is_zero() {
            continue;
        }
        for (b, b_odd) in [(&ye, false), (&yo, true)] {
            if b.is_zero() {
                continue;
            }
            out = out.checked_add(&bracket_homogeneous(a, b, a_odd && b_odd)?)?;
        }
    }
    Ok(out)
}
