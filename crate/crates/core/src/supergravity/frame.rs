//! Frame fields `(E_A) = (E_i, E_α)` with their inverse matrix, structure
//! functions, dual coframe and the exterior derivative in frame components.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lambda::Parity;
use crate::linalg::Mat;
use crate::superdomain::{graded_bracket, Chart, Key, SuperForm, SuperFunction, SuperVectorField};
use crate::Q;

pub type SparseRow = BTreeMap<usize, SuperFunction>;

/// Sparse square matrix of superfunctions, rows first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionMatrix {
    chart: Chart,
    rows: Vec<SparseRow>,
}

impl FunctionMatrix {
    pub fn zero(chart: &Chart, dim: usize) -> Self {
        FunctionMatrix {
            chart: *chart,
            rows: vec![SparseRow::new(); dim],
        }
    }

    pub fn identity(chart: &Chart, dim: usize) -> Self {
        let mut m = Self::zero(chart, dim);
        for r in 0..dim {
            m.set(r, r, SuperFunction::one(chart));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> SuperFunction {
        self.rows[r]
            .get(&c)
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.chart))
    }

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.rows[r]
    }

    pub fn set(&mut self, r: usize, c: usize, f: SuperFunction) {
        if f.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, f);
        }
    }

    fn add_to(&mut self, r: usize, c: usize, f: &SuperFunction) {
        if f.is_zero() {
            return;
        }
        let e = self.rows[r]
            .entry(c)
            .or_insert_with(|| SuperFunction::zero(&self.chart));
        e.add_assign_ref(f);
        if e.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    out.add_to(r, c.to_owned(), &a.checked_mul(b)?);
                }
            }
        }
        Ok(out)
    }

    /// Splits off the real constant part.
    fn constant_part(&self) -> Mat {
        let mut m = Mat::zeros(self.dim(), self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, f) in row {
                m[(r, *c)] = f.coefficient(&Key::ONE);
            }
        }
        m
    }

    /// Inverse by `M = M₀(1 + K)`, `(1 + K)^{-1} = Σ (−K)^j`; the series stops
    /// once the powers vanish (nilpotent or truncated).
    pub fn inverse(&self) -> Result<Self> {
        let m0 = self.constant_part();
        let m0_inv = m0
            .inverse()
            .map_err(|_| Error::NonInvertible)?;
        let chart = self.chart;
        let dim = self.dim();
        let lift = |m: &Mat| {
            let mut out = Self::zero(&chart, dim);
            for (r, c, v) in m.entries() {
                out.set(r, c, SuperFunction::constant(&chart, v.clone()));
            }
            out
        };
        let mut rest = self.clone();
        for r in 0..dim {
            let keep: Vec<(usize, SuperFunction)> = rest.rows[r]
                .iter()
                .map(|(c, f)| (*c, f.filter_nonconstant()))
                .collect();
            rest.rows[r].clear();
            for (c, f) in keep {
                rest.set(r, c, f);
            }
        }
        let k = lift(&m0_inv).mul(&rest)?;
        let minus_k = k.scale(&-Q::from_integer(1.into()));
        let mut sum = Self::identity(&chart, dim);
        let mut power = Self::identity(&chart, dim);
        let cap = (chart.max_x_degree as usize + 1) * (chart.m + chart.generators as usize + 1) + 1;
        for _ in 0..cap {
            power = power.mul(&minus_k)?;
            if power.is_zero() {
                return sum.mul(&lift(&m0_inv));
            }
            sum = sum.add(&power);
        }
        Err(Error::Construction("frame inverse series did not terminate".into()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.chart, self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            for (col, f) in row {
                out.set(r, *col, f.scale(c));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, row) in other.rows.iter().enumerate() {
            for (c, f) in row {
                out.add_to(r, *c, f);
            }
        }
        out
    }

    pub fn eval_body(&self) -> Self {
        let mut out = Self::zero(&self.chart, self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, f) in row {
                out.set(r, *c, f.eval_body());
            }
        }
        out
    }
}

impl SuperFunction {
    fn filter_nonconstant(&self) -> SuperFunction {
        let mut out = self.clone();
        let c = self.coefficient(&Key::ONE);
        if c != Q::from_integer(0.into()) {
            out.add_scaled(&SuperFunction::one(self.chart()), &-c);
        }
        out
    }
}

/// `c^C_{AB}` with `[E_A, E_B] = c^C_{AB} E_C`, keyed `(C, A, B)`.
pub type Structure = BTreeMap<(usize, usize, usize), SuperFunction>;

#[derive(Debug)]
pub struct FrameField {
    chart: Chart,
    fields: Vec<SuperVectorField>,
    /// `E_C = Σ_D matrix[C][D] ∂_D`.
    matrix: FunctionMatrix,
    /// `∂_D = Σ_C inverse[D][C] E_C`.
    inverse: FunctionMatrix,
    structure: OnceLock<Structure>,
    dcoframe: OnceLock<Vec<Option<SuperForm>>>,
}

impl Clone for FrameField {
    fn clone(&self) -> Self {
        FrameField {
            chart: self.chart,
            fields: self.fields.clone(),
            matrix: self.matrix.clone(),
            inverse: self.inverse.clone(),
            structure: self.structure.clone(),
            dcoframe: self.dcoframe.clone(),
        }
    }
}

impl FrameField {
    /// Even fields first (`E_i`, one per even coordinate), then the odd `E_α`.
    pub fn new(chart: &Chart, fields: Vec<SuperVectorField>) -> Result<Self> {
        if fields.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "{} frame fields on a chart of dimension {}",
                fields.len(),
                chart.dim()
            )));
        }
        let mut matrix = FunctionMatrix::zero(chart, chart.dim());
        for (a, e) in fields.iter().enumerate() {
            chart.check(e.chart())?;
            let expected = if chart.is_odd(a) { Parity::Odd } else { Parity::Even };
            let actual = e.parity();
            if actual != expected && !e.is_zero() {
                return Err(Error::Parity(format!(
                    "frame field {a} should be {expected:?}, found {actual:?}"
                )));
            }
            for (d, f) in e.components().iter().enumerate() {
                matrix.set(a, d, f.clone());
            }
        }
        let body = matrix.eval_body();
        let real = body.constant_part();
        if real.rank() < chart.dim() {
            return Err(Error::NonInvertible);
        }
        let inverse = matrix.inverse()?;
        Ok(FrameField {
            chart: *chart,
            fields,
            matrix,
            inverse,
            structure: OnceLock::new(),
            dcoframe: OnceLock::new(),
        })
    }

    /// `E_A = ∂_A`.
    pub fn coordinate(chart: &Chart) -> Result<Self> {
        let fields = (0..chart.dim())
            .map(|a| SuperVectorField::coordinate(chart, a))
            .collect::<Result<Vec<_>>>()?;
        Self::new(chart, fields)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn n(&self) -> usize {
        self.chart.n
    }

    pub fn m(&self) -> usize {
        self.chart.m
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn is_odd(&self, a: usize) -> bool {
        self.chart.is_odd(a)
    }

    pub fn field(&self, a: usize) -> &SuperVectorField {
        &self.fields[a]
    }

    pub fn fields(&self) -> &[SuperVectorField] {
        &self.fields
    }

    pub fn matrix(&self) -> &FunctionMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &FunctionMatrix {
        &self.inverse
    }

    /// Frame components `φ^C` of `X = X^D ∂_D = φ^C E_C`.
    pub fn frame_components(&self, x: &SuperVectorField) -> Result<Vec<SuperFunction>> {
        self.chart.check(x.chart())?;
        let mut out = vec![SuperFunction::zero(&self.chart); self.dim()];
        for (d, xd) in x.components().iter().enumerate() {
            if xd.is_zero() {
                continue;
            }
            for (c, w) in self.inverse.row(d) {
                out[*c].add_assign_ref(&xd.checked_mul(w)?);
            }
        }
        Ok(out)
    }

    /// `Σ φ^C E_C` in coordinates.
    pub fn vector_from_components(&self, comps: &[SuperFunction]) -> Result<SuperVectorField> {
        let mut out = vec![SuperFunction::zero(&self.chart); self.dim()];
        for (c, phi) in comps.iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            for (d, e) in self.matrix.row(c) {
                out[*d].add_assign_ref(&phi.checked_mul(e)?);
            }
        }
        SuperVectorField::new(&self.chart, out)
    }

    /// `E_A(f)`.
    pub fn derivative(&self, a: usize, f: &SuperFunction) -> Result<SuperFunction> {
        self.fields[a].apply(f)
    }

    /// Structure functions of the frame, computed once.
    pub fn structure(&self) -> Result<&Structure> {
        if let Some(s) = self.structure.get() {
            return Ok(s);
        }
        let mut out = Structure::new();
        let dim = self.dim();
        for a in 0..dim {
            for b in a..dim {
                let br = graded_bracket(&self.fields[a], &self.fields[b])?;
                if br.is_zero() {
                    continue;
                }
                let comps = self.frame_components(&br)?;
                let swap_sign = if self.is_odd(a) && self.is_odd(b) { 1 } else { -1 };
                for (c, v) in comps.into_iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    if a != b {
                        out.insert((c, b, a), v.scale(&Q::from_integer(swap_sign.into())));
                    }
                    out.insert((c, a, b), v);
                }
            }
        }
        Ok(self.structure.get_or_init(|| out))
    }

    /// Coordinate expression of the dual 1-form `E^A`, `E^A(E_B) = δ^A_B`.
    pub fn coframe(&self, a: usize) -> Result<SuperForm> {
        let mut out = SuperForm::zero(&self.chart);
        for d in 0..self.dim() {
            let w = self.inverse.get(d, a);
            if w.is_zero() {
                continue;
            }
            out.absorb(SuperForm::monomial(&w.involution_if(self.is_odd(a)), &[d])?);
        }
        Ok(out)
    }

    /// Rewrites a coordinate form in the coframe basis:
    /// `dξ^D = Σ_C (E_C^D)′ E^C` with `′` the parity involution when `D` is odd.
    pub fn to_frame_form(&self, w: &SuperForm) -> Result<SuperForm> {
        let mut rho: BTreeMap<u16, SuperForm> = BTreeMap::new();
        let mut out = SuperForm::zero(&self.chart);
        for (index, f) in w.terms() {
            let mut acc = SuperForm::function(f);
            for &d in index {
                if let std::collections::btree_map::Entry::Vacant(e) = rho.entry(d) {
                    let mut r = SuperForm::zero(&self.chart);
                    for c in 0..self.dim() {
                        let e = self.matrix.get(c, d as usize);
                        if e.is_zero() {
                            continue;
                        }
                        let coeff = e.involution_if(self.is_odd(d as usize));
                        r.absorb(SuperForm::monomial(&coeff, &[c])?);
                    }
                    e.insert(r);
                }
                acc = acc.wedge(&rho[&d])?;
            }
            out.absorb(acc);
        }
        Ok(out)
    }

    /// Inverse of [`to_frame_form`](Self::to_frame_form).
    pub fn to_coordinate_form(&self, w: &SuperForm) -> Result<SuperForm> {
        let mut out = SuperForm::zero(&self.chart);
        let coframes: Vec<SuperForm> = (0..self.dim()).map(|a| self.coframe(a)).collect::<Result<_>>()?;
        for (index, f) in w.terms() {
            let mut acc = SuperForm::function(f);
            for &a in index {
                acc = acc.wedge(&coframes[a as usize])?;
            }
            out.absorb(acc);
        }
        Ok(out)
    }

    /// `dE^A` in the coframe basis, for every `A` (`None` when closed).
    pub fn dcoframe(&self) -> Result<&[Option<SuperForm>]> {
        if let Some(d) = self.dcoframe.get() {
            return Ok(d);
        }
        let mut out = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            let d = self.coframe(a)?.exterior_d()?;
            out.push(if d.is_zero() {
                None
            } else {
                Some(self.to_frame_form(&d)?)
            });
        }
        Ok(self.dcoframe.get_or_init(|| out))
    }

    /// Exterior derivative of a form given in the coframe basis.
    pub fn frame_d(&self, w: &SuperForm) -> Result<SuperForm> {
        self.chart.check(w.chart())?;
        let dco = self.dcoframe()?;
        w.exterior_d_with(&|b, f| self.fields[b].apply(f), &|b| Ok(dco[b].clone()))
    }

    /// `E_A|_{θ=0}`.
    pub fn eval_body(&self) -> Vec<SuperVectorField> {
        self.fields.iter().map(SuperVectorField::eval_body).collect()
    }
}

/// `D = span{E_α}`, `D⊥ = span{E_i}` and the projections on frame components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistributionPair {
    pub n: usize,
    pub m: usize,
}

impl DistributionPair {
    pub fn of(frame: &FrameField) -> Self {
        DistributionPair {
            n: frame.n(),
            m: frame.m(),
        }
    }

    pub fn in_d(&self, a: usize) -> bool {
        a >= self.n
    }

    /// `π^D` on frame components.
    pub fn project_d(&self, comps: &[SuperFunction]) -> Vec<SuperFunction> {
        comps
            .iter()
            .enumerate()
            .map(|(a, f)| if self.in_d(a) { f.clone() } else { SuperFunction::zero(f.chart()) })
            .collect()
    }

    /// `π^{D⊥}` on frame components.
    pub fn project_perp(&self, comps: &[SuperFunction]) -> Vec<SuperFunction> {
        comps
            .iter()
            .enumerate()
            .map(|(a, f)| if self.in_d(a) { SuperFunction::zero(f.chart()) } else { f.clone() })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};
    use crate::superdomain::parse_function as text_parse;

    fn chart() -> Chart {
        Chart::new(2, 2, 4, 6).unwrap()
    }

    fn f(t: &str) -> SuperFunction {
        text_parse(&chart(), t).unwrap()
    }

    fn frame() -> FrameField {
        // E_0 = (1 + x2)∂_0, E_1 = ∂_1 + θ1θ2 ∂_0, E_α = ∂_α + ½θ^β L ∂_x
        let c = chart();
        let v = |comps: [&str; 4]| SuperVectorField::new(&c, comps.iter().map(|t| f(t)).collect()).unwrap();
        FrameField::new(
            &c,
            vec![
                v(["1 + e1*e2", "0", "0", "0"]),
                v(["th1*th2", "1", "0", "0"]),
                v(["1/2*th1 + th2", "x1*th2", "1", "0"]),
                v(["th1", "0", "0", "1"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn inverse_is_two_sided() {
        let fr = frame();
        let id = FunctionMatrix::identity(fr.chart(), fr.dim());
        assert_eq!(fr.matrix().mul(fr.inverse()).unwrap(), id);
        assert_eq!(fr.inverse().mul(fr.matrix()).unwrap(), id);
    }

    #[test]
    fn coframe_is_dual() {
        let fr = frame();
        for a in 0..fr.dim() {
            let ea = fr.coframe(a).unwrap();
            for b in 0..fr.dim() {
                let v = ea.evaluate(&[fr.field(b).clone()]).unwrap();
                let expected = if a == b { f("1") } else { f("0") };
                assert_eq!(v, expected, "E^{a}(E_{b})");
            }
        }
    }

    #[test]
    fn frame_forms_evaluate_like_coordinate_forms() {
        let fr = frame();
        let w = SuperForm::monomial(&f("x1*th2 + e1"), &[0, 2])
            .unwrap()
            .checked_add(&SuperForm::monomial(&f("th1"), &[3, 3]).unwrap())
            .unwrap();
        let wf = fr.to_frame_form(&w).unwrap();
        for a in 0..fr.dim() {
            for b in 0..fr.dim() {
                let direct = w.evaluate(&[fr.field(a).clone(), fr.field(b).clone()]).unwrap();
                assert_eq!(direct, wf.evaluate_basis(&[a, b]).unwrap(), "({a},{b})");
            }
        }
        assert_eq!(fr.to_coordinate_form(&wf).unwrap(), w);
    }

    #[test]
    fn frame_d_matches_coordinate_d() {
        let fr = frame();
        let w = SuperForm::monomial(&f("x1*th2 + x2^2*th1"), &[1])
            .unwrap()
            .checked_add(&SuperForm::monomial(&f("th1*th2"), &[2]).unwrap())
            .unwrap();
        let via_coordinates = fr.to_frame_form(&w.exterior_d().unwrap()).unwrap();
        let via_frame = fr.frame_d(&fr.to_frame_form(&w).unwrap()).unwrap();
        assert_eq!(via_frame, via_coordinates);
    }

    #[test]
    fn structure_functions_reproduce_brackets() {
        let fr = frame();
        let s = fr.structure().unwrap();
        for a in 0..fr.dim() {
            for b in 0..fr.dim() {
                let br = graded_bracket(fr.field(a), fr.field(b)).unwrap();
                let comps: Vec<SuperFunction> = (0..fr.dim())
                    .map(|c| s.get(&(c, a, b)).cloned().unwrap_or_else(|| f("0")))
                    .collect();
                assert_eq!(fr.vector_from_components(&comps).unwrap(), br);
            }
        }
        let _ = (q(1), qr(1, 2));
    }
}
