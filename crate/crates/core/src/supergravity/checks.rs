use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lambda::Parity;
use crate::linalg::Mat;
use crate::superdomain::{Chart, SuperFunction, SuperVectorField};
use crate::superpoincare::{extended_inner_matrix, SuperPoincareAlgebra};
use crate::Q;

use super::connection::{Components3, Connection, FrameMetric, TorsionDecomposition};
use super::frame::{DistributionPair, FrameField, FunctionMatrix};
use super::report::{frame_label, CheckReport};

/// `L(E_α, E_β) = L^i_{αβ} E_i`, keyed `(i, α, β)` with spinor indices `α, β < m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviTensor {
    pub n: usize,
    pub m: usize,
    pub comps: BTreeMap<(usize, usize, usize), SuperFunction>,
}

impl LeviTensor {
    pub fn component(&self, i: usize, a: usize, b: usize) -> Option<&SuperFunction> {
        self.comps.get(&(i, a, b))
    }

    pub fn is_symmetric(&self) -> bool {
        self.comps
            .iter()
            .all(|(&(i, a, b), v)| self.comps.get(&(i, b, a)) == Some(v))
    }

    /// The constant matrices `L^i`, or `None` if some component is not constant.
    pub fn constants(&self) -> Option<Vec<Mat>> {
        let mut out = vec![Mat::zeros(self.m, self.m); self.n];
        for (&(i, a, b), v) in &self.comps {
            out[i][(a, b)] = v.as_constant()?;
        }
        Some(out)
    }
}

/// `L^i_{αβ} = π^{D⊥}[E_α, E_β]` in frame components.
pub fn compute_levi(frame: &FrameField, pair: &DistributionPair) -> Result<LeviTensor> {
    let s = frame.structure()?;
    let (n, m) = (pair.n, pair.m);
    let mut comps = BTreeMap::new();
    for (&(c, a, b), v) in s {
        if c < n && pair.in_d(a) && pair.in_d(b) {
            comps.insert((c, a - n, b - n), v.clone());
        }
    }
    Ok(LeviTensor { n, m, comps })
}

/// Flat super-spacetime of a super Poincaré algebra with its frame-parallel connection.
#[derive(Debug, Clone)]
pub struct FlatSpacetime {
    pub frame: FrameField,
    pub pair: DistributionPair,
    pub metric: FrameMetric,
    pub connection: Connection,
}

/// `E_i = ∂_i`, `E_α = ∂_α + ½ L^i_{αβ} θ^β ∂_i`, `g(E_A, E_B) = (e_A, e_B)`, `Γ = 0`.
pub fn build_flat_spacetime(alg: &SuperPoincareAlgebra, chart: &Chart) -> Result<FlatSpacetime> {
    let (n, m) = (alg.n(), alg.m());
    if chart.n != n || chart.m != m {
        return Err(Error::Dimension(format!(
            "flat model of an algebra with V = {n}, S = {m} needs a chart ℝ^{n}|{m}, got ℝ^{}|{}",
            chart.n, chart.m
        )));
    }
    let half = Q::new(1.into(), 2.into());
    let levi = alg.levi();
    let mut fields = Vec::with_capacity(n + m);
    for i in 0..n {
        fields.push(SuperVectorField::coordinate(chart, i)?);
    }
    let thetas: Vec<SuperFunction> = (0..m).map(|b| SuperFunction::theta(chart, b)).collect::<Result<_>>()?;
    for a in 0..m {
        let mut comps = vec![SuperFunction::zero(chart); n + m];
        comps[n + a] = SuperFunction::one(chart);
        for (i, li) in levi.iter().enumerate() {
            for (b, theta) in thetas.iter().enumerate() {
                let l = &li[(a, b)];
                if *l != Q::from_integer(0.into()) {
                    comps[i].add_scaled(theta, &(l * &half));
                }
            }
        }
        fields.push(SuperVectorField::new(chart, comps)?);
    }
    let frame = FrameField::new(chart, fields)?;
    let pair = DistributionPair::of(&frame);
    let metric = FrameMetric::constant(chart, &extended_inner_matrix(alg))?;
    Ok(FlatSpacetime {
        frame,
        pair,
        metric,
        connection: Connection::zero(chart),
    })
}

fn torsion_label(n: usize) -> impl Fn(&(usize, usize, usize)) -> String {
    move |&(c, a, b)| format!("T^{}({},{})", frame_label(n, c), frame_label(n, a), frame_label(n, b))
}

fn zero_block(name: &str, block: &Components3, n: usize) -> CheckReport {
    CheckReport::from_residuals(name, block, torsion_label(n))
}

/// Levi-Civita condition: `T^{D⊥} = 0` and `g(C(s,V),V′) = g(V,C(s,V′))` on frame elements.
pub fn check_levi_civita(dec: &TorsionDecomposition, metric: &FrameMetric, n: usize) -> CheckReport {
    let chart = *metric.chart();
    let mut sym: BTreeMap<(usize, usize, usize), SuperFunction> = BTreeMap::new();
    let mut odd_args: Vec<usize> = dec.c_perp.keys().map(|&(_, a, b)| a.max(b)).collect();
    odd_args.sort_unstable();
    odd_args.dedup();
    let c = |k: usize, s: usize, i: usize| dec.c_perp.get(&(k, s, i));
    for &s in &odd_args {
        for i in 0..n {
            for j in 0..n {
                let mut r = SuperFunction::zero(&chart);
                for k in 0..n {
                    if let Some(v) = c(k, s, i) {
                        r.add_assign_ref(&(v * &metric.get(k, j)));
                    }
                    if let Some(v) = c(k, s, j) {
                        r.add_assign_ref(&-&(v * &metric.get(i, k)));
                    }
                }
                if !r.is_zero() {
                    sym.insert((s, i, j), r);
                }
            }
        }
    }
    let parts = [
        zero_block("T^D_perp = 0", &dec.t_perp, n),
        CheckReport::from_residuals("C^{D,D_perp;D_perp} g-symmetric", &sym, |&(s, i, j)| {
            format!("({},{},{})", frame_label(n, s), frame_label(n, i), frame_label(n, j))
        }),
    ];
    CheckReport::all("levi-civita", &parts)
}

/// `T^{D⊥} = C^{D,D⊥;D⊥} = T^D = 0`.
pub fn check_strong_levi_civita(dec: &TorsionDecomposition, n: usize) -> CheckReport {
    let parts = [
        zero_block("T^D_perp = 0", &dec.t_perp, n),
        zero_block("C^{D,D_perp;D_perp} = 0", &dec.c_perp, n),
        zero_block("T^D = 0", &dec.t_d, n),
    ];
    CheckReport::all("strong-levi-civita", &parts)
}

type Key3 = (usize, usize, usize);
type Key4 = (usize, usize, usize, usize);

fn accumulate<K: Ord>(map: &mut BTreeMap<K, SuperFunction>, key: K, v: &SuperFunction, c: &Q) {
    if v.is_zero() {
        return;
    }
    let chart = *v.chart();
    map.entry(key).or_insert_with(|| SuperFunction::zero(&chart)).add_scaled(v, c);
}

/// `(∇_A g)(E_B, E_C)` over the nonzero metric and connection entries.
fn nabla_metric(frame: &FrameField, metric: &FrameMetric, conn: &Connection) -> Result<BTreeMap<Key3, SuperFunction>> {
    let chart = *frame.chart();
    let dim = frame.dim();
    let odd = |a: usize| chart.is_odd(a);
    let one = Q::from_integer(1.into());
    let minus = -one.clone();
    let mut by_row: BTreeMap<usize, Vec<(usize, &SuperFunction)>> = BTreeMap::new();
    let mut by_col: BTreeMap<usize, Vec<(usize, &SuperFunction)>> = BTreeMap::new();
    for (&(r, c), g) in metric.components() {
        if !g.is_zero() {
            by_row.entry(r).or_default().push((c, g));
            by_col.entry(c).or_default().push((r, g));
        }
    }
    let mut out = BTreeMap::new();
    for (&(b, c), g) in metric.components() {
        for a in 0..dim {
            accumulate(&mut out, (a, b, c), &frame.derivative(a, g)?, &one);
        }
    }
    for (&(f, a, x), gam) in conn.coefficients() {
        if let Some(row) = by_row.get(&f) {
            for &(c, g) in row {
                accumulate(&mut out, (a, x, c), &(gam * g), &minus);
            }
        }
        if let Some(col) = by_col.get(&f) {
            for &(b, g) in col {
                let t = &gam.involution_if(odd(b)) * g;
                let sign = if odd(a) && odd(b) { one.clone() } else { minus.clone() };
                accumulate(&mut out, (a, b, x), &t, &sign);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `E_D`-component of `(∇_A L)(E_β, E_γ)` over the nonzero entries.
fn nabla_levi(frame: &FrameField, levi: &LeviTensor, conn: &Connection) -> Result<BTreeMap<Key4, SuperFunction>> {
    let chart = *frame.chart();
    let (n, dim) = (frame.n(), frame.dim());
    let odd = |a: usize| chart.is_odd(a);
    let one = Q::from_integer(1.into());
    let minus = -one.clone();
    let entries: Vec<(usize, usize, usize, &SuperFunction)> = levi
        .comps
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(&(d, b, c), v)| (d, n + b, n + c, v))
        .collect();
    let mut by_k: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut by_mid: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut by_last: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, &(d, b, c, _)) in entries.iter().enumerate() {
        by_k.entry(d).or_default().push(idx);
        by_mid.entry(b).or_default().push(idx);
        by_last.entry(c).or_default().push(idx);
    }
    let mut out = BTreeMap::new();
    for &(d, b, c, l) in &entries {
        for a in 0..dim {
            accumulate(&mut out, (d, a, b, c), &frame.derivative(a, l)?, &one);
        }
    }
    for (&(f, a, x), gam) in conn.coefficients() {
        if x < n {
            for &idx in by_k.get(&x).into_iter().flatten() {
                let (_, b, c, l) = entries[idx];
                accumulate(&mut out, (f, a, b, c), &(&l.involution_if(odd(a)) * gam), &one);
            }
        }
        if f >= n && x >= n {
            for &idx in by_mid.get(&f).into_iter().flatten() {
                let (d, _, c, l) = entries[idx];
                accumulate(&mut out, (d, a, x, c), &(gam * l), &minus);
            }
            for &idx in by_last.get(&f).into_iter().flatten() {
                let (d, b, _, l) = entries[idx];
                let t = &gam.involution_if(true) * l;
                let sign = if odd(a) { one.clone() } else { minus.clone() };
                accumulate(&mut out, (d, a, b, x), &t, &sign);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
fn nabla_dense(
    frame: &FrameField,
    metric: &FrameMetric,
    conn: &Connection,
    levi: &LeviTensor,
) -> Result<(BTreeMap<Key3, SuperFunction>, BTreeMap<Key4, SuperFunction>)> {
    let chart = *frame.chart();
    let (n, dim) = (frame.n(), frame.dim());
    let odd = |a: usize| chart.is_odd(a);
    // (∇_A g)(E_B, E_C)
    let mut ng: BTreeMap<(usize, usize, usize), SuperFunction> = BTreeMap::new();
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let mut r = frame.derivative(a, &metric.get(b, c))?;
                for f in 0..dim {
                    let gfc = metric.get(f, c);
                    if !gfc.is_zero() {
                        r = &r - &(&conn.get(f, a, b) * &gfc);
                    }
                    let gbf = metric.get(b, f);
                    if !gbf.is_zero() {
                        let t = &conn.get(f, a, c).involution_if(odd(b)) * &gbf;
                        let t = if odd(a) && odd(b) { -&t } else { t };
                        r = &r - &t;
                    }
                }
                if !r.is_zero() {
                    ng.insert((a, b, c), r);
                }
            }
        }
    }

    // (∇_A L)(E_β, E_γ), E_D-component
    let lget = |d: usize, b: usize, c: usize| -> SuperFunction {
        if d < n && b >= n && c >= n {
            levi.component(d, b - n, c - n)
                .cloned()
                .unwrap_or_else(|| SuperFunction::zero(&chart))
        } else {
            SuperFunction::zero(&chart)
        }
    };
    let mut nl: BTreeMap<(usize, usize, usize, usize), SuperFunction> = BTreeMap::new();
    for a in 0..dim {
        for b in n..dim {
            for c in n..dim {
                for d in 0..dim {
                    let mut r = frame.derivative(a, &lget(d, b, c))?;
                    for k in 0..n {
                        let l = lget(k, b, c);
                        if !l.is_zero() {
                            r = &r + &(&l.involution_if(odd(a)) * &conn.get(d, a, k));
                        }
                    }
                    for f in n..dim {
                        r = &r - &(&conn.get(f, a, b) * &lget(d, f, c));
                        let t = &conn.get(f, a, c).involution_if(true) * &lget(d, b, f);
                        let t = if odd(a) { -&t } else { t };
                        r = &r - &t;
                    }
                    if !r.is_zero() {
                        nl.insert((d, a, b, c), r);
                    }
                }
            }
        }
    }

    Ok((ng, nl))
}


/// Def. 3.3: `g(E_A,E_B) = (e_A,e_B)`, constant Levi components, `D` ∇-stable, `∇g = 0`, `∇L = 0`.
pub fn check_gravity_field(
    alg: &SuperPoincareAlgebra,
    frame: &FrameField,
    metric: &FrameMetric,
    conn: &Connection,
) -> Result<CheckReport> {
    let chart = *frame.chart();
    let (n, dim) = (frame.n(), frame.dim());
    let pair = DistributionPair::of(frame);
    let label2 = |&(a, b): &(usize, usize)| format!("({},{})", frame_label(n, a), frame_label(n, b));
    let label3 = |&(a, b, c): &(usize, usize, usize)| {
        format!("({},{},{})", frame_label(n, a), frame_label(n, b), frame_label(n, c))
    };

    let inner = extended_inner_matrix(alg);
    if inner.rows() != dim {
        return Err(Error::Dimension("algebra and frame dimensions differ".into()));
    }
    let mut g_res = BTreeMap::new();
    for a in 0..dim {
        for b in 0..dim {
            let r = &metric.get(a, b) - &SuperFunction::constant(&chart, inner[(a, b)].clone());
            if !r.is_zero() {
                g_res.insert((a, b), r);
            }
        }
    }

    let levi = compute_levi(frame, &pair)?;
    let mut l_res = BTreeMap::new();
    for (i, li) in alg.levi().iter().enumerate() {
        for a in 0..pair.m {
            for b in 0..pair.m {
                let have = levi
                    .component(i, a, b)
                    .cloned()
                    .unwrap_or_else(|| SuperFunction::zero(&chart));
                let r = &have - &SuperFunction::constant(&chart, li[(a, b)].clone());
                if !r.is_zero() {
                    l_res.insert((i, n + a, n + b), r);
                }
            }
        }
    }

    let mut stab = BTreeMap::new();
    for (&(c, a, b), v) in conn.coefficients() {
        if c < n && b >= n {
            stab.insert((c, a, b), v.clone());
        }
    }

    let ng = nabla_metric(frame, metric, conn)?;
    let nl = nabla_levi(frame, &levi, conn)?;

    let parts = [
        CheckReport::from_residuals("g(E_A,E_B) = (e_A,e_B)", &g_res, label2),
        CheckReport::from_residuals("Levi components constant", &l_res, label3),
        CheckReport::from_residuals("D is nabla-stable", &stab, |&(c, a, b)| {
            format!("Gamma^{}({},{})", frame_label(n, c), frame_label(n, a), frame_label(n, b))
        }),
        CheckReport::from_residuals("nabla g = 0", &ng, label3),
        CheckReport::from_residuals("nabla L = 0", &nl, |&(d, a, b, c)| {
            format!(
                "{}-component of (nabla_{} L)({},{})",
                frame_label(n, d),
                frame_label(n, a),
                frame_label(n, b),
                frame_label(n, c)
            )
        }),
    ];
    Ok(CheckReport::all("gravity-field", &parts))
}

/// Body-level physical fields for the coordinate lifts `∂_{x^i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhysicalFields {
    /// `ϑ(∂_i)^α`.
    pub gravitino: Vec<Vec<SuperFunction>>,
    /// `ĝ_{ij}`.
    pub graviton: Vec<Vec<SuperFunction>>,
    /// `A_{iα}^β`, keyed `(i, α, β)`.
    pub a_field: BTreeMap<(usize, usize, usize), SuperFunction>,
    /// `D_{∂_i}∂_j = D^l_{ij} ∂_l`, keyed `(l, i, j)`.
    pub metric_connection: BTreeMap<(usize, usize, usize), SuperFunction>,
    /// `D̄_{∂_i}E_α = D̄^β_{iα} E_β`, keyed `(β, i, α)`.
    pub spinor_connection: BTreeMap<(usize, usize, usize), SuperFunction>,
}

impl PhysicalFields {
    /// Signature `(p, q, zero)` of the real part of `ĝ` at the origin.
    pub fn graviton_signature(&self) -> Result<(usize, usize, usize)> {
        let n = self.graviton.len();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let f = &self.graviton[i][j];
                let origin = vec![Q::from_integer(0.into()); f.chart().n];
                m[(i, j)] = f.eval_at(&origin)?.real_part();
            }
        }
        if !m.is_symmetric() {
            return Err(Error::Symmetry("real part of the graviton is not symmetric".into()));
        }
        m.inertia()
    }

    /// Gravitino odd-valued, graviton even-valued and symmetric.
    pub fn check_parities(&self) -> CheckReport {
        let mut bad = BTreeMap::new();
        for (i, row) in self.gravitino.iter().enumerate() {
            for (a, f) in row.iter().enumerate() {
                if !f.is_zero() && f.parity() != Parity::Odd {
                    bad.insert(format!("gravitino({i},{a})"), f.clone());
                }
            }
        }
        for (i, row) in self.graviton.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if !f.is_zero() && f.parity() != Parity::Even {
                    bad.insert(format!("graviton({i},{j})"), f.clone());
                }
                let skew = f - &self.graviton[j][i];
                if !skew.is_zero() {
                    bad.insert(format!("graviton({i},{j}) - graviton({j},{i})"), skew);
                }
            }
        }
        CheckReport::from_residuals("physical-field parities", &bad, |k| k.clone())
    }
}

pub fn extract_physical_fields(frame: &FrameField, metric: &FrameMetric, conn: &Connection) -> Result<PhysicalFields> {
    let chart = *frame.chart();
    let (n, m, dim) = (frame.n(), frame.m(), frame.dim());
    let w = frame.inverse();
    let zero = SuperFunction::zero(&chart);
    // ∂_i = Σ_C W_i^C E_C
    let lift = |i: usize| -> Vec<SuperFunction> { (0..dim).map(|c| w.get(i, c)).collect() };

    let gravitino = (0..n)
        .map(|i| (0..m).map(|a| w.get(i, n + a).eval_body()).collect())
        .collect();

    let mut graviton = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = zero.clone();
            for k in 0..n {
                for l in 0..n {
                    let g = metric.get(k, l);
                    if g.is_zero() {
                        continue;
                    }
                    acc.add_assign_ref(&w.get(i, k).checked_mul(&w.get(j, l))?.checked_mul(&g)?);
                }
            }
            graviton[i][j] = acc.eval_body();
        }
    }

    let torsion = conn.torsion(frame)?;
    let mut a_field = BTreeMap::new();
    for i in 0..n {
        for a in 0..m {
            for b in 0..m {
                let mut acc = zero.clone();
                for c in 0..dim {
                    if let Some(t) = torsion.get(&(n + b, c, n + a)) {
                        acc.add_assign_ref(&w.get(i, c).checked_mul(t)?);
                    }
                }
                let v = (-&acc).eval_body();
                if !v.is_zero() {
                    a_field.insert((i, a, b), v);
                }
            }
        }
    }

    // (π^{D⊥}|_{TM_o})^{-1}: ∂_l ↦ Σ_k W_l^k E_k on the body, inverted.
    let mut body_w = FunctionMatrix::zero(&chart, n);
    for l in 0..n {
        for k in 0..n {
            body_w.set(l, k, w.get(l, k).eval_body());
        }
    }
    let body_w_inv = body_w.inverse()?;
    let mut metric_connection = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let mut yperp = vec![zero.clone(); dim];
            for (k, slot) in yperp.iter_mut().enumerate().take(n) {
                *slot = w.get(j, k);
            }
            let phi = conn.covariant_derivative(frame, &lift(i), &yperp)?;
            for l in 0..n {
                let mut acc = zero.clone();
                for (k, p) in phi.iter().enumerate().take(n) {
                    let inv = body_w_inv.get(k, l);
                    if !inv.is_zero() && !p.is_zero() {
                        acc.add_assign_ref(&p.eval_body().checked_mul(&inv)?);
                    }
                }
                if !acc.is_zero() {
                    metric_connection.insert((l, i, j), acc);
                }
            }
        }
    }

    let mut spinor_connection = BTreeMap::new();
    for i in 0..n {
        for a in 0..m {
            let mut e = vec![zero.clone(); dim];
            e[n + a] = SuperFunction::one(&chart);
            let v = conn.covariant_derivative(frame, &lift(i), &e)?;
            for b in 0..m {
                let mut acc = v[n + b].eval_body();
                if let Some(x) = a_field.get(&(i, a, b)) {
                    acc.add_assign_ref(x);
                }
                if !acc.is_zero() {
                    spinor_connection.insert((b, i, a), acc);
                }
            }
        }
    }

    Ok(PhysicalFields {
        gravitino,
        graviton,
        a_field,
        metric_connection,
        spinor_connection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supergravity::decompose_torsion;
    use crate::clifford::{charge_conjugation_beta, gamma_rep, GammaStyle, Signature};
    use crate::rational::{q, qr};
    use crate::superpoincare::{bracket_tensor_from_beta, build_super_poincare};

    fn algebra() -> SuperPoincareAlgebra {
        let rep = gamma_rep(&Signature::lorentzian(4).unwrap(), GammaStyle::Dirac).unwrap();
        let beta = charge_conjugation_beta(&rep).unwrap();
        let levi = bracket_tensor_from_beta(&beta, &rep).unwrap();
        build_super_poincare(&rep, &beta, &levi).unwrap()
    }

    fn flat() -> (SuperPoincareAlgebra, FlatSpacetime) {
        let alg = algebra();
        let chart = Chart::new(alg.n(), alg.m(), 4, 2).unwrap();
        let flat = build_flat_spacetime(&alg, &chart).unwrap();
        (alg, flat)
    }

    #[test]
    fn flat_levi_reproduces_constants() {
        let (alg, f) = flat();
        let levi = compute_levi(&f.frame, &f.pair).unwrap();
        assert!(levi.is_symmetric());
        assert_eq!(levi.constants().unwrap(), alg.levi().to_vec());
        let s = f.frame.structure().unwrap();
        assert!(s.keys().all(|&(_, a, b)| a >= alg.n() && b >= alg.n()));
    }

    #[test]
    fn coordinate_odd_frame_has_no_levi_form() {
        let alg = algebra();
        let chart = Chart::new(alg.n(), alg.m(), 2, 1).unwrap();
        let fr = FrameField::coordinate(&chart).unwrap();
        assert!(compute_levi(&fr, &DistributionPair::of(&fr)).unwrap().comps.is_empty());
    }

    #[test]
    fn rescaled_frame_has_nonconstant_levi_form() {
        let (_, f) = flat();
        let chart = *f.frame.chart();
        let n = f.pair.n;
        let scale = &SuperFunction::one(&chart) + &SuperFunction::x(&chart, 0).unwrap();
        let fields: Vec<SuperVectorField> = (0..f.frame.dim())
            .map(|a| {
                let e = f.frame.field(a).clone();
                if a >= n {
                    e.left_mul(&scale).unwrap()
                } else {
                    e
                }
            })
            .collect();
        let fr = FrameField::new(&chart, fields).unwrap();
        let levi = compute_levi(&fr, &f.pair).unwrap();
        assert!(levi.constants().is_none());
        let base = compute_levi(&f.frame, &f.pair).unwrap();
        let sq = scale.checked_mul(&scale).unwrap();
        for (k, v) in &base.comps {
            assert_eq!(levi.comps[k], v.checked_mul(&sq).unwrap());
        }
    }

    #[test]
    fn flat_torsion_is_minus_levi() {
        let (alg, f) = flat();
        let t = f.connection.torsion(&f.frame).unwrap();
        let dec = decompose_torsion(&t, alg.n());
        for (name, part) in dec.parts() {
            if name != "H^{L2 D;D_perp}" {
                assert!(part.is_empty(), "{name}");
            }
        }
        let n = alg.n();
        for (i, li) in alg.levi().iter().enumerate() {
            for (a, b, v) in li.entries() {
                assert_eq!(dec.h_d_perp[&(i, n + a, n + b)].as_constant().unwrap(), -v.clone());
            }
        }
        assert!(f.connection.curvature(&f.frame).unwrap().is_empty());
        assert!(check_strong_levi_civita(&dec, n).pass);
        assert!(check_levi_civita(&dec, &f.metric, n).pass);
        let g = check_gravity_field(&alg, &f.frame, &f.metric, &f.connection).unwrap();
        assert!(g.pass, "{g}");
    }

    #[test]
    fn gravity_field_detects_violations() {
        let (alg, f) = flat();
        let chart = *f.frame.chart();
        let mut g = extended_inner_matrix(&alg);
        g[(1, 1)] = &g[(1, 1)] * q(2);
        let metric = FrameMetric::constant(&chart, &g).unwrap();
        let r = check_gravity_field(&alg, &f.frame, &metric, &f.connection).unwrap();
        assert!(!r.pass);
        assert!(r.worst.unwrap().starts_with("g(E_A,E_B)"));

        let mut conn = Connection::zero(&chart);
        conn.set(0, 1, 4, SuperFunction::theta(&chart, 0).unwrap()).unwrap();
        let r = check_gravity_field(&alg, &f.frame, &f.metric, &conn).unwrap();
        assert!(r.notes.contains(&"D is nabla-stable fail".to_string()), "{:?}", r.notes);
    }

    #[test]
    fn sparse_covariant_derivatives_match_dense() {
        let (_, f) = flat();
        let chart = *f.frame.chart();
        let n = f.pair.n;
        let scale = &SuperFunction::one(&chart) + &SuperFunction::x(&chart, 1).unwrap();
        let fields: Vec<SuperVectorField> = (0..f.frame.dim())
            .map(|a| {
                let e = f.frame.field(a).clone();
                if a >= n {
                    e.left_mul(&scale).unwrap()
                } else {
                    e
                }
            })
            .collect();
        let fr = FrameField::new(&chart, fields).unwrap();
        let levi = compute_levi(&fr, &f.pair).unwrap();
        let th = |i| SuperFunction::theta(&chart, i).unwrap();
        let x = |i| SuperFunction::x(&chart, i).unwrap();
        let mut conn = f.connection.clone();
        conn.set(0, 1, 2, x(0)).unwrap();
        conn.set(n + 1, 2, n + 3, &x(2) + &SuperFunction::constant(&chart, qr(1, 3))).unwrap();
        conn.set(n, n + 2, n + 5, th(0)).unwrap();
        conn.set(2, n + 1, 3, th(1)).unwrap();
        conn.set(n + 4, n, 1, th(0).checked_mul(&th(1)).unwrap()).unwrap();
        let mut m = f.metric.components().clone();
        m.insert((1, 2), x(3));
        m.insert((2, 1), x(3));
        let metric = FrameMetric::new(&chart, m).unwrap();
        let (ng, nl) = nabla_dense(&fr, &metric, &conn, &levi).unwrap();
        assert!(!ng.is_empty() && !nl.is_empty());
        assert_eq!(nabla_metric(&fr, &metric, &conn).unwrap(), ng);
        assert_eq!(nabla_levi(&fr, &levi, &conn).unwrap(), nl);
    }

    #[test]
    fn perturbation_in_spinor_block_moves_only_c_d() {
        let (alg, f) = flat();
        let n = alg.n();
        let chart = *f.frame.chart();
        let mut conn = Connection::zero(&chart);
        conn.set(n + 2, 1, n + 3, SuperFunction::constant(&chart, qr(3, 7))).unwrap();
        let base = decompose_torsion(&f.connection.torsion(&f.frame).unwrap(), n);
        let dec = decompose_torsion(&conn.torsion(&f.frame).unwrap(), n);
        assert_ne!(dec.c_d, base.c_d);
        assert_eq!(dec.t_perp, base.t_perp);
        assert_eq!(dec.t_d, base.t_d);
        assert_eq!(dec.c_perp, base.c_perp);
        assert_eq!(dec.h_perp_d, base.h_perp_d);
        assert_eq!(dec.h_d_perp, base.h_d_perp);
    }

    #[test]
    fn levi_civita_without_strongness() {
        let (alg, f) = flat();
        let n = alg.n();
        let chart = *f.frame.chart();
        // Γ^0_{α 0} = Γ^0_{0 α} = θ^1 gives C^0_{α0} with g-symmetric shape on (0,0)
        let th = SuperFunction::theta(&chart, 0).unwrap();
        let mut conn = Connection::zero(&chart);
        conn.set(0, n, 0, th.clone()).unwrap();
        let dec = decompose_torsion(&conn.torsion(&f.frame).unwrap(), n);
        assert!(check_levi_civita(&dec, &f.metric, n).pass);
        let strong = check_strong_levi_civita(&dec, n);
        assert!(!strong.pass);

        let mut bad = Connection::zero(&chart);
        bad.set(0, 1, 2, SuperFunction::x(&chart, 0).unwrap()).unwrap();
        let dec = decompose_torsion(&bad.torsion(&f.frame).unwrap(), n);
        let r = check_levi_civita(&dec, &f.metric, n);
        assert!(!r.pass);
        assert!(r.worst.unwrap().contains("T^E0(E1,E2)"));
    }

    #[test]
    fn flat_physical_fields() {
        let (_, f) = flat();
        let p = extract_physical_fields(&f.frame, &f.metric, &f.connection).unwrap();
        assert!(p.gravitino.iter().flatten().all(SuperFunction::is_zero));
        assert!(p.a_field.is_empty());
        assert!(p.metric_connection.is_empty());
        assert!(p.spinor_connection.is_empty());
        assert_eq!(p.graviton_signature().unwrap(), (3, 1, 0));
        assert!(p.check_parities().pass);
        for (i, row) in p.graviton.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let want = if i != j { q(0) } else if i == 0 { q(-1) } else { q(1) };
                assert_eq!(g.as_constant().unwrap(), want);
            }
        }
    }
}
