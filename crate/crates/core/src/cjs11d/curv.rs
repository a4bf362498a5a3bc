//! `Ric^{D⊥}`, `s^{D⊥}`, the Rarita–Schwinger 1-form and the Einstein residual.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::rational::{q, qr};
use crate::superdomain::{Chart, SuperFunction};
use crate::supergravity::{Components3, Curvature, FrameMetric};
use crate::Q;

use super::dorth::{form_inner, norm_sq, DOrthForm};
use super::flux::CliffordData;

pub type Components2 = BTreeMap<(usize, usize), SuperFunction>;

fn add_into(map: &mut Components2, key: (usize, usize), v: &SuperFunction) {
    if v.is_zero() {
        return;
    }
    let chart = *v.chart();
    map.entry(key)
        .or_insert_with(|| SuperFunction::zero(&chart))
        .add_assign_ref(v);
}

/// `Ric^{D⊥}(E_a, E_b) = Σ_i ε_i Σ_D R^D_{a i b} g_{D i}` on even `a, b`.
pub fn ric_perp(curv: &Curvature, metric: &FrameMetric, eps: &[Q]) -> Result<Components2> {
    let n = eps.len();
    let mut out = Components2::new();
    for (&(d, a, i, b), r) in curv {
        if a >= n || i >= n || b >= n {
            continue;
        }
        let g = metric.get(d, i);
        if g.is_zero() {
            continue;
        }
        add_into(&mut out, (a, b), &r.checked_mul(&g)?.scale(&eps[i]));
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Double-loop contraction through `g(R_{E_a E_i}E_b, E_i)` component lookups.
pub fn ric_perp_oracle(curv: &Curvature, metric: &FrameMetric, eps: &[Q], dim: usize) -> Result<Components2> {
    let n = eps.len();
    let chart = *metric.chart();
    let mut out = Components2::new();
    for a in 0..n {
        for b in 0..n {
            let mut acc = SuperFunction::zero(&chart);
            for (i, e) in eps.iter().enumerate() {
                for d in 0..dim {
                    if let Some(r) = curv.get(&(d, a, i, b)) {
                        acc.add_scaled(&r.checked_mul(&metric.get(d, i))?, e);
                    }
                }
            }
            if !acc.is_zero() {
                out.insert((a, b), acc);
            }
        }
    }
    Ok(out)
}

pub fn scalar_perp(ric: &Components2, eps: &[Q], chart: &Chart) -> SuperFunction {
    let mut acc = SuperFunction::zero(chart);
    for (j, e) in eps.iter().enumerate() {
        if let Some(r) = ric.get(&(j, j)) {
            acc.add_scaled(r, e);
        }
    }
    acc
}

/// `𝓡(E_k)^γ = Σ_{i<j} ε_iε_j [Γ_kΓ_iΓ_j]^γ_β T^{n+β}_{ij}`, keyed `(k, γ)`;
/// `𝓡` vanishes on `D`.
pub fn rarita_schwinger(torsion: &Components3, data: &CliffordData) -> Result<Components2> {
    let n = data.n;
    let mut out = Components2::new();
    let mut blocks: BTreeMap<(usize, usize), Vec<(usize, &SuperFunction)>> = BTreeMap::new();
    for (&(c, i, j), t) in torsion {
        if c >= n && i < j && j < n && !t.is_zero() {
            blocks.entry((i, j)).or_default().push((c - n, t));
        }
    }
    for ((i, j), list) in blocks {
        let e = &data.eps[i] * &data.eps[j];
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            let word = data.word(&[k, i, j]);
            for (g, b, w) in word.entries() {
                for (beta, t) in &list {
                    if *beta == b {
                        add_into(&mut out, (k, g), &t.scale(&(w * &e)));
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `Ric − ½ s g − (1/24)(‖F‖² g − 8 g(ι_a F, ι_b F))` on even `a, b`.
pub fn einstein_residual(ric: &Components2, f: &DOrthForm, eps: &[Q]) -> Result<Components2> {
    let n = eps.len();
    let chart = *f.chart();
    let s = scalar_perp(ric, eps, &chart);
    let fsq = norm_sq(f, eps)?;
    let interiors: Vec<DOrthForm> = (0..n).map(|a| f.interior_even(a)).collect::<Result<_>>()?;
    let mut out = Components2::new();
    for a in 0..n {
        for b in 0..n {
            let mut acc = ric.get(&(a, b)).cloned().unwrap_or_else(|| SuperFunction::zero(&chart));
            if a == b {
                acc.add_scaled(&s, &(qr(-1, 2) * &eps[a]));
                acc.add_scaled(&fsq, &(qr(-1, 24) * &eps[a]));
            }
            if !f.is_zero() {
                let gi = form_inner(&interiors[a], &interiors[b], eps)?;
                acc.add_scaled(&gi, &(q(8) * qr(1, 24)));
            }
            if !acc.is_zero() {
                out.insert((a, b), acc);
            }
        }
    }
    Ok(out)
}
