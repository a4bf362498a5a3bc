//! Clifford data on the real spinor module, the super-flux `Z` and the
//! Clifford-coupling constraint (2).

use std::collections::{BTreeMap, BTreeSet};

use crate::clifford::GammaRep;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rational::{q, qr, qzero};
use crate::superdomain::{basis_value, super_sign, Chart, SuperForm, SuperFunction};
use crate::superpoincare::SuperPoincareAlgebra;
use crate::supergravity::Components3;
use crate::Q;

use super::dorth::{permutation_sign, DOrthForm};

/// Row-sparse real matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: Vec<BTreeMap<usize, Q>>,
}

impl SparseMat {
    pub fn identity(d: usize) -> Self {
        SparseMat {
            rows: (0..d).map(|i| BTreeMap::from([(i, q(1))])).collect(),
        }
    }

    pub fn from_mat(m: &Mat) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows()];
        for (r, c, v) in m.entries() {
            rows[r].insert(c, v.clone());
        }
        SparseMat { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.rows[r].get(&c).cloned().unwrap_or_else(qzero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.rows[*k] {
                        *out.entry(*c).or_insert_with(qzero) += a * b;
                    }
                }
                out.retain(|_, v| *v != qzero());
                out
            })
            .collect();
        SparseMat { rows }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut rows = vec![BTreeMap::new(); self.dim()];
        for (r, c, v) in self.entries() {
            rows[c].insert(r, v.clone());
        }
        SparseMat { rows }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(qzero(), |acc, (c, a)| acc + a * &v[*c]))
            .collect()
    }
}

/// Realified `Γ_i`, the complex structure `J` and `β` on `S`, with `ε_i`.
#[derive(Debug, Clone)]
pub struct CliffordData {
    pub n: usize,
    pub m: usize,
    pub eps: Vec<Q>,
    gammas: Vec<SparseMat>,
    /// `P_{jk} = Jᵀ β Γ_j Γ_k`, so `g(iE_α, Γ_jΓ_k E_β) = P_{jk}[α][β]`.
    pairings: BTreeMap<(usize, usize), SparseMat>,
}

impl CliffordData {
    pub fn new(alg: &SuperPoincareAlgebra, rep: &GammaRep) -> Result<Self> {
        let (n, m) = (alg.n(), alg.m());
        if rep.n() != n || rep.real_dim() != m {
            return Err(Error::Dimension(format!(
                "rep acts on ℝ^{} with {} Γs, algebra has V = {n}, S = {m}",
                rep.real_dim(),
                rep.n()
            )));
        }
        let gammas: Vec<SparseMat> = rep.realified().iter().map(SparseMat::from_mat).collect();
        let jt_beta = SparseMat::from_mat(&rep.complex_structure())
            .transpose()
            .mul(&SparseMat::from_mat(alg.beta().matrix()));
        let mut pairings = BTreeMap::new();
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    pairings.insert((j, k), jt_beta.mul(&gammas[j]).mul(&gammas[k]));
                }
            }
        }
        Ok(CliffordData {
            n,
            m,
            eps: (0..n).map(|i| alg.signature().eta_q(i)).collect(),
            gammas,
            pairings,
        })
    }

    pub fn gamma(&self, i: usize) -> &SparseMat {
        &self.gammas[i]
    }

    /// `Γ_{a_1}⋯Γ_{a_r}` on the real module.
    pub fn word(&self, idx: &[usize]) -> SparseMat {
        idx.iter()
            .fold(SparseMat::identity(self.m), |acc, &i| acc.mul(&self.gammas[i]))
    }

    pub fn pairing(&self, j: usize, k: usize) -> Option<&SparseMat> {
        self.pairings.get(&(j, k))
    }

    fn beta_j(&self, j: &Mat, beta: &Mat) -> SparseMat {
        SparseMat::from_mat(j).transpose().mul(&SparseMat::from_mat(beta))
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// `Z(E_{A_1}, …, E_{A_4})` from the permutations that put odd frame
/// directions in slots 1, 4 and distinct even ones in slots 2, 3.
pub fn z_value(data: &CliffordData, dirs: &[usize; 4]) -> Result<Q> {
    let n = data.n;
    let odd: Vec<bool> = dirs.iter().map(|&a| a >= n).collect();
    if odd.iter().filter(|&&o| o).count() != 2 {
        return Ok(qzero());
    }
    let mut acc = qzero();
    for sigma in permutations4() {
        let [a0, a1, a2, a3] = sigma.map(|s| dirs[s]);
        if a0 < n || a3 < n || a1 >= n || a2 >= n || a1 == a2 {
            continue;
        }
        let v = data.pairings[&(a1, a2)].get(a0 - n, a3 - n);
        if v != qzero() {
            acc += q(super_sign(&sigma, &odd)? as i64) * v;
        }
    }
    Ok(acc * qr(1, 8))
}

/// `Z` as a frame 4-form on `chart`.
pub fn super_flux_z(data: &CliffordData, chart: &Chart) -> Result<SuperForm> {
    let n = data.n;
    if chart.n != n || chart.m != data.m {
        return Err(Error::ChartMismatch(format!(
            "Z lives on ℝ^{n}|{}, chart is ℝ^{}|{}",
            data.m, chart.n, chart.m
        )));
    }
    let mut form = SuperForm::zero(chart);
    for j in 0..n {
        for k in j + 1..n {
            let mut pairs = BTreeSet::new();
            for key in [(j, k), (k, j)] {
                for (a, b, _) in data.pairings[&key].entries() {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
            for (a, b) in pairs {
                let dirs = [j, k, n + a, n + b];
                let v = z_value(data, &dirs)?;
                if v == qzero() {
                    continue;
                }
                let idx: Vec<u16> = dirs.iter().map(|&d| d as u16).collect();
                let c = v / basis_value(&idx, n);
                form.add_term(idx, SuperFunction::constant(chart, c));
            }
        }
    }
    Ok(form)
}

/// Direct 24-permutation sum of the defining formula on constant frame-component
/// vectors, each supported on `V` or on `S` only.
pub fn z_oracle(data: &CliffordData, jt_beta: &SparseMat, args: &[Vec<Q>]) -> Result<Q> {
    let (n, m) = (data.n, data.m);
    if args.len() != 4 || args.iter().any(|a| a.len() != n + m) {
        return Err(Error::Dimension("Z takes four vectors of length n + m".into()));
    }
    let mut odd = Vec::with_capacity(4);
    for a in args {
        let even_part = a[..n].iter().any(|v| *v != qzero());
        let odd_part = a[n..].iter().any(|v| *v != qzero());
        if even_part && odd_part {
            return Err(Error::Parity("Z oracle arguments must be homogeneous".into()));
        }
        odd.push(odd_part);
    }
    let mut acc = qzero();
    let mut sigma = [0usize; 4];
    for s in 0..24usize {
        let mut pool: Vec<usize> = (0..4).collect();
        let mut r = s;
        for (slot, size) in (1..=4).rev().enumerate() {
            sigma[slot] = pool.remove(r % size);
            r /= size;
        }
        let (x0, x1, x2, x3) = (&args[sigma[0]], &args[sigma[1]], &args[sigma[2]], &args[sigma[3]]);
        let s_left = &x0[n..];
        let s_right = &x3[n..];
        let mut cliff = vec![qzero(); m];
        for a in 0..n {
            for b in a + 1..n {
                let w = &x1[a] * &x2[b] - &x1[b] * &x2[a];
                if w == qzero() {
                    continue;
                }
                let v = data.gammas[a].mul_vec(&data.gammas[b].mul_vec(s_right));
                for (c, val) in cliff.iter_mut().zip(v) {
                    *c += &w * val;
                }
            }
        }
        let paired = jt_beta.mul_vec(&cliff);
        let g: Q = s_left.iter().zip(&paired).fold(qzero(), |acc, (l, p)| acc + l * p);
        if g != qzero() {
            acc += q(super_sign(&sigma, &odd)? as i64) * g;
        }
    }
    Ok(acc * qr(1, 8))
}

/// `Jᵀβ` for [`z_oracle`], built independently of the cached pairings.
pub fn oracle_pairing(alg: &SuperPoincareAlgebra, rep: &GammaRep, data: &CliffordData) -> SparseMat {
    data.beta_j(&rep.complex_structure(), alg.beta().matrix())
}

/// `K_j(α,β,γ,δ) = Σ_{σ∈S₄} Σ_k L^k_{σ(α)σ(β)} P_{kj}[σ(γ)][σ(δ)]`, the Γ/β
/// contraction behind `dZ` on the flat model: `dZ(E_j, E_α, E_β, E_γ, E_δ) = −K_j/8`.
pub fn fierz_contraction(levi: &[Mat], data: &CliffordData, j: usize, odd: [usize; 4]) -> Q {
    let mut acc = qzero();
    for sigma in permutations4() {
        let [a, b, c, d] = sigma.map(|s| odd[s]);
        for (k, lk) in levi.iter().enumerate() {
            if k == j {
                continue;
            }
            let l = &lk[(a, b)];
            if *l == qzero() {
                continue;
            }
            acc += l * data.pairings[&(k, j)].get(c, d);
        }
    }
    acc
}

fn check_flux(f: &DOrthForm, data: &CliffordData) -> Result<()> {
    if f.chart().n != data.n || f.chart().m != data.m {
        return Err(Error::Scenario("F lives on a different chart".into()));
    }
    if f.degree() != 4 && !f.is_zero() {
        return Err(Error::Scenario(format!("F has degree {}, not 4", f.degree())));
    }
    if !f.is_even() {
        return Err(Error::Scenario("F must be an even form".into()));
    }
    Ok(())
}

fn eps_of(eps: &[Q], idx: &[usize]) -> Q {
    idx.iter().fold(q(1), |acc, &i| acc * &eps[i])
}

/// `(1/144)(E_i∧F♯ − 8(ι_{E_i}F)♯)·E_α`, keyed `(n+γ, n+α, i)` like `C^{D,D⊥;D}`.
pub fn constraint2_rhs(data: &CliffordData, f: &DOrthForm) -> Result<Components3> {
    check_flux(f, data)?;
    let n = data.n;
    let chart = *f.chart();
    let mut out = Components3::new();
    let mut add = |word: &SparseMat, i: usize, coeff: &SuperFunction| {
        for (g, a, w) in word.entries() {
            let e = out
                .entry((n + g, n + a, i))
                .or_insert_with(|| SuperFunction::zero(&chart));
            e.add_scaled(coeff, w);
        }
    };
    for (idx, fm) in f.terms() {
        let mm: Vec<usize> = idx.iter().map(|&x| x as usize).collect();
        for i in 0..n {
            match mm.iter().position(|&x| x == i) {
                None => {
                    let mut w = vec![i];
                    w.extend_from_slice(&mm);
                    let coeff = fm.scale(&(eps_of(&data.eps, &mm) * qr(1, 144)));
                    add(&data.word(&w), i, &coeff);
                }
                Some(pos) => {
                    let mut rest = mm.clone();
                    rest.remove(pos);
                    let sign = if pos % 2 == 0 { q(1) } else { q(-1) };
                    let coeff = fm.scale(&(eps_of(&data.eps, &rest) * sign * qr(-8, 144)));
                    add(&data.word(&rest), i, &coeff);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

fn full_component(idx: &[usize]) -> Option<(Q, Vec<u16>)> {
    let sign = permutation_sign(idx)?;
    let mut sorted: Vec<u16> = idx.iter().map(|&x| x as u16).collect();
    sorted.sort_unstable();
    Some((q(sign as i64), sorted))
}

fn ordered_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for t in &out {
            for i in 0..n {
                if !t.contains(&i) {
                    let mut u = t.clone();
                    u.push(i);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

fn factorial(r: usize) -> Q {
    q((1..=r as i64).product())
}

/// Straight-line constraint-(2) right-hand side for one `X = E_i`: multivectors
/// as fully antisymmetric tensors contracted over every ordered index tuple.
pub fn constraint2_rhs_oracle(data: &CliffordData, f: &DOrthForm, i: usize) -> Result<Components3> {
    check_flux(f, data)?;
    let n = data.n;
    let chart = *f.chart();
    let mut out = Components3::new();
    let raised = f.sharp(&data.eps);
    let f_up = |idx: &[usize]| -> SuperFunction {
        match full_component(idx) {
            Some((s, sorted)) => raised
                .get(&sorted)
                .map(|v| v.scale(&s))
                .unwrap_or_else(|| SuperFunction::zero(&chart)),
            None => SuperFunction::zero(&chart),
        }
    };
    let mut push = |coeff: SuperFunction, word: &[usize]| {
        if coeff.is_zero() {
            return;
        }
        for (g, a, w) in data.word(word).entries() {
            let e = out
                .entry((n + g, n + a, i))
                .or_insert_with(|| SuperFunction::zero(&chart));
            e.add_scaled(&coeff, w);
        }
    };
    // (E_i ∧ F♯)^{a_1…a_5} = Σ_k (−1)^k δ_i^{a_k} F^{a_1…â_k…a_5}
    for t in ordered_tuples(n, 5) {
        let mut c = SuperFunction::zero(&chart);
        for (k, &a) in t.iter().enumerate() {
            if a == i {
                let mut rest = t.clone();
                rest.remove(k);
                let s = if k % 2 == 0 { q(1) } else { q(-1) };
                c.add_scaled(&f_up(&rest), &s);
            }
        }
        push(c.scale(&(qr(1, 144) / factorial(5))), &t);
    }
    // (ι_{E_i}F)♯^{b_1b_2b_3} = ε_{b_1}ε_{b_2}ε_{b_3} F_{i b_1 b_2 b_3}
    for t in ordered_tuples(n, 3) {
        let mut full = vec![i];
        full.extend_from_slice(&t);
        let Some((s, sorted)) = full_component(&full) else {
            continue;
        };
        let c = f.component(&sorted).scale(&(s * eps_of(&data.eps, &t)));
        push(c.scale(&(qr(-8, 144) / factorial(3))), &t);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `C^{D,D⊥;D}(E_α, E_i) − RHS`, over every `(γ, α, i)`.
pub fn constraint2_residual(c_d: &Components3, data: &CliffordData, f: &DOrthForm) -> Result<Components3> {
    let n = data.n;
    let mut out: Components3 = c_d
        .iter()
        .filter(|((c, a, b), _)| *c >= n && *a >= n && *b < n)
        .map(|(k, v)| (*k, v.clone()))
        .collect();
    for (k, v) in constraint2_rhs(data, f)? {
        let chart = *v.chart();
        out.entry(k)
            .or_insert_with(|| SuperFunction::zero(&chart))
            .add_scaled(&v, &q(-1));
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}
