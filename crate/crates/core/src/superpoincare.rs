//! Admissible spinor forms and the super Poincaré algebras `so(V) + V + S`
//! they define, with graded Jacobi verification.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{GammaRep, Signature, SpinorBilinear, Symmetry};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};
use crate::rational::{format_rational, q, qr, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordType {
    AllSymmetric,
    AllSkew,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitType {
    Orthogonal,
    BothIsotropic,
    NotApplicable,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub symmetry: Symmetry,
    pub clifford_type: CliffordType,
    pub split_type: SplitType,
    pub admissible: bool,
}

fn bilinear_of(b: &Mat, left: &Mat, right: &Mat) -> Mat {
    left.transpose().mul(b).mul(right)
}

/// Tests the three admissibility conditions and nondegeneracy.
pub fn check_admissible(beta: &SpinorBilinear, rep: &GammaRep) -> Result<AdmissibilityReport> {
    if beta.dim() != rep.real_dim() {
        return Err(Error::Dimension(format!(
            "β has dimension {} but the real spinor space has dimension {}",
            beta.dim(),
            rep.real_dim()
        )));
    }
    if beta.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let b = beta.matrix();
    let mut sym = true;
    let mut skew = true;
    for g in rep.realified() {
        // β(e_i·s, s′) against β(s, e_i·s′)
        let left = g.transpose().mul(b);
        let right = b.mul(&g);
        sym &= left == right;
        skew &= left == right.neg();
    }
    let clifford_type = match (sym, skew) {
        (true, _) => CliffordType::AllSymmetric,
        (false, true) => CliffordType::AllSkew,
        _ => CliffordType::Neither,
    };
    let split_type = match rep.chirality() {
        None => SplitType::NotApplicable,
        Some([plus, minus]) => {
            let (p, m) = (plus.realify(), minus.realify());
            if bilinear_of(b, &p, &m).is_zero() {
                SplitType::Orthogonal
            } else if bilinear_of(b, &p, &p).is_zero() && bilinear_of(b, &m, &m).is_zero() {
                SplitType::BothIsotropic
            } else {
                SplitType::Neither
            }
        }
    };
    let admissible = clifford_type != CliffordType::Neither && split_type != SplitType::Neither;
    Ok(AdmissibilityReport {
        symmetry: beta.symmetry(),
        clifford_type,
        split_type,
        admissible,
    })
}

/// Levi constants `L^i_{αβ} = η^{ii} β(e_i·e_α, e_β)`, one `m×m` matrix per `i`.
pub fn bracket_tensor_from_beta(beta: &SpinorBilinear, rep: &GammaRep) -> Result<Vec<Mat>> {
    let report = check_admissible(beta, rep)?;
    if !report.admissible {
        return Err(Error::NotAdmissible(format!("{report:?}")));
    }
    let sig = rep.signature();
    let mut out = Vec::with_capacity(rep.n());
    for (i, g) in rep.realified().iter().enumerate() {
        let l = g.transpose().mul(beta.matrix()).scale(&sig.eta_q(i));
        if !l.is_symmetric() {
            return Err(Error::NotAdmissible(format!(
                "β(e_{i}·s, s′) is not symmetric in (s, s′)"
            )));
        }
        out.push(l);
    }
    Ok(out)
}

pub type SparseVec = BTreeMap<usize, Q>;

fn add_into(acc: &mut SparseVec, k: usize, v: Q) {
    if v.is_zero() {
        return;
    }
    let e = acc.entry(k).or_insert_with(Q::zero);
    *e += v;
    if e.is_zero() {
        acc.remove(&k);
    }
}

/// Structure constants of `g = so(V) + V + S` in the basis
/// `(A_{ij})_{i<j}, (e_i), (e_α)`.
#[derive(Debug, Clone)]
pub struct SuperPoincareAlgebra {
    signature: Signature,
    so_pairs: Vec<(usize, usize)>,
    m: usize,
    beta: SpinorBilinear,
    levi: Vec<Mat>,
    table: Vec<Vec<(usize, Q)>>,
}

/// Matrix of `A_{ij}` on `V`: `A_{ij} e_k = η_{jk} e_i − η_{ik} e_j`.
fn so_matrix(sig: &Signature, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(sig.n(), sig.n());
    m[(i, j)] = sig.eta_q(j);
    m[(j, i)] = -sig.eta_q(i);
    m
}

/// Builds the algebra; the spin action is `ρ(A_{ij}) = −¼[Γ_i, Γ_j]`.
pub fn build_super_poincare(
    rep: &GammaRep,
    beta: &SpinorBilinear,
    levi: &[Mat],
) -> Result<SuperPoincareAlgebra> {
    let sig = rep.signature().clone();
    let n = sig.n();
    let m = rep.real_dim();
    if levi.len() != n || levi.iter().any(|l| l.rows() != m || l.cols() != m) {
        return Err(Error::Dimension(format!(
            "Levi constants must be {n} matrices of size {m}×{m}"
        )));
    }
    if beta.dim() != m {
        return Err(Error::Dimension("β does not match the spinor dimension".into()));
    }
    if let Some(i) = levi.iter().position(|l| !l.is_symmetric()) {
        return Err(Error::Symmetry(format!("L^{i} is not symmetric")));
    }
    let so_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let nso = so_pairs.len();
    let dim = nso + n + m;
    let mut table = vec![Vec::new(); dim * dim];
    let so_mats: Vec<Mat> = so_pairs.iter().map(|&(i, j)| so_matrix(&sig, i, j)).collect();
    let gam: Vec<CMat> = rep.gammas().to_vec();
    let spin: Vec<Mat> = so_pairs
        .iter()
        .map(|&(i, j)| {
            let comm = gam[i].mul(&gam[j]).sub(&gam[j].mul(&gam[i]));
            comm.scale(&qr(-1, 4)).realify()
        })
        .collect();
    let index_of: BTreeMap<(usize, usize), usize> =
        so_pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut set = |a: usize, b: usize, v: SparseVec| {
        table[a * dim + b] = v.into_iter().collect();
    };
    for (a, ma) in so_mats.iter().enumerate() {
        for (b, mb) in so_mats.iter().enumerate() {
            let comm = ma.mul(mb).sub(&mb.mul(ma));
            let mut v = SparseVec::new();
            for (r, c, val) in comm.entries() {
                if r < c {
                    add_into(&mut v, index_of[&(r, c)], val / sig.eta_q(c));
                }
            }
            set(a, b, v);
        }
        for k in 0..n {
            let mut v = SparseVec::new();
            let mut w = SparseVec::new();
            for r in 0..n {
                add_into(&mut v, nso + r, ma[(r, k)].clone());
                add_into(&mut w, nso + r, -ma[(r, k)].clone());
            }
            set(a, nso + k, v);
            set(nso + k, a, w);
        }
        for al in 0..m {
            let mut v = SparseVec::new();
            let mut w = SparseVec::new();
            for r in 0..m {
                add_into(&mut v, nso + n + r, spin[a][(r, al)].clone());
                add_into(&mut w, nso + n + r, -spin[a][(r, al)].clone());
            }
            set(a, nso + n + al, v);
            set(nso + n + al, a, w);
        }
    }
    for al in 0..m {
        for be in 0..m {
            let mut v = SparseVec::new();
            for (i, l) in levi.iter().enumerate() {
                add_into(&mut v, nso + i, l[(al, be)].clone());
            }
            set(nso + n + al, nso + n + be, v);
        }
    }
    Ok(SuperPoincareAlgebra {
        signature: sig,
        so_pairs,
        m,
        beta: beta.clone(),
        levi: levi.to_vec(),
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    All,
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiResult {
    pub max_residual: Q,
    pub worst: Option<(usize, usize, usize)>,
    pub triples: usize,
}

impl SuperPoincareAlgebra {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn n(&self) -> usize {
        self.signature.n()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn so_dim(&self) -> usize {
        self.so_pairs.len()
    }

    pub fn dim(&self) -> usize {
        self.so_dim() + self.n() + self.m
    }

    pub fn so_index(&self, i: usize, j: usize) -> Option<usize> {
        self.so_pairs.iter().position(|&p| p == (i, j))
    }

    pub fn v_index(&self, i: usize) -> usize {
        self.so_dim() + i
    }

    pub fn s_index(&self, alpha: usize) -> usize {
        self.so_dim() + self.n() + alpha
    }

    pub fn is_odd(&self, a: usize) -> bool {
        a >= self.so_dim() + self.n()
    }

    pub fn levi(&self) -> &[Mat] {
        &self.levi
    }

    pub fn beta(&self) -> &SpinorBilinear {
        &self.beta
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Q)] {
        &self.table[a * self.dim() + b]
    }

    /// Bilinear bracket of sparse vectors.
    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let c = ca * cb;
                for (k, v) in self.bracket_basis(*a, *b) {
                    add_into(&mut out, *k, &c * v);
                }
            }
        }
        out
    }

    fn basis(&self, a: usize) -> SparseVec {
        SparseVec::from([(a, q(1))])
    }

    /// `[x,[y,z]] − [[x,y],z] − (−1)^{|x||y|}[y,[x,z]]` on basis elements.
    pub fn jacobi_residual(&self, a: usize, b: usize, c: usize) -> SparseVec {
        let (x, y, z) = (self.basis(a), self.basis(b), self.basis(c));
        let mut out = self.bracket(&x, &self.bracket(&y, &z));
        for (k, v) in self.bracket(&self.bracket(&x, &y), &z) {
            add_into(&mut out, k, -v);
        }
        let sign = if self.is_odd(a) && self.is_odd(b) { q(1) } else { q(-1) };
        for (k, v) in self.bracket(&y, &self.bracket(&x, &z)) {
            add_into(&mut out, k, &sign * v);
        }
        out
    }

    /// Violations of `[x,y] = −(−1)^{|x||y|}[y,x]`.
    pub fn antisymmetry_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for a in 0..self.dim() {
            for b in a..self.dim() {
                let xy: SparseVec = self.bracket_basis(a, b).iter().cloned().collect();
                let yx: SparseVec = self.bracket_basis(b, a).iter().cloned().collect();
                let sign = if self.is_odd(a) && self.is_odd(b) { q(1) } else { q(-1) };
                let expected: SparseVec = yx.into_iter().map(|(k, v)| (k, &sign * v)).collect();
                if xy != expected {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    pub fn export(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                for (c, v) in self.bracket_basis(a, b) {
                    out.push(format!("{a} {b} {c} {}", format_rational(v)));
                }
            }
        }
        out
    }
}

/// Largest absolute graded Jacobi residual over basis triples.
pub fn jacobi_check(alg: &SuperPoincareAlgebra, sampling: Sampling) -> JacobiResult {
    let dim = alg.dim();
    let mut result = JacobiResult {
        max_residual: Q::zero(),
        worst: None,
        triples: 0,
    };
    let mut visit = |a: usize, b: usize, c: usize| {
        result.triples += 1;
        for v in alg.jacobi_residual(a, b, c).values() {
            if v.abs() > result.max_residual {
                result.max_residual = v.abs();
                result.worst = Some((a, b, c));
            }
        }
    };
    match sampling {
        Sampling::All => {
            for a in 0..dim {
                for b in 0..dim {
                    for c in 0..dim {
                        visit(a, b, c);
                    }
                }
            }
        }
        Sampling::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let (a, b, c) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
                visit(a, b, c);
            }
        }
    }
    result
}

/// `(u, w) = ⟨u_V, w_V⟩ + β(u_S, w_S)` for `u, w ∈ V + S` given as coordinate vectors.
pub fn extended_inner_product(alg: &SuperPoincareAlgebra, u: &[Q], w: &[Q]) -> Result<Q> {
    let (n, m) = (alg.n(), alg.m());
    if u.len() != n + m || w.len() != n + m {
        return Err(Error::Dimension(format!("V + S vectors have length {}", n + m)));
    }
    let mut acc = Q::zero();
    for i in 0..n {
        acc += alg.signature().eta_q(i) * &u[i] * &w[i];
    }
    acc += alg.beta().eval(&u[n..], &w[n..]);
    Ok(acc)
}

/// Full `(n+m)×(n+m)` matrix of the extended inner product.
pub fn extended_inner_matrix(alg: &SuperPoincareAlgebra) -> Mat {
    let (n, m) = (alg.n(), alg.m());
    let mut out = Mat::zeros(n + m, n + m);
    for i in 0..n {
        out[(i, i)] = alg.signature().eta_q(i);
    }
    for (r, c, v) in alg.beta().matrix().entries() {
        out[(n + r, n + c)] = v.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{charge_conjugation_beta, eleven_dim_beta, gamma_rep, GammaStyle};

    fn flat4() -> (GammaRep, SpinorBilinear, SuperPoincareAlgebra) {
        let rep = gamma_rep(&Signature::lorentzian(4).unwrap(), GammaStyle::Auto).unwrap();
        let beta = charge_conjugation_beta(&rep).unwrap();
        let levi = bracket_tensor_from_beta(&beta, &rep).unwrap();
        let alg = build_super_poincare(&rep, &beta, &levi).unwrap();
        (rep, beta, alg)
    }

    #[test]
    fn four_dimensional_charge_conjugation_form() {
        let (rep, beta, alg) = flat4();
        let report = check_admissible(&beta, &rep).unwrap();
        assert_eq!(report.symmetry, Symmetry::Skew);
        assert_eq!(report.clifford_type, CliffordType::AllSkew);
        assert!(report.admissible);
        assert_eq!(alg.dim(), 18);
        assert!(alg.antisymmetry_failures().is_empty());
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let (rep, _, _) = flat4();
        let zero = SpinorBilinear::new(Mat::zeros(8, 8)).unwrap();
        assert_eq!(check_admissible(&zero, &rep), Err(Error::Degenerate));
    }

    #[test]
    fn eleven_dimensional_beta_is_admissible() {
        let rep = gamma_rep(&Signature::lorentzian(11).unwrap(), GammaStyle::Auto).unwrap();
        let beta = eleven_dim_beta(&rep).unwrap();
        let report = check_admissible(&beta, &rep).unwrap();
        assert!(report.admissible);
        assert_eq!(report.split_type, SplitType::NotApplicable);
        let levi = bracket_tensor_from_beta(&beta, &rep).unwrap();
        assert!(levi.iter().all(Mat::is_symmetric));
        let scaled = bracket_tensor_from_beta(&beta.scale(&q(3)), &rep).unwrap();
        assert_eq!(scaled[4], levi[4].scale(&q(3)));
    }

    #[test]
    fn bracket_examples() {
        let (_, _, alg) = flat4();
        let a12 = alg.so_index(1, 2).unwrap();
        // A_12 e_1 = η_21 e_1 − η_11 e_2 = −e_2
        assert_eq!(alg.bracket_basis(a12, alg.v_index(1)), &[(alg.v_index(2), q(-1))]);
        for i in 0..4 {
            for al in 0..8 {
                assert!(alg.bracket_basis(alg.v_index(i), alg.s_index(al)).is_empty());
            }
        }
        let l = alg.levi();
        for (k, v) in alg.bracket_basis(alg.s_index(0), alg.s_index(2)) {
            assert_eq!(*v, l[*k - alg.so_dim()][(0, 2)]);
        }
    }

    #[test]
    fn jacobi_holds_and_detects_perturbation() {
        let (rep, beta, alg) = flat4();
        assert!(jacobi_check(&alg, Sampling::All).max_residual.is_zero());
        let mut levi = alg.levi().to_vec();
        let (r, c) = levi[1].entries().next().map(|(r, c, _)| (r, c)).unwrap();
        levi[1][(r, c)] += q(1);
        if r != c {
            levi[1][(c, r)] += q(1);
        }
        let broken = build_super_poincare(&rep, &beta, &levi).unwrap();
        assert!(!jacobi_check(&broken, Sampling::All).max_residual.is_zero());
    }

    #[test]
    fn extended_inner_product_blocks() {
        let (_, beta, alg) = flat4();
        let mut e1 = vec![q(0); 12];
        e1[1] = q(1);
        assert_eq!(extended_inner_product(&alg, &e1, &e1).unwrap(), q(1));
        let mut ea = vec![q(0); 12];
        ea[4] = q(1);
        assert_eq!(extended_inner_product(&alg, &e1, &ea).unwrap(), q(0));
        let mut eb = vec![q(0); 12];
        eb[4 + 5] = q(1);
        assert_eq!(extended_inner_product(&alg, &ea, &eb).unwrap(), beta.matrix()[(0, 5)]);
        assert!(extended_inner_matrix(&alg).det() != q(0));
    }
}
