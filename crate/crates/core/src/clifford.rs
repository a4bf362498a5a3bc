//! Clifford algebras `Cℓ(V, η)` through explicit Γ-matrices with
//! `Γ_iΓ_j + Γ_jΓ_i = −2η_ij`, the Clifford action of r-vectors on spinors,
//! and bilinear forms on the real spinor space.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};
use crate::rational::{format_rational, parse_rational, q, qr, Q};

/// Diagonal metric `η = diag(ε_0, …, ε_{n−1})`, `ε_i = ±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    eta: Vec<i8>,
}

impl Signature {
    /// `p` entries `+1` followed by `q` entries `−1`.
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let mut eta = vec![1i8; p];
        eta.extend(std::iter::repeat_n(-1, q));
        Self::from_eta(eta)
    }

    /// Time-first Lorentzian ordering `ε_0 = −1`, `ε_i = +1`.
    pub fn lorentzian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("empty signature".into()));
        }
        let mut eta = vec![1i8; n];
        eta[0] = -1;
        Self::from_eta(eta)
    }

    pub fn from_eta(eta: Vec<i8>) -> Result<Self> {
        if eta.is_empty() {
            return Err(Error::Dimension("empty signature".into()));
        }
        if eta.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Validation("η entries must be ±1".into()));
        }
        Ok(Signature { eta })
    }

    pub fn n(&self) -> usize {
        self.eta.len()
    }

    pub fn eta(&self, i: usize) -> i8 {
        self.eta[i]
    }

    pub fn eta_q(&self, i: usize) -> Q {
        q(self.eta[i] as i64)
    }

    pub fn entries(&self) -> &[i8] {
        &self.eta
    }

    pub fn p(&self) -> usize {
        self.eta.iter().filter(|&&e| e == 1).count()
    }

    pub fn q(&self) -> usize {
        self.eta.iter().filter(|&&e| e == -1).count()
    }

    pub fn det_sign(&self) -> i8 {
        if self.q().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn matrix(&self) -> Mat {
        Mat::diagonal(&(0..self.n()).map(|i| self.eta_q(i)).collect::<Vec<_>>())
    }

    /// `true` for one negative direction placed first.
    pub fn is_time_first_lorentzian(&self) -> bool {
        self.eta[0] == -1 && self.eta[1..].iter().all(|&e| e == 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaStyle {
    /// Dirac matrices for time-first (3,1), real Majorana matrices for
    /// time-first (10,1), Pauli strings otherwise.
    Auto,
    /// The block Dirac matrices of the four-dimensional example.
    Dirac,
    /// `Γ = iγ` with real `γ` built from real 2×2 blocks.
    Majorana,
    /// Tensor products of Pauli matrices with a factor `i` where needed.
    PauliString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaRep {
    signature: Signature,
    gammas: Vec<CMat>,
    chirality: Option<[CMat; 2]>,
}

impl GammaRep {
    /// Validates the anticommutation relations before returning.
    pub fn new(signature: Signature, gammas: Vec<CMat>) -> Result<Self> {
        if gammas.len() != signature.n() {
            return Err(Error::Dimension(format!(
                "{} matrices for a signature of dimension {}",
                gammas.len(),
                signature.n()
            )));
        }
        let d = gammas[0].rows();
        if gammas.iter().any(|g| g.rows() != d || g.cols() != d) {
            return Err(Error::Dimension("Γ-matrices must share one square shape".into()));
        }
        let mut rep = GammaRep {
            signature,
            gammas,
            chirality: None,
        };
        if let Some((i, j)) = rep.anticommutator_failures().into_iter().next() {
            return Err(Error::Construction(format!(
                "Γ_{i}Γ_{j} + Γ_{j}Γ_{i} ≠ −2η_{i}{j}"
            )));
        }
        rep.chirality = rep.chirality_projectors();
        Ok(rep)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    /// Complex spinor dimension.
    pub fn dim_s(&self) -> usize {
        self.gammas[0].rows()
    }

    /// Real dimension of `S` after realification.
    pub fn real_dim(&self) -> usize {
        2 * self.dim_s()
    }

    pub fn gamma(&self, i: usize) -> &CMat {
        &self.gammas[i]
    }

    pub fn gammas(&self) -> &[CMat] {
        &self.gammas
    }

    pub fn chirality(&self) -> Option<&[CMat; 2]> {
        self.chirality.as_ref()
    }

    /// Index pairs `(i, j)`, `i ≤ j`, violating `Γ_iΓ_j + Γ_jΓ_i = −2η_ij`.
    pub fn anticommutator_failures(&self) -> Vec<(usize, usize)> {
        let d = self.dim_s();
        let mut bad = Vec::new();
        for i in 0..self.n() {
            for j in i..self.n() {
                let ac = self.gammas[i]
                    .mul(&self.gammas[j])
                    .add(&self.gammas[j].mul(&self.gammas[i]));
                let expected = if i == j {
                    CMat::identity(d).scale(&q(-2 * self.signature.eta(i) as i64))
                } else {
                    CMat::zeros(d, d)
                };
                if ac != expected {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Ordered product `Γ_{j1}⋯Γ_{jr}` (identity for the empty list).
    pub fn product(&self, indices: &[usize]) -> Result<CMat> {
        let mut out = CMat::identity(self.dim_s());
        for &j in indices {
            let g = self
                .gammas
                .get(j)
                .ok_or_else(|| Error::Dimension(format!("Γ index {j} out of range")))?;
            out = out.mul(g);
        }
        Ok(out)
    }

    pub fn realified(&self) -> Vec<Mat> {
        self.gammas.iter().map(CMat::realify).collect()
    }

    /// Multiplication by `i` on `(Re s, Im s)`.
    pub fn complex_structure(&self) -> Mat {
        CMat::identity(self.dim_s()).times_i().realify()
    }

    fn chirality_projectors(&self) -> Option<[CMat; 2]> {
        let n = self.n();
        if n % 2 == 1 {
            return None;
        }
        let all: Vec<usize> = (0..n).collect();
        let omega = self.product(&all).ok()?;
        let d = self.dim_s();
        let sq = omega.mul(&omega);
        let w = if sq == CMat::identity(d) {
            omega
        } else {
            omega.times_i()
        };
        let half = qr(1, 2);
        let id = CMat::identity(d);
        Some([id.add(&w).scale(&half), id.sub(&w).scale(&half)])
    }

    /// Sparse `(matrix, row, col, re, im)` entries.
    pub fn to_entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, g) in self.gammas.iter().enumerate() {
            for r in 0..g.rows() {
                for c in 0..g.cols() {
                    let (re, im) = (&g.re[(r, c)], &g.im[(r, c)]);
                    if !re.is_zero() || !im.is_zero() {
                        out.push(format!(
                            "{k} {r} {c} {} {}",
                            format_rational(re),
                            format_rational(im)
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn from_entries(signature: Signature, dim_s: usize, entries: &[String]) -> Result<Self> {
        let mut gammas = vec![CMat::zeros(dim_s, dim_s); signature.n()];
        for line in entries {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 5 {
                return Err(Error::parse(format!(
                    "gamma entry '{line}' must read 'matrix row col re im'"
                )));
            }
            let idx = |s: &str, bound: usize| -> Result<usize> {
                let v: usize = s
                    .parse()
                    .map_err(|_| Error::parse(format!("bad index '{s}' in '{line}'")))?;
                if v >= bound {
                    return Err(Error::Validation(format!("index {v} out of range in '{line}'")));
                }
                Ok(v)
            };
            let k = idx(parts[0], signature.n())?;
            let r = idx(parts[1], dim_s)?;
            let c = idx(parts[2], dim_s)?;
            gammas[k].re[(r, c)] = parse_rational(parts[3])?;
            gammas[k].im[(r, c)] = parse_rational(parts[4])?;
        }
        GammaRep::new(signature, gammas).map_err(|e| match e {
            Error::Construction(m) => Error::Validation(m),
            other => other,
        })
    }
}

fn pauli(k: usize) -> CMat {
    match k {
        0 => CMat::identity(2),
        1 => CMat::real(Mat::from_i64(2, 2, &[0, 1, 1, 0])),
        2 => CMat {
            re: Mat::zeros(2, 2),
            im: Mat::from_i64(2, 2, &[0, -1, 1, 0]),
        },
        3 => CMat::real(Mat::from_i64(2, 2, &[1, 0, 0, -1])),
        _ => unreachable!(),
    }
}

/// Real 2×2 blocks `I, σ1, σ3, ε` with `ε = [[0,1],[−1,0]]`.
fn real_block(k: usize) -> Mat {
    match k {
        0 => Mat::identity(2),
        1 => Mat::from_i64(2, 2, &[0, 1, 1, 0]),
        2 => Mat::from_i64(2, 2, &[1, 0, 0, -1]),
        3 => Mat::from_i64(2, 2, &[0, 1, -1, 0]),
        _ => unreachable!(),
    }
}

/// Strings of `factors` symbols from `{0,1,2,3}`, symbol 0 the identity and
/// the other three pairwise anticommuting.
fn strings(factors: usize) -> Vec<Vec<usize>> {
    let total = 4usize.pow(factors as u32);
    (1..total)
        .map(|mut code| {
            let mut s = vec![0; factors];
            for slot in s.iter_mut().rev() {
                *slot = code % 4;
                code /= 4;
            }
            s
        })
        .collect()
}

fn strings_anticommute(a: &[usize], b: &[usize]) -> bool {
    a.iter()
        .zip(b)
        .filter(|(&x, &y)| x != 0 && y != 0 && x != y)
        .count()
        % 2
        == 1
}

/// Depth-first search for mutually anticommuting strings, one per target,
/// where `accept(position, string)` filters admissible choices.
fn search_strings(
    factors: usize,
    targets: usize,
    accept: &dyn Fn(usize, &[usize]) -> bool,
) -> Option<Vec<Vec<usize>>> {
    let pool = strings(factors);
    let mut chosen: Vec<usize> = Vec::new();
    let mut budget = 2_000_000usize;
    fn go(
        pool: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        targets: usize,
        accept: &dyn Fn(usize, &[usize]) -> bool,
        budget: &mut usize,
    ) -> bool {
        if chosen.len() == targets {
            return true;
        }
        for idx in 0..pool.len() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let cand = &pool[idx];
            if chosen.contains(&idx) || !accept(chosen.len(), cand) {
                continue;
            }
            if chosen.iter().all(|&c| strings_anticommute(&pool[c], cand)) {
                chosen.push(idx);
                if go(pool, chosen, targets, accept, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if go(&pool, &mut chosen, targets, accept, &mut budget) {
        Some(chosen.into_iter().map(|i| pool[i].clone()).collect())
    } else {
        None
    }
}

fn dirac_4d(signature: &Signature) -> Result<GammaRep> {
    let i2 = CMat::identity(2);
    let z2 = CMat::zeros(2, 2);
    let block = |a: &CMat, b: &CMat, c: &CMat, d: &CMat| -> CMat {
        let mut out = CMat::zeros(4, 4);
        for (blk, (ro, co)) in [(a, (0, 0)), (b, (0, 2)), (c, (2, 0)), (d, (2, 2))] {
            for r in 0..2 {
                for col in 0..2 {
                    out.re[(ro + r, co + col)] = blk.re[(r, col)].clone();
                    out.im[(ro + r, co + col)] = blk.im[(r, col)].clone();
                }
            }
        }
        out
    };
    let mut gammas = vec![block(&i2, &z2, &z2, &i2.scale(&q(-1)))];
    for j in 1..=3 {
        let s = pauli(j);
        gammas.push(block(&z2, &s, &s.scale(&q(-1)), &z2));
    }
    GammaRep::new(signature.clone(), gammas)
}

fn majorana(signature: &Signature) -> Result<GammaRep> {
    let n = signature.n();
    let factors = n / 2;
    // γ_A² = η_AA needs an odd number of ε blocks exactly when η_AA = −1
    let accept = |pos: usize, s: &[usize]| {
        let eps = s.iter().filter(|&&k| k == 3).count();
        (eps % 2 == 1) == (signature.eta(pos) == -1)
    };
    let found = search_strings(factors, n, &accept).ok_or_else(|| {
        Error::Unsupported(format!(
            "no real Majorana representation for signature ({}, {})",
            signature.p(),
            signature.q()
        ))
    })?;
    let gammas = found
        .iter()
        .map(|s| {
            let real = s
                .iter()
                .skip(1)
                .fold(real_block(s[0]), |acc, &k| acc.kron(&real_block(k)));
            CMat::real(real).times_i()
        })
        .collect();
    GammaRep::new(signature.clone(), gammas)
}

fn pauli_strings(signature: &Signature) -> Result<GammaRep> {
    let n = signature.n();
    let factors = n.div_ceil(2).max(1);
    let found = search_strings(factors, n, &|_, _| true).ok_or_else(|| {
        Error::Unsupported(format!("no Pauli-string representation for n = {n}"))
    })?;
    let gammas = found
        .iter()
        .zip(signature.entries())
        .map(|(s, &e)| {
            let p = s.iter().skip(1).fold(pauli(s[0]), |acc, &k| acc.kron(&pauli(k)));
            // P² = 1, so η = −1 takes P and η = +1 takes iP
            if e == -1 {
                p
            } else {
                p.times_i()
            }
        })
        .collect();
    GammaRep::new(signature.clone(), gammas)
}

/// Builds and validates a representation of `Cℓ(V, η)`.
pub fn gamma_rep(signature: &Signature, style: GammaStyle) -> Result<GammaRep> {
    let n = signature.n();
    if n > 16 {
        return Err(Error::Unsupported(format!("dimension {n} exceeds the supported range")));
    }
    let style = match style {
        GammaStyle::Auto if n == 4 && signature.is_time_first_lorentzian() => GammaStyle::Dirac,
        GammaStyle::Auto if n == 11 && signature.is_time_first_lorentzian() => GammaStyle::Majorana,
        GammaStyle::Auto => GammaStyle::PauliString,
        s => s,
    };
    let rep = match style {
        GammaStyle::Dirac => {
            if n != 4 || !signature.is_time_first_lorentzian() {
                return Err(Error::Unsupported(
                    "Dirac matrices need the time-first signature (−1, 1, 1, 1)".into(),
                ));
            }
            dirac_4d(signature)?
        }
        GammaStyle::Majorana => {
            if n.is_multiple_of(2) {
                return Err(Error::Unsupported(
                    "the Majorana construction is implemented for odd dimensions".into(),
                ));
            }
            majorana(signature)?
        }
        GammaStyle::PauliString | GammaStyle::Auto => pauli_strings(signature)?,
    };
    if n == 11 && style == GammaStyle::Majorana {
        check_eleven_pattern(&rep)?;
    }
    Ok(rep)
}

fn check_eleven_pattern(rep: &GammaRep) -> Result<()> {
    for (i, g) in rep.gammas.iter().enumerate() {
        let t = g.transpose();
        let ok = if i == 0 { t == g.scale(&q(-1)) } else { t == *g };
        if !ok {
            return Err(Error::Construction(format!(
                "Γ_{i} violates the Γ_0-antisymmetric / Γ_i-symmetric pattern"
            )));
        }
    }
    Ok(())
}

/// Complex spinor `s = re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spinor {
    pub re: Vec<Q>,
    pub im: Vec<Q>,
}

impl Spinor {
    pub fn zero(dim: usize) -> Self {
        Spinor {
            re: vec![Q::zero(); dim],
            im: vec![Q::zero(); dim],
        }
    }

    pub fn real(re: Vec<Q>) -> Self {
        let im = vec![Q::zero(); re.len()];
        Spinor { re, im }
    }

    pub fn apply(m: &CMat, s: &Spinor) -> Spinor {
        let (rr, ii) = (m.re.mul_vec(&s.re), m.im.mul_vec(&s.im));
        let (ri, ir) = (m.re.mul_vec(&s.im), m.im.mul_vec(&s.re));
        Spinor {
            re: rr.iter().zip(&ii).map(|(a, b)| a - b).collect(),
            im: ri.iter().zip(&ir).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn add(&self, other: &Spinor) -> Spinor {
        Spinor {
            re: self.re.iter().zip(&other.re).map(|(a, b)| a + b).collect(),
            im: self.im.iter().zip(&other.im).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Spinor {
        Spinor {
            re: self.re.iter().map(|a| a * c).collect(),
            im: self.im.iter().map(|a| a * c).collect(),
        }
    }

    /// Real coordinates `(Re s, Im s)`.
    pub fn realified(&self) -> Vec<Q> {
        self.re.iter().chain(&self.im).cloned().collect()
    }
}

/// r-vector `Σ B^{j1…jr} e_{j1}∧…∧e_{jr}` on strictly increasing multi-indices.
pub type Multivector = [(Vec<usize>, Q)];

/// `(B·s)^α = Σ B^{j1…jr}(Γ_{j1}⋯Γ_{jr})^α_β s^β`.
pub fn clifford_act(rep: &GammaRep, b: &Multivector, s: &Spinor) -> Result<Spinor> {
    if s.re.len() != rep.dim_s() || s.im.len() != rep.dim_s() {
        return Err(Error::Dimension(format!(
            "spinor of length {} for a rep of dimension {}",
            s.re.len(),
            rep.dim_s()
        )));
    }
    let mut out = Spinor::zero(rep.dim_s());
    for (idx, coeff) in b {
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Dimension(format!(
                "multi-index {idx:?} is not strictly increasing"
            )));
        }
        if coeff.is_zero() {
            continue;
        }
        let m = rep.product(idx)?;
        out = out.add(&Spinor::apply(&m, s).scale(coeff));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Re,
    Im,
}

/// `β(s, s′) = sᵀ B s′` on the real spinor space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinorBilinear {
    matrix: Mat,
    symmetry: Symmetry,
}

impl SpinorBilinear {
    pub fn new(matrix: Mat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("bilinear form matrix must be square".into()));
        }
        let symmetry = if matrix.is_symmetric() {
            Symmetry::Symmetric
        } else if matrix.is_skew() {
            Symmetry::Skew
        } else {
            return Err(Error::Symmetry(
                "bilinear form is neither symmetric nor skew".into(),
            ));
        };
        Ok(SpinorBilinear { matrix, symmetry })
    }

    /// Real or imaginary part of the complex-bilinear form `sᵀ C s′` on
    /// `(Re s, Im s)` coordinates.
    pub fn from_complex(c: &CMat, component: Component) -> Result<Self> {
        let (cr, ci) = (&c.re, &c.im);
        let blocks = match component {
            Component::Re => [cr.clone(), ci.neg(), ci.neg(), cr.neg()],
            Component::Im => [ci.clone(), cr.clone(), cr.clone(), ci.neg()],
        };
        let d = c.rows();
        let mut m = Mat::zeros(2 * d, 2 * d);
        for (k, blk) in blocks.iter().enumerate() {
            let (ro, co) = ((k / 2) * d, (k % 2) * d);
            for (r, col, v) in blk.entries() {
                m[(ro + r, co + col)] = v.clone();
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn scale(&self, c: &Q) -> Self {
        SpinorBilinear {
            matrix: self.matrix.scale(c),
            symmetry: self.symmetry,
        }
    }

    pub fn eval(&self, s: &[Q], t: &[Q]) -> Q {
        let bt = self.matrix.mul_vec(t);
        s.iter()
            .zip(&bt)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.matrix.rank() < self.dim()
    }
}

/// The form `Im(i sᵀΓ_0 s′)` on `S = ℂ^{dim}` (real dimension `2·dim`).
pub fn eleven_dim_beta(rep: &GammaRep) -> Result<SpinorBilinear> {
    SpinorBilinear::from_complex(&rep.gamma(0).times_i(), Component::Im)
}

/// Charge-conjugation form `Re(sᵀ Γ_0Γ_2 s′)` on Dirac spinors of the 4D rep.
pub fn charge_conjugation_beta(rep: &GammaRep) -> Result<SpinorBilinear> {
    if rep.n() < 3 {
        return Err(Error::Dimension("charge conjugation needs Γ_0 and Γ_2".into()));
    }
    SpinorBilinear::from_complex(&rep.product(&[0, 2])?, Component::Re)
}
