//! Eleven-dimensional CJS supergravity: D-orthogonal form calculus, the
//! super-flux `Z`, and residuals of the constraints and field equations.

mod curv;
mod dorth;
mod flux;

use std::collections::BTreeMap;
use std::fmt;

pub use curv::{einstein_residual, rarita_schwinger, ric_perp, ric_perp_oracle, scalar_perp, Components2};
pub use dorth::{
    combinations, epsilons_of, flat_vector, form_inner, hodge_star, hodge_star_oracle, norm_sq, permutation_sign,
    sharp_one_form, DOrthForm, VolumeForm,
};
pub use flux::{
    constraint2_residual, constraint2_rhs, constraint2_rhs_oracle, fierz_contraction, oracle_pairing, super_flux_z, z_oracle, z_value,
    CliffordData, SparseMat,
};

use crate::clifford::GammaRep;
use crate::error::{Error, Result};
use crate::rational::abs_max;
use crate::superdomain::{Chart, SuperForm, SuperFunction};
use crate::superpoincare::SuperPoincareAlgebra;
use crate::supergravity::{
    build_flat_spacetime, check_strong_levi_civita, decompose_torsion, frame_label, labels, CheckReport, Connection,
    DistributionPair, FrameField, FrameMetric,
};
use crate::Q;

/// The tuple `(D, g, ∇, F)` with its algebra, spinor representation and orientation.
#[derive(Debug, Clone)]
pub struct CJSScenario {
    pub alg: SuperPoincareAlgebra,
    pub rep: GammaRep,
    pub frame: FrameField,
    pub pair: DistributionPair,
    pub metric: FrameMetric,
    pub connection: Connection,
    pub flux: DOrthForm,
    pub volume: Option<VolumeForm>,
}

impl CJSScenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alg: SuperPoincareAlgebra,
        rep: GammaRep,
        frame: FrameField,
        metric: FrameMetric,
        connection: Connection,
        flux: DOrthForm,
        volume: Option<VolumeForm>,
    ) -> Result<Self> {
        let chart = *frame.chart();
        if chart.n != alg.n() || chart.m != alg.m() {
            return Err(Error::Scenario(format!(
                "chart ℝ^{}|{} does not carry an algebra with V = {}, S = {}",
                chart.n,
                chart.m,
                alg.n(),
                alg.m()
            )));
        }
        for other in [metric.chart(), connection.chart(), flux.chart()] {
            if *other != chart {
                return Err(Error::Scenario("scenario sections live on different charts".into()));
            }
        }
        if !flux.is_zero() && flux.degree() != 4 {
            return Err(Error::Scenario(format!("F has degree {}, not 4", flux.degree())));
        }
        if !flux.is_even() {
            return Err(Error::Scenario("F must be even".into()));
        }
        if metric.epsilons().is_none() {
            return Err(Error::Scenario("g(E_i, E_j) must be a constant diagonal ±1 matrix".into()));
        }
        Ok(CJSScenario {
            alg,
            rep,
            pair: DistributionPair::of(&frame),
            frame,
            metric,
            connection,
            flux,
            volume,
        })
    }

    /// Flat model with `Γ ≡ 0`, `F = 0` and the standard orientation.
    pub fn flat_vacuum(alg: &SuperPoincareAlgebra, rep: &GammaRep, chart: &Chart) -> Result<Self> {
        let flat = build_flat_spacetime(alg, chart)?;
        let volume = VolumeForm::standard(chart)?;
        Self::new(
            alg.clone(),
            rep.clone(),
            flat.frame,
            flat.metric,
            flat.connection,
            DOrthForm::zero(chart, 4),
            Some(volume),
        )
    }

    pub fn chart(&self) -> &Chart {
        self.frame.chart()
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn epsilons(&self) -> Vec<Q> {
        let n = self.n();
        self.metric.epsilons().map(|e| e[..n].to_vec()).unwrap_or_default()
    }

    pub fn clifford(&self) -> Result<CliffordData> {
        CliffordData::new(&self.alg, &self.rep)
    }

    /// `∂_{x^i}` in frame components (row `i` of the inverse frame matrix).
    pub fn lift(&self, i: usize) -> Vec<SuperFunction> {
        let w = self.frame.inverse();
        (0..self.frame.dim()).map(|c| w.get(i, c)).collect()
    }
}

/// Named residual checks; passes iff every residual is exactly zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResidualReport {
    pub checks: Vec<CheckReport>,
}

impl ResidualReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

pub const CONSTRAINT_1: &str = "constraint (1) strong Levi-Civita";
pub const CONSTRAINT_2: &str = "constraint (2) Clifford coupling";
pub const MAXWELL_1: &str = "(i') dF + dZ = 0";
pub const MAXWELL_2: &str = "(i') (d*F)^perp + F^F = 0";
pub const RARITA: &str = "(ii') R = 0";
pub const EINSTEIN: &str = "(iii') Einstein";
pub const MAXWELL_1_BODY: &str = "(i) dF + dZ on TM_o";
pub const MAXWELL_2_BODY: &str = "(i) (d*F)^perp + F^F on TM_o";
pub const RARITA_BODY: &str = "(ii) R on TM_o";
pub const EINSTEIN_BODY: &str = "(iii) Einstein on TM_o";
pub const FIERZ: &str = "dZ = 0";

fn c2_label(n: usize) -> impl Fn(&(usize, usize, usize)) -> String {
    move |&(c, a, i)| {
        format!(
            "C^{}({},{})",
            frame_label(n, c),
            frame_label(n, a),
            frame_label(n, i)
        )
    }
}

/// Constraints (1) and (2).
pub fn cjs_constraint_residual(scn: &CJSScenario) -> Result<ResidualReport> {
    let n = scn.n();
    let data = scn.clifford()?;
    let torsion = scn.connection.torsion(&scn.frame)?;
    let dec = decompose_torsion(&torsion, n);
    let mut c1 = check_strong_levi_civita(&dec, n);
    c1.name = CONSTRAINT_1.into();
    let res2 = constraint2_residual(&dec.c_d, &data, &scn.flux)?;
    let c2 = CheckReport::from_residuals(CONSTRAINT_2, &res2, c2_label(n));
    Ok(ResidualReport { checks: vec![c1, c2] })
}

/// Values `ω(E_{I})` on the sorted index lists of the form's terms.
fn basis_values(w: &SuperForm) -> Result<BTreeMap<Vec<usize>, SuperFunction>> {
    let mut out = BTreeMap::new();
    for (idx, _) in w.terms() {
        let dirs: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
        let v = w.evaluate_basis(&dirs)?;
        if !v.is_zero() {
            out.insert(dirs, v);
        }
    }
    Ok(out)
}

fn form_report(name: &str, symbol: &'static str, w: &SuperForm, n: usize) -> Result<CheckReport> {
    let vals = basis_values(w)?;
    Ok(CheckReport::from_residuals(name, &vals, move |k| format!("{symbol}({})", labels(n, k))))
}

/// `(d∗F)^{D⊥} + F∧F`.
fn second_maxwell(scn: &CJSScenario) -> Result<SuperForm> {
    let n = scn.n();
    let eps = scn.epsilons();
    let star = hodge_star(&scn.flux, &eps, scn.volume.as_ref())?;
    let dstar = scn
        .frame
        .frame_d(star.form())?
        .filter_indices(|idx| idx.iter().all(|&i| (i as usize) < n));
    dstar.checked_add(&scn.flux.form().wedge(scn.flux.form())?)
}

/// `F(∂_{i_1}, …, ∂_{i_k})|_{M_o}` on increasing coordinate tuples.
pub fn body_restriction(scn: &CJSScenario, w: &SuperForm, k: usize) -> Result<BTreeMap<Vec<usize>, SuperFunction>> {
    let n = scn.n();
    let lifts: Vec<Vec<SuperFunction>> = (0..n).map(|i| scn.lift(i)).collect();
    let support: Vec<bool> = (0..scn.frame.dim())
        .map(|c| lifts.iter().any(|l| !l[c].is_zero()))
        .collect();
    let w = w
        .restrict_degree(k)
        .filter_indices(|idx| idx.iter().all(|&i| support[i as usize]));
    let mut out = BTreeMap::new();
    if w.is_zero() {
        return Ok(out);
    }
    for tuple in combinations(n, k) {
        let args: Vec<Vec<SuperFunction>> = tuple.iter().map(|&i| lifts[i].clone()).collect();
        let v = w.evaluate_components(&args)?.eval_body();
        if !v.is_zero() {
            out.insert(tuple, v);
        }
    }
    Ok(out)
}

/// `flux = (F + Z)(∂_{i_1}, …, ∂_{i_4})|_{M_o}`.
pub fn flux_restrict(scn: &CJSScenario, f_total: &SuperForm) -> Result<BTreeMap<Vec<usize>, SuperFunction>> {
    body_restriction(scn, f_total, 4)
}

fn body_report(name: &str, symbol: &'static str, vals: &BTreeMap<Vec<usize>, SuperFunction>) -> CheckReport {
    CheckReport::from_residuals(name, vals, move |k| {
        let parts: Vec<String> = k.iter().map(|i| format!("d{i}")).collect();
        format!("{symbol}({})", parts.join(","))
    })
}

/// `Z` on the scenario chart.
pub fn scenario_z(scn: &CJSScenario) -> Result<SuperForm> {
    super_flux_z(&scn.clifford()?, scn.chart())
}

/// `dZ`; on failure the worst component is also expressed through [`fierz_contraction`].
pub fn check_fierz(scn: &CJSScenario) -> Result<(CheckReport, SuperForm)> {
    let n = scn.n();
    let data = scn.clifford()?;
    let z = super_flux_z(&data, scn.chart())?;
    let dz = scn.frame.frame_d(&z)?;
    let vals = basis_values(&dz)?;
    let mut report = CheckReport::from_residuals(FIERZ, &vals, |k| format!("dZ({})", labels(n, k)));
    let mut worst: Option<(&Vec<usize>, Q)> = None;
    for (k, v) in &vals {
        let size = abs_max(v.terms().map(|(_, c)| c));
        if worst.as_ref().is_none_or(|(_, w)| size > *w) {
            worst = Some((k, size));
        }
    }
    if let Some((k, _)) = worst {
        if k.len() == 5 && k[0] < n && k[1..].iter().all(|&a| a >= n) {
            let odd = [k[1] - n, k[2] - n, k[3] - n, k[4] - n];
            let kj = fierz_contraction(scn.alg.levi(), &data, k[0], odd);
            report = report.with_note(format!(
                "offending contraction: K_{}({},{},{},{}) = sum over S4 and k of L^k P_(k,{}) = {}; flat-model dZ = -K/8",
                k[0], odd[0], odd[1], odd[2], odd[3], k[0], kj
            ));
        }
    }
    Ok((report, dz))
}

/// Equations (i′)–(iii′) and their body restrictions (i)–(iii).
pub fn field_equation_residuals(scn: &CJSScenario) -> Result<ResidualReport> {
    let n = scn.n();
    let eps = scn.epsilons();
    let data = scn.clifford()?;

    let z = super_flux_z(&data, scn.chart())?;
    let f_total = scn.flux.form().checked_add(&z)?;
    let maxwell1 = scn.frame.frame_d(&f_total)?;
    let maxwell2 = second_maxwell(scn)?;

    let torsion = scn.connection.torsion(&scn.frame)?;
    let rs = rarita_schwinger(&torsion, &data)?;
    let curvature = scn.connection.curvature(&scn.frame)?;
    let ric = ric_perp(&curvature, &scn.metric, &eps)?;
    let ein = einstein_residual(&ric, &scn.flux, &eps)?;

    let rs_label = move |&(k, g): &(usize, usize)| format!("R(E{k})^S{g}");
    let ein_label = |&(a, b): &(usize, usize)| format!("Ein(E{a},E{b})");
    let mut checks = vec![
        form_report(MAXWELL_1, "d(F+Z)", &maxwell1, n)?,
        form_report(MAXWELL_2, "(d*F+F^F)", &maxwell2, n)?,
        CheckReport::from_residuals(RARITA, &rs, rs_label),
        CheckReport::from_residuals(EINSTEIN, &ein, ein_label),
    ];

    checks.push(body_report(MAXWELL_1_BODY, "d(F+Z)", &body_restriction(scn, &maxwell1, 5)?));
    checks.push(body_report(MAXWELL_2_BODY, "(d*F+F^F)", &body_restriction(scn, &maxwell2, 8.min(n))?));

    let lifts: Vec<Vec<SuperFunction>> = (0..n).map(|i| scn.lift(i)).collect();
    let chart = *scn.chart();
    let mut rs_body = Components2::new();
    for (i, l) in lifts.iter().enumerate() {
        for (&(k, g), r) in &rs {
            let v = l[k].checked_mul(r)?.eval_body();
            if !v.is_zero() {
                rs_body
                    .entry((i, g))
                    .or_insert_with(|| SuperFunction::zero(&chart))
                    .add_assign_ref(&v);
            }
        }
    }
    rs_body.retain(|_, v| !v.is_zero());
    checks.push(CheckReport::from_residuals(RARITA_BODY, &rs_body, |&(i, g)| {
        format!("R(d{i})^S{g}")
    }));

    let mut ein_body = Components2::new();
    for i in 0..n {
        for j in 0..n {
            let mut acc = SuperFunction::zero(&chart);
            for (&(k, l), e) in &ein {
                let (wi, wj) = (&lifts[i][k], &lifts[j][l]);
                if wi.is_zero() || wj.is_zero() {
                    continue;
                }
                acc.add_assign_ref(&wi.checked_mul(&wj.checked_mul(e)?)?);
            }
            let acc = acc.eval_body();
            if !acc.is_zero() {
                ein_body.insert((i, j), acc);
            }
        }
    }
    checks.push(CheckReport::from_residuals(EINSTEIN_BODY, &ein_body, |&(i, j)| {
        format!("Ein(d{i},d{j})")
    }));
    Ok(ResidualReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{eleven_dim_beta, gamma_rep, GammaStyle, Signature};
    use crate::superpoincare::{bracket_tensor_from_beta, build_super_poincare};

    fn eleven() -> (SuperPoincareAlgebra, GammaRep) {
        let rep = gamma_rep(&Signature::lorentzian(11).unwrap(), GammaStyle::Auto).unwrap();
        let beta = eleven_dim_beta(&rep).unwrap();
        let levi = bracket_tensor_from_beta(&beta, &rep).unwrap();
        (build_super_poincare(&rep, &beta, &levi).unwrap(), rep)
    }

    fn flat() -> &'static CJSScenario {
        static CELL: std::sync::OnceLock<CJSScenario> = std::sync::OnceLock::new();
        CELL.get_or_init(|| {
            let (alg, rep) = eleven();
            let chart = Chart::new(11, 64, 2, 1).unwrap();
            CJSScenario::flat_vacuum(&alg, &rep, &chart).unwrap()
        })
    }

    #[test]
    fn flat_vacuum_constraints_and_equations() {
        let scn = flat();
        let c = cjs_constraint_residual(scn).unwrap();
        assert!(c.pass(), "{c}");
        let eqs = field_equation_residuals(scn).unwrap();
        for name in [MAXWELL_2, RARITA, EINSTEIN, MAXWELL_1_BODY, MAXWELL_2_BODY, RARITA_BODY, EINSTEIN_BODY] {
            assert!(eqs.get(name).unwrap().pass, "{}", eqs);
        }
    }

    #[test]
    fn dz_is_the_fierz_contraction() {
        let scn = flat();
        let data = scn.clifford().unwrap();
        let (report, dz) = check_fierz(scn).unwrap();
        let minus_eighth = crate::rational::qr(-1, 8);
        for (idx, _) in dz.terms() {
            let d: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            assert_eq!(d.len(), 5);
            let k = fierz_contraction(scn.alg.levi(), &data, d[0], [d[1] - 11, d[2] - 11, d[3] - 11, d[4] - 11]);
            assert_eq!(dz.evaluate_basis(&d).unwrap().as_constant().unwrap(), &minus_eighth * k);
        }
        for s in 0..300usize {
            let j = s % 11;
            let odd = [(s * 7) % 64, (s * 13 + 5) % 64, (s * 29 + 1) % 64, (s * 31 + 40) % 64];
            let mut d = vec![j];
            d.extend(odd.iter().map(|a| a + 11));
            let k = fierz_contraction(scn.alg.levi(), &data, j, odd);
            let v = dz.evaluate_basis(&d).unwrap();
            assert_eq!(v.as_constant().unwrap_or_else(crate::rational::qzero), &minus_eighth * k);
        }
        if !report.pass {
            assert!(report.notes.iter().any(|n| n.starts_with("offending contraction")));
        }
    }
}
