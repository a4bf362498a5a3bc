mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use supergeom::cjs11d::{
    check_fierz, cjs_constraint_residual, field_equation_residuals, hodge_star, hodge_star_oracle, oracle_pairing,
    ric_perp, ric_perp_oracle, super_flux_z, z_oracle, CJSScenario, CliffordData, VolumeForm, EINSTEIN, MAXWELL_2,
    RARITA,
};
use supergeom::clifford::{eleven_dim_beta, gamma_rep, charge_conjugation_beta, GammaRep, GammaStyle, Signature};
use supergeom::linalg::{CMat, Mat};
use supergeom::rational::{q, qzero};
use supergeom::superdomain::{flow_jet, graded_bracket, lie_derivative, Chart, SuperForm, SuperFunction, TensorField};
use supergeom::supergravity::{
    build_flat_spacetime, check_gravity_field, check_strong_levi_civita, compute_levi, decompose_torsion, Connection,
    FrameField, FrameMetric,
};
use supergeom::superpoincare::{bracket_tensor_from_beta, build_super_poincare, jacobi_check, Sampling, SuperPoincareAlgebra};
use supergeom::{LambdaElement, Q};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(pass: bool, elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    let fast = elapsed <= limit;
    outcome(
        pass && fast,
        format!("{detail}; {:.2} s (limit {} s)", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

struct Models {
    rep4: GammaRep,
    alg4: SuperPoincareAlgebra,
    rep11: GammaRep,
    alg11: SuperPoincareAlgebra,
}

fn models() -> Models {
    let rep4 = gamma_rep(&Signature::lorentzian(4).unwrap(), GammaStyle::Auto).unwrap();
    let beta4 = charge_conjugation_beta(&rep4).unwrap();
    let alg4 = build_super_poincare(&rep4, &beta4, &bracket_tensor_from_beta(&beta4, &rep4).unwrap()).unwrap();
    let rep11 = gamma_rep(&Signature::lorentzian(11).unwrap(), GammaStyle::Auto).unwrap();
    let beta11 = eleven_dim_beta(&rep11).unwrap();
    let alg11 = build_super_poincare(&rep11, &beta11, &bracket_tensor_from_beta(&beta11, &rep11).unwrap()).unwrap();
    Models {
        rep4,
        alg4,
        rep11,
        alg11,
    }
}

fn lambda_suite() -> Outcome {
    const N: u32 = 8;
    let start = Instant::now();
    let mut r = common::rng(1);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let (pa, pb) = (r.gen_bool(0.5), r.gen_bool(0.5));
        let a = common::lambda_homogeneous(&mut r, N, 6, pa);
        let b = common::lambda_homogeneous(&mut r, N, 6, pb);
        let c = common::lambda(&mut r, N, 6);
        let sign = if pa && pb { q(-1) } else { q(1) };
        if &a * &b != (&b * &a).scale(&sign) {
            bad.push(format!("commutativity #{i}"));
        }
        if &(&a * &b) * &c != &a * &(&b * &c) {
            bad.push(format!("associativity #{i}"));
        }
        let ac = &a + &c;
        if (&ac * &b).conjugate() != &b.conjugate() * &ac.conjugate() {
            bad.push(format!("conjugation #{i}"));
        }
        let u = common::lambda_invertible(&mut r, N);
        let inv = u.invert().unwrap();
        if &u * &inv != LambdaElement::one(N) || &inv * &u != LambdaElement::one(N) {
            bad.push(format!("invert #{i}"));
        }
    }
    within(
        bad.is_empty(),
        start.elapsed(),
        Duration::from_secs(5),
        format!("1000 samples over N = 8, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn anticommutator_pairs(rep: &GammaRep) -> (usize, usize) {
    let n = rep.n();
    let id = CMat::identity(rep.dim_s());
    let mut good = 0;
    for i in 0..n {
        for j in 0..n {
            let (gi, gj) = (rep.gamma(i), rep.gamma(j));
            let lhs = gi.mul(gj).add(&gj.mul(gi));
            let eta = if i == j { rep.signature().eta_q(i) } else { qzero() };
            if lhs == id.scale(&(q(-2) * eta)) {
                good += 1;
            }
        }
    }
    (good, n * n)
}

fn gamma_suite(m: &Models) -> Outcome {
    let start = Instant::now();
    let sigma = [
        CMat::real(Mat::from_i64(2, 2, &[0, 1, 1, 0])),
        CMat {
            re: Mat::zeros(2, 2),
            im: Mat::from_i64(2, 2, &[0, -1, 1, 0]),
        },
        CMat::real(Mat::from_i64(2, 2, &[1, 0, 0, -1])),
    ];
    let mut example = vec![CMat::real(Mat::diagonal(&[q(1), q(1), q(-1), q(-1)]))];
    for s in &sigma {
        let mut g = CMat::zeros(4, 4);
        for r in 0..2 {
            for c in 0..2 {
                g.re[(r, c + 2)] = s.re[(r, c)].clone();
                g.im[(r, c + 2)] = s.im[(r, c)].clone();
                g.re[(r + 2, c)] = -s.re[(r, c)].clone();
                g.im[(r + 2, c)] = -s.im[(r, c)].clone();
            }
        }
        example.push(g);
    }
    let matches = m.rep4.gammas() == example.as_slice();
    let (g4, t4) = anticommutator_pairs(&m.rep4);
    let (g11, t11) = anticommutator_pairs(&m.rep11);
    let pattern = m.rep11.gammas().iter().enumerate().all(|(i, g)| {
        let t = g.transpose();
        if i == 0 {
            t == g.scale(&q(-1))
        } else {
            t == *g
        }
    });
    within(
        matches && g4 == t4 && t4 == 16 && g11 == t11 && t11 == 121 && pattern,
        start.elapsed(),
        Duration::from_secs(10),
        format!(
            "4D rep equals the Dirac example: {matches}; 4D pairs {g4}/{t4}; 11D pairs {g11}/{t11}; Γ0 skew and Γi symmetric: {pattern}"
        ),
    )
}

fn jacobi_suite(m: &Models) -> Outcome {
    let start = Instant::now();
    let all4 = jacobi_check(&m.alg4, Sampling::All);
    let t4 = start.elapsed();
    let sampled = jacobi_check(&m.alg11, Sampling::Random { count: 10_000, seed: 11 });
    let t = Instant::now();
    let all11 = jacobi_check(&m.alg11, Sampling::All);
    let t11 = t.elapsed();
    let zero = |r: &supergeom::superpoincare::JacobiResult| r.max_residual == qzero();
    outcome(
        zero(&all4) && zero(&sampled) && zero(&all11) && t4 <= Duration::from_secs(30),
        format!(
            "4D: {} triples, max residual {} in {:.2} s (limit 30 s); 11D sampled: {} triples, max {}; 11D full: {} triples, max {} in {:.1} s",
            all4.triples,
            all4.max_residual,
            t4.as_secs_f64(),
            sampled.triples,
            sampled.max_residual,
            all11.triples,
            all11.max_residual,
            t11.as_secs_f64()
        ),
    )
}

fn flat_structure(alg: &SuperPoincareAlgebra, chart: &Chart) -> (bool, String) {
    let n = alg.n();
    let flat = build_flat_spacetime(alg, chart).unwrap();
    let levi = compute_levi(&flat.frame, &flat.pair).unwrap();
    let levi_ok = levi.constants().as_deref() == Some(alg.levi());
    let dec = decompose_torsion(&flat.connection.torsion(&flat.frame).unwrap(), n);
    let mut h_ok = true;
    let mut entries = 0;
    for (i, li) in alg.levi().iter().enumerate() {
        for (a, b, v) in li.entries() {
            entries += 1;
            h_ok &= dec.h_d_perp.get(&(i, n + a, n + b)).and_then(|f| f.as_constant()) == Some(-v.clone());
        }
    }
    h_ok &= dec.h_d_perp.len() == entries;
    let zero_parts = dec.parts().iter().filter(|(name, p)| *name != "H^{L2 D;D_perp}" && p.is_empty()).count();
    let gravity = check_gravity_field(alg, &flat.frame, &flat.metric, &flat.connection).unwrap();
    let strong = check_strong_levi_civita(&dec, n);
    (
        levi_ok && h_ok && zero_parts == 5 && gravity.pass && strong.pass,
        format!(
            "{n}D: Levi = L {levi_ok}, H = -L {h_ok}, zero parts {zero_parts}/5, gravity-field {}, strong-LC {}",
            gravity.pass, strong.pass
        ),
    )
}

fn flat_suite(m: &Models) -> Outcome {
    let chart = |alg: &SuperPoincareAlgebra| Chart::new(alg.n(), alg.m(), 2, 1).unwrap();
    let (p4, d4) = flat_structure(&m.alg4, &chart(&m.alg4));
    let (p11, d11) = flat_structure(&m.alg11, &chart(&m.alg11));
    outcome(p4 && p11, format!("{d4}; {d11}"))
}

fn calculus_suite() -> Outcome {
    let start = Instant::now();
    let c = Chart::new(3, 2, 4, 6).unwrap();
    let mut r = common::rng(5);
    let (mut d2, mut d2_nontrivial, mut jac, mut jac_nontrivial, mut lie, mut lie_nontrivial) = (0, 0, 0, 0, 0, 0);
    for i in 0..200 {
        let w = if i % 2 == 0 {
            SuperForm::function(&common::function(&mut r, &c, 4, 3))
        } else {
            common::form(&mut r, &c, 1, 3, 3)
        };
        let dw = w.exterior_d().unwrap();
        d2_nontrivial += !dw.is_zero() as usize;
        d2 += dw.exterior_d().unwrap().is_zero() as usize;
    }
    for _ in 0..200 {
        let (px, py, pz) = (r.gen_bool(0.5), r.gen_bool(0.5), r.gen_bool(0.5));
        let x = common::vector(&mut r, &c, px, 2);
        let y = common::vector(&mut r, &c, py, 2);
        let z = common::vector(&mut r, &c, pz, 2);
        let lhs = graded_bracket(&x, &graded_bracket(&y, &z).unwrap()).unwrap();
        let sign = if px && py { q(-1) } else { q(1) };
        let rhs = graded_bracket(&graded_bracket(&x, &y).unwrap(), &z)
            .unwrap()
            .checked_add(&graded_bracket(&y, &graded_bracket(&x, &z).unwrap()).unwrap().scale(&sign))
            .unwrap();
        jac_nontrivial += !lhs.is_zero() as usize;
        jac += (lhs == rhs) as usize;
    }
    for i in 0..50 {
        let v = common::vector(&mut r, &c, false, 2);
        let jet = flow_jet(&v, 2).unwrap();
        let sample = match i % 3 {
            0 => TensorField::Function(common::function(&mut r, &c, 3, 2)),
            1 => TensorField::Vector(common::vector(&mut r, &c, i % 2 == 0, 2)),
            _ => TensorField::Form(common::form(&mut r, &c, 2, 2, 2)),
        };
        let l = lie_derivative(&v, &sample).unwrap();
        lie_nontrivial += !l.is_zero() as usize;
        lie += (jet.first_order(&sample).unwrap() == l) as usize;
    }
    within(
        d2 == 200 && jac == 200 && lie == 50,
        start.elapsed(),
        Duration::from_secs(60),
        format!(
            "d^2 = 0 {d2}/200 ({d2_nontrivial} with dw != 0); Jacobi {jac}/200 ({jac_nontrivial} nonzero); Lie = flow jet {lie}/50 ({lie_nontrivial} nonzero)"
        ),
    )
}

fn star(w: &supergeom::cjs11d::DOrthForm, eps: &[Q]) -> supergeom::cjs11d::DOrthForm {
    hodge_star(w, eps, Some(&VolumeForm::standard(w.chart()).unwrap())).unwrap()
}

fn hodge_suite() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for n in [4usize, 11] {
        let c = Chart::new(n, 2, 3, 2).unwrap();
        let eps = common::lorentzian_eps(n);
        let mut r = common::rng(n as u64);
        let (mut law, mut frames) = (0, 0);
        for i in 0..100 {
            let deg = i % (n + 1);
            let w = common::dorth_form(&mut r, &c, deg, 4);
            let sign = if (deg * (n - deg)) % 2 == 1 { q(1) } else { q(-1) };
            law += (star(&star(&w, &eps), &eps) == w.scale(&sign)) as usize;
            let deg = i % 5;
            let w = common::dorth_form(&mut r, &c, deg, 4);
            let a = common::boost(n);
            frames += (star(&common::change_frame(&w, &a), &eps) == common::change_frame(&star(&w, &eps), &a)) as usize;
        }
        pass &= law == 100 && frames == 100;
        details.push(format!("n = {n}: **-law {law}/100, boost invariance {frames}/100"));
    }
    outcome(pass, details.join("; "))
}

fn cjs_scenario(m: &Models) -> CJSScenario {
    CJSScenario::flat_vacuum(&m.alg11, &m.rep11, &Chart::new(11, 64, 2, 1).unwrap()).unwrap()
}

fn vacuum_suite(scn: &CJSScenario) -> Outcome {
    let start = Instant::now();
    let constraints = cjs_constraint_residual(scn).unwrap();
    let eqs = field_equation_residuals(scn).unwrap();
    let status = |name: &str| eqs.get(name).is_some_and(|c| c.pass);
    within(
        constraints.pass() && status(RARITA) && status(EINSTEIN) && status(MAXWELL_2),
        start.elapsed(),
        Duration::from_secs(300),
        format!(
            "constraints (1)-(2) {}; (ii') {}; (iii') {}; second Maxwell {}",
            constraints.pass(),
            status(RARITA),
            status(EINSTEIN),
            status(MAXWELL_2)
        ),
    )
}

fn fierz_suite(scn: &CJSScenario) -> Outcome {
    let (report, dz) = check_fierz(scn).unwrap();
    let contraction = report.notes.iter().find(|n| n.starts_with("offending contraction"));
    let reported = report.pass || (report.worst.is_some() && contraction.is_some());
    outcome(
        report.pass && reported,
        format!(
            "dZ has {} nonzero basis values; worst {}; {}",
            dz.len(),
            report.worst.as_deref().unwrap_or("none"),
            contraction.map_or("no contraction reported", |s| s.as_str())
        ),
    )
}

fn oracle_suite(m: &Models) -> Outcome {
    let mut r = common::rng(9);
    let mut hodge = 0;
    for i in 0..50 {
        let n = if i % 2 == 0 { 4 } else { 11 };
        let c = Chart::new(n, 2, 3, 2).unwrap();
        let eps = if i % 3 == 0 { vec![q(1); n] } else { common::lorentzian_eps(n) };
        let w = common::dorth_form(&mut r, &c, i % (n + 1), 4);
        let vol = VolumeForm::standard(&c).unwrap();
        hodge += (star(&w, &eps) == hodge_star_oracle(&w, &eps, Some(&vol)).unwrap()) as usize;
    }

    let c11 = Chart::new(11, 64, 2, 1).unwrap();
    let data = CliffordData::new(&m.alg11, &m.rep11).unwrap();
    let z = super_flux_z(&data, &c11).unwrap();
    let jb = oracle_pairing(&m.alg11, &m.rep11, &data);
    let (mut zok, mut znonzero) = (0, 0);
    for i in 0..50 {
        let mut slots = [false; 4];
        if i % 5 == 4 {
            slots.iter_mut().for_each(|s| *s = r.gen_bool(0.5));
        } else {
            let a = r.gen_range(0..4);
            let b = (a + r.gen_range(1..4)) % 4;
            slots[a] = true;
            slots[b] = true;
        }
        let args: Vec<Vec<Q>> = slots
            .iter()
            .map(|&odd| {
                let mut v = vec![qzero(); 75];
                for _ in 0..r.gen_range(2..8) {
                    let k = if odd { 11 + r.gen_range(0..64) } else { r.gen_range(0..11) };
                    v[k] += common::rational(&mut r);
                }
                v
            })
            .collect();
        let comps: Vec<Vec<SuperFunction>> = args
            .iter()
            .map(|a| a.iter().map(|x| SuperFunction::constant(&c11, x.clone())).collect())
            .collect();
        let fast = z.evaluate_components(&comps).unwrap();
        let slow = z_oracle(&data, &jb, &args).unwrap();
        znonzero += (slow != qzero()) as usize;
        zok += (fast == SuperFunction::constant(&c11, slow)) as usize;
    }

    let c = Chart::new(3, 2, 2, 2).unwrap();
    let frame = FrameField::coordinate(&c).unwrap();
    let mut eta = Mat::diagonal(&[q(-1), q(1), q(1), q(0), q(0)]);
    eta[(3, 4)] = q(1);
    eta[(4, 3)] = q(-1);
    let metric = FrameMetric::constant(&c, &eta).unwrap();
    let eps = vec![q(-1), q(1), q(1)];
    let (mut ric, mut ric_nonzero) = (0, 0);
    for _ in 0..50 {
        let mut conn = Connection::zero(&c);
        for _ in 0..10 {
            let (a, b, d) = (r.gen_range(0..5), r.gen_range(0..5), r.gen_range(0..5));
            let parity = c.is_odd(a) ^ c.is_odd(b) ^ c.is_odd(d);
            conn.set(d, a, b, common::function_of_parity(&mut r, &c, 2, 2, parity)).unwrap();
        }
        let curv = conn.curvature(&frame).unwrap();
        let fast = ric_perp(&curv, &metric, &eps).unwrap();
        ric_nonzero += !fast.is_empty() as usize;
        ric += (fast == ric_perp_oracle(&curv, &metric, &eps, 5).unwrap()) as usize;
    }
    outcome(
        hodge == 50 && zok == 50 && ric == 50,
        format!(
            "hodge_star {hodge}/50; super_flux_Z {zok}/50 ({znonzero} nonzero); ric_perp {ric}/50 ({ric_nonzero} nonzero)"
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let m = models();
    let scn = cjs_scenario(&m);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Lambda-algebra suite", Box::new(lambda_suite)),
        ("Gamma relations", Box::new(|| gamma_suite(&m))),
        ("super Poincare Jacobi", Box::new(|| jacobi_suite(&m))),
        ("flat-model structure", Box::new(|| flat_suite(&m))),
        ("calculus suite", Box::new(calculus_suite)),
        ("Hodge suite", Box::new(hodge_suite)),
        ("CJS flat vacuum", Box::new(|| vacuum_suite(&scn))),
        ("Fierz closure dZ = 0", Box::new(|| fierz_suite(&scn))),
        ("oracle equivalences", Box::new(|| oracle_suite(&m))),
    ];
    let mut failed = Vec::new();
    for (k, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {} {}: {}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, title, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    println!("acceptance: {} of 9 criteria pass ({:.1} s)", 9 - failed.len(), start.elapsed().as_secs_f64());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
