#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use supergeom::cjs11d::{permutation_sign, DOrthForm};
use supergeom::rational::{q, qr};
use supergeom::superdomain::{parse_function, Chart, SuperForm, SuperFunction, SuperVectorField};
use supergeom::{Blade, LambdaElement, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(r: &mut impl Rng) -> Q {
    let num = r.gen_range(-5i64..=5);
    let den = r.gen_range(1i64..=3);
    if num == 0 {
        q(1)
    } else {
        qr(num, den)
    }
}

pub fn lambda(r: &mut impl Rng, generators: u32, max_terms: usize) -> LambdaElement {
    let count = r.gen_range(0..=max_terms);
    let terms: Vec<(Blade, Q)> = (0..count)
        .map(|_| (Blade(r.gen_range(0..1u64 << generators)), rational(r)))
        .collect();
    LambdaElement::from_terms(generators, terms).unwrap()
}

/// Homogeneous element of the requested parity.
pub fn lambda_homogeneous(r: &mut impl Rng, generators: u32, max_terms: usize, odd: bool) -> LambdaElement {
    let l = lambda(r, generators, max_terms);
    if odd {
        l.odd_part()
    } else {
        l.even_part()
    }
}

/// Invertible element: nonzero body plus a random soul.
pub fn lambda_invertible(r: &mut impl Rng, generators: u32) -> LambdaElement {
    let soul = lambda(r, generators, 5);
    let body = LambdaElement::scalar(generators, rational(r) - soul.real_part());
    &soul + &body
}

fn monomial_text(r: &mut impl Rng, chart: &Chart, max_x: u32) -> String {
    let mut factors = vec![format!("{}", rational(r))];
    for g in 1..=chart.generators {
        if r.gen_bool(0.3) {
            factors.push(format!("e{g}"));
        }
    }
    let mut budget = max_x;
    for i in 1..=chart.n {
        if budget > 0 && r.gen_bool(0.35) {
            let e = r.gen_range(1..=budget);
            budget -= e;
            factors.push(if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") });
        }
    }
    for a in 1..=chart.m {
        if r.gen_bool(0.35) {
            factors.push(format!("th{a}"));
        }
    }
    factors.join("*")
}

pub fn function(r: &mut impl Rng, chart: &Chart, max_terms: usize, max_x: u32) -> SuperFunction {
    let count = r.gen_range(1..=max_terms);
    let text: Vec<String> = (0..count).map(|_| monomial_text(r, chart, max_x)).collect();
    parse_function(chart, &text.join(" + ")).unwrap()
}

pub fn function_of_parity(r: &mut impl Rng, chart: &Chart, max_terms: usize, max_x: u32, odd: bool) -> SuperFunction {
    let f = function(r, chart, max_terms, max_x);
    if odd {
        f.odd_part()
    } else {
        f.even_part()
    }
}

/// Homogeneous vector field: component `B` has parity `odd + |B|`.
pub fn vector(r: &mut impl Rng, chart: &Chart, odd: bool, max_x: u32) -> SuperVectorField {
    let comps = (0..chart.dim())
        .map(|b| {
            if r.gen_bool(0.4) {
                SuperFunction::zero(chart)
            } else {
                function_of_parity(r, chart, 2, max_x, odd ^ chart.is_odd(b))
            }
        })
        .collect();
    SuperVectorField::new(chart, comps).unwrap()
}

/// Form of a single degree; odd directions may repeat.
pub fn form(r: &mut impl Rng, chart: &Chart, degree: usize, max_terms: usize, max_x: u32) -> SuperForm {
    let mut out = SuperForm::zero(chart);
    for _ in 0..r.gen_range(1..=max_terms) {
        let idx: Vec<usize> = (0..degree).map(|_| r.gen_range(0..chart.dim())).collect();
        let f = function(r, chart, 2, max_x);
        out = out.checked_add(&SuperForm::monomial(&f, &idx).unwrap()).unwrap();
    }
    out
}

pub fn dorth_form(r: &mut impl Rng, chart: &Chart, degree: usize, max_terms: usize) -> DOrthForm {
    let comps: Vec<(Vec<usize>, SuperFunction)> = (0..r.gen_range(1..=max_terms))
        .map(|_| {
            let mut idx: Vec<usize> = Vec::new();
            while idx.len() < degree {
                let i = r.gen_range(0..chart.n);
                if !idx.contains(&i) {
                    idx.push(i);
                }
            }
            idx.sort_unstable();
            (idx, function(r, chart, 2, 1))
        })
        .collect();
    let mut out = DOrthForm::zero(chart, degree);
    for c in comps {
        out = out.checked_add(&DOrthForm::from_components(chart, degree, [c]).unwrap()).unwrap();
    }
    out
}

/// Components of `w` in the frame `E′_j = Σ_i a[j][i] E_i`.
pub fn change_frame(w: &DOrthForm, a: &[Vec<(usize, Q)>]) -> DOrthForm {
    let chart = *w.chart();
    let r = w.degree();
    let mut out = DOrthForm::zero(&chart, r);
    for j in supergeom::cjs11d::combinations(chart.n, r) {
        let mut acc = SuperFunction::zero(&chart);
        let mut choice = vec![0usize; r];
        loop {
            let picks: Vec<&(usize, Q)> = (0..r).map(|k| &a[j[k]][choice[k]]).collect();
            let is: Vec<usize> = picks.iter().map(|p| p.0).collect();
            if let Some(sign) = permutation_sign(&is) {
                let mut sorted = is.clone();
                sorted.sort_unstable();
                let key: Vec<u16> = sorted.iter().map(|&i| i as u16).collect();
                let mut c = q(sign as i64);
                for p in &picks {
                    c *= &p.1;
                }
                acc.add_scaled(&w.component(&key), &c);
            }
            let mut k = 0;
            loop {
                if k == r {
                    break;
                }
                choice[k] += 1;
                if choice[k] < a[j[k]].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
        if !acc.is_zero() {
            out = out.checked_add(&DOrthForm::from_components(&chart, r, [(j, acc)]).unwrap()).unwrap();
        }
    }
    out
}

/// `E′_0 = 5/4 E_0 + 3/4 E_1`, `E′_1 = 3/4 E_0 + 5/4 E_1`.
pub fn boost(n: usize) -> Vec<Vec<(usize, Q)>> {
    let mut a: Vec<Vec<(usize, Q)>> = (0..n).map(|i| vec![(i, q(1))]).collect();
    a[0] = vec![(0, qr(5, 4)), (1, qr(3, 4))];
    a[1] = vec![(0, qr(3, 4)), (1, qr(5, 4))];
    a
}

/// `E′_{n−2} = E_{n−1}`, `E′_{n−1} = −E_{n−2}`: a rotation by a right angle.
pub fn quarter_turn(n: usize) -> Vec<Vec<(usize, Q)>> {
    let mut a: Vec<Vec<(usize, Q)>> = (0..n).map(|i| vec![(i, q(1))]).collect();
    a[n - 2] = vec![(n - 1, q(1))];
    a[n - 1] = vec![(n - 2, q(-1))];
    a
}

pub fn lorentzian_eps(n: usize) -> Vec<Q> {
    (0..n).map(|i| q(if i == 0 { -1 } else { 1 })).collect()
}
