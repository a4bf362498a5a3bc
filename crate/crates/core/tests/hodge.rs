mod common;

use proptest::prelude::*;
use supergeom::cjs11d::{hodge_star, hodge_star_oracle, DOrthForm, VolumeForm};
use supergeom::rational::q;
use supergeom::superdomain::Chart;
use supergeom::Q;

fn chart(n: usize) -> Chart {
    Chart::new(n, 2, 3, 2).unwrap()
}

fn star(w: &DOrthForm, eps: &[Q]) -> DOrthForm {
    let vol = VolumeForm::standard(w.chart()).unwrap();
    hodge_star(w, eps, Some(&vol)).unwrap()
}

fn star_star_sign(n: usize, r: usize, eps: &[Q]) -> Q {
    let det_negative = eps.iter().filter(|e| **e < q(0)).count() % 2 == 1;
    q(if ((r * (n - r)) % 2 == 1) ^ det_negative { -1 } else { 1 })
}

fn check_law(n: usize, seed: u64, r: usize, lorentz: bool) -> Result<(), TestCaseError> {
    let c = chart(n);
    let mut rng = common::rng(seed);
    let w = common::dorth_form(&mut rng, &c, r, 4);
    let eps = if lorentz { common::lorentzian_eps(n) } else { vec![q(1); n] };
    prop_assert_eq!(star(&star(&w, &eps), &eps), w.scale(&star_star_sign(n, r, &eps)));
    let vol = VolumeForm::standard(&c).unwrap();
    prop_assert_eq!(star(&w, &eps), hodge_star_oracle(&w, &eps, Some(&vol)).unwrap());
    Ok(())
}

fn check_frames(n: usize, seed: u64, r: usize) -> Result<(), TestCaseError> {
    let c = chart(n);
    let mut rng = common::rng(seed);
    let w = common::dorth_form(&mut rng, &c, r, 4);
    let eps = common::lorentzian_eps(n);
    for a in [common::boost(n), common::quarter_turn(n)] {
        let lhs = star(&common::change_frame(&w, &a), &eps);
        let rhs = common::change_frame(&star(&w, &eps), &a);
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_star_law_n4(seed in any::<u64>(), r in 0usize..=4, lorentz in any::<bool>()) {
        check_law(4, seed, r, lorentz)?;
    }

    #[test]
    fn star_star_law_n11(seed in any::<u64>(), r in 0usize..=11, lorentz in any::<bool>()) {
        check_law(11, seed, r, lorentz)?;
    }

    #[test]
    fn frame_independence_n4(seed in any::<u64>(), r in 0usize..=4) {
        check_frames(4, seed, r)?;
    }

    #[test]
    fn frame_independence_n11(seed in any::<u64>(), r in 0usize..=4) {
        check_frames(11, seed, r)?;
    }
}

#[test]
fn boost_preserves_eta() {
    let a = common::boost(4);
    let eps = common::lorentzian_eps(4);
    for i in 0..4 {
        for j in 0..4 {
            let mut g = q(0);
            for (k, x) in &a[i] {
                for (l, y) in &a[j] {
                    if k == l {
                        g += x * y * &eps[*k];
                    }
                }
            }
            assert_eq!(g, if i == j { eps[i].clone() } else { q(0) });
        }
    }
}
