//! Ring axioms, endomorphism laws and embedding properties on random inputs.

use proptest::prelude::*;
use skewalg::embed::{embed_mu, embed_mu_n, embed_theta, fixed_part, anti_part, GrassmannTower};
use skewalg::identities::{standard_poly_eval, FactorialBudget};
use skewalg::matrix::{flatten_blocks, trace, unflatten_blocks};
use skewalg::random::trial_rng;
use skewalg::{rational, Element, Endomorphism, Ring};

fn rings() -> Vec<Ring> {
    let q2 = Ring::rotation(2).unwrap();
    let q3 = Ring::rotation(3).unwrap();
    let e2 = Ring::grassmann(2).unwrap();
    vec![
        Ring::rationals(),
        q3.clone(),
        Ring::gaussian(),
        Ring::grassmann(3).unwrap(),
        Ring::matrix(&Ring::rationals(), 3).unwrap(),
        Ring::trunc_skew_natural(&q3, 3).unwrap(),
        Ring::trunc_skew_natural(&e2, 2).unwrap(),
        Ring::matrix(&Ring::trunc_skew_natural(&q2, 2).unwrap(), 2).unwrap(),
        Ring::trunc_poly(&Ring::rationals(), 2, 2).unwrap(),
    ]
}

fn draw(ring: &Ring, seed: u64, count: usize) -> Vec<Element> {
    let mut rng = trial_rng(seed, 0);
    (0..count).map(|_| ring.random_element(&mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), which in 0usize..9) {
        let ring = &rings()[which];
        let xs = draw(ring, seed, 3);
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(c).unwrap()).unwrap(), a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap());
        prop_assert_eq!(a.add(b).unwrap().mul(c).unwrap(), a.mul(c).unwrap().add(&b.mul(c).unwrap()).unwrap());
        prop_assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
        prop_assert_eq!(a.mul(&ring.one()).unwrap(), a.clone());
        prop_assert_eq!(ring.one().mul(a).unwrap(), a.clone());
        prop_assert!(a.sub(a).unwrap().is_zero());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        if ring.is_commutative() {
            prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        }
        let q = rational(3, 7);
        prop_assert_eq!(a.scale(&q).mul(b).unwrap(), a.mul(b).unwrap().scale(&q));
        prop_assert_eq!(ring.from_coords(a.coords()).unwrap(), a.clone());
    }

    #[test]
    fn endomorphism_laws(seed in any::<u64>(), which in 0usize..9) {
        let ring = &rings()[which];
        let sigma = Endomorphism::natural(ring);
        let xs = draw(ring, seed, 2);
        let (a, b) = (&xs[0], &xs[1]);
        prop_assert_eq!(sigma.apply(&a.add(b).unwrap()).unwrap(), sigma.apply(a).unwrap().add(&sigma.apply(b).unwrap()).unwrap());
        prop_assert_eq!(sigma.apply(&a.mul(b).unwrap()).unwrap(), sigma.apply(a).unwrap().mul(&sigma.apply(b).unwrap()).unwrap());
        prop_assert_eq!(sigma.apply(&ring.one()).unwrap(), ring.one());
        prop_assert_eq!(sigma.apply_pow(a, sigma.order()).unwrap(), a.clone());
        let fixed = fixed_part(&sigma, a).unwrap();
        prop_assert!(sigma.fixes(&fixed).unwrap());
        if sigma.order() == 2 {
            let anti = anti_part(&sigma, a).unwrap();
            prop_assert_eq!(sigma.apply(&anti).unwrap(), anti.neg());
            prop_assert_eq!(fixed.add(&anti).unwrap(), a.clone());
        }
    }

    #[test]
    fn skew_relation_and_unit_laws(seed in any::<u64>(), t in 2usize..5) {
        let base = Ring::rotation(t).unwrap();
        let ring = Ring::trunc_skew_natural(&base, t).unwrap();
        let sigma = Endomorphism::natural(&base);
        let r = draw(&base, seed, 1).remove(0);
        let w = ring.var_power(1).unwrap();
        let lhs = w.mul(&ring.constant(&r).unwrap()).unwrap();
        let rhs = ring.constant(&sigma.apply(&r).unwrap()).unwrap().mul(&w).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(ring.var_power(t).unwrap().is_zero());
        prop_assert!(w.pow(t).is_zero());
    }

    #[test]
    fn identity_twist_is_convolution(seed in any::<u64>()) {
        let ring = Ring::trunc_comm(&Ring::rationals(), 4, "z").unwrap();
        let xs = draw(&ring, seed, 2);
        let a: Vec<_> = xs[0].coeffs().unwrap().iter().map(|c| c.coords()[0].clone()).collect();
        let b: Vec<_> = xs[1].coeffs().unwrap().iter().map(|c| c.coords()[0].clone()).collect();
        let product = xs[0].mul(&xs[1]).unwrap();
        for m in 0..4 {
            let expected = (0..=m).map(|i| &a[i] * &b[m - i]).fold(rational(0, 1), |s, x| s + x);
            prop_assert_eq!(product.coeff(m).unwrap().coords()[0].clone(), expected);
        }
    }

    #[test]
    fn mu_n_respects_block_traces(seed in any::<u64>()) {
        let skew = Ring::trunc_skew_natural(&Ring::rotation(3).unwrap(), 3).unwrap();
        let ring = Ring::matrix(&skew, 2).unwrap();
        let xs = draw(&ring, seed, 2);
        let (a, b) = (&xs[0], &xs[1]);
        let image = embed_mu_n(a).unwrap();
        prop_assert_eq!(embed_mu_n(&a.mul(b).unwrap()).unwrap(), image.mul(&embed_mu_n(b).unwrap()).unwrap());
        let blocks = trace(&embed_mu(&a.entry(0, 0).unwrap()).unwrap()).unwrap()
            .add(&trace(&embed_mu(&a.entry(1, 1).unwrap()).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(trace(&image).unwrap(), blocks);
        prop_assert_eq!(flatten_blocks(&unflatten_blocks(&image, 3).unwrap()).unwrap(), image);
    }

    #[test]
    fn standard_polynomial_alternating_and_multilinear(seed in any::<u64>(), m in 2usize..6) {
        let ring = Ring::matrix(&Ring::rationals(), 2).unwrap();
        let budget = FactorialBudget::default();
        let mut xs = draw(&ring, seed, m + 1);
        let extra = xs.pop().unwrap();
        let mut repeated = xs.clone();
        repeated[m - 1] = repeated[0].clone();
        prop_assert!(standard_poly_eval(&repeated, budget).unwrap().is_zero());
        let base = standard_poly_eval(&xs, budget).unwrap();
        let mut swapped = xs.clone();
        swapped.swap(0, 1);
        prop_assert_eq!(standard_poly_eval(&swapped, budget).unwrap(), base.neg());
        let mut summed = xs.clone();
        summed[0] = summed[0].add(&extra).unwrap();
        let mut other = xs.clone();
        other[0] = extra;
        prop_assert_eq!(
            standard_poly_eval(&summed, budget).unwrap(),
            base.add(&standard_poly_eval(&other, budget).unwrap()).unwrap()
        );
    }

    #[test]
    fn theta_is_multiplicative_for_any_rotation(seed in any::<u64>(), t in 2usize..5) {
        let ring = Ring::rotation(t).unwrap();
        let sigma = Endomorphism::natural(&ring);
        let xs = draw(&ring, seed, 2);
        let lhs = embed_theta(&sigma, &xs[0].mul(&xs[1]).unwrap()).unwrap();
        let rhs = embed_theta(&sigma, &xs[0]).unwrap().mul(&embed_theta(&sigma, &xs[1]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn tower_routes_agree() {
    for m in 1..=4 {
        let tower = GrassmannTower::build(m).unwrap();
        for trial in 0..10 {
            let g = tower.algebra().random_element(&mut trial_rng(m as u64, trial));
            assert_eq!(tower.apply_recursive(&g).unwrap(), tower.apply(&g).unwrap(), "m = {m}");
        }
    }
}

#[test]
fn tower_limit_enforced() {
    assert!(GrassmannTower::build(0).is_err());
    assert!(GrassmannTower::build(6).is_err());
    assert!(GrassmannTower::build_with_limit(2, 1).is_err());
}
