//! Structural properties of the truncated module and the operator search.

mod common;

use brieskorn::brieskorn::{
    inverse_dt_poly, mono_count, relation_space, to_sparse, Antiderivative, BrieskornTruncation,
    TruncationParams,
};
use brieskorn::local_algebra::{critical_spectrum, milnor_algebra, representative_root};
use brieskorn::picard_fuchs::{
    annihilator, eval_at, indicial, minimality_probe, verify_annihilation, Location, SearchBounds,
};
use brieskorn::poly::{jacobian2, MultiPoly, Scalar, UniPoly};
use common::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;

fn dense(p: &MultiPoly, d: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); mono_count(d)];
    for (i, c) in to_sparse(p) {
        v[i] = c;
    }
    v
}

fn degree(p: &MultiPoly) -> usize {
    p.total_degree().finite().unwrap_or(0) as usize
}

fn in_relations(f: &MultiPoly, p: &MultiPoly, e: usize) -> bool {
    if p.is_zero() {
        return true;
    }
    let d = degree(p);
    relation_space(f, d, e).unwrap().contains(&dense(p, d)).unwrap()
}

fn arb_f() -> impl Strategy<Value = MultiPoly> {
    (any::<u64>(), 2u32..=3).prop_map(|(seed, d)| random_isolated(&mut rng(seed), d).0)
}

fn arb_g() -> impl Strategy<Value = MultiPoly> {
    any::<u64>().prop_map(|seed| random_poly(&mut rng(seed), 3, 4))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn antiderivative_choices_differ_by_a_jacobian(f in arb_f(), g in arb_g()) {
        let along_x = inverse_dt_poly(&f, &g, Antiderivative::AlongX);
        let along_y = inverse_dt_poly(&f, &g, Antiderivative::AlongY);
        // H with H_y = ∫g dx and H_x = ∫g dy
        let h = g.integrate_index(0).integrate_index(1);
        let diff = &along_x - &along_y;
        prop_assert_eq!(&diff, &jacobian2(&f, &h).unwrap());
        prop_assert!(in_relations(&f, &diff, degree(&h)));
    }

    #[test]
    fn inverse_of_a_relation_is_a_relation(f in arb_f(), k in arb_g()) {
        let rel = jacobian2(&f, &k).unwrap();
        let image = inverse_dt_poly(&f, &rel, Antiderivative::AlongX);
        prop_assert!(in_relations(&f, &image, degree(&k) + degree(&f) + 2));
    }

    #[test]
    fn coker_dims_do_not_increase_in_e(f in arb_f(), c in -4i64..=4) {
        let t = BrieskornTruncation::new(&f, TruncationParams::default()).unwrap();
        let c = Scalar::from_int(c);
        let d = 2 * t.degree();
        let dims: Vec<usize> = (d..=d + 5).map(|e| t.coker_dim_at(&c, d, e)).collect();
        prop_assert!(dims.windows(2).all(|w| w[1] <= w[0]), "{:?}", dims);
    }

    #[test]
    fn annihilators_land_in_the_relation_span(f in arb_f(), w in 0usize..3) {
        let omega = [MultiPoly::var_in(vars(), "x").unwrap(), MultiPoly::var_in(vars(), "y").unwrap(),
                     MultiPoly::constant_in(vars(), Scalar::one())][w].clone();
        let bounds = SearchBounds { max_order: 2, max_coeff_degree: 3, cap_slack: 10 };
        if let Ok(a) = annihilator(&f, &omega, bounds) {
            // Σ_j (∂^{-1})^j q_j(f) ω, rebuilt here term by term
            let mut total = MultiPoly::zero_in(vars());
            for (j, q) in a.relation.iter().enumerate() {
                let mut g = &eval_at(q, &f) * &omega;
                for _ in 0..j {
                    g = inverse_dt_poly(&f, &g, Antiderivative::AlongX);
                }
                total = &total + &g;
            }
            prop_assert!(in_relations(&f, &total, degree(&total) + 10));
            let t = BrieskornTruncation::new(&f, TruncationParams::default()).unwrap();
            prop_assert!(verify_annihilation(&t, &omega, &a.operator));
            prop_assert!(minimality_probe(&f, &omega, &a, bounds));

            // exponents 0..k-1 at a regular point
            let k = a.operator.order().unwrap();
            let lead = a.operator.leading();
            let c = (5..).find(|&c| !lead.eval(&Scalar::from_int(c)).is_zero()).unwrap();
            let at = UniPoly::from_ints(&[-c, 1]);
            let data = indicial(&a.operator, &Location::Finite(at)).unwrap();
            let roots: Vec<(i64, usize)> = data
                .rational_roots
                .iter()
                .map(|(q, m)| (q.to_integer().to_i64().unwrap(), *m))
                .collect();
            let expected: Vec<(i64, usize)> = (0..k as i64).map(|r| (r, 1)).collect();
            prop_assert_eq!(roots, expected);
        }
    }
}

#[test]
fn generic_values_agree() {
    let mut r = rng(11);
    for _ in 0..6 {
        let (f, spectrum) = random_isolated(&mut r, 3);
        let t = BrieskornTruncation::new(&f, TruncationParams::default()).unwrap();
        let mut draws = Vec::new();
        while draws.len() < 2 {
            let c = Scalar::from_int(r.gen_range(-50..=50));
            if !spectrum.charpoly.eval(&c).is_zero() {
                draws.push(c);
            }
        }
        let r1 = t.coker_dim_t_minus_c(&draws[0]);
        let r2 = t.coker_dim_t_minus_c(&draws[1]);
        assert!(r1.is_stable() && r2.is_stable(), "{f}");
        assert_eq!(r1.value, r2.value, "{f}");
        assert_eq!(t.ker_dim_t_minus_c(&draws[0]).value, 0, "{f}");
        assert_eq!(t.ker_dim_t_minus_c(&draws[1]).value, 0, "{f}");
    }
}

#[test]
fn coker_exceeds_milnor_total_at_critical_values() {
    let mut r = rng(12);
    for _ in 0..6 {
        let (f, _) = random_isolated(&mut r, 3);
        let spectrum = critical_spectrum(&milnor_algebra(&f).unwrap());
        let t = BrieskornTruncation::new(&f, TruncationParams::default()).unwrap();
        for v in &spectrum.values {
            let c = representative_root(&v.minpoly).unwrap();
            let rc = t.coker_dim_t_minus_c(&c).value;
            assert!(rc >= v.mu_c, "{f} at root of {}: R' = {rc}, mu_c = {}", v.minpoly, v.mu_c);
        }
    }
}
