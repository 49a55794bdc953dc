use motdeg_core::fan::{self, json as fan_json, LogFan};
use motdeg_core::random::{self, rng, ModelShape};
use motdeg_core::ring::{json as ring_json, LPoly, RingElement};
use motdeg_core::series::{morse_reduce, Isotropy, QuadraticForm, TruncatedSeries};
use motdeg_core::snc::{json as snc_json, SncModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn lpoly() -> impl Strategy<Value = LPoly> {
    prop::collection::vec(-5i64..=5, 0..5).prop_map(|cs| LPoly::from_pairs(cs.into_iter().enumerate().map(|(k, c)| (k as u32, c))))
}

fn plain_covers(m: &SncModel) -> SncModel {
    let mut m = m.clone();
    for p in &mut m.pieces {
        p.cover_class = p.class_open.clone();
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lpoly_ring_laws(a in lpoly(), b in lpoly(), c in lpoly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let t = random::table();
        let mut r = rng(seed);
        let (a, b, c) = (random::element(&mut r, 4), random::element(&mut r, 4), random::element(&mut r, 4));
        let ab = t.mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &t.mul(&b, &a).unwrap());
        prop_assert_eq!(t.mul(&ab, &c).unwrap(), t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(t.mul(&a, &(&b + &c)).unwrap(), &ab + &t.mul(&a, &c).unwrap());
    }

    #[test]
    fn reduction_is_a_ring_map(seed in any::<u64>()) {
        let t = random::table();
        let mut r = rng(seed);
        let (a, b) = (random::element(&mut r, 4), random::element(&mut r, 4));
        let red = |x: &RingElement| t.reduce_mod_l(x).unwrap();
        prop_assert_eq!(red(&t.mul(&a, &b).unwrap()), &red(&a) * &red(&b));
        prop_assert_eq!(red(&(&a - &b)), &red(&a) - &red(&b));
        prop_assert!(red(&a.mul_poly(&LPoly::l())).is_zero());
    }

    #[test]
    fn element_json_round_trip(seed in any::<u64>()) {
        let a = random::element(&mut rng(seed), 5);
        prop_assert_eq!(ring_json::element_from_json(&ring_json::element_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn inclusion_exclusion_and_reduction(seed in any::<u64>()) {
        let m = random::snc_model(&mut rng(seed), ModelShape::default());
        let open = m.open_sum();
        prop_assert_eq!(m.inclusion_exclusion().unwrap(), open.clone());
        prop_assert!(m.symbols.congruent_mod_l(&m.mr().unwrap(), &open).unwrap());
    }

    #[test]
    fn model_json_round_trip(seed in any::<u64>()) {
        let m = random::snc_model(&mut rng(seed), ModelShape::default());
        prop_assert_eq!(snc_json::model_from_json(&snc_json::model_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn relabelling_preserves_invariants(seed in any::<u64>()) {
        let m = random::snc_model(&mut rng(seed), ModelShape::default());
        let n = m.relabel(&|c| format!("comp_{c}"), &|p| format!("{p}'"));
        prop_assert!(n.validate().is_valid());
        prop_assert_eq!(n.vol().unwrap(), m.vol().unwrap());
        prop_assert_eq!(n.mr().unwrap(), m.mr().unwrap());
    }

    #[test]
    fn log_volume_of_snc_fan(seed in any::<u64>()) {
        let m = random::snc_model(&mut rng(seed), ModelShape::default());
        let f = LogFan::from_snc(&m).unwrap();
        prop_assert_eq!(f.vol().unwrap(), m.vol().unwrap());
        prop_assert_eq!(fan_json::fan_from_json(&fan_json::fan_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn star_subdivision_invariance(seed in any::<u64>(), len in 1usize..=3) {
        let mut r = rng(seed);
        let m = random::snc_model(&mut r, ModelShape::default());
        let f = LogFan::from_snc(&m).unwrap();
        if let Some((plan, g)) = random::plan(&mut r, &f, len) {
            prop_assert_eq!(g.vol().unwrap(), f.vol().unwrap());
            prop_assert!(g.validate().is_ok());
            prop_assert!(fan::check_subdivision_invariance(&f, &plan).unwrap().invariant);
        }
    }

    #[test]
    fn horizontal_divisor_invariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random::snc_model(&mut r, ModelShape::default());
        let f = LogFan::from_snc(&m).unwrap();
        let i = r.gen_range(0..f.points.len());
        let meet = random::nonzero_element(&mut r, 2);
        prop_assume!(f.points[i].class != meet);
        let div = random::nonzero_element(&mut r, 2);
        let g = fan::add_horizontal_divisor(&f, i, &meet, &div).unwrap();
        prop_assert_eq!(g.vol().unwrap(), f.vol().unwrap());
    }

    #[test]
    fn product_volume_is_multiplicative(s1 in any::<u64>(), s2 in any::<u64>()) {
        let shape = ModelShape { max_components: 3, ..ModelShape::default() };
        let a = LogFan::from_snc(&plain_covers(&random::snc_model(&mut rng(s1), shape))).unwrap();
        let b = LogFan::from_snc(&plain_covers(&random::snc_model(&mut rng(s2), shape))).unwrap();
        let p = fan::product_fan(&a, &b).unwrap();
        let t = random::table();
        prop_assert_eq!(p.vol().unwrap(), t.mul(&a.vol().unwrap(), &b.vol().unwrap()).unwrap());
    }

    #[test]
    fn euler_lemma(seed in any::<u64>()) {
        for p in random::subdivision_problems(&mut rng(seed)) {
            let c = fan::check_euler(&p).unwrap();
            prop_assert!(c.covers);
            prop_assert_eq!(c.counts, c.expected);
        }
    }

    #[test]
    fn sqrt_and_inverse_of_units(seed in any::<u64>(), n in 1usize..=3, trunc in 1u32..=6) {
        let u = random::unit_series(&mut rng(seed), n, trunc);
        let s = u.sqrt_unit().unwrap();
        prop_assert_eq!(s.mul(&s).unwrap(), u.clone());
        prop_assert_eq!(u.inverse_unit().unwrap().mul(&u).unwrap(), TruncatedSeries::one(n, trunc));
    }

    #[test]
    fn taylor_shift_matches_substitution(s1 in any::<u64>(), s2 in any::<u64>(), n in 1usize..=3) {
        let trunc = 6;
        let f = random::unit_series(&mut rng(s1), n, trunc);
        let mut r = rng(s2);
        let h: Vec<TruncatedSeries> = (0..n)
            .map(|_| random::unit_series(&mut r, n, trunc).sub(&TruncatedSeries::one(n, trunc)).unwrap())
            .collect();
        let images: Vec<TruncatedSeries> = (0..n).map(|i| TruncatedSeries::var(n, trunc, i).add(&h[i]).unwrap()).collect();
        prop_assert_eq!(f.shift(&h).unwrap(), f.substitute(&images).unwrap());
    }

    #[test]
    fn coordinate_change_inverse(seed in any::<u64>(), k in 1usize..=3) {
        let (_, _, c) = random::morse_instance(&mut rng(seed), k, 1, 5);
        let inv = c.inverse().unwrap();
        prop_assert!(c.then(&inv).unwrap().is_identity());
        prop_assert!(inv.then(&c).unwrap().is_identity());
    }

    #[test]
    fn morse_round_trip(seed in any::<u64>(), k in 1usize..=3, params in 0usize..=1) {
        let (f, diag, _) = random::morse_instance(&mut rng(seed), k, params, 6);
        let out = morse_reduce(&f, k - 1, 6).unwrap();
        prop_assert_eq!(out.change.apply(&f).unwrap(), out.normal_form(k + params, 6));
        let (a, b) = (QuadraticForm::diagonal(&out.diagonal), QuadraticForm::diagonal(&diag));
        prop_assert_eq!(a.rank(), k);
        prop_assert_eq!(a.discriminant_class(), b.discriminant_class());
    }

    #[test]
    fn diagonalization(entries in prop::collection::vec(-4i64..=4, 10)) {
        // symmetric 4x4 from its upper triangle
        let mut m = vec![vec![BigRational::zero(); 4]; 4];
        let mut it = entries.into_iter();
        for i in 0..4 {
            for j in i..4 {
                let x = BigRational::from_integer(BigInt::from(it.next().unwrap()));
                m[i][j] = x.clone();
                m[j][i] = x;
            }
        }
        let q = QuadraticForm::new(m.clone()).unwrap();
        let (p, a) = q.diagonalize();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = BigRational::zero();
                for k in 0..4 {
                    for l in 0..4 {
                        s += &p[k][i] * &m[k][l] * &p[l][j];
                    }
                }
                prop_assert_eq!(s, if i == j { a[i].clone() } else { BigRational::zero() });
            }
        }
        if let Isotropy::Witness(x) = q.find_isotropic(2) {
            prop_assert!(x.iter().any(|&v| v != 0));
            prop_assert!(q.eval(&x).is_zero());
        }
    }
}
