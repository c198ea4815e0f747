use heegner_core::arith::{is_discriminant, square_divisors};
use heegner_core::heegner::*;
use heegner_core::model::rs_from_relation;
use heegner_core::quatalg::{HashimotoModel, SingularRelation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn reference_models() -> Vec<HashimotoModel> {
    vec![
        HashimotoModel::new(6, 1, 5, 2, 5).unwrap(),
        HashimotoModel::new(26, 1, 5, 2, 21).unwrap(),
        HashimotoModel::new(26, 1, 149, 19, 63).unwrap(),
    ]
}

fn s1_identity_holds(m: &HashimotoModel, r: &BigInt, s: &BigInt, n: &BigInt) -> bool {
    let s1 = s1_of(m, r, s).unwrap();
    let d = delta_raw(m, n, r, s);
    &s1 * &s1 - &m.d * (n * n * &m.p - r * r) == &m.p * d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn s1_identity_random(idx in 0usize..3, r in -500i64..500, half_s in -500i64..500, n in 1i64..50) {
        let m = &reference_models()[idx];
        prop_assert!(s1_identity_holds(m, &r.into(), &(2 * half_s).into(), &n.into()));
    }

    #[test]
    fn twin_symmetry(idx in 0usize..3, r in -200i64..200, half_s in -200i64..200) {
        let m = &reference_models()[idx];
        let (r, s, n) = (BigInt::from(r), BigInt::from(2 * half_s), BigInt::from(1));
        prop_assert_eq!(delta_raw(m, &n, &r, &s), delta_raw(m, &n, &-&r, &-&s));
        prop_assert_eq!(s1_of(m, &r, &s).unwrap(), -s1_of(m, &-&r, &-&s).unwrap());
    }

    #[test]
    fn cm_vector_orthogonal_random(idx in 0usize..3, r in -300i64..300, half_s in -300i64..300) {
        let m = &reference_models()[idx];
        let (r, s) = (BigInt::from(r), BigInt::from(2 * half_s));
        let v = cm_vector(m, &r, &s).unwrap().as_array();
        let gv = gram_apply(&extended_gram(m, &r, &s, &1.into()), &v);
        prop_assert!(gv[0].is_zero() && gv[1].is_zero());
    }

    #[test]
    fn relation_coordinates_agree(idx in 0usize..3, a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9, e in -9i64..9) {
        let m = &reference_models()[idx];
        let v = SingularRelation::new(a, b, c, d, e);
        let t = rs_from_relation(m, &v, &1.into());
        prop_assert!(s1_identity_holds(m, &t.r, &t.s, &1.into()));
    }
}

#[test]
fn enumerated_tuples_satisfy_everything() {
    for m in reference_models() {
        for n in [1i64, 5, 7] {
            let n = BigInt::from(n);
            let tuples = enumerate_rs(&m, &n).unwrap();
            assert!(!tuples.is_empty());
            for t in &tuples {
                let dv = t.delta.value();
                assert!(dv.is_negative() && is_discriminant(dv));
                assert!(s1_identity_holds(&m, &t.r, &t.s, &n));
                assert_eq!(
                    cm_gram_determinant(&m, &t.r, &t.s, &n).unwrap(),
                    cm_gram_determinant_expected(&m, &t.r, &t.s, &n)
                );
                let v = cm_vector(&m, &t.r, &t.s).unwrap().as_array();
                let gv = gram_apply(&extended_gram(&m, &t.r, &t.s, &n), &v);
                assert!(gv[0].is_zero() && gv[1].is_zero());
                // (v, v) = −4DΔ
                assert_eq!(&gv[2] * &v[2], humbert_norm_cm(&m.d, dv));
                // s₁ reduces into the orientation list
                let mu = t.s1.mod_floor(&(BigInt::from(2) * &m.d));
                assert!(orientations(&m, &t.delta, None).unwrap().contains(&mu));
                // twin present
                assert!(tuples
                    .iter()
                    .any(|u| u.r == -&t.r && u.s == -&t.s && u.delta == t.delta));
            }
            let mut sorted = tuples.clone();
            sorted
                .sort_by(|x, y| (x.delta.value(), &x.r, &x.s).cmp(&(y.delta.value(), &y.r, &y.s)));
            assert_eq!(sorted, tuples);
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    // Independent scan over a generous box; gcd(r, s, 1) = 1 is automatic.
    for m in reference_models() {
        let n = BigInt::from(1);
        let got: Vec<_> = enumerate_rs(&m, &n)
            .unwrap()
            .into_iter()
            .map(|t| (t.r, t.s))
            .collect();
        let mut want = Vec::new();
        let p: i64 = (&m.p).try_into().unwrap();
        let bd: i64 = (&m.b * &m.d).try_into().unwrap();
        let r_lim = (p as f64).sqrt() as i64 + 2;
        let s_lim = (4.0 * bd as f64).sqrt() as i64 + 2;
        for r in -r_lim..=r_lim {
            for s in -s_lim..=s_lim {
                let ok =
                    (p - r * r) >= 0 && (p - r * r) % 4 == 0 && s % 2 == 0 && 4 * bd - s * s >= 0;
                if !ok {
                    continue;
                }
                let d = delta_raw(&m, &n, &r.into(), &s.into());
                if d.is_negative() && is_discriminant(&d) {
                    want.push((BigInt::from(r), BigInt::from(s)));
                }
            }
        }
        let mut g = got.clone();
        g.sort();
        want.sort();
        assert_eq!(g, want, "{m}");
    }
}

#[test]
fn support_sizes_match_class_numbers() {
    let d = BigInt::from(26);
    for m in reference_models() {
        for t in enumerate_rs(&m, &1.into()).unwrap() {
            let e = expand_support(&t.delta, &d).unwrap();
            assert_eq!(e.entries.len(), 2 * e.class_number);
            assert_eq!(e.oriented_points, BigInt::from(4 * e.class_number));
        }
    }
}

#[test]
fn square_divisors_divide() {
    for m in reference_models() {
        for t in enumerate_rs(&m, &7.into()).unwrap() {
            for d in square_divisors(t.delta.value()).unwrap() {
                assert!((t.delta.value() % (&d * &d)).is_zero());
            }
        }
    }
}
