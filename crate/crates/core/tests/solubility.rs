use proptest::prelude::*;
use quadfib::arith::SpfSieve;
use quadfib::solubility::{
    default_oracle_depth, find_rational_point, has_rational_point, hilbert_symbol, local_verdict,
    local_verdict_hilbert, normalize, padic_oracle, DiagonalQuadric, LocalVerdict, OracleVerdict, Place,
};

fn places_of(a: i64, b: i64, sieve: &SpfSieve) -> Vec<Place> {
    let mut v = vec![Place::Real, Place::Two];
    let mut ps = sieve.prime_divisors(a.unsigned_abs()).unwrap();
    ps.extend(sieve.prime_divisors(b.unsigned_abs()).unwrap());
    ps.sort_unstable();
    ps.dedup();
    v.extend(ps.into_iter().filter(|&p| p != 2).map(Place::Odd));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn hilbert_product_formula(a in -1000i64..=1000, b in -1000i64..=1000) {
        prop_assume!(a != 0 && b != 0);
        let s = SpfSieve::new(1000);
        let prod: i8 = places_of(a, b, &s).into_iter().map(|v| hilbert_symbol(a, b, v).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_symmetric_and_bilinear(a in -300i64..=300, b in -300i64..=300, c in -300i64..=300) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        for v in [Place::Real, Place::Two, Place::Odd(3), Place::Odd(5), Place::Odd(7)] {
            prop_assert_eq!(hilbert_symbol(a, b, v).unwrap(), hilbert_symbol(b, a, v).unwrap());
            prop_assert_eq!(
                hilbert_symbol(a, b * c, v).unwrap(),
                hilbert_symbol(a, b, v).unwrap() * hilbert_symbol(a, c, v).unwrap()
            );
        }
    }

    #[test]
    fn verdict_invariant_under_squares_and_permutation(
        a in prop::array::uniform4(prop_oneof![-30i64..=-1, 1i64..=30]),
        k in 1i64..=5,
    ) {
        let s = SpfSieve::new(10_000);
        let q = DiagonalQuadric::new(a).unwrap();
        let mut b = a;
        b[1] *= k * k;
        let qb = DiagonalQuadric::new([b[2], b[0], b[3], b[1]]).unwrap();
        prop_assert_eq!(has_rational_point(&q, &s).unwrap(), has_rational_point(&qb, &s).unwrap());
    }

    #[test]
    fn found_points_are_zeros(a in prop::array::uniform4(prop_oneof![-12i64..=-1, 1i64..=12])) {
        let q = DiagonalQuadric::new(a).unwrap();
        if let Some(x) = find_rational_point(&q, 12) {
            prop_assert_eq!(q.eval(x), Some(0));
            prop_assert!(x.iter().any(|&c| c != 0));
        }
    }
}

#[test]
fn formula_hilbert_and_oracle_agree_small_box() {
    let s = SpfSieve::new(10_000);
    let vals: Vec<i64> = (-7..=7).filter(|&x| x != 0).collect();
    let places = [Place::Real, Place::Two, Place::Odd(3), Place::Odd(5), Place::Odd(7)];
    for &a0 in &vals {
        for &a1 in &vals {
            for &a2 in &vals {
                for &a3 in &vals {
                    let q = DiagonalQuadric::new([a0, a1, a2, a3]).unwrap();
                    let n = normalize(&q, &s).unwrap();
                    let nq = n.quadric();
                    for v in places {
                        let f = local_verdict(&n, v).unwrap();
                        assert_eq!(f, local_verdict_hilbert(&nq, v).unwrap(), "{:?} at {v}", n.coeffs());
                        let o = padic_oracle(&nq, v, default_oracle_depth(v)).unwrap();
                        let want = if f == LocalVerdict::Soluble { OracleVerdict::Soluble } else { OracleVerdict::Insoluble };
                        assert_eq!(o, want, "{:?} at {v}", n.coeffs());
                    }
                }
            }
        }
    }
}

#[test]
fn search_agrees_with_hasse_minkowski() {
    // Small quadrics: any soluble one has a point of height well under the search bound.
    let s = SpfSieve::new(1000);
    let vals: Vec<i64> = (-5..=5).filter(|&x| x != 0).collect();
    let (mut sol, mut insol) = (0, 0);
    for &a0 in &vals {
        for &a1 in &vals {
            for &a2 in &vals {
                for &a3 in &vals {
                    let q = DiagonalQuadric::new([a0, a1, a2, a3]).unwrap();
                    let hasse = has_rational_point(&q, &s).unwrap();
                    let found = find_rational_point(&q, 25);
                    assert_eq!(hasse, found.is_some(), "{:?}", q.coeffs());
                    if hasse {
                        sol += 1;
                    } else {
                        insol += 1;
                    }
                }
            }
        }
    }
    assert!(sol > 0 && insol > 0);
}

#[test]
fn definite_and_two_adic_failures() {
    let s = SpfSieve::new(100);
    let q = DiagonalQuadric::new([1, 1, 1, 1]).unwrap();
    assert!(!has_rational_point(&q, &s).unwrap());
    let q = DiagonalQuadric::new([1, 1, 1, -7]).unwrap();
    let n = normalize(&q, &s).unwrap();
    assert_eq!(local_verdict(&n, Place::Real).unwrap(), LocalVerdict::Soluble);
    assert_eq!(local_verdict(&n, Place::Two).unwrap(), LocalVerdict::Insoluble);
    assert_eq!(local_verdict(&n, Place::Odd(7)).unwrap(), LocalVerdict::Soluble);
}
