use proptest::prelude::*;
use quadfib::arith::SpfSieve;
use quadfib::counting::{
    count_raw_reference, decompose, hyperbola_split_check, region_count, CountConfig, Counter,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bits(i: usize) -> [u8; 4] {
    [0, 1, 2, 3].map(|k| ((i >> k) & 1) as u8)
}

#[test]
fn split_identities_up_to_200() {
    let c = Counter::new(200, CountConfig::default()).unwrap();
    for b in (1..=200).step_by(7).chain([200]) {
        let r = c.census(b).unwrap();
        assert_eq!(r.n, 2 * r.n1 + r.n2, "B={b}");
        assert_eq!(r.raw_count % 4, 0, "B={b}");
        assert_eq!(r.raw_count, 4 * r.n, "B={b}");
    }
    let r = c.census(200).unwrap();
    assert_eq!((r.n, r.n1, r.n2, r.raw_count), (59216, 22848, 13520, 236864));
}

#[test]
fn sign_regions() {
    let c = Counter::new(100, CountConfig::default()).unwrap();
    for b in [1, 10, 37, 64, 100] {
        let n1 = c.count_n1(b).unwrap();
        let n2 = c.count_n2(b).unwrap();
        let mut total = 0;
        for i in 0..16 {
            let l = bits(i);
            let got = c.region_count(b, l).unwrap();
            let want = match l.iter().sum::<u8>() {
                0 | 4 => 0,
                1 | 3 => n1,
                _ if l == [1, 1, 0, 0] || l == [0, 0, 1, 1] => 0,
                _ => n2,
            };
            assert_eq!(got, want, "B={b} l={l:?}");
            total += got;
        }
        assert_eq!(total, c.count_raw(b).unwrap(), "B={b}");
    }
}

#[test]
fn signed_route_matches_direct_enumeration() {
    let s = SpfSieve::new(10_000);
    let c = Counter::new(30, CountConfig::default()).unwrap();
    for b in [3, 8, 17, 30] {
        assert_eq!(4 * c.count_n(b).unwrap(), count_raw_reference(b, &s).unwrap(), "B={b}");
    }
}

#[test]
fn workers_are_deterministic() {
    let one = Counter::new(300, CountConfig { workers: Some(1), ..Default::default() }).unwrap();
    let many = Counter::new(300, CountConfig { workers: Some(8), ..Default::default() }).unwrap();
    for b in [50, 173, 300] {
        let (x, y) = (one.census(b).unwrap(), many.census(b).unwrap());
        assert_eq!((x.n, x.n1, x.n2, x.raw_count), (y.n, y.n1, y.n2, y.raw_count));
    }
    assert_eq!(
        region_count(60, [0, 1, 1, 0], CountConfig { workers: Some(3), ..Default::default() }).unwrap(),
        one.region_count(60, [0, 1, 1, 0]).unwrap()
    );
}

#[test]
fn counts_are_monotone_and_bounded() {
    let c = Counter::new(100, CountConfig::default()).unwrap();
    let mut prev = 0;
    for b in 1..=100 {
        let n1 = c.count_n1(b).unwrap();
        assert!(n1 >= prev);
        let bf = b as f64;
        assert!((n1 as f64) <= 4.0 * bf * bf * (1.0 + bf.ln()));
        prev = n1;
    }
}

#[test]
fn hyperbola_identity_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let x = rng.gen_range(4..=200u64);
        let ymax = (x as f64).sqrt().floor() as u64;
        let y = rng.gen_range(2..=ymax);
        let c = [0; 4].map(|_: u64| rng.gen_range(1..=4u64));
        let tables: Vec<Vec<i64>> = (0..4).map(|_| (0..=x).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let g0 = |n: u64| tables[0][n as usize];
        let g1 = |n: u64| tables[1][n as usize];
        let g2 = |n: u64| tables[2][n as usize];
        let g3 = |n: u64| tables[3][n as usize];
        assert!(hyperbola_split_check(x, y, c, [&g0, &g1, &g2, &g3]).unwrap(), "X={x} Y={y} c={c:?}");
    }
}

proptest! {
    #[test]
    fn decomposition_roundtrip(t in prop::array::uniform4(1u64..=500)) {
        prop_assume!(quadfib::arith::gcd(t[0], t[1]) == 1 && quadfib::arith::gcd(t[2], t[3]) == 1);
        let s = SpfSieve::new(1000);
        let d = decompose(t, &s).unwrap();
        prop_assert_eq!(d.reconstruct(), t);
        d.validate(&s).unwrap();
        prop_assert!(d.s.iter().all(|&x| x % 2 == 1));
    }
}
