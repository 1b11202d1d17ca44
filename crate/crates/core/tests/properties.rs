mod common;

use mdpconv::bounds::{
    column_bound, d_individual, individual_degree, minor_factors, nonvanishing_assignment, systematic_form,
};
use mdpconv::codes::{construct, ConstructOptions};
use mdpconv::encoder::{encode, EncodeMode, MessageStream};
use mdpconv::gf::poly::{monic_from_index, random_irreducible};
use mdpconv::gf::{is_irreducible, BaseField, Level, Poly};
use mdpconv::matrix::FieldMatrix;
use mdpconv::mdp::{column_distance_bruteforce, g0x_mds_check, is_mdp, scale_generator_row, MdpOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn as_u64(f: &Poly) -> Vec<u64> {
    f.coeffs().iter().map(|&c| c as u64).collect()
}

#[test]
fn irreducibility_matches_trial_division_exhaustively() {
    for p in [2u16, 3, 5] {
        let field = BaseField::prime(p).unwrap();
        for degree in 1..=4 {
            for index in 0..(p as u64).pow(degree as u32) {
                let f = monic_from_index(degree, index, &field);
                assert_eq!(
                    is_irreducible(&f, &field).unwrap(),
                    irreducible_by_trial_division(&as_u64(&f), p as u64),
                    "{:?} over F_{p}",
                    f.coeffs()
                );
            }
        }
    }
}

#[test]
fn irreducible_count_over_f2_degree4() {
    let field = BaseField::prime(2).unwrap();
    let count = (0..16)
        .filter(|&i| is_irreducible(&monic_from_index(4, i, &field), &field).unwrap())
        .count();
    assert_eq!(count, 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_degree4_over_f7_agrees_with_trial_division(index in 0u64..7u64.pow(4)) {
        let field = BaseField::prime(7).unwrap();
        let f = monic_from_index(4, index, &field);
        prop_assert_eq!(is_irreducible(&f, &field).unwrap(), irreducible_by_trial_division(&as_u64(&f), 7));
    }

    #[test]
    fn sampled_moduli_are_irreducible(seed in any::<u64>(), degree in 1usize..=6) {
        let field = BaseField::prime(5).unwrap();
        let f = random_irreducible(degree, &field, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(f.degree(), Some(degree));
        prop_assert!(f.is_monic());
        prop_assert!(irreducible_by_trial_division(&as_u64(&f), 5));
    }

    #[test]
    fn frobenius_fixes_every_element(seed in any::<u64>(), which in 0usize..4) {
        let (p, m, d) = [(5u16, 1usize, 3usize), (2, 2, 3), (3, 1, 4), (2, 4, 2)][which];
        let t = tower(p, m, d, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_fe(&t, &mut rng);
        let qd = t.order(Level::Ext);
        prop_assert_eq!(t.pow(&a, qd), a);
        prop_assert!(t.min_poly_degree(&a) >= 1);
        prop_assert_eq!(d % t.min_poly_degree(&a), 0);
    }

    #[test]
    fn alpha_has_full_degree(seed in any::<u64>(), d in 1usize..=5) {
        let t = tower(7, 1, d, seed);
        prop_assert_eq!(t.min_poly_degree(&t.alpha()), d);
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>(), n in 1usize..=5) {
        let t = tower(5, 1, 3, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&t, n, n, 0.2, &mut rng);
        let b = random_matrix(&t, n, n, 0.2, &mut rng);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), t.mul(&a.det().unwrap(), &b.det().unwrap()));
    }

    #[test]
    fn superregular_implies_mds(seed in any::<u64>(), k in 1usize..=3, extra in 0usize..=3) {
        let t = tower(7, 1, 2, 3);
        let n = k + extra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&t, k, n, 0.05, &mut rng);
        let sr = m.is_superregular();
        prop_assert_eq!(sr.holds, all_minors_nonzero(&m));
        if sr.holds {
            prop_assert!(m.is_mds_matrix().unwrap().holds);
        }
    }

    #[test]
    fn row_scaling_preserves_verdict(seed in any::<u64>(), row in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = construct(7, 4, &ConstructOptions { d: Some(2), seed, ..Default::default() }).unwrap();
        let t = code.tower();
        let s = t.element(rng.random_range(1..t.order(Level::Base)), Level::Base).unwrap();
        let scaled = scale_generator_row(&code, row, &s).unwrap();
        let opts = MdpOptions::default();
        prop_assert_eq!(is_mdp(&code, &opts).is_mdp, is_mdp(&scaled, &opts).is_mdp);
    }

    #[test]
    fn mdp_implies_mds_sum(seed in any::<u64>(), d in 1usize..=3) {
        let code = construct(5, 3, &ConstructOptions { d: Some(d), seed, ..Default::default() }).unwrap();
        if is_mdp(&code, &MdpOptions::default()).is_mdp {
            prop_assert!(g0x_mds_check(&code).unwrap().holds);
        }
    }

    #[test]
    fn encoding_is_linear(seed in any::<u64>(), blocks in 1usize..=5) {
        let code = construct(7, 4, &ConstructOptions::default()).unwrap();
        let t = code.tower();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec<_>> {
            (0..blocks).map(|_| (0..4).map(|_| random_fe(t, rng)).collect()).collect()
        };
        let (u, w) = (draw(&mut rng), draw(&mut rng));
        let c = random_fe(t, &mut rng);
        let combo: Vec<Vec<_>> = u
            .iter()
            .zip(&w)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| t.add(&t.mul(&c, x), y)).collect())
            .collect();
        let enc = |m: Vec<Vec<_>>| encode(&code, &MessageStream { blocks: m }, EncodeMode::Structured).unwrap().blocks;
        let (eu, ew, ec) = (enc(u), enc(w), enc(combo));
        for ((a, b), got) in eu.iter().zip(&ew).zip(&ec) {
            let want: Vec<_> = a.iter().zip(b).map(|(x, y)| t.add(&t.mul(&c, x), y)).collect();
            prop_assert_eq!(&want, got);
        }
    }

    #[test]
    fn nonvanishing_assignment_makes_its_factor_nonzero(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let code = construct(5, 3, &ConstructOptions { d: Some(2), seed, ..Default::default() }).unwrap();
        let t = code.tower();
        let x0 = FieldMatrix::zeros(t.clone(), 3, 2);
        let factors = minor_factors(code.g0(), &x0).unwrap();
        let cols = &factors[pick.index(factors.len())].cols;
        let x = nonvanishing_assignment(code.g0(), cols).unwrap();
        let at_x = minor_factors(code.g0(), &x).unwrap();
        let f = at_x.iter().find(|f| &f.cols == cols).unwrap();
        prop_assert!(!f.value.is_zero());
    }
}

#[test]
fn column_distances_are_monotone_and_bounded() {
    for seed in 0..4 {
        let code = construct(
            3,
            2,
            &ConstructOptions {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        let d: Vec<usize> = (0..=2)
            .map(|j| column_distance_bruteforce(&code, j, 1_000_000).unwrap())
            .collect();
        assert!(d.windows(2).all(|w| w[0] <= w[1]), "{d:?}");
        for (j, &dj) in d.iter().enumerate() {
            assert!(dj <= column_bound(3, 2, j));
        }
    }
    let code = construct(
        3,
        2,
        &ConstructOptions {
            q: Some(7),
            d: Some(2),
            seed: 1,
            ..Default::default()
        },
    )
    .unwrap();
    for j in 0..=1 {
        assert_eq!(
            column_distance_bruteforce(&code, j, 10_000_000).unwrap(),
            column_distance_oracle(&code, j)
        );
    }
}

#[test]
fn individual_degree_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (n, k, q) in [(3usize, 2usize, 7u16), (5, 3, 11), (4, 3, 7)] {
        let t = tower(q, 1, 2, 0);
        let g0 = loop {
            let m = random_matrix(&t, k, n, 0.0, &mut rng);
            if m.rank() == k {
                break systematic_form(&m).unwrap();
            }
        };
        for r in 0..k {
            assert!((0..k).all(|c| g0.get(r, c) == if r == c { t.one() } else { t.zero() }));
        }
        let bound = d_individual(n, k) as usize;
        for _ in 0..5 {
            let x = random_matrix(&t, k, n - k, 0.0, &mut rng);
            let r = rng.random_range(0..k);
            let s = rng.random_range(0..n - k);
            if let Some(deg) = individual_degree(&g0, &x, r, s).unwrap() {
                assert!(deg <= bound, "({n},{k}) degree {deg} in x[{r}][{s}] exceeds {bound}");
            }
        }
    }
}
