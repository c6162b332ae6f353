mod common;

use std::ops::ControlFlow;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rainbow_core::colorings::has_rainbow_3ap;
use rainbow_core::formulas::eq1_lower_bound;
use rainbow_core::search::{
    count_exact_color, count_rainbow_free, enumerate_rainbow_free, find_rainbow_free_exact, Enumeration,
};
use rainbow_core::{Error, Method, SearchConfig, Structure, StructureKind};

fn count(s: &Structure, r: usize, method: Method) -> BigUint {
    count_rainbow_free(s, r, 3, method, &SearchConfig::default()).unwrap().count
}

fn interval_subset(n: usize, mask: u64) -> Structure {
    let elems: Vec<usize> = (1..=n).filter(|x| mask >> (x - 1) & 1 == 1).collect();
    Structure::with_support(StructureKind::Interval, n, &elems).unwrap()
}

#[test]
fn engine_matches_brute_force() {
    for n in 1..=8 {
        for r in 1..=3 {
            for s in [Structure::interval(n), Structure::cyclic(n).unwrap()] {
                let expected = common::brute_force(&s, r);
                for method in [Method::ExhaustiveDfs, Method::SymmetryReduced] {
                    let rep = count_rainbow_free(&s, r, 3, method, &SearchConfig::default()).unwrap();
                    let by: Vec<u64> = rep.by_colors_used.iter().map(|b| b.try_into().unwrap()).collect();
                    assert_eq!(by, expected, "{s} r={r} {}", method.name());
                }
            }
        }
    }
}

#[test]
fn exact_color_counts_match_buckets() {
    for n in 1..=9 {
        let s = Structure::interval(n);
        let buckets = common::brute_force(&s, 4);
        for used in 1..=4 {
            // The bucket covers every choice of the `used` colors out of 4.
            let choose = [1, 4, 6, 4, 1][used];
            for method in [Method::ExhaustiveDfs, Method::SymmetryReduced] {
                let rep = count_exact_color(&s, 4, used, 3, method, &SearchConfig::default()).unwrap();
                assert_eq!(rep.count, BigUint::from(buckets[used] / choose), "n={n} s={used}");
            }
        }
    }
}

#[test]
fn enumeration_visits_exactly_the_rainbow_free_colorings() {
    for s in [Structure::interval(7), Structure::cyclic(7).unwrap()] {
        let mut seen = 0u64;
        let opts = Enumeration { exact: false, canonical: false, budget: u64::MAX };
        enumerate_rainbow_free(&s, 3, 3, opts, |c| {
            assert!(has_rainbow_3ap(c).is_none());
            seen += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, common::brute_total(&s, 3));
    }
}

#[test]
fn four_term_progressions_match_brute_force() {
    let s = Structure::interval(9);
    let aps: Vec<Vec<usize>> = (1..=9)
        .flat_map(|a| (1..=3).map(move |d| (0..4).map(|i| a + i * d).collect::<Vec<_>>()))
        .filter(|p: &Vec<usize>| p[3] <= 9)
        .collect();
    let mut expected = 0u64;
    for code in 0..4u64.pow(9) {
        let colors: Vec<u64> = (0..9).map(|i| code / 4u64.pow(i) % 4).collect();
        let rainbow = aps.iter().any(|p| {
            let mut c: Vec<u64> = p.iter().map(|&x| colors[x - 1]).collect();
            c.sort_unstable();
            c.dedup();
            c.len() == 4
        });
        if !rainbow {
            expected += 1;
        }
    }
    for method in [Method::ExhaustiveDfs, Method::SymmetryReduced] {
        let rep = count_rainbow_free(&s, 4, 4, method, &SearchConfig::default()).unwrap();
        assert_eq!(rep.count, BigUint::from(expected));
    }
}

#[test]
fn lower_bound_is_tight_exactly_when_three_colors_force_a_rainbow() {
    for n in 1..=14 {
        let s = Structure::interval(n);
        for r in [3usize, 4] {
            let c = count(&s, r, Method::SymmetryReduced);
            let lb = eq1_lower_bound(r as u64, n as u64).unwrap().as_integer().unwrap();
            let c_int = num_bigint::BigInt::from(c);
            assert!(c_int >= lb, "n={n} r={r}");
            let no_exact_three = find_rainbow_free_exact(&s, 3, 3, &SearchConfig::default()).unwrap().is_none();
            assert_eq!(c_int == lb, no_exact_three, "n={n} r={r}");
        }
    }
}

#[test]
fn proper_subsets_have_fewer_colorings() {
    for n in 1..=10 {
        let full = count(&Structure::interval(n), 3, Method::ExhaustiveDfs);
        for mask in 0..(1u64 << n) - 1 {
            let sub = count(&interval_subset(n, mask), 3, Method::ExhaustiveDfs);
            assert!(sub < full, "n={n} mask={mask:b}");
        }
    }
    let mut rng = StdRng::seed_from_u64(11);
    for n in [11usize, 12] {
        let full = count(&Structure::interval(n), 3, Method::ExhaustiveDfs);
        for _ in 0..60 {
            let mask = rng.gen_range(0..(1u64 << n) - 1);
            assert!(count(&interval_subset(n, mask), 3, Method::ExhaustiveDfs) < full, "n={n} mask={mask:b}");
        }
    }
}

#[test]
fn two_color_share_small_scale() {
    // Colorings of [n] with 3 colors, by number of colors used.
    let frozen: [(usize, [u64; 4]); 9] = [
        (6, [0, 3, 186, 36]),
        (7, [0, 3, 378, 66]),
        (8, [0, 3, 762, 150]),
        (9, [0, 3, 1530, 210]),
        (10, [0, 3, 3066, 390]),
        (11, [0, 3, 6138, 570]),
        (12, [0, 3, 12282, 966]),
        (13, [0, 3, 24570, 1350]),
        (14, [0, 3, 49146, 2178]),
    ];
    let mut shares = Vec::new();
    for (n, expected) in frozen {
        let rep = count_rainbow_free(&Structure::interval(n), 3, 3, Method::ExhaustiveDfs, &SearchConfig::default())
            .unwrap();
        let by: Vec<u64> = rep.by_colors_used.iter().map(|b| b.try_into().unwrap()).collect();
        assert_eq!(by, expected, "n={n}");
        let total: u64 = expected.iter().sum();
        shares.push((expected[1] + expected[2]) as f64 / total as f64);
    }
    // The share rises from 8 on but dips between 7 and 8.
    assert!(shares[2] < shares[1]);
    assert!(shares[2..].windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn single_color_class_in_exact_three_colorings() {
    let s = Structure::cyclic(17).unwrap();
    let opts = Enumeration { exact: true, canonical: false, budget: u64::MAX };
    let mut seen = 0;
    enumerate_rainbow_free(&s, 3, 3, opts, |c| {
        assert!((1..=3).any(|col| c.multiplicity(col) == 1), "{:?}", c.colors());
        seen += 1;
        ControlFlow::Continue(())
    })
    .unwrap();
    assert_eq!(seen, 102);
}

#[test]
fn results_do_not_depend_on_workers() {
    let cases = [
        (Structure::cyclic(13).unwrap(), 3),
        (Structure::cyclic(11).unwrap(), 4),
        (Structure::interval(12), 3),
        (Structure::without(StructureKind::Interval, 11, &[4, 7]).unwrap(), 4),
    ];
    for (s, r) in cases {
        for method in [Method::ExhaustiveDfs, Method::SymmetryReduced] {
            let base = count_rainbow_free(&s, r, 3, method, &SearchConfig::with_workers(1)).unwrap();
            for w in [2, 3, 8] {
                let mut other = count_rainbow_free(&s, r, 3, method, &SearchConfig::with_workers(w)).unwrap();
                other.elapsed = base.elapsed;
                assert_eq!(other, base, "{s} r={r} workers={w}");
            }
        }
        let w1 = find_rainbow_free_exact(&s, 3, 3, &SearchConfig::with_workers(1)).unwrap();
        let w8 = find_rainbow_free_exact(&s, 3, 3, &SearchConfig::with_workers(8)).unwrap();
        assert_eq!(w1, w8);
    }
}

#[test]
fn tiny_budget_is_reported() {
    let s = Structure::interval(14);
    for workers in [1, 4] {
        let cfg = SearchConfig { budget: 1000, workers };
        assert!(matches!(
            count_rainbow_free(&s, 3, 3, Method::ExhaustiveDfs, &cfg),
            Err(Error::BudgetExceeded { budget: 1000 })
        ));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_and_plain_search_agree(n in 1usize..16, mask in any::<u64>(), r in 1usize..=4, cyclic in any::<bool>()) {
        let kind = if cyclic { StructureKind::Cyclic } else { StructureKind::Interval };
        let ambient: Vec<usize> = match kind {
            StructureKind::Interval => (1..=n).collect(),
            StructureKind::Cyclic => (0..n).collect(),
        };
        let elems: Vec<usize> = ambient.into_iter().filter(|x| mask >> (x % 64) & 1 == 1).take(12).collect();
        let s = Structure::with_support(kind, n, &elems).unwrap();
        let plain = count_rainbow_free(&s, r, 3, Method::ExhaustiveDfs, &SearchConfig::default()).unwrap();
        let reduced = count_rainbow_free(&s, r, 3, Method::SymmetryReduced, &SearchConfig::default()).unwrap();
        prop_assert_eq!(&plain.by_colors_used, &reduced.by_colors_used);
        prop_assert_eq!(plain.leaves, plain.count.clone().try_into().unwrap_or(u64::MAX));
        if s.len() <= 8 {
            let brute: Vec<BigUint> = common::brute_force(&s, r).into_iter().map(BigUint::from).collect();
            prop_assert_eq!(&plain.by_colors_used, &brute);
        }
    }
}
