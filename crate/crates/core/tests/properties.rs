//! Property tests over random shapes, shuffles and Poisson parameters.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use jmshuffle::mixing::{cutoff_parameter, cutoff_time, limit_profile, poisson_tv, L2Series};
use jmshuffle::numeric::{factorial, LogSum, LogValue};
use jmshuffle::oracle::{rank, unrank};
use jmshuffle::partitions::{dim_skew, dim_syt, enumerate_partitions, SkewShape};
use jmshuffle::spectrum::{
    eig_general, eig_kstar, group_by_pair, spectrum_general, spectrum_kstar, ShuffleSpec,
};
use jmshuffle::tableaux::enumerate_syt;
use jmshuffle::Partition;

fn shape(n: usize, index: usize) -> Partition {
    let all = enumerate_partitions(n).unwrap();
    all[index % all.len()].clone()
}

fn shape_pair() -> impl Strategy<Value = (usize, Partition, Partition)> {
    (1usize..=12, any::<usize>(), any::<usize>())
        .prop_map(|(n, i, j)| (n, shape(n, i), shape(n, j)))
}

fn shape_triple() -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (1usize..=10, any::<usize>(), any::<usize>(), any::<usize>())
        .prop_map(|(n, i, j, l)| (shape(n, i), shape(n, j), shape(n, l)))
}

fn kstar() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|n| (Just(n), 1..=n))
}

fn active_set() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            proptest::sample::subsequence((2..=n).collect::<Vec<_>>(), 1..n),
        )
    })
}

fn brute_skew(outer: &Partition, inner: &Partition) -> BigUint {
    if outer == inner {
        return BigUint::one();
    }
    outer
        .removable_cells()
        .into_iter()
        .filter_map(|(i, _)| {
            let mut parts = outer.parts().to_vec();
            parts[i - 1] -= 1;
            let smaller = Partition::new(parts).unwrap();
            smaller.contains(inner).then(|| brute_skew(&smaller, inner))
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_is_an_involution((_n, a, _b) in shape_pair()) {
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!(a.transpose().size(), a.size());
        prop_assert_eq!(a.transpose().diag_index(), -a.diag_index());
    }

    #[test]
    fn dominance_is_antisymmetric((_n, a, b) in shape_pair()) {
        prop_assert!(a.dominates(&a).unwrap());
        if a.dominates(&b).unwrap() && b.dominates(&a).unwrap() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn dominance_is_transitive((a, b, c) in shape_triple()) {
        if a.dominates(&b).unwrap() && b.dominates(&c).unwrap() {
            prop_assert!(a.dominates(&c).unwrap());
        }
    }

    #[test]
    fn dominance_reverses_under_transpose((_n, a, b) in shape_pair()) {
        prop_assert_eq!(a.dominates(&b).unwrap(), b.transpose().dominates(&a.transpose()).unwrap());
    }

    #[test]
    fn dimension_is_transpose_invariant((_n, a, _b) in shape_pair()) {
        prop_assert_eq!(dim_syt(&a), dim_syt(&a.transpose()));
    }

    #[test]
    fn branching_rule((_n, a, _b) in shape_pair()) {
        let below: BigUint = a
            .removable_cells()
            .into_iter()
            .map(|(i, _)| {
                let mut parts = a.parts().to_vec();
                parts[i - 1] -= 1;
                dim_syt(&Partition::new(parts).unwrap())
            })
            .sum();
        prop_assert_eq!(dim_syt(&a), below);
    }

    #[test]
    fn skew_dimension_matches_recursion(n in 2usize..=8, i in any::<usize>(), m in 0usize..=8, j in any::<usize>()) {
        let outer = shape(n, i);
        let subs = jmshuffle::partitions::enumerate_subpartitions(&outer, m.min(n));
        let inner = subs[j % subs.len()].clone();
        let skew = SkewShape::new(outer.clone(), inner.clone()).unwrap();
        prop_assert_eq!(dim_skew(&skew), brute_skew(&outer, &inner));
    }

    #[test]
    fn kstar_eigenvalue_transpose_identity((n, k) in kstar(), i in any::<usize>(), j in any::<usize>()) {
        let lambda = shape(n, i);
        let subs = jmshuffle::partitions::enumerate_subpartitions(&lambda, n - k);
        let mu = subs[j % subs.len()].clone();
        let e = eig_kstar(&lambda, &mu, n, k).unwrap();
        let et = eig_kstar(&lambda.transpose(), &mu.transpose(), n, k).unwrap();
        let two_over_n = BigRational::new(2.into(), (n as i64).into());
        prop_assert_eq!(e + et, two_over_n);
    }

    #[test]
    fn general_eigenvalue_transpose_identity((n, set) in active_set(), i in any::<usize>(), j in any::<usize>()) {
        let spec = ShuffleSpec::general(n, set).unwrap();
        let lambda = shape(n, i);
        let tableaux: Vec<_> = enumerate_syt(&lambda).unwrap().collect();
        let s = &tableaux[j % tableaux.len()];
        let two_over_n = BigRational::new(2.into(), (n as i64).into());
        prop_assert_eq!(
            eig_general(s, &spec).unwrap() + eig_general(&s.transpose(), &spec).unwrap(),
            two_over_n
        );
    }

    #[test]
    fn kstar_spectrum_is_complete_and_bounded((n, k) in kstar()) {
        let records = spectrum_kstar(n, k).unwrap();
        let total: BigUint = records.iter().map(|r| r.multiplicity.clone()).sum();
        prop_assert_eq!(total, factorial(n));
        let one = BigRational::one();
        let ones = records.iter().filter(|r| r.value == one).count();
        prop_assert_eq!(ones, 1);
        for r in &records {
            prop_assert!(r.value <= one && r.value >= -one.clone());
        }
    }

    #[test]
    fn general_top_set_regroups_to_kstar((n, k) in kstar()) {
        prop_assume!(n <= 6);
        let spec = ShuffleSpec::general(n, n - k + 1..=n).unwrap();
        let grouped = group_by_pair(&spectrum_general(&spec).unwrap(), k).unwrap();
        let collapse = |records: &[jmshuffle::EigenvalueRecord]| {
            let mut m: BTreeMap<BigRational, BigUint> = BTreeMap::new();
            for r in records {
                *m.entry(r.value.clone()).or_insert_with(BigUint::zero) += &r.multiplicity;
            }
            m
        };
        prop_assert_eq!(collapse(&grouped), collapse(&spectrum_kstar(n, k).unwrap()));
    }

    #[test]
    fn l2_bound_is_nonincreasing((n, k) in kstar(), t in 0u64..200) {
        let series = L2Series::new(&spectrum_kstar(n, k).unwrap()).unwrap();
        prop_assert!(series.bound(t + 1) <= series.bound(t) * (1.0 + 1e-12));
    }

    #[test]
    fn rank_is_a_bijection(n in 1usize..=8, r in any::<usize>()) {
        let total = factorial(n).to_usize().unwrap();
        let r = r % total;
        let perm = unrank(n, r);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(rank(&perm), r);
    }

    #[test]
    fn cutoff_time_and_parameter_invert(n in 2usize..=500, k in 1usize..=500, c in -5.0f64..5.0) {
        let k = k.min(n);
        let t = cutoff_time(n, k, c);
        prop_assert!((cutoff_parameter(n, k, t) - c).abs() < 1e-9);
    }

    #[test]
    fn poisson_tv_is_a_metric(a in 0.01f64..60.0, b in 0.01f64..60.0, c in 0.01f64..60.0) {
        let tol = 1e-12;
        let ab = poisson_tv(a, b, tol);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - poisson_tv(b, a, tol)).abs() < 1e-12);
        prop_assert!(poisson_tv(a, a, tol) < 1e-12);
        prop_assert!(ab <= poisson_tv(a, c, tol) + poisson_tv(c, b, tol) + 1e-10);
    }

    #[test]
    fn limit_profile_is_decreasing(c in -3.0f64..6.0, d in 1e-3f64..3.0) {
        let (hi, lo) = (limit_profile(c), limit_profile(c + d));
        prop_assert!(hi > lo);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn log_value_tracks_f64(x in -10.0f64..10.0, t in 0u64..20) {
        let direct = x.powi(t as i32);
        let via = LogValue::from_f64(x).pow(t).to_f64();
        prop_assert!((direct - via).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn log_sum_tracks_f64(xs in proptest::collection::vec(1e-6f64..1e6, 1..40)) {
        let mut s = LogSum::default();
        for &x in &xs {
            s.add_ln(x.ln());
        }
        let direct: f64 = xs.iter().sum();
        prop_assert!((s.value() - direct).abs() <= 1e-12 * direct);
    }
}

#[test]
fn dimension_squares_sum_to_factorial() {
    for n in 1..=14 {
        let total: BigUint = enumerate_partitions(n)
            .unwrap()
            .iter()
            .map(|p| dim_syt(p).pow(2))
            .sum();
        assert_eq!(total, factorial(n), "n = {n}");
    }
}
