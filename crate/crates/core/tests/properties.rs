use std::collections::BTreeMap;

use fandecomp::fankit::{self, Fan};
use fandecomp::lattice::{extends_to_basis, smith_normal_form, IntegerMatrix, LatticeVector};
use fandecomp::par::Execution;
use fandecomp::poly::Poly;
use fandecomp::recovery::{self, MultiplicityVector};
use fandecomp::sample;
use fandecomp::squarezero::{
    closed_count_mod2, count_square_zero, count_square_zero_with, normalize, poincare, product_profile, profile,
    real_census, top_invariants, CountOptions, FactorKind, ProductManifold,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| IntegerMatrix::from_rows(&rows).unwrap())
    })
}

fn unimodular(n: usize) -> impl Strategy<Value = IntegerMatrix> {
    any::<u64>().prop_map(move |seed| sample::random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), n, 5))
}

fn unimodular_for(f: &Fan, seed: u64) -> IntegerMatrix {
    sample::random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), f.dim(), 5)
}

fn factor_kind(max_index: u32) -> impl Strategy<Value = FactorKind> {
    prop_oneof![
        Just(FactorKind::ProjLine),
        Just(FactorKind::FourSphere),
        (1..=max_index).prop_flat_map(|p| (Just(p), 0..=p)).prop_map(|(p, q)| FactorKind::PQ { p, q }),
        (1..=max_index).prop_map(|r| FactorKind::Diag { r }),
    ]
}

fn alphabet_kind(max_index: u32) -> impl Strategy<Value = FactorKind> {
    factor_kind(max_index).prop_filter("alphabet", |k| *k != FactorKind::Diag { r: 1 })
}

fn small_fan() -> impl Strategy<Value = Fan> {
    prop::sample::select(sample::SMALL_FANS.to_vec()).prop_map(sample::small_fan)
}

fn multiplicities() -> impl Strategy<Value = MultiplicityVector> {
    prop::collection::vec((alphabet_kind(5), 1u64..=3), 0..6).prop_map(|entries| {
        let mut v = MultiplicityVector::default();
        for (k, c) in entries {
            v.add(k, c).unwrap();
        }
        v
    })
}

fn wide(m: &IntegerMatrix) -> Vec<Vec<i128>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect()
}

/// Exact product in `i128`, independent of the checked `i64` kernel.
fn wide_product(ms: &[&IntegerMatrix]) -> Vec<Vec<i128>> {
    ms[1..].iter().fold(wide(ms[0]), |acc, m| {
        let b = wide(m);
        acc.iter()
            .map(|row| (0..b[0].len()).map(|j| row.iter().zip(&b).map(|(x, r)| x * r[j]).sum()).collect())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_divisibility(m in matrix(5, 20)) {
        let s = smith_normal_form(&m).unwrap();
        prop_assert!(s.u.is_unimodular());
        prop_assert!(s.v.is_unimodular());
        prop_assert_eq!(wide_product(&[&s.u, &m, &s.v]), wide(&s.d));
        prop_assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= 0 && w[1] >= 0);
            if w[0] == 0 {
                prop_assert_eq!(w[1], 0);
            } else {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
        prop_assert_eq!(s.rank(), m.rank().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_extension_is_invariant(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 1..=4),
        u in unimodular(4),
    ) {
        let vs: Vec<LatticeVector> = rows.into_iter().map(|r| LatticeVector::new(r).unwrap()).collect();
        let moved: Vec<LatticeVector> = vs.iter().map(|v| u.apply(v).unwrap()).collect();
        prop_assert_eq!(extends_to_basis(&vs, 4).unwrap(), extends_to_basis(&moved, 4).unwrap());
    }

    #[test]
    fn unimodular_inverse(u in unimodular(5)) {
        let inv = u.inverse_unimodular().unwrap();
        prop_assert_eq!(u.mul(&inv).unwrap(), IntegerMatrix::identity(5));
    }

    #[test]
    fn isomorphism_is_an_equivalence(f in small_fan(), g in small_fan(), su in any::<u64>(), sw in any::<u64>()) {
        let fu = f.transform(&unimodular_for(&f, su)).unwrap();
        let cert = fankit::isomorphic(&f, &fu).unwrap();
        prop_assert!(cert.is_some());
        prop_assert!(f.transform(&cert.unwrap()).unwrap().same_as(&fu));
        prop_assert!(fankit::isomorphic(&fu, &f).unwrap().is_some());
        let fuw = fu.transform(&unimodular_for(&f, sw)).unwrap();
        prop_assert!(fankit::isomorphic(&f, &fuw).unwrap().is_some());
        let fg = fankit::isomorphic(&f, &g).unwrap().is_some();
        let gf = fankit::isomorphic(&g, &f).unwrap().is_some();
        prop_assert_eq!(fg, gf);
        if f.dim() == g.dim() {
            prop_assert_eq!(fg, fankit::isomorphic(&fuw, &g).unwrap().is_some());
        }
    }

    #[test]
    fn isomorphism_search_is_deterministic(f in small_fan(), seed in any::<u64>()) {
        let fu = f.transform(&unimodular_for(&f, seed)).unwrap();
        let par = fankit::isomorphic_with(&f, &fu, Execution::Parallel).unwrap();
        let seq = fankit::isomorphic_with(&f, &fu, Execution::Sequential).unwrap();
        prop_assert_eq!(par, seq);
    }

    #[test]
    fn factorization_reassembles(fans in prop::collection::vec(small_fan(), 1..=3), seed in any::<u64>()) {
        let f = fankit::product_all(&fans).unwrap();
        let u = sample::random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), f.dim(), 5);
        let g = f.transform(&u).unwrap();
        let r = fankit::factorize(&g).unwrap();
        prop_assert_eq!(r.blocks.len(), fans.len());
        prop_assert!(r.change_of_basis.is_unimodular());
        prop_assert!(r.reassemble().unwrap().same_as(&g));
    }

    #[test]
    fn closed_forms_match_enumeration(k in factor_kind(7).prop_filter("b2 <= 14", |k| k.b2() <= 14)) {
        let n = count_square_zero(&profile(k).unwrap(), 2).unwrap();
        prop_assert_eq!(u128::from(n), closed_count_mod2(k));
    }

    #[test]
    fn kunneth_additivity(
        ks in prop::collection::vec(factor_kind(4), 1..=4)
            .prop_filter("b2 <= 12", |ks| ks.iter().map(FactorKind::b2).sum::<usize>() <= 12),
        m in 2u64..=3,
    ) {
        prop_assume!(m == 2 || ks.iter().map(FactorKind::b2).sum::<usize>() <= 9);
        let ps: Vec<_> = ks.iter().map(|&k| profile(k).unwrap()).collect();
        let whole = count_square_zero(&product_profile(&ps), m).unwrap();
        let parts: u64 = ps.iter().map(|p| count_square_zero(p, m).unwrap()).sum();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn census_is_a_multiset_union(a in prop::collection::vec(factor_kind(5), 0..4), b in prop::collection::vec(factor_kind(5), 0..4)) {
        let pa = ProductManifold::new(a).unwrap();
        let pb = ProductManifold::new(b).unwrap();
        prop_assert_eq!(real_census(&pa.times(&pb)), real_census(&pa).union(&real_census(&pb)));
    }

    #[test]
    fn poincare_counts_cohomology(ks in prop::collection::vec(factor_kind(6), 0..6)) {
        let pm = ProductManifold::new(ks).unwrap();
        let poly = poincare(&pm);
        let rank: u64 = pm.factors().iter().map(|k| k.b2() as u64 + if k.complex_dim() == 1 { 1 } else { 2 }).product();
        prop_assert_eq!(poly.eval(1), rank.into());
        prop_assert_eq!(poly.degree(), Some(pm.complex_dim() as usize));
    }

    #[test]
    fn normalize_preserves_invariants(p in 0u32..20, q in 0u32..20, r in 0u32..20) {
        let k = normalize(p, q, r).unwrap();
        let (p2, q2, r2) = k.as_pqr().unwrap();
        let (a, b) = (top_invariants(p, q, r), top_invariants(p2, q2, r2));
        prop_assert_eq!(a.chi, b.chi);
        prop_assert_eq!(a.sigma.abs(), b.sigma.abs());
        prop_assert_eq!(a.spin, b.spin);
        prop_assert_eq!(normalize(p2, q2, r2).unwrap(), k);
    }

    #[test]
    fn recovery_round_trip(v in multiplicities()) {
        let b = recovery::bundle(&v.realize()).unwrap();
        prop_assert_eq!(recovery::recover(&b).unwrap(), v);
    }

    #[test]
    fn bundles_separate_products(a in multiplicities(), b in multiplicities()) {
        let (pa, pb) = (a.realize(), b.realize());
        let same_bundle = recovery::bundle(&pa).unwrap() == recovery::bundle(&pb).unwrap();
        prop_assert_eq!(same_bundle, recovery::same_decomposition(&pa, &pb).unwrap());
    }

    #[test]
    fn cancellation_holds(a in multiplicities(), b in multiplicities(), c in multiplicities()) {
        let expected = a == b;
        prop_assert_eq!(recovery::cancellation_check(&a.realize(), &b.realize(), &c.realize()).unwrap(), expected);
    }

    #[test]
    fn disentangling_inverts_expansion(n in 0u32..4, ps in prop::collection::vec(1u32..8, 0..4)) {
        let mut m: BTreeMap<u32, u64> = BTreeMap::new();
        let mut poly = Poly::quadratic(0, 1).pow(n);
        for &p in &ps {
            *m.entry(p).or_default() += 1;
            poly = &poly * &Poly::quadratic(i64::from(p), 1);
        }
        prop_assert_eq!(recovery::disentangle(&poly).unwrap(), (u64::from(n), m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_matches_balanced_sum_for_odd_modulus(r in 1u32..=3, m in prop::sample::select(vec![3u64, 5])) {
        prop_assume!(m == 3 || r <= 2);
        let d = count_square_zero(&profile(FactorKind::Diag { r }).unwrap(), m).unwrap();
        let pq = count_square_zero(&profile(FactorKind::PQ { p: r, q: r }).unwrap(), m).unwrap();
        prop_assert_eq!(d, pq);
    }

    #[test]
    fn execution_modes_agree(ks in prop::collection::vec(factor_kind(3), 1..=3)
        .prop_filter("b2 <= 10", |ks| ks.iter().map(FactorKind::b2).sum::<usize>() <= 10)) {
        let ps: Vec<_> = ks.iter().map(|&k| profile(k).unwrap()).collect();
        let pp = product_profile(&ps);
        let seq = CountOptions { execution: Execution::Sequential, ..CountOptions::default() };
        prop_assert_eq!(count_square_zero_with(&pp, 2, seq).unwrap(), count_square_zero(&pp, 2).unwrap());
    }
}
