//! Seeded random instances for tests, benches and the acceptance suite.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fankit::{self, Fan};
use crate::lattice::IntegerMatrix;
use crate::recovery::MultiplicityVector;
use crate::squarezero::FactorKind;

/// A unimodular `n x n` matrix with entries in `[-bound, bound]`, built
/// from random elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, bound: i64) -> IntegerMatrix {
    let mut rows: Vec<Vec<i64>> = IntegerMatrix::identity(n).to_rows();
    if n < 2 {
        if rng.gen_bool(0.5) {
            rows[0][0] = -1;
        }
        return IntegerMatrix::from_rows(&rows).expect("square");
    }
    for _ in 0..4 * n * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..6) {
            0 => rows.swap(i, j),
            1 => rows[i].iter_mut().for_each(|x| *x = -*x),
            _ => {
                let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                let next: Vec<i64> = rows[i].iter().zip(&rows[j]).map(|(a, b)| a + c * b).collect();
                if next.iter().all(|x| x.abs() <= bound) {
                    rows[i] = next;
                }
            }
        }
    }
    IntegerMatrix::from_rows(&rows).expect("square")
}

/// Named small smooth complete fans: CP1, CP2 and Hirzebruch surfaces.
pub fn small_fan(name: &str) -> Fan {
    match name {
        "CP1" => fankit::projective_fan(1),
        "CP2" => fankit::projective_fan(2),
        "F0" => fankit::hirzebruch(0),
        "F1" => fankit::hirzebruch(1),
        "F2" => fankit::hirzebruch(2),
        "F3" => fankit::hirzebruch(3),
        _ => panic!("unknown fan {name}"),
    }
    .expect("standard fan")
}

pub const SMALL_FANS: [&str; 5] = ["CP1", "CP2", "F1", "F2", "F3"];

/// A product of `1..=max_factors` fans from [`SMALL_FANS`] in scrambled
/// coordinates, with the names of its factors.
pub fn scrambled_product<R: Rng>(rng: &mut R, max_factors: usize, bound: i64) -> (Vec<&'static str>, Fan) {
    let k = rng.gen_range(1..=max_factors);
    let names: Vec<&'static str> = (0..k).map(|_| *SMALL_FANS.choose(rng).expect("non-empty")).collect();
    let fans: Vec<Fan> = names.iter().map(|n| small_fan(n)).collect();
    let f = fankit::product_all(&fans).expect("product of fans");
    let u = random_unimodular(rng, f.dim(), bound);
    (names, f.transform(&u).expect("unimodular"))
}

/// Every factor of the alphabet with `p, q, r <= max_index`.
pub fn alphabet(max_index: u32) -> Vec<FactorKind> {
    let mut out = vec![FactorKind::ProjLine];
    for p in 1..=max_index {
        for q in 0..=p {
            out.push(FactorKind::PQ { p, q });
        }
    }
    out.extend((2..=max_index).map(|r| FactorKind::Diag { r }));
    out.push(FactorKind::FourSphere);
    out
}

/// A random multiplicity vector: each factor with `p, q, r <= max_index`
/// appears with probability `density`, with count in `1..=max_count`.
pub fn random_multiplicities<R: Rng>(rng: &mut R, max_count: u64, max_index: u32, density: f64) -> MultiplicityVector {
    let mut v = MultiplicityVector::default();
    for k in alphabet(max_index) {
        if rng.gen_bool(density) {
            v.add(k, rng.gen_range(1..=max_count)).expect("alphabet factor");
        }
    }
    v
}

/// A random `(n, {p: m_p})` with `2 (n + sum m_p) <= max_degree` and
/// `p <= max_p`.
pub fn random_poincare_split<R: Rng>(rng: &mut R, max_degree: usize, max_p: u32) -> (u64, BTreeMap<u32, u64>) {
    let k = rng.gen_range(0..=max_degree / 2);
    let mut n = 0;
    let mut m = BTreeMap::new();
    for _ in 0..k {
        match rng.gen_range(0..=max_p) {
            0 => n += 1,
            p => *m.entry(p).or_default() += 1,
        }
    }
    (n, m)
}
