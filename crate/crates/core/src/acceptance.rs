//! The acceptance suite: nine end-to-end checks with fixed seeds and time
//! limits, shared by the `acceptance` test target and `fandecomp selftest`.

use std::collections::HashSet;
use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fankit::{self, Fan};
use crate::oracle;
use crate::par::Execution;
use crate::poly::Poly;
use crate::recovery;
use crate::sample;
use crate::squarezero::{
    self, count_square_zero_with, normalize, product_profile, profile, quadric_census, real_census,
    top_invariants, ComponentDescriptor, CountOptions, FactorKind, ProductManifold,
};

const SEED: u64 = 0x5eed_fa25;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let limit = match self.limit {
            Some(l) => format!("limit {:.0?}", l),
            None => "exact".to_string(),
        };
        write!(
            f,
            "[{}] {}. {:<34} {:>9.3?} ({limit}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

type Check = fn(Execution) -> Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: Check,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, name: "PQ(p,p) counts over Z/2", limit: secs(1), check: pq_counts },
    Criterion { id: 2, name: "DIAG(r) counts over Z/2", limit: secs(1), check: diag_counts },
    Criterion { id: 3, name: "product additivity", limit: secs(30), check: additivity },
    Criterion { id: 4, name: "real census", limit: None, check: census },
    Criterion { id: 5, name: "fan factorization", limit: secs(60), check: fan_factorization },
    Criterion { id: 6, name: "Hirzebruch surfaces", limit: None, check: hirzebruch },
    Criterion { id: 7, name: "bundle round-trip", limit: secs(60), check: round_trip },
    Criterion { id: 8, name: "normal form", limit: None, check: normal_form },
    Criterion { id: 9, name: "Poincaré disentangling", limit: None, check: disentangling },
];

pub fn criteria_count() -> usize {
    CRITERIA.len()
}

pub fn run_all(exec: Execution) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run_one(c, exec)).collect()
}

/// Runs a single criterion by number, `1..=9`.
pub fn run(id: u32, exec: Execution) -> Option<Outcome> {
    CRITERIA.iter().find(|c| c.id == id).map(|c| run_one(c, exec))
}

fn run_one(c: &Criterion, exec: Execution) -> Outcome {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(|| (c.check)(exec)))
        .unwrap_or_else(|e| Err(format!("panicked: {}", panic_message(&e))));
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = c.limit {
        if passed && elapsed > limit {
            passed = false;
            detail = format!("over time limit: {detail}");
        }
    }
    Outcome {
        id: c.id,
        name: c.name,
        passed,
        detail,
        elapsed,
        limit: c.limit,
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn count(k: FactorKind, m: u64, exec: Execution) -> Result<u64, String> {
    let p = profile(k).map_err(|e| e.to_string())?;
    count_square_zero_with(&p, m, options(exec)).map_err(|e| e.to_string())
}

fn options(exec: Execution) -> CountOptions {
    CountOptions {
        execution: exec,
        ..CountOptions::default()
    }
}

fn pq_counts(exec: Execution) -> Result<String, String> {
    let got = (1..=3)
        .map(|p| count(FactorKind::PQ { p, q: p }, 2, exec))
        .collect::<Result<Vec<_>, _>>()?;
    ensure(got == [1, 7, 31], || format!("got {got:?}, expected [1, 7, 31]"))?;
    Ok(format!("{got:?}"))
}

fn diag_counts(exec: Execution) -> Result<String, String> {
    let got = (1..=4)
        .map(|r| count(FactorKind::Diag { r }, 2, exec))
        .collect::<Result<Vec<_>, _>>()?;
    ensure(got == [2, 9, 35, 135], || format!("got {got:?}, expected [2, 9, 35, 135]"))?;
    // zero vector included
    let with_zero: Vec<u64> = got.iter().map(|c| c + 1).collect();
    let identity: Vec<u64> = (1..=4u32).map(|r| (1 << (2 * r - 1)) + (1 << (r - 1))).collect();
    ensure(with_zero == identity, || format!("with zero {with_zero:?} vs {identity:?}"))?;
    Ok(format!("{got:?}"))
}

fn random_small_product(rng: &mut ChaCha8Rng, max_b2: usize) -> Vec<FactorKind> {
    let pool: Vec<FactorKind> = sample::alphabet(4)
        .into_iter()
        .chain([FactorKind::Diag { r: 1 }])
        .filter(|k| k.b2() <= max_b2)
        .collect();
    loop {
        let n = rng.gen_range(1..=4);
        let ks: Vec<FactorKind> = (0..n).map(|_| *pool.choose(rng).expect("non-empty")).collect();
        if ks.iter().map(FactorKind::b2).sum::<usize>() <= max_b2 {
            return ks;
        }
    }
}

fn additivity(exec: Execution) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut states = 0u64;
    for (m, max_b2) in [(2u64, 12usize), (3, 8)] {
        for i in 0..50 {
            let ks = random_small_product(&mut rng, max_b2);
            let profiles = ks.iter().map(|&k| profile(k)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
            let whole = count_square_zero_with(&product_profile(&profiles), m, options(exec)).map_err(|e| e.to_string())?;
            let parts = ks.iter().map(|&k| count(k, m, exec)).sum::<Result<u64, _>>()?;
            let desc = ProductManifold::new(ks.clone()).map_err(|e| e.to_string())?;
            ensure(whole == parts, || format!("Z/{m} instance {i} {desc}: product {whole} != sum {parts}"))?;
            states += m.pow(ks.iter().map(FactorKind::b2).sum::<usize>() as u32);
        }
    }
    Ok(format!("100 products, {states} states"))
}

fn census(_: Execution) -> Result<String, String> {
    let c = |s: &str| real_census(&squarezero::parse_product(s).expect("descriptor"));
    let line = ComponentDescriptor::LINE;
    ensure(c("CP1").count(line) == 2 && c("CP1").total() == 2, || "CP1".into())?;
    ensure(c("PQ(1,1)").count(line) == 4 && c("PQ(1,1)").total() == 4, || "PQ(1,1)".into())?;
    for q in 2..=6u32 {
        // PQ(1,q) is PQ(q,1) with the opposite orientation
        let a = c(&format!("PQ({q},1)"));
        let d = ComponentDescriptor::spheres(0, q - 1);
        ensure(a.count(d) == 2 && a.total() == 2, || format!("PQ({q},1): {a}"))?;
        ensure(quadric_census(1, q) == a, || format!("PQ(1,{q}) encodings differ"))?;
        ensure(quadric_census(q, 1) == a, || format!("PQ({q},1) encodings differ"))?;
    }
    for p in 1..=6 {
        ensure(c(&format!("PQ({p},0)")).is_empty(), || format!("PQ({p},0) not empty"))?;
    }
    for r in 2..=6 {
        let d = c(&format!("DIAG({r})"));
        ensure(d.total() == 1 && d.count(ComponentDescriptor::spheres(r - 1, r - 1)) == 1, || {
            format!("DIAG({r}): {d}")
        })?;
    }
    Ok("CP1, PQ(1,1), PQ(1,q), PQ(p,0), DIAG(r) as stated".into())
}

fn fan_factorization(_: Execution) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut oracle_checked = 0;
    for i in 0..100 {
        let (names, f) = sample::scrambled_product(&mut rng, 3, 5);
        let expected: Vec<Fan> = names.iter().map(|n| sample::small_fan(n)).collect();
        let expected: Vec<&Fan> = expected.iter().collect();
        let r = fankit::factorize(&f).map_err(|e| format!("instance {i}: {e}"))?;
        let got = r.factors();
        let agree = oracle::same_factors_up_to_iso(&got, &expected).map_err(|e| e.to_string())?;
        ensure(agree, || format!("instance {i} {names:?}: {} factors found", got.len()))?;
        let back = r.reassemble().map_err(|e| e.to_string())?;
        ensure(back.same_as(&f), || format!("instance {i}: reassembly differs"))?;
        if f.dim() <= 4 {
            let brute = oracle::brute_force_factors(&f).map_err(|e| e.to_string())?;
            let brute: Vec<&Fan> = brute.iter().collect();
            let agree = oracle::same_factors_up_to_iso(&got, &brute).map_err(|e| e.to_string())?;
            ensure(agree, || format!("instance {i} {names:?}: oracle disagrees"))?;
            oracle_checked += 1;
        }
    }
    Ok(format!("100 products, {oracle_checked} checked against the partition oracle"))
}

fn hirzebruch(_: Execution) -> Result<String, String> {
    let e = |e: fankit::FanError| e.to_string();
    let cp1 = fankit::projective_fan(1).map_err(e)?;
    let f0 = fankit::factorize(&fankit::hirzebruch(0).map_err(e)?).map_err(e)?;
    ensure(f0.blocks.len() == 2, || format!("F0 gave {} blocks", f0.blocks.len()))?;
    for b in &f0.blocks {
        ensure(fankit::isomorphic(&b.factor, &cp1).map_err(e)?.is_some(), || "F0 block is not CP1".into())?;
    }
    for a in 1..=3 {
        let r = fankit::factorize(&fankit::hirzebruch(a).map_err(e)?).map_err(e)?;
        ensure(r.blocks.len() == 1, || format!("F{a} gave {} blocks", r.blocks.len()))?;
    }
    let blown = fankit::f0_blowup().map_err(e)?;
    let target = fankit::connected_sum_fan(2).map_err(e)?;
    let cert = fankit::isomorphic(&blown, &target).map_err(e)?;
    let cert = cert.ok_or("blow-up of F0 is not isomorphic to CP2 # 2(-CP2)")?;
    ensure(blown.transform(&cert).map_err(e)?.same_as(&target), || "certificate does not map the fans".into())?;
    Ok("F0 = CP1 x CP1; F1, F2, F3 indecomposable; Bl(F0) = CP2 # 2(-CP2)".into())
}

/// Every alphabet multiset with `p, q, r <= max_index` and complex
/// dimension at most `max_dim`.
pub fn alphabet_products(max_index: u32, max_dim: u32) -> Vec<ProductManifold> {
    let letters = sample::alphabet(max_index);
    let mut out = Vec::new();
    fn rec(letters: &[FactorKind], start: usize, left: u32, cur: &mut Vec<FactorKind>, out: &mut Vec<ProductManifold>) {
        out.push(ProductManifold::new(cur.clone()).expect("alphabet factors"));
        for i in start..letters.len() {
            let d = letters[i].complex_dim();
            if d <= left {
                cur.push(letters[i]);
                rec(letters, i, left - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&letters, 0, max_dim, &mut Vec::new(), &mut out);
    out
}

fn round_trip(_: Execution) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for i in 0..1000 {
        let v = sample::random_multiplicities(&mut rng, 3, 5, 0.15);
        let b = recovery::bundle(&v.realize()).map_err(|e| e.to_string())?;
        let back = recovery::recover(&b).map_err(|e| format!("instance {i} ({v}): {e}"))?;
        ensure(back == v, || format!("instance {i}: {v} came back as {back}"))?;
    }
    let products = alphabet_products(5, 6);
    let mut seen = HashSet::with_capacity(products.len());
    for pm in &products {
        let b = recovery::bundle(pm).map_err(|e| e.to_string())?;
        ensure(seen.insert(b), || format!("{pm} shares its bundle with another product"))?;
    }
    Ok(format!("1000 round-trips; {} products of dim <= 6 pairwise distinct", products.len()))
}

fn normal_form(_: Execution) -> Result<String, String> {
    let mut checked = 0;
    for total in 0..=8u32 {
        for p in 0..=total {
            for q in 0..=total - p {
                let r = total - p - q;
                let k = normalize(p, q, r).map_err(|e| e.to_string())?;
                let (p2, q2, r2) = k.as_pqr().ok_or("normal form is not four-dimensional")?;
                let (a, b) = (top_invariants(p, q, r), top_invariants(p2, q2, r2));
                ensure(a.chi == b.chi && a.sigma.abs() == b.sigma.abs() && a.spin == b.spin, || {
                    format!("({p},{q},{r}) -> {k} changes invariants")
                })?;
                let again = normalize(p2, q2, r2).map_err(|e| e.to_string())?;
                ensure(again == k, || format!("{k} renormalizes to {again}"))?;
                checked += 1;
            }
        }
    }
    let spot = normalize(1, 0, 1).map_err(|e| e.to_string())?;
    ensure(spot == FactorKind::PQ { p: 2, q: 1 }, || format!("(1,0,1) -> {spot}"))?;
    Ok(format!("{checked} triples; (1,0,1) -> {spot}"))
}

fn disentangling(_: Execution) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for i in 0..50 {
        let (n, m) = sample::random_poincare_split(&mut rng, 8, 6);
        let poly = m.iter().fold(Poly::quadratic(0, 1).pow(n as u32), |acc, (&p, &c)| {
            &acc * &Poly::quadratic(i64::from(p), 1).pow(c as u32)
        });
        let got = recovery::disentangle(&poly).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(got == (n, m.clone()), || format!("instance {i}: {poly} gave {got:?}"))?;
        let brute = oracle::brute_force_disentangle(&poly);
        ensure(brute == vec![(n, m.clone())], || format!("instance {i}: search found {brute:?}"))?;
    }
    Ok("50 polynomials, matching exhaustive search".into())
}

/// `passed/total` line for a set of outcomes.
pub fn summary(outcomes: &[Outcome]) -> String {
    let passed = outcomes.iter().filter(|o| o.passed).count();
    format!("{passed}/{} passed", outcomes.len())
}
