//! Recovering the factor multiset of a product from its invariants.
//!
//! A product over the alphabet `CP1`, `PQ(p,q)`, `DIAG(r)` (`r >= 2`) and
//! `S4` is summarized by an [`InvariantBundle`]: the real census, the
//! `Z/2` counts restricted to the line class and to each diagonal sphere
//! class, the Poincaré polynomial, and the complex dimension. [`recover`]
//! inverts [`bundle`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::Poly;
use crate::squarezero::{
    closed_count_mod2, poincare, real_census, ComponentDescriptor, FactorKind, ManifoldError,
    ProductManifold, RealCensus,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("{0} is outside the recoverable alphabet; split CP1 x CP1 into CP1^2 first")]
    Alphabet(FactorKind),
    #[error("inconsistent bundle: {0}")]
    Inconsistent(String),
    #[error("count overflow")]
    Overflow,
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

pub type Result<T> = std::result::Result<T, RecoveryError>;

fn inconsistent(msg: impl Into<String>) -> RecoveryError {
    RecoveryError::Inconsistent(msg.into())
}

/// Census classes that carry a restricted `Z/2` count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    /// One-dimensional components.
    Line,
    /// Components `S^s x S^s x R`, `s >= 1`.
    Diagonal(u32),
}

impl ClassKey {
    pub fn descriptor(&self) -> ComponentDescriptor {
        match *self {
            ClassKey::Line => ComponentDescriptor::LINE,
            ClassKey::Diagonal(s) => ComponentDescriptor::spheres(s, s),
        }
    }

    fn of_factor(k: FactorKind) -> Option<ClassKey> {
        match k {
            FactorKind::ProjLine | FactorKind::PQ { p: 1, q: 1 } | FactorKind::Diag { r: 1 } => {
                Some(ClassKey::Line)
            }
            FactorKind::PQ { p, q } if p == q => Some(ClassKey::Diagonal(p - 1)),
            FactorKind::Diag { r } => Some(ClassKey::Diagonal(r - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.descriptor().fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantBundle {
    pub census: RealCensus,
    pub class_mod2_counts: BTreeMap<ClassKey, u128>,
    pub poincare_poly: Poly,
    pub complex_dim: u64,
}

#[derive(Serialize)]
struct BundleDoc {
    census: BTreeMap<String, u64>,
    class_mod2_counts: BTreeMap<String, u128>,
    complex_dim: u64,
    poincare_poly: String,
}

impl InvariantBundle {
    pub fn class_count(&self, key: ClassKey) -> u128 {
        self.class_mod2_counts.get(&key).copied().unwrap_or(0)
    }

    /// Canonical JSON: keys sorted, one document.
    pub fn to_json(&self) -> String {
        let doc = BundleDoc {
            census: self.census.iter().map(|(d, n)| (d.to_string(), n)).collect(),
            class_mod2_counts: self
                .class_mod2_counts
                .iter()
                .map(|(k, &n)| (k.to_string(), n))
                .collect(),
            complex_dim: self.complex_dim,
            poincare_poly: self.poincare_poly.to_string(),
        };
        serde_json::to_string_pretty(&doc).expect("bundle serializes")
    }
}

impl fmt::Display for InvariantBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "census: {}", self.census)?;
        let counts: Vec<String> = self
            .class_mod2_counts
            .iter()
            .map(|(k, n)| format!("{k}: {n}"))
            .collect();
        writeln!(f, "class counts mod 2: {{{}}}", counts.join(", "))?;
        writeln!(f, "poincare: {}", self.poincare_poly)?;
        write!(f, "complex dim: {}", self.complex_dim)
    }
}

/// Factor multiplicities of a product over the alphabet. Only non-zero
/// counts are stored, so equality is multiset equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct MultiplicityVector {
    /// `CP1`
    pub m: u64,
    /// `PQ(p, q)`
    pub m_pq: BTreeMap<(u32, u32), u64>,
    /// `DIAG(r)`, `r >= 2`
    pub n_r: BTreeMap<u32, u64>,
    /// `S4`
    pub n: u64,
}

impl MultiplicityVector {
    pub fn from_product(pm: &ProductManifold) -> Result<Self> {
        let mut v = MultiplicityVector::default();
        for &k in pm.factors() {
            v.add(k, 1)?;
        }
        Ok(v)
    }

    pub fn add(&mut self, k: FactorKind, count: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        k.validate()?;
        match k {
            FactorKind::ProjLine => self.m += count,
            FactorKind::PQ { p, q } => *self.m_pq.entry((p, q)).or_default() += count,
            FactorKind::Diag { r: 1 } => return Err(RecoveryError::Alphabet(k)),
            FactorKind::Diag { r } => *self.n_r.entry(r).or_default() += count,
            FactorKind::FourSphere => self.n += count,
        }
        Ok(())
    }

    pub fn realize(&self) -> ProductManifold {
        let mut factors = Vec::new();
        let mut push = |k: FactorKind, n: u64| factors.extend(std::iter::repeat_n(k, n as usize));
        push(FactorKind::ProjLine, self.m);
        for (&(p, q), &c) in &self.m_pq {
            push(FactorKind::PQ { p, q }, c);
        }
        for (&r, &c) in &self.n_r {
            push(FactorKind::Diag { r }, c);
        }
        push(FactorKind::FourSphere, self.n);
        ProductManifold::new(factors).expect("multiplicity vector holds valid factors")
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.m > 0 {
            parts.push(format!("m={}", self.m));
        }
        for ((p, q), c) in &self.m_pq {
            parts.push(format!("m_{{{p},{q}}}={c}"));
        }
        for (r, c) in &self.n_r {
            parts.push(format!("n_{r}={c}"));
        }
        if self.n > 0 {
            parts.push(format!("n={}", self.n));
        }
        if parts.is_empty() {
            write!(f, "(empty)")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

fn check_alphabet(pm: &ProductManifold) -> Result<()> {
    match pm.factors().iter().find(|k| **k == FactorKind::Diag { r: 1 }) {
        Some(&k) => Err(RecoveryError::Alphabet(k)),
        None => Ok(()),
    }
}

pub fn bundle(pm: &ProductManifold) -> Result<InvariantBundle> {
    check_alphabet(pm)?;
    let mut class_mod2_counts: BTreeMap<ClassKey, u128> = BTreeMap::new();
    for &k in pm.factors() {
        if let Some(key) = ClassKey::of_factor(k) {
            let slot = class_mod2_counts.entry(key).or_default();
            *slot = slot.checked_add(closed_count_mod2(k)).ok_or(RecoveryError::Overflow)?;
        }
    }
    Ok(InvariantBundle {
        census: real_census(pm),
        class_mod2_counts,
        poincare_poly: poincare(pm),
        complex_dim: pm.complex_dim(),
    })
}

/// `(2^(2p-1) - 1, 2^(2p-1) + 2^(p-1) - 1)`: the `Z/2` counts of
/// `PQ(p,p)` and `DIAG(p)`.
pub fn diagonal_coefficients(p: u32) -> (u128, u128) {
    (
        closed_count_mod2(FactorKind::PQ { p, q: p }),
        closed_count_mod2(FactorKind::Diag { r: p }),
    )
}

pub fn recover(b: &InvariantBundle) -> Result<MultiplicityVector> {
    let mut v = MultiplicityVector::default();

    for (d, count) in b.census.iter() {
        let (low, high) = d.sphere_dims();
        if low == high {
            continue;
        }
        if low == 0 {
            // PQ(p,1), p >= 2: two copies of S^(p-1) x R
            if count % 2 != 0 {
                return Err(inconsistent(format!("odd count {count} for class {d}")));
            }
            v.add(FactorKind::PQ { p: high + 1, q: 1 }, count / 2)?;
        } else {
            v.add(FactorKind::PQ { p: high + 1, q: low + 1 }, count)?;
        }
    }

    // 2m + 4 m11 = L, m + m11 = C
    let lines = u128::from(b.census.count(ComponentDescriptor::LINE));
    let c = b.class_count(ClassKey::Line);
    let twice_m11 = lines
        .checked_sub(2 * c)
        .filter(|t| t % 2 == 0)
        .ok_or_else(|| inconsistent(format!("line class: {lines} components, count {c}")))?;
    let m11 = twice_m11 / 2;
    let m = c
        .checked_sub(m11)
        .ok_or_else(|| inconsistent(format!("line class: {lines} components, count {c}")))?;
    v.add(FactorKind::ProjLine, to_u64(m)?)?;
    v.add(FactorKind::PQ { p: 1, q: 1 }, to_u64(m11)?)?;

    for (&key, &c) in &b.class_mod2_counts {
        let ClassKey::Diagonal(_) = key else { continue };
        if b.census.count(key.descriptor()) == 0 && c != 0 {
            return Err(inconsistent(format!("count {c} for empty class {key}")));
        }
    }
    for (d, total) in b.census.iter() {
        let (low, high) = d.sphere_dims();
        if low != high || low == 0 {
            continue;
        }
        let p = low + 1;
        if p > crate::squarezero::MAX_DIAG_RANK {
            return Err(inconsistent(format!("class {d} beyond the supported range")));
        }
        let key = ClassKey::Diagonal(low);
        let c = b.class_count(key);
        let (a, bb) = diagonal_coefficients(p);
        // m_pp + n_p = N, a m_pp + bb n_p = C, bb - a = 2^(p-1)
        let total = u128::from(total);
        let excess = a
            .checked_mul(total)
            .and_then(|base| c.checked_sub(base))
            .ok_or_else(|| inconsistent(format!("class {key}: {total} components, count {c}")))?;
        let step = bb - a;
        if excess % step != 0 || excess / step > total {
            return Err(inconsistent(format!("class {key}: {total} components, count {c}")));
        }
        let n_p = excess / step;
        v.add(FactorKind::PQ { p, q: p }, to_u64(total - n_p)?)?;
        v.add(FactorKind::Diag { r: p }, to_u64(n_p)?)?;
    }

    let known = poincare(&v.realize());
    let rest = b
        .poincare_poly
        .div_exact(&known)
        .ok_or_else(|| inconsistent("Poincaré polynomial not divisible by recovered factors"))?;
    let (n, m_p0) = disentangle(&rest)?;
    v.add(FactorKind::FourSphere, n)?;
    for (p, c) in m_p0 {
        v.add(FactorKind::PQ { p, q: 0 }, c)?;
    }

    // every invariant must be reproduced, not just the ones solved for
    let rebuilt = bundle(&v.realize())?;
    if &rebuilt != b {
        return Err(inconsistent("recovered product does not reproduce the bundle"));
    }
    Ok(v)
}

fn to_u64(x: u128) -> Result<u64> {
    u64::try_from(x).map_err(|_| RecoveryError::Overflow)
}

/// Writes `poly = (1 + x^2)^n * prod_p (1 + p x + x^2)^(m_p)` and returns
/// `(n, {p: m_p})`, dividing greedily for `p` from the linear coefficient
/// down to 1.
pub fn disentangle(poly: &Poly) -> Result<(u64, BTreeMap<u32, u64>)> {
    let mut rest = poly.clone();
    let mut m_p = BTreeMap::new();
    let linear = rest.coeff(1);
    if linear < BigInt::zero() {
        return Err(inconsistent(format!("negative linear coefficient in {poly}")));
    }
    let top = linear
        .to_u32()
        .filter(|&t| t <= crate::squarezero::MAX_PQ_RANK * 10_000)
        .ok_or_else(|| inconsistent(format!("linear coefficient of {poly} out of range")))?;
    for p in (1..=top).rev() {
        if rest.coeff(1) < BigInt::from(p) {
            continue;
        }
        let f = Poly::quadratic(i64::from(p), 1);
        while let Some(q) = rest.div_exact(&f) {
            *m_p.entry(p).or_default() += 1;
            rest = q;
        }
    }
    let sphere = Poly::quadratic(0, 1);
    let mut n = 0;
    while let Some(q) = rest.div_exact(&sphere) {
        n += 1;
        rest = q;
    }
    if !rest.is_one() {
        return Err(inconsistent(format!("leftover factor {rest} in {poly}")));
    }
    Ok((n, m_p))
}

/// Multiset equality of two alphabet products.
pub fn same_decomposition(a: &ProductManifold, b: &ProductManifold) -> Result<bool> {
    check_alphabet(a)?;
    check_alphabet(b)?;
    Ok(a == b)
}

/// Whether `a` and `b` have the same factors, checking on this instance
/// that a common factor `c` neither creates nor hides a difference in the
/// invariants.
pub fn cancellation_check(a: &ProductManifold, b: &ProductManifold, c: &ProductManifold) -> Result<bool> {
    let same = same_decomposition(a, b)?;
    check_alphabet(c)?;
    let plain = bundle(a)? == bundle(b)?;
    let with_c = bundle(&a.times(c))? == bundle(&b.times(c))?;
    if plain != with_c {
        return Err(inconsistent(format!(
            "cancellation of {c} changes bundle equality of {a} and {b}"
        )));
    }
    if plain != same {
        return Err(inconsistent(format!(
            "bundle equality of {a} and {b} disagrees with the factor multisets"
        )));
    }
    Ok(same)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squarezero::parse_product;

    fn pm(s: &str) -> ProductManifold {
        parse_product(s).unwrap()
    }

    fn round_trip(s: &str) -> MultiplicityVector {
        let v = recover(&bundle(&pm(s)).unwrap()).unwrap();
        assert_eq!(v.realize(), pm(s));
        v
    }

    #[test]
    fn empty_bundle() {
        let b = bundle(&ProductManifold::point()).unwrap();
        assert!(b.census.is_empty());
        assert!(b.class_mod2_counts.is_empty());
        assert!(b.poincare_poly.is_one());
        assert_eq!(b.complex_dim, 0);
        assert_eq!(recover(&b).unwrap(), MultiplicityVector::default());
    }

    #[test]
    fn line_class() {
        let b = bundle(&pm("CP1^2 * PQ(1,1)")).unwrap();
        assert_eq!(b.census.count(ComponentDescriptor::LINE), 8);
        assert_eq!(b.census.total(), 8);
        assert_eq!(b.class_count(ClassKey::Line), 3);
        let v = recover(&b).unwrap();
        assert_eq!(v.m, 2);
        assert_eq!(v.m_pq, BTreeMap::from([((1, 1), 1)]));
        assert!(v.n_r.is_empty());
        assert_eq!(v.n, 0);
    }

    #[test]
    fn diagonal_class() {
        let b = bundle(&pm("PQ(2,2) * DIAG(2)")).unwrap();
        assert_eq!(b.census.count(ComponentDescriptor::spheres(1, 1)), 2);
        assert_eq!(b.class_count(ClassKey::Diagonal(1)), 16);
        let v = recover(&b).unwrap();
        assert_eq!(v.m_pq, BTreeMap::from([((2, 2), 1)]));
        assert_eq!(v.n_r, BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn polynomial_step() {
        let v = round_trip("S4 * PQ(3,0)");
        assert_eq!(v.n, 1);
        assert_eq!(v.m_pq, BTreeMap::from([((3, 0), 1)]));
        round_trip("PQ(2,0)^2 * CP1^3 * S4^2 * PQ(1,0)");
        round_trip("PQ(4,1) * PQ(5,3) * PQ(2,1)^2 * DIAG(3) * PQ(3,3)^2");
    }

    #[test]
    fn disentangles_repeated_roots() {
        // (1+x)^2 is PQ(2,0), not CP1^2, once CP1 has been divided out
        let poly = Poly::quadratic(2, 1).pow(2);
        let (n, m) = disentangle(&poly).unwrap();
        assert_eq!((n, m), (0, BTreeMap::from([(2, 2)])));
        assert!(disentangle(&Poly::from_coeffs([1, 1])).is_err());
    }

    #[test]
    fn diagonal_systems_are_nonsingular() {
        for p in 1..=10u32 {
            let (a, b) = diagonal_coefficients(p);
            assert_eq!(b - a, 1u128 << (p - 1));
        }
    }

    #[test]
    fn alphabet_is_enforced() {
        assert_eq!(
            bundle(&pm("DIAG(1) * CP1")),
            Err(RecoveryError::Alphabet(FactorKind::Diag { r: 1 }))
        );
        assert!(same_decomposition(&pm("PQ(1,1)"), &pm("DIAG(1)")).is_err());
        let split = pm("DIAG(1)").split_decomposable();
        assert!(!same_decomposition(&pm("PQ(1,1)"), &split).unwrap());
        assert!(same_decomposition(&pm("CP1^2"), &split).unwrap());
    }

    #[test]
    fn decomposition_is_a_multiset() {
        assert!(same_decomposition(&pm("CP1 * PQ(2,1)"), &pm("PQ(2,1) * CP1")).unwrap());
    }

    #[test]
    fn cancellation() {
        let (a, b, c) = (pm("PQ(2,2)"), pm("DIAG(2)"), pm("CP1"));
        assert!(!cancellation_check(&a, &b, &c).unwrap());
        let ac = bundle(&a.times(&c)).unwrap();
        let bc = bundle(&b.times(&c)).unwrap();
        assert_eq!(ac.class_count(ClassKey::Diagonal(1)), 7);
        assert_eq!(bc.class_count(ClassKey::Diagonal(1)), 9);
        assert_eq!(ac.census, bc.census);
        assert_eq!(ac.poincare_poly, bc.poincare_poly);

        assert!(cancellation_check(&a, &a, &pm("S4 * PQ(3,1)")).unwrap());
        assert!(!cancellation_check(&pm("CP1"), &pm("PQ(1,1)"), &pm("DIAG(3)")).unwrap());
    }

    #[test]
    fn inconsistent_bundles_are_rejected() {
        let mut b = bundle(&pm("CP1")).unwrap();
        b.class_mod2_counts.insert(ClassKey::Line, 2);
        assert!(matches!(recover(&b), Err(RecoveryError::Inconsistent(_))));

        let mut b = bundle(&pm("PQ(3,3)")).unwrap();
        b.class_mod2_counts.insert(ClassKey::Diagonal(2), 33);
        assert!(matches!(recover(&b), Err(RecoveryError::Inconsistent(_))));

        let mut b = bundle(&pm("PQ(3,0)")).unwrap();
        b.poincare_poly = Poly::from_coeffs([1, 3, 2]);
        assert!(matches!(recover(&b), Err(RecoveryError::Inconsistent(_))));

        let mut b = bundle(&pm("S4")).unwrap();
        b.complex_dim = 3;
        assert!(matches!(recover(&b), Err(RecoveryError::Inconsistent(_))));
    }

    #[test]
    fn canonical_json() {
        let b = bundle(&pm("CP1 * DIAG(2)")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&b.to_json()).unwrap();
        assert_eq!(v["census"]["LINE"], 2);
        assert_eq!(v["census"]["S1xS1xR"], 1);
        assert_eq!(v["class_mod2_counts"]["S1xS1xR"], 9);
        assert_eq!(v["complex_dim"], 3);
        assert_eq!(v["poincare_poly"], "1 + 5x + 5x^2 + x^3");
        assert_eq!(b.to_json(), bundle(&pm("DIAG(2) * CP1")).unwrap().to_json());
    }
}
