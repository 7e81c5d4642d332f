//! Slow reference implementations used to cross-check the fast paths.

use std::collections::BTreeMap;

use crate::fankit::{self, Fan, FanError};
use crate::lattice::{IntegerMatrix, LatticeVector};
use crate::poly::Poly;
use crate::squarezero::{profile, FactorKind};

/// All set partitions of `0..n`, blocks in order of their least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, used: usize, labels: &mut [usize], out: &mut Vec<Vec<Vec<usize>>>) {
        if i == labels.len() {
            let mut blocks = vec![Vec::new(); used];
            for (x, &l) in labels.iter().enumerate() {
                blocks[l].push(x);
            }
            out.push(blocks);
            return;
        }
        for l in 0..=used {
            labels[i] = l;
            rec(i + 1, used.max(l + 1), labels, out);
        }
    }
    rec(0, 0, &mut labels, &mut out);
    out
}

/// Factor fans along one partition of the least maximal cone's basis, or
/// `None` if the fan is not the product along it. Checked by rebuilding
/// the product and comparing ray and cone sets.
pub fn split_along(f: &Fan, partition: &[Vec<usize>]) -> Result<Option<Vec<Fan>>, FanError> {
    let basis = f.cone_rays(&f.maximal_cones()[0]);
    let inv = IntegerMatrix::from_columns(&basis)?.inverse_unimodular()?;
    let coords: Vec<Vec<i64>> = f
        .rays()
        .iter()
        .map(|r| inv.apply(r).map(LatticeVector::into_coords))
        .collect::<Result<_, _>>()?;

    let mut factors = Vec::with_capacity(partition.len());
    let mut columns = Vec::new();
    for block in partition {
        let inside: Vec<usize> = (0..coords.len())
            .filter(|&r| coords[r].iter().enumerate().all(|(d, &x)| x == 0 || block.contains(&d)))
            .collect();
        let rays = inside
            .iter()
            .map(|&r| LatticeVector::new(block.iter().map(|&d| coords[r][d]).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut cones: Vec<Vec<usize>> = f
            .maximal_cones()
            .iter()
            .map(|c| (0..inside.len()).filter(|&i| c.contains(inside[i])).collect())
            .collect();
        cones.sort();
        cones.dedup();
        let Ok(factor) = Fan::new(block.len(), rays, cones) else {
            return Ok(None);
        };
        if factor.require_smooth_complete().is_err() {
            return Ok(None);
        }
        factors.push(factor);
        columns.extend(block.iter().map(|&d| basis[d].clone()));
    }
    let rebuilt = fankit::product_all(&factors)?.transform(&IntegerMatrix::from_columns(&columns)?)?;
    Ok(rebuilt.same_as(f).then_some(factors))
}

/// The finest product splitting found by trying every set partition.
pub fn brute_force_factors(f: &Fan) -> Result<Vec<Fan>, FanError> {
    f.require_smooth_complete()?;
    let mut best: Option<Vec<Fan>> = None;
    for partition in set_partitions(f.dim()) {
        if best.as_ref().is_some_and(|b| b.len() >= partition.len()) {
            continue;
        }
        if let Some(factors) = split_along(f, &partition)? {
            best = Some(factors);
        }
    }
    Ok(best.expect("the trivial partition always splits"))
}

/// Whether two lists of fans agree as multisets up to isomorphism.
pub fn same_factors_up_to_iso(a: &[&Fan], b: &[&Fan]) -> Result<bool, FanError> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    'outer: for fa in a {
        for (j, fb) in b.iter().enumerate() {
            if !used[j] && fankit::isomorphic(fa, fb)?.is_some() {
                used[j] = true;
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// All `(n, {p: m_p})` with `(1+x^2)^n prod (1+p x+x^2)^(m_p) = poly`,
/// found by enumerating every multiset of quadratic factors.
pub fn brute_force_disentangle(poly: &Poly) -> Vec<(u64, BTreeMap<u32, u64>)> {
    let Some(deg) = poly.degree() else {
        return Vec::new();
    };
    if deg % 2 != 0 {
        return Vec::new();
    }
    let k = deg / 2;
    let max_p = poly.coeff(1).try_into().unwrap_or(0u32);
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    fn rec(
        k: usize,
        lo: u32,
        max_p: u32,
        chosen: &mut Vec<u32>,
        poly: &Poly,
        out: &mut Vec<(u64, BTreeMap<u32, u64>)>,
    ) {
        if chosen.len() == k {
            let prod = chosen
                .iter()
                .fold(Poly::one(), |acc, &p| &acc * &Poly::quadratic(i64::from(p), 1));
            if &prod == poly {
                let mut m = BTreeMap::new();
                let mut n = 0;
                for &p in chosen.iter() {
                    if p == 0 {
                        n += 1;
                    } else {
                        *m.entry(p).or_default() += 1;
                    }
                }
                out.push((n, m));
            }
            return;
        }
        for p in lo..=max_p {
            chosen.push(p);
            rec(k, p, max_p, chosen, poly, out);
            chosen.pop();
        }
    }
    rec(k, 0, max_p, &mut chosen, poly, &mut out);
    out
}

/// `|A(k; Z/2)|` by counting vectors of the defining equation directly:
/// even-weight vectors for `PQ`, solutions of `sum c_i d_i = 0` for `DIAG`.
pub fn equation_count_mod2(k: FactorKind) -> u64 {
    let vectors = |bits: u32| 0u64..(1u64 << bits);
    match k {
        FactorKind::ProjLine => 1,
        FactorKind::PQ { p, q } => vectors(p + q).filter(|v| v.count_ones() % 2 == 0).count() as u64 - 1,
        FactorKind::Diag { r } => {
            vectors(2 * r)
                .filter(|v| (v & (v >> r) & ((1 << r) - 1)).count_ones() % 2 == 0)
                .count() as u64
                - 1
        }
        FactorKind::FourSphere => 0,
    }
}

/// Square-zero count of a single factor's profile by plain enumeration
/// over `Z`-valued squares reduced mod `m`.
pub fn naive_count(k: FactorKind, m: u64) -> u64 {
    let p = profile(k).expect("valid factor");
    let b2 = p.b2();
    let total = m.pow(b2 as u32);
    let mut count = 0;
    for idx in 1..total {
        let mut rest = idx;
        let coeffs: Vec<i64> = (0..b2)
            .map(|_| {
                let d = rest % m;
                rest /= m;
                d as i64
            })
            .collect();
        if p.square(&coeffs).iter().all(|&x| x.rem_euclid(m as i64) == 0) {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fankit::{hirzebruch, product, projective_fan};
    use crate::squarezero::closed_count_mod2;

    #[test]
    fn bell_numbers() {
        let sizes: Vec<usize> = (0..=5).map(|n| set_partitions(n).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn splits_f0_and_products() {
        let f0 = hirzebruch(0).unwrap();
        assert_eq!(brute_force_factors(&f0).unwrap().len(), 2);
        assert_eq!(brute_force_factors(&hirzebruch(1).unwrap()).unwrap().len(), 1);
        let f = product(&projective_fan(2).unwrap(), &hirzebruch(3).unwrap()).unwrap();
        let parts = brute_force_factors(&f).unwrap();
        assert_eq!(parts.len(), 2);
        let expected = [projective_fan(2).unwrap(), hirzebruch(3).unwrap()];
        assert!(same_factors_up_to_iso(&parts.iter().collect::<Vec<_>>(), &expected.iter().collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn disentangle_search() {
        let poly = &Poly::quadratic(0, 1) * &Poly::quadratic(3, 1);
        assert_eq!(brute_force_disentangle(&poly), vec![(1, BTreeMap::from([(3, 1)]))]);
        assert!(brute_force_disentangle(&Poly::from_coeffs([1, 1])).is_empty());
    }

    #[test]
    fn equation_counts_match_closed_forms() {
        for k in [
            FactorKind::ProjLine,
            FactorKind::PQ { p: 3, q: 0 },
            FactorKind::PQ { p: 4, q: 2 },
            FactorKind::Diag { r: 1 },
            FactorKind::Diag { r: 4 },
        ] {
            assert_eq!(u128::from(equation_count_mod2(k)), closed_count_mod2(k), "{k}");
        }
    }

    #[test]
    fn naive_counts() {
        assert_eq!(naive_count(FactorKind::Diag { r: 2 }, 2), 9);
        assert_eq!(naive_count(FactorKind::PQ { p: 2, q: 2 }, 2), 7);
    }
}
