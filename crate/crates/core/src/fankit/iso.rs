use std::collections::{HashMap, HashSet};

use super::{Cone, Fan, Result};
use crate::lattice::{IntegerMatrix, LatticeVector};
use crate::par::{self, Execution};

pub fn isomorphic(f1: &Fan, f2: &Fan) -> Result<Option<IntegerMatrix>> {
    isomorphic_with(f1, f2, Execution::default())
}

/// Searches for a unimodular `U` carrying the rays of `f1` bijectively onto
/// the rays of `f2` and maximal cones onto maximal cones.
///
/// The first maximal cone of `f1` is a lattice basis, so each ordered
/// maximal cone of `f2` determines one candidate. Candidates are tried in
/// cone order, then lexicographic ray order; the certificate returned is
/// the first success in that order whatever the execution strategy.
pub fn isomorphic_with(f1: &Fan, f2: &Fan, exec: Execution) -> Result<Option<IntegerMatrix>> {
    if f1.dim() != f2.dim() {
        return Ok(None);
    }
    f1.require_smooth_complete()?;
    f2.require_smooth_complete()?;
    if f1.rays().len() != f2.rays().len() || f1.maximal_cones().len() != f2.maximal_cones().len() {
        return Ok(None);
    }
    let source = &f1.maximal_cones()[0];
    let source_inv = IntegerMatrix::from_columns(&f1.cone_rays(source))?.inverse_unimodular()?;

    let target_rays: HashMap<&LatticeVector, usize> =
        f2.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let target_cones: HashSet<&Cone> = f2.maximal_cones().iter().collect();

    let search = |target: &Cone| -> Option<Result<IntegerMatrix>> {
        let mut order = target.indices().to_vec();
        loop {
            let columns: Vec<LatticeVector> = order.iter().map(|&i| f2.rays()[i].clone()).collect();
            match candidate(f1, &columns, &source_inv, &target_rays, &target_cones) {
                Ok(Some(u)) => return Some(Ok(u)),
                Ok(None) => {}
                Err(e) => return Some(Err(e)),
            }
            if !next_permutation(&mut order) {
                return None;
            }
        }
    };
    par::find_map_first(exec, f2.maximal_cones(), search).transpose()
}

fn candidate(
    f1: &Fan,
    columns: &[LatticeVector],
    source_inv: &IntegerMatrix,
    target_rays: &HashMap<&LatticeVector, usize>,
    target_cones: &HashSet<&Cone>,
) -> Result<Option<IntegerMatrix>> {
    let u = IntegerMatrix::from_columns(columns)?.mul(source_inv)?;
    let mut image = Vec::with_capacity(f1.rays().len());
    let mut hit = vec![false; target_rays.len()];
    for r in f1.rays() {
        // a ray image too large for the lattice bounds cannot be a target ray
        let Ok(v) = u.apply(r) else {
            return Ok(None);
        };
        match target_rays.get(&v) {
            Some(&j) if !hit[j] => {
                hit[j] = true;
                image.push(j);
            }
            _ => return Ok(None),
        }
    }
    let all_cones_map = f1.maximal_cones().iter().all(|c| {
        let mapped = Cone::new(c.indices().iter().map(|&i| image[i]).collect());
        target_cones.contains(&mapped)
    });
    Ok(all_cones_map.then_some(u))
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fankit::{connected_sum_fan, f0_blowup, hirzebruch, projective_fan, blowup_at_cone};

    fn check_certificate(f1: &Fan, f2: &Fan, u: &IntegerMatrix) {
        assert!(u.is_unimodular());
        assert!(f1.transform(u).unwrap().same_as(f2));
    }

    #[test]
    fn permutations_in_order() {
        let mut v = vec![0, 1, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn reflexive_with_identity() {
        let f = hirzebruch(3).unwrap();
        let u = isomorphic(&f, &f).unwrap().unwrap();
        assert_eq!(u, IntegerMatrix::identity(2));
    }

    #[test]
    fn f2_is_not_f0() {
        assert_eq!(isomorphic(&hirzebruch(2).unwrap(), &hirzebruch(0).unwrap()).unwrap(), None);
    }

    #[test]
    fn hirzebruch_sign_symmetry() {
        let (a, b) = (hirzebruch(2).unwrap(), hirzebruch(-2).unwrap());
        let u = isomorphic(&a, &b).unwrap().unwrap();
        check_certificate(&a, &b, &u);
    }

    #[test]
    fn blown_up_plane_is_f1() {
        let p2 = projective_fan(2).unwrap();
        for cone in p2.maximal_cones() {
            let b = blowup_at_cone(&p2, cone).unwrap();
            let f1 = hirzebruch(1).unwrap();
            let u = isomorphic(&b, &f1).unwrap().expect("blow-up of CP^2 is F_1");
            check_certificate(&b, &f1, &u);
        }
    }

    #[test]
    fn blown_up_quadric_is_twice_blown_up_plane() {
        let a = f0_blowup().unwrap();
        let b = connected_sum_fan(2).unwrap();
        let u = isomorphic(&a, &b).unwrap().unwrap();
        check_certificate(&a, &b, &u);
    }

    #[test]
    fn dimension_mismatch_is_absent() {
        assert_eq!(
            isomorphic(&projective_fan(1).unwrap(), &projective_fan(2).unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn strategies_agree() {
        let a = f0_blowup().unwrap();
        let b = connected_sum_fan(2).unwrap();
        assert_eq!(
            isomorphic_with(&a, &b, Execution::Sequential).unwrap(),
            isomorphic_with(&a, &b, Execution::Parallel).unwrap()
        );
    }
}
