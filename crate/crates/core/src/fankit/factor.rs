use std::collections::{BTreeMap, BTreeSet};

use super::{product_all, Fan, FanError, Result};
use crate::lattice::{IntegerMatrix, LatticeVector};

/// One factor of a fan decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBlock {
    /// Positions, within the reference cone's basis, spanned by this block.
    pub directions: Vec<usize>,
    /// Basis vectors of `Z^n` spanning the block's coordinate subspace.
    pub sub_basis: Vec<LatticeVector>,
    /// The factor fan, written in `sub_basis` coordinates.
    pub factor: Fan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub blocks: Vec<FactorBlock>,
    /// Columns are the concatenated sub-bases, in block order.
    pub change_of_basis: IntegerMatrix,
}

impl FactorizationResult {
    /// Product of the factors pushed through the change of basis; equal to
    /// the factorized fan as ray and cone sets.
    pub fn reassemble(&self) -> Result<Fan> {
        let factors: Vec<Fan> = self.blocks.iter().map(|b| b.factor.clone()).collect();
        product_all(&factors)?.transform(&self.change_of_basis)
    }

    pub fn factors(&self) -> Vec<&Fan> {
        self.blocks.iter().map(|b| &b.factor).collect()
    }
}

/// Coordinates of every ray in the basis given by the least maximal cone.
struct Reference {
    basis: Vec<LatticeVector>,
    coords: Vec<Vec<i64>>,
}

impl Reference {
    fn new(f: &Fan) -> Result<Self> {
        let basis = f.cone_rays(&f.maximal_cones()[0]);
        let inv = IntegerMatrix::from_columns(&basis)?.inverse_unimodular()?;
        let coords = f
            .rays()
            .iter()
            .map(|r| inv.apply(r).map(LatticeVector::into_coords))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { basis, coords })
    }

    fn support(&self, ray: usize) -> impl Iterator<Item = usize> + '_ {
        self.coords[ray]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
    }
}

/// Splits a smooth complete fan into indecomposable factors.
///
/// Basis directions of the least maximal cone are linked whenever some ray
/// has non-zero coordinates on both; the connected components form the
/// first candidate partition. A candidate that fails block verification is
/// coarsened by merging the offending pair of blocks, so the loop ends at
/// the latest with a single block.
pub fn factorize(f: &Fan) -> Result<FactorizationResult> {
    f.require_smooth_complete()?;
    let reference = Reference::new(f)?;
    let n = f.dim();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for ray in 0..f.rays().len() {
        let support: Vec<usize> = reference.support(ray).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for d in 0..n {
        let root = find(&mut parent, d);
        groups.entry(root).or_default().push(d);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();

    loop {
        blocks.sort_by_key(|b| b[0]);
        match verify_blocks(f, &reference, &blocks)? {
            Ok(factors) => return assemble(&reference, blocks, factors),
            Err((i, j)) => {
                let merged = blocks.remove(j.max(i));
                let keep = i.min(j);
                blocks[keep].extend(merged);
                blocks[keep].sort_unstable();
            }
        }
    }
}

/// Verifies a caller-supplied partition of the reference basis directions
/// and, if it is a valid block structure, returns the decomposition along
/// it. `Ok(None)` means the partition is not a product structure.
pub fn factorize_with_partition(f: &Fan, partition: &[Vec<usize>]) -> Result<Option<FactorizationResult>> {
    f.require_smooth_complete()?;
    let reference = Reference::new(f)?;
    let mut blocks: Vec<Vec<usize>> = partition
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    let mut seen: Vec<usize> = blocks.iter().flatten().copied().collect();
    seen.sort_unstable();
    if blocks.iter().any(Vec::is_empty) || seen != (0..f.dim()).collect::<Vec<_>>() {
        return Err(FanError::Precondition("not a partition of the basis directions".into()));
    }
    blocks.sort_by_key(|b| b[0]);
    match verify_blocks(f, &reference, &blocks)? {
        Ok(factors) => assemble(&reference, blocks, factors).map(Some),
        Err(_) => Ok(None),
    }
}

fn assemble(reference: &Reference, blocks: Vec<Vec<usize>>, factors: Vec<Fan>) -> Result<FactorizationResult> {
    let mut columns = Vec::new();
    let mut out = Vec::with_capacity(blocks.len());
    for (dirs, factor) in blocks.into_iter().zip(factors) {
        let sub_basis: Vec<LatticeVector> = dirs.iter().map(|&d| reference.basis[d].clone()).collect();
        columns.extend(sub_basis.iter().cloned());
        out.push(FactorBlock {
            directions: dirs,
            sub_basis,
            factor,
        });
    }
    Ok(FactorizationResult {
        blocks: out,
        change_of_basis: IntegerMatrix::from_columns(&columns)?,
    })
}

/// Either the per-block factor fans, or a pair of block positions to merge.
type Verdict = std::result::Result<Vec<Fan>, (usize, usize)>;

fn verify_blocks(f: &Fan, reference: &Reference, blocks: &[Vec<usize>]) -> Result<Verdict> {
    let k = blocks.len();
    if k == 1 {
        let rays: Vec<usize> = (0..f.rays().len()).collect();
        let cones = f.maximal_cones().iter().map(|c| c.indices().to_vec()).collect();
        let fan = block_fan(reference, &blocks[0], &rays, cones)?
            .ok_or_else(|| FanError::Precondition("fan is not smooth and complete".into()))?;
        return Ok(Ok(vec![fan]));
    }
    let mut block_of = vec![0; f.dim()];
    for (b, dirs) in blocks.iter().enumerate() {
        for &d in dirs {
            block_of[d] = b;
        }
    }

    let mut ray_block = Vec::with_capacity(f.rays().len());
    for ray in 0..f.rays().len() {
        let owners: BTreeSet<usize> = reference.support(ray).map(|d| block_of[d]).collect();
        let mut it = owners.iter();
        let first = *it.next().expect("rays are non-zero");
        if let Some(&second) = it.next() {
            return Ok(Err((first, second)));
        }
        ray_block.push(first);
    }

    // per-cone split into block parts
    let mut parts: Vec<Vec<Vec<usize>>> = Vec::with_capacity(f.maximal_cones().len());
    for cone in f.maximal_cones() {
        let mut split = vec![Vec::new(); k];
        for &r in cone.indices() {
            split[ray_block[r]].push(r);
        }
        let wrong: Vec<usize> = (0..k).filter(|&b| split[b].len() != blocks[b].len()).collect();
        if wrong.len() >= 2 {
            return Ok(Err((wrong[0], wrong[1])));
        }
        parts.push(split);
    }

    let distinct: Vec<BTreeSet<&Vec<usize>>> =
        (0..k).map(|b| parts.iter().map(|p| &p[b]).collect()).collect();
    for a in 0..k {
        for b in a + 1..k {
            let pairs: BTreeSet<(&Vec<usize>, &Vec<usize>)> = parts.iter().map(|p| (&p[a], &p[b])).collect();
            if pairs.len() != distinct[a].len() * distinct[b].len() {
                return Ok(Err((a, b)));
            }
        }
    }

    let mut fans = Vec::with_capacity(k);
    for b in 0..k {
        let rays: Vec<usize> = (0..f.rays().len()).filter(|&r| ray_block[r] == b).collect();
        let cones: Vec<Vec<usize>> = distinct[b].iter().map(|c| (*c).clone()).collect();
        match block_fan(reference, &blocks[b], &rays, cones)? {
            Some(fan) => fans.push(fan),
            None => return Ok(Err((b, if b == 0 { 1 } else { 0 }))),
        }
    }

    let total: usize = distinct.iter().map(BTreeSet::len).product();
    if total != f.maximal_cones().len() {
        return Ok(Err((0, 1)));
    }
    Ok(Ok(fans))
}

/// Builds the fan of one block in reference coordinates restricted to the
/// block's directions; `None` if it is not a smooth complete fan.
fn block_fan(
    reference: &Reference,
    dirs: &[usize],
    rays: &[usize],
    cones: Vec<Vec<usize>>,
) -> Result<Option<Fan>> {
    let local: BTreeMap<usize, usize> = rays.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let vectors = rays
        .iter()
        .map(|&r| LatticeVector::new(dirs.iter().map(|&d| reference.coords[r][d]).collect()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let cones = cones
        .into_iter()
        .map(|c| c.into_iter().map(|r| local[&r]).collect())
        .collect();
    let Ok(fan) = Fan::new(dirs.len(), vectors, cones) else {
        return Ok(None);
    };
    Ok(fan.require_smooth_complete().is_ok().then_some(fan))
}
