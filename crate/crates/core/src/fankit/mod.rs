//! Smooth complete fans: construction, validation, products, factorization
//! into indecomposable fans, and unimodular isomorphism.

mod factor;
mod io;
mod iso;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::lattice::{self, IntegerMatrix, LatticeError, LatticeVector, MAX_DIM, MAX_ENTRY};
use crate::par::{self, Execution};

pub use factor::{factorize, factorize_with_partition, FactorBlock, FactorizationResult};
pub use io::{fan_from_json, fan_to_json, FanParseError};
pub use iso::{isomorphic, isomorphic_with};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("fan dimension {0} is outside 1..={MAX_DIM}")]
    InvalidDimension(usize),
    #[error("ray {ray} has dimension {found}, expected {expected}")]
    RayDimension { ray: usize, expected: usize, found: usize },
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("maximal cone {cone}, position {position}: ray index {index} out of range (fan has {rays} rays)")]
    IndexOutOfRange {
        cone: usize,
        position: usize,
        index: usize,
        rays: usize,
    },
    #[error("maximal cone {0} is empty")]
    EmptyCone(usize),
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("ray {0} lies in no maximal cone")]
    UnusedRay(usize),
    #[error("maximal cone {inner} is contained in maximal cone {outer}")]
    NestedCones { inner: usize, outer: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cone {0} is not a maximal cone of the fan")]
    NotMaximalCone(Cone),
}

pub type Result<T> = std::result::Result<T, FanError>;

/// Strictly increasing indices into a fan's ray list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn is_subset(&self, other: &Cone) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A fan given by its primitive rays and maximal cones.
///
/// Construction normalizes: rays are made primitive and deduplicated, cone
/// index sets are sorted, and the maximal cones are stored in lexicographic
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Cone>,
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(FanError::InvalidDimension(dim));
        }
        let mut kept: Vec<LatticeVector> = Vec::with_capacity(rays.len());
        let mut lookup: HashMap<LatticeVector, usize> = HashMap::new();
        let mut remap = Vec::with_capacity(rays.len());
        for (i, ray) in rays.iter().enumerate() {
            if ray.dim() != dim {
                return Err(FanError::RayDimension {
                    ray: i,
                    expected: dim,
                    found: ray.dim(),
                });
            }
            if ray.is_zero() {
                return Err(FanError::ZeroRay(i));
            }
            let p = ray.primitive()?;
            let idx = *lookup.entry(p.clone()).or_insert_with(|| {
                kept.push(p);
                kept.len() - 1
            });
            remap.push(idx);
        }
        if cones.is_empty() {
            return Err(FanError::NoCones);
        }
        let mut normalized = BTreeSet::new();
        for (c, cone) in cones.iter().enumerate() {
            if cone.is_empty() {
                return Err(FanError::EmptyCone(c));
            }
            let mut idx = Vec::with_capacity(cone.len());
            for (position, &index) in cone.iter().enumerate() {
                if index >= rays.len() {
                    return Err(FanError::IndexOutOfRange {
                        cone: c,
                        position,
                        index,
                        rays: rays.len(),
                    });
                }
                idx.push(remap[index]);
            }
            normalized.insert(Cone::new(idx));
        }
        let cones: Vec<Cone> = normalized.into_iter().collect();
        for (i, a) in cones.iter().enumerate() {
            for (j, b) in cones.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return Err(FanError::NestedCones { inner: i, outer: j });
                }
            }
        }
        let mut used = vec![false; kept.len()];
        for cone in &cones {
            for &i in cone.indices() {
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(FanError::UnusedRay(i));
        }
        Ok(Self {
            dim,
            rays: kept,
            cones,
        })
    }

    /// Convenience constructor from raw coordinates.
    pub fn from_raw(dim: usize, rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<Self> {
        let rays = rays
            .iter()
            .map(|r| LatticeVector::new(r.clone()))
            .collect::<lattice::Result<Vec<_>>>()?;
        Self::new(dim, rays, cones.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone_rays(&self, cone: &Cone) -> Vec<LatticeVector> {
        cone.indices().iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Ray set and cone set, independent of index order.
    pub fn canonical(&self) -> (BTreeSet<LatticeVector>, BTreeSet<BTreeSet<LatticeVector>>) {
        let rays = self.rays.iter().cloned().collect();
        let cones = self
            .cones
            .iter()
            .map(|c| c.indices().iter().map(|&i| self.rays[i].clone()).collect())
            .collect();
        (rays, cones)
    }

    /// Equality of ray sets and cone sets.
    pub fn same_as(&self, other: &Fan) -> bool {
        self.dim == other.dim && self.canonical() == other.canonical()
    }

    /// Image of the fan under a unimodular change of coordinates.
    pub fn transform(&self, m: &IntegerMatrix) -> Result<Fan> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim,
                found: m.rows(),
            }
            .into());
        }
        let det = m.determinant()?;
        if det.abs() != 1 {
            return Err(LatticeError::NotUnimodular(det).into());
        }
        let rays = self
            .rays
            .iter()
            .map(|r| m.apply(r))
            .collect::<lattice::Result<Vec<_>>>()?;
        Fan::new(
            self.dim,
            rays,
            self.cones.iter().map(|c| c.indices().to_vec()).collect(),
        )
    }

    /// Checks the preconditions shared by product, factorization and
    /// isomorphism search.
    pub fn require_smooth_complete(&self) -> Result<()> {
        if !self.is_smooth()? {
            return Err(FanError::Precondition("fan is not smooth".into()));
        }
        if !self.is_complete() {
            return Err(FanError::Precondition("fan is not complete".into()));
        }
        Ok(())
    }

    pub fn is_smooth(&self) -> Result<bool> {
        for cone in &self.cones {
            if cone.len() != self.dim || !lattice::extends_to_basis(&self.cone_rays(cone), self.dim)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Facet criterion: all maximal cones are full-dimensional simplicial,
    /// every codimension-one face lies in exactly two of them, and the
    /// adjacency graph is connected.
    pub fn is_complete(&self) -> bool {
        if self.cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let mut facets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (c, cone) in self.cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let mut facet = cone.indices().to_vec();
                facet.remove(skip);
                facets.entry(facet).or_default().push(c);
            }
        }
        if facets.values().any(|owners| owners.len() != 2) {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.cones.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for owners in facets.values() {
            let (a, b) = (find(&mut parent, owners[0]), find(&mut parent, owners[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.cones.len()).all(|c| find(&mut parent, c) == root)
    }

    pub fn is_simplicial(&self) -> Result<bool> {
        for cone in &self.cones {
            let m = IntegerMatrix::from_columns(&self.cone_rays(cone))?;
            if m.rank()? != cone.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for (i, r) in self.rays.iter().enumerate() {
            writeln!(f, "  ray {i}: {r}")?;
        }
        let cones: Vec<String> = self.cones.iter().map(Cone::to_string).collect();
        write!(f, "  cones: {}", cones.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub strongly_convex: bool,
    pub simplicial: bool,
    pub smooth: bool,
    pub pairwise_faces: bool,
    pub complete: bool,
}

impl ValidationReport {
    pub fn all(&self) -> bool {
        self.strongly_convex && self.simplicial && self.smooth && self.pairwise_faces && self.complete
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags = [
            ("strongly_convex", self.strongly_convex),
            ("simplicial", self.simplicial),
            ("smooth", self.smooth),
            ("pairwise_faces", self.pairwise_faces),
            ("complete", self.complete),
        ];
        for (i, (name, value)) in flags.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{name:<16} {value}")?;
        }
        Ok(())
    }
}

pub fn validate(f: &Fan) -> Result<ValidationReport> {
    validate_with(f, Execution::default())
}

/// Computes every validation flag exactly. The pairwise-face test is the
/// expensive one and is spread over cone pairs.
pub fn validate_with(f: &Fan, exec: Execution) -> Result<ValidationReport> {
    let simplicial = f.is_simplicial()?;
    let mut strongly_convex = true;
    for cone in f.maximal_cones() {
        let cols: Vec<Vec<i64>> = f.cone_rays(cone).into_iter().map(|r| r.into_coords()).collect();
        if has_nonnegative_dependency(&cols)? {
            strongly_convex = false;
            break;
        }
    }
    let pairwise_faces = simplicial && pairwise_faces(f, exec)?;
    Ok(ValidationReport {
        strongly_convex,
        simplicial,
        smooth: f.is_smooth()?,
        pairwise_faces,
        complete: f.is_complete(),
    })
}

/// Whether some non-negative, not identically zero combination of `vectors`
/// vanishes. Decided exactly through circuits: such a combination exists
/// iff some minimal dependent subset has a sign-uniform kernel vector.
pub fn has_nonnegative_dependency(vectors: &[Vec<i64>]) -> lattice::Result<bool> {
    if vectors.iter().any(|v| v.iter().all(|&x| x == 0)) {
        return Ok(true);
    }
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Ok(false);
    };
    let as_vectors: Vec<LatticeVector> = vectors
        .iter()
        .map(|v| LatticeVector::new(v.clone()))
        .collect::<lattice::Result<_>>()?;
    let rank = IntegerMatrix::from_columns(&as_vectors)?.rank()?;
    if rank == vectors.len() {
        return Ok(false);
    }
    let max_size = (rank + 1).min(vectors.len());
    let mut subset = Vec::with_capacity(max_size);
    for size in 2..=max_size {
        if circuit_search(vectors, dim, size, 0, &mut subset)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn circuit_search(
    vectors: &[Vec<i64>],
    dim: usize,
    size: usize,
    start: usize,
    subset: &mut Vec<usize>,
) -> lattice::Result<bool> {
    if subset.len() == size {
        let mut m = IntegerMatrix::zeros(dim, size);
        for (j, &k) in subset.iter().enumerate() {
            for (i, &x) in vectors[k].iter().enumerate() {
                m.set(i, j, x);
            }
        }
        if let Some(kernel) = lattice::kernel_line(&m)? {
            let uniform = kernel.iter().all(|&x| x > 0) || kernel.iter().all(|&x| x < 0);
            return Ok(uniform);
        }
        return Ok(false);
    }
    for k in start..vectors.len() {
        if vectors.len() - k < size - subset.len() {
            break;
        }
        subset.push(k);
        let found = circuit_search(vectors, dim, size, k + 1, subset)?;
        subset.pop();
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For simplicial cones σ = F ∪ A and τ = F ∪ B sharing exactly the rays
/// F, the intersection is the common face iff the images of A and −B in
/// `Z^n / span(F)` admit no non-negative dependency.
fn pairwise_faces(f: &Fan, exec: Execution) -> Result<bool> {
    let cones = f.maximal_cones();
    let pairs: Vec<(usize, usize)> = (0..cones.len())
        .flat_map(|i| (i + 1..cones.len()).map(move |j| (i, j)))
        .collect();
    let failures = par::map_collect(exec, &pairs, |&(i, j)| -> Result<bool> {
        let (s, t) = (&cones[i], &cones[j]);
        let common: Vec<usize> = s.indices().iter().copied().filter(|&k| t.contains(k)).collect();
        let quotient = quotient_map(f, &common)?;
        let mut vectors = Vec::new();
        for &k in s.indices().iter().filter(|k| !common.contains(k)) {
            vectors.push(project(&quotient, f.rays()[k].coords())?);
        }
        for &k in t.indices().iter().filter(|k| !common.contains(k)) {
            let p = project(&quotient, f.rays()[k].coords())?;
            vectors.push(p.into_iter().map(|x| -x).collect());
        }
        if vectors.is_empty() || vectors[0].is_empty() {
            return Ok(false);
        }
        Ok(has_nonnegative_dependency(&vectors)?)
    });
    for r in failures {
        if r? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rows spanning the annihilator of span(common rays); the kernel of the
/// returned map is exactly that span. `None` means the identity.
fn quotient_map(f: &Fan, common: &[usize]) -> Result<Option<IntegerMatrix>> {
    if common.is_empty() {
        return Ok(None);
    }
    let rows: Vec<LatticeVector> = common.iter().map(|&k| f.rays()[k].clone()).collect();
    let snf = lattice::smith_normal_form(&IntegerMatrix::from_vectors(&rows)?)?;
    let r = snf.rank();
    let n = f.dim();
    if r == n {
        return Ok(Some(IntegerMatrix::zeros(1, n)));
    }
    let mut p = IntegerMatrix::zeros(n - r, n);
    for (row, j) in (r..n).enumerate() {
        for i in 0..n {
            p.set(row, i, snf.v.get(i, j));
        }
    }
    Ok(Some(p))
}

fn project(p: &Option<IntegerMatrix>, x: &[i64]) -> Result<Vec<i64>> {
    match p {
        None => Ok(x.to_vec()),
        Some(p) => {
            let mut out = Vec::with_capacity(p.rows());
            for i in 0..p.rows() {
                let mut acc = 0i64;
                for (a, b) in p.row(i).iter().zip(x) {
                    acc = a
                        .checked_mul(*b)
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(LatticeError::Overflow)?;
                }
                out.push(acc);
            }
            Ok(out)
        }
    }
}

/// Product fan: rays of `f1` in the leading coordinates, rays of `f2` in
/// the trailing ones, maximal cones all unions `σ1 ⊔ σ2`.
pub fn product(f1: &Fan, f2: &Fan) -> Result<Fan> {
    f1.require_smooth_complete()?;
    f2.require_smooth_complete()?;
    let total = f1.dim + f2.dim;
    if total > MAX_DIM {
        return Err(FanError::InvalidDimension(total));
    }
    let mut rays = Vec::with_capacity(f1.rays.len() + f2.rays.len());
    for r in &f1.rays {
        rays.push(r.pad(0, total)?);
    }
    for r in &f2.rays {
        rays.push(r.pad(f1.dim, total)?);
    }
    let offset = f1.rays.len();
    let mut cones = Vec::with_capacity(f1.cones.len() * f2.cones.len());
    for a in &f1.cones {
        for b in &f2.cones {
            let mut c = a.indices().to_vec();
            c.extend(b.indices().iter().map(|&i| i + offset));
            cones.push(c);
        }
    }
    Fan::new(total, rays, cones)
}

/// Left-to-right product of several fans.
pub fn product_all(fans: &[Fan]) -> Result<Fan> {
    let (first, rest) = fans
        .split_first()
        .ok_or_else(|| FanError::Precondition("product of an empty list of fans".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| product(&acc, f))
}

/// Hirzebruch surface `F_a`: rays (1,0), (0,1), (-1,a), (0,-1).
pub fn hirzebruch(a: i64) -> Result<Fan> {
    if a.abs() > MAX_ENTRY {
        return Err(LatticeError::EntryTooLarge(a).into());
    }
    Fan::from_raw(
        2,
        &[vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
        &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// Fan of `CP^n`: the standard basis together with minus their sum.
pub fn projective_fan(n: usize) -> Result<Fan> {
    if n == 0 || n > MAX_DIM {
        return Err(FanError::InvalidDimension(n));
    }
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&k| k != skip).collect())
        .collect();
    Fan::from_raw(n, &rays, &cones)
}

/// Star subdivision of a maximal cone at the sum of its generators.
pub fn blowup_at_cone(f: &Fan, cone: &Cone) -> Result<Fan> {
    if !f.cones.contains(cone) {
        return Err(FanError::NotMaximalCone(cone.clone()));
    }
    let mut new_ray = LatticeVector::zero(f.dim)?;
    for r in f.cone_rays(cone) {
        new_ray = new_ray.checked_add(&r)?;
    }
    let mut rays = f.rays.clone();
    rays.push(new_ray);
    let new_index = rays.len() - 1;
    let mut cones: Vec<Vec<usize>> = f
        .cones
        .iter()
        .filter(|c| *c != cone)
        .map(|c| c.indices().to_vec())
        .collect();
    for skip in cone.indices() {
        let mut c: Vec<usize> = cone.indices().iter().copied().filter(|k| k != skip).collect();
        c.push(new_index);
        cones.push(c);
    }
    Fan::new(f.dim, rays, cones)
}

/// A fan of `CP^2 # q·(-CP^2)`: the projective plane blown up `q` times,
/// each time at the lexicographically least maximal cone. For `q <= 2`
/// the blown-up points are distinct fixed points of `CP^2`.
pub fn connected_sum_fan(q: usize) -> Result<Fan> {
    let mut f = projective_fan(2)?;
    for _ in 0..q {
        let c = f.cones[0].clone();
        f = blowup_at_cone(&f, &c)?;
    }
    Ok(f)
}

/// Blow-up of `F_0` at its first maximal cone.
pub fn f0_blowup() -> Result<Fan> {
    let f0 = hirzebruch(0)?;
    let c = f0.cones[0].clone();
    blowup_at_cone(&f0, &c)
}
