//! Degree-2 cohomology data of products of `CP^1`, `pCP^2 # q(-CP^2)`,
//! `r(CP^1 x CP^1)` and `S^4`: quadratic profiles, square-zero counts over
//! `Z/m`, the component census over `R`, and classical invariants.

mod census;
mod count;
mod descriptor;
mod invariants;
mod profile;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use census::{quadric_census, real_census, ComponentDescriptor, RealCensus};
pub use count::{closed_count_mod2, count_square_zero, count_square_zero_with, CountOptions, DEFAULT_BUDGET};
pub use descriptor::parse_product;
pub use invariants::{normalize, poincare, top_invariants, TopInvariants};
pub use profile::{product_profile, profile, QuadraticProfile};

/// Largest `p + q` accepted for a `PQ(p, q)` factor.
pub const MAX_PQ_RANK: u32 = 120;
/// Largest `r` accepted for a `DIAG(r)` factor.
pub const MAX_DIAG_RANK: u32 = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifoldError {
    #[error("invalid factor {0}")]
    InvalidFactor(String),
    #[error("column {column}: {message} (at `{token}`)")]
    Parse {
        column: usize,
        token: String,
        message: String,
    },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("enumeration of {states} states exceeds the budget of {budget} states")]
    BudgetExceeded { states: String, budget: u64 },
    #[error("integer overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, ManifoldError>;

/// Diffeomorphism class of a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FactorKind {
    /// `CP^1`
    ProjLine,
    /// `pCP^2 # q(-CP^2)` with `p >= q >= 0`, `p + q >= 1`
    PQ { p: u32, q: u32 },
    /// `r(CP^1 x CP^1)` with `r >= 1`
    Diag { r: u32 },
    /// `S^4`
    FourSphere,
}

impl FactorKind {
    pub fn pq(p: u32, q: u32) -> Result<Self> {
        let k = FactorKind::PQ { p, q };
        k.validate()?;
        Ok(k)
    }

    pub fn diag(r: u32) -> Result<Self> {
        let k = FactorKind::Diag { r };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FactorKind::PQ { p, q } if q > p => Err(ManifoldError::InvalidFactor(format!(
                "{self}: requires p >= q"
            ))),
            FactorKind::PQ { p, q } if p + q == 0 => Err(ManifoldError::InvalidFactor(format!(
                "{self}: requires p + q >= 1"
            ))),
            FactorKind::PQ { p, q } if p + q > MAX_PQ_RANK => Err(ManifoldError::InvalidFactor(
                format!("{self}: p + q exceeds {MAX_PQ_RANK}"),
            )),
            FactorKind::Diag { r: 0 } => Err(ManifoldError::InvalidFactor(format!(
                "{self}: requires r >= 1"
            ))),
            FactorKind::Diag { r } if r > MAX_DIAG_RANK => Err(ManifoldError::InvalidFactor(
                format!("{self}: r exceeds {MAX_DIAG_RANK}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn complex_dim(&self) -> u32 {
        match self {
            FactorKind::ProjLine => 1,
            _ => 2,
        }
    }

    /// Second Betti number.
    pub fn b2(&self) -> usize {
        match *self {
            FactorKind::ProjLine => 1,
            FactorKind::PQ { p, q } => (p + q) as usize,
            FactorKind::Diag { r } => 2 * r as usize,
            FactorKind::FourSphere => 0,
        }
    }

    /// The connected-sum data `(p, q, r)` of a four-dimensional factor.
    pub fn as_pqr(&self) -> Option<(u32, u32, u32)> {
        match *self {
            FactorKind::ProjLine => None,
            FactorKind::PQ { p, q } => Some((p, q, 0)),
            FactorKind::Diag { r } => Some((0, 0, r)),
            FactorKind::FourSphere => Some((0, 0, 0)),
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::ProjLine => write!(f, "CP1"),
            FactorKind::PQ { p, q } => write!(f, "PQ({p},{q})"),
            FactorKind::Diag { r } => write!(f, "DIAG({r})"),
            FactorKind::FourSphere => write!(f, "S4"),
        }
    }
}

/// A finite product of factors, kept as a sorted multiset. The empty
/// product is a point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductManifold {
    factors: Vec<FactorKind>,
}

impl ProductManifold {
    pub fn new(mut factors: Vec<FactorKind>) -> Result<Self> {
        for k in &factors {
            k.validate()?;
        }
        factors.sort();
        Ok(Self { factors })
    }

    pub fn point() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[FactorKind] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn complex_dim(&self) -> u64 {
        self.factors.iter().map(|k| u64::from(k.complex_dim())).sum()
    }

    pub fn times(&self, other: &ProductManifold) -> ProductManifold {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        factors.sort();
        Self { factors }
    }

    /// Replaces every `DIAG(1) = CP^1 x CP^1` by two `CP^1` factors.
    pub fn split_decomposable(&self) -> ProductManifold {
        let mut factors = Vec::with_capacity(self.factors.len());
        for &k in &self.factors {
            if k == (FactorKind::Diag { r: 1 }) {
                factors.extend([FactorKind::ProjLine, FactorKind::ProjLine]);
            } else {
                factors.push(k);
            }
        }
        factors.sort();
        Self { factors }
    }

    /// Factors with their multiplicities, in sorted order.
    pub fn grouped(&self) -> Vec<(FactorKind, usize)> {
        let mut out: Vec<(FactorKind, usize)> = Vec::new();
        for &k in &self.factors {
            match out.last_mut() {
                Some((last, n)) if *last == k => *n += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }
}

impl fmt::Display for ProductManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "pt");
        }
        for (i, (k, n)) in self.grouped().into_iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if n == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{k}^{n}")?;
            }
        }
        Ok(())
    }
}
