use serde::Serialize;

use super::{FactorKind, ProductManifold, Result};
use crate::poly::Poly;

/// Poincaré polynomial in a variable `x` of degree two.
pub fn poincare(pm: &ProductManifold) -> Poly {
    pm.factors().iter().fold(Poly::one(), |acc, k| &acc * &factor_poincare(*k))
}

fn factor_poincare(k: FactorKind) -> Poly {
    match k {
        FactorKind::ProjLine => Poly::from_coeffs([1, 1]),
        FactorKind::PQ { p, q } => Poly::quadratic(i64::from(p + q), 1),
        FactorKind::Diag { r } => Poly::quadratic(2 * i64::from(r), 1),
        FactorKind::FourSphere => Poly::quadratic(0, 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TopInvariants {
    pub chi: i64,
    pub sigma: i64,
    pub spin: bool,
}

/// Euler characteristic, signature and spin-ness of
/// `S^4 # pCP^2 # q(-CP^2) # r(CP^1 x CP^1)`.
pub fn top_invariants(p: u32, q: u32, r: u32) -> TopInvariants {
    let (p, q, r) = (i64::from(p), i64::from(q), i64::from(r));
    TopInvariants {
        chi: p + q + 2 * r + 2,
        sigma: p - q,
        spin: p + q == 0,
    }
}

/// Normal form of `S^4 # pCP^2 # q(-CP^2) # r(CP^1 x CP^1)`.
///
/// Spin sums stay `DIAG(r)` (or `S4`). Otherwise each `CP^1 x CP^1`
/// summand is traded for `CP^2 # -CP^2`, and orientation is chosen so that
/// the result is `PQ(p', q')` with `p' >= q'`.
pub fn normalize(p: u32, q: u32, r: u32) -> Result<FactorKind> {
    if p + q == 0 {
        return if r == 0 {
            Ok(FactorKind::FourSphere)
        } else {
            FactorKind::diag(r)
        };
    }
    let (p, q) = (p + r, q + r);
    FactorKind::pq(p.max(q), p.min(q))
}
