use super::{FactorKind, ManifoldError, QuadraticProfile, Result};
use crate::par::{self, Execution};

/// Default cap on the number of coefficient vectors enumerated.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub execution: Execution,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
        }
    }
}

pub fn count_square_zero(p: &QuadraticProfile, modulus: u64) -> Result<u64> {
    count_square_zero_with(p, modulus, CountOptions::default())
}

/// Number of non-zero `u` in `(Z/m)^b2` with `u^2 = 0` in `(Z/m)^b4`,
/// where `u^2` is the quadratic form of [`QuadraticProfile::square`].
///
/// Vectors are enumerated in odometer order (coordinate 0 fastest). The
/// state space `m^b2` must fit in the budget; otherwise the count is
/// refused rather than truncated.
pub fn count_square_zero_with(p: &QuadraticProfile, modulus: u64, opts: CountOptions) -> Result<u64> {
    if modulus < 2 {
        return Err(ManifoldError::InvalidModulus(modulus));
    }
    let states = u32::try_from(p.b2())
        .ok()
        .and_then(|b2| modulus.checked_pow(b2))
        .filter(|&s| s <= opts.budget)
        .ok_or_else(|| ManifoldError::BudgetExceeded {
            states: format!("{modulus}^{}", p.b2()),
            budget: opts.budget,
        })?;

    let m = u128::from(modulus);
    // monomial weights reduced mod m, grouped by H^4 coordinate
    let mut terms: Vec<Vec<(usize, usize, u128)>> = vec![Vec::new(); p.b4()];
    for j in 0..p.b2() {
        for i in 0..=j {
            for (k, &c) in p.product(i, j).iter().enumerate() {
                let w = i128::from(c).rem_euclid(m as i128) as u128;
                if w != 0 {
                    terms[k].push((i, j, w));
                }
            }
        }
    }
    terms.retain(|t| !t.is_empty());
    let b2 = p.b2();

    let zeros = par::sum_over_chunks(opts.execution, states, CHUNK, |start, end| {
        let mut digits = vec![0u128; b2];
        let mut rest = start;
        for d in digits.iter_mut() {
            *d = u128::from(rest % modulus);
            rest /= modulus;
        }
        let mut count = 0u64;
        for _ in start..end {
            let vanishes = terms.iter().all(|row| {
                row.iter()
                    .fold(0u128, |acc, &(i, j, w)| (acc + w * digits[i] % m * digits[j]) % m)
                    == 0
            });
            if vanishes {
                count += 1;
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        Ok::<u64, ManifoldError>(count)
    })?;
    // the zero vector always squares to zero
    Ok(zeros - 1)
}

/// Closed-form size of the square-zero set over `Z/2`.
///
/// `PQ(p, q)` counts non-zero even-weight vectors of `(Z/2)^(p+q)`,
/// `2^(p+q-1) - 1`; `DIAG(r)` counts non-zero solutions of
/// `c_1 d_1 + ... + c_r d_r = 0`, `2^(2r-1) + 2^(r-1) - 1`.
pub fn closed_count_mod2(k: FactorKind) -> u128 {
    match k {
        FactorKind::ProjLine => 1,
        FactorKind::PQ { p, q } => (1u128 << (p + q - 1)) - 1,
        FactorKind::Diag { r } => (1u128 << (2 * r - 1)) + (1u128 << (r - 1)) - 1,
        FactorKind::FourSphere => 0,
    }
}
