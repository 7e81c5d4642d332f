//! Dense univariate polynomials with arbitrary-precision integer
//! coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Coefficients from the constant term upwards, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![BigInt::one()])
    }

    pub fn from_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut p = Self(coeffs.into_iter().map(Into::into).collect());
        p.trim();
        p
    }

    /// `1 + a x + b x^2`
    pub fn quadratic(a: i64, b: i64) -> Self {
        Self::from_coeffs([1, a, b])
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Quotient when `divisor` divides `self` exactly over `Z`, else `None`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let d = divisor.degree()?;
        let lead = &divisor.0[d];
        let Some(n) = self.degree() else {
            return Some(Poly::zero());
        };
        if n < d {
            return None;
        }
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); n - d + 1];
        for i in (0..=n - d).rev() {
            let top = &rem[i + d];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return None;
            }
            let q = top / lead;
            for (j, c) in divisor.0.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(quot))
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{abs}x^{i}")?,
            }
        }
        Ok(())
    }
}
