//! Exact integer linear algebra on `Z^n`.
//!
//! Everything here runs on machine integers with checked arithmetic. An
//! overflow is reported as [`LatticeError::Overflow`] and never wraps.

use std::fmt;

use thiserror::Error;

/// Largest ambient dimension accepted for lattice vectors.
pub const MAX_DIM: usize = 8;
/// Largest absolute value accepted for a lattice vector coordinate.
pub const MAX_ENTRY: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty vector or matrix")]
    Empty,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("coordinate {0} exceeds the supported bound {MAX_ENTRY}")]
    EntryTooLarge(i64),
    #[error("dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("the zero vector has no primitive representative")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(LatticeError::Overflow)
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(LatticeError::Overflow)
}


pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// A point of `Z^n` with `1 <= n <= MAX_DIM`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(LatticeError::Empty);
        }
        if coords.len() > MAX_DIM {
            return Err(LatticeError::DimensionTooLarge(coords.len()));
        }
        if let Some(&c) = coords.iter().find(|c| c.abs() > MAX_ENTRY) {
            return Err(LatticeError::EntryTooLarge(c));
        }
        Ok(Self(coords))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![0; dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Result<Self> {
        let mut coords = vec![0; dim];
        coords[i] = 1;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0, |g, &c| gcd(g, c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The primitive vector on the same ray.
    pub fn primitive(&self) -> Result<Self> {
        let g = self.content();
        if g == 0 {
            return Err(LatticeError::ZeroVector);
        }
        Ok(Self(self.0.iter().map(|c| c / g).collect()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let coords = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| add(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    /// Embeds `self` into `Z^(offset + dim + trailing)` at coordinates
    /// `offset..offset + dim`.
    pub fn pad(&self, offset: usize, total: usize) -> Result<Self> {
        if offset + self.dim() > total {
            return Err(LatticeError::DimensionMismatch {
                expected: total,
                found: offset + self.dim(),
            });
        }
        let mut coords = vec![0; total];
        coords[offset..offset + self.dim()].copy_from_slice(&self.0);
        Self::new(coords)
    }

    /// Coordinates restricted to `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.0[i]).collect())
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map(Vec::len).ok_or(LatticeError::Empty)?;
        if cols == 0 {
            return Err(LatticeError::Empty);
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LatticeError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[LatticeVector]) -> Result<Self> {
        let rows = columns.first().map(LatticeVector::dim).ok_or(LatticeError::Empty)?;
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.dim() != rows {
                return Err(LatticeError::DimensionMismatch {
                    expected: rows,
                    found: c.dim(),
                });
            }
            for (i, &x) in c.coords().iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Matrix whose `i`-th row is `vectors[i]`.
    pub fn from_vectors(vectors: &[LatticeVector]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = add(acc, mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.dim() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        let coords = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.coords())
                    .try_fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        LatticeVector::new(coords)
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n.saturating_sub(1) {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return Ok(0);
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[i][j].checked_mul(a[k][k]).ok_or(LatticeError::Overflow)?;
                    let rhs = a[i][k].checked_mul(a[k][j]).ok_or(LatticeError::Overflow)?;
                    let num = lhs.checked_sub(rhs).ok_or(LatticeError::Overflow)?;
                    a[i][j] = num / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| LatticeError::Overflow)
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Ok(1) | Ok(-1))
    }

    /// Inverse of a unimodular matrix, read off its Smith form
    /// (`U M V = I` gives `M^-1 = V U`).
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let det = self.determinant()?;
        if det.abs() != 1 {
            return Err(LatticeError::NotUnimodular(det));
        }
        let snf = smith_normal_form(self)?;
        snf.v.mul(&snf.u)
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> Result<usize> {
        let mut a: Vec<Vec<i128>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..self.rows {
                if a[i][col] == 0 {
                    continue;
                }
                let (f, g) = (a[rank][col], a[i][col]);
                let mut row_gcd = 0i128;
                for j in col..self.cols {
                    let lhs = a[i][j].checked_mul(f).ok_or(LatticeError::Overflow)?;
                    let rhs = a[rank][j].checked_mul(g).ok_or(LatticeError::Overflow)?;
                    a[i][j] = lhs.checked_sub(rhs).ok_or(LatticeError::Overflow)?;
                    row_gcd = gcd_i128(row_gcd, a[i][j]);
                }
                if row_gcd > 1 {
                    for x in a[i][col..].iter_mut() {
                        *x /= row_gcd;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Ok(rank)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i128
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith decomposition `u * m * v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, trailing zeros included.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|&&x| x != 0).count()
    }
}

/// Smith normal form by elementary row and column operations, accumulating
/// the unimodular transforms. Diagonal entries are non-negative.
///
/// Work happens in `i128` with nearest-integer quotients; the result must
/// fit back into `i64`.
pub fn smith_normal_form(m: &IntegerMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = Wide::from(m);
    let mut u = Wide::identity(rows);
    let mut v = Wide::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = d.smallest_nonzero(t) else {
                return finish(u, d, v);
            };
            d.a.swap(t, pi);
            u.a.swap(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = nearest_quotient(d.a[i][t], pivot);
                if q != 0 {
                    d.sub_row_multiple(i, t, q)?;
                    u.sub_row_multiple(i, t, q)?;
                }
                clean &= d.a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = nearest_quotient(d.a[t][j], pivot);
                if q != 0 {
                    d.sub_col_multiple(j, t, q)?;
                    v.sub_col_multiple(j, t, q)?;
                }
                clean &= d.a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and go again
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d.a[i][j] % pivot != 0));
            match offending {
                Some(i) => {
                    d.sub_row_multiple(t, i, -1)?;
                    u.sub_row_multiple(t, i, -1)?;
                }
                None => break,
            }
        }
        if d.a[t][t] < 0 {
            d.a[t].iter_mut().for_each(|x| *x = -*x);
            u.a[t].iter_mut().for_each(|x| *x = -*x);
        }
        // keep the trailing block small to avoid coefficient swell
        d.size_reduce_rows(t + 1, &mut u)?;
        let mut dt = d.transpose();
        let mut vt = v.transpose();
        dt.size_reduce_rows(t + 1, &mut vt)?;
        d = dt.transpose();
        v = vt.transpose();
    }
    finish(u, d, v)
}

/// Shrinks the transforms before narrowing. Rows of `u` past the rank span
/// the left kernel and columns of `v` past the rank the right kernel, so
/// both blocks may be reduced among themselves and added to the other
/// rows (columns) without changing `u * m * v`.
fn finish(mut u: Wide, d: Wide, v: Wide) -> Result<SmithForm> {
    let rank = (0..d.a.len().min(d.a.first().map_or(0, Vec::len)))
        .take_while(|&i| d.a[i][i] != 0)
        .count();
    reduce_against_kernel(&mut u.a, rank)?;
    let mut vt = v.transpose();
    reduce_against_kernel(&mut vt.a, rank)?;
    Ok(SmithForm {
        u: u.narrow()?,
        d: d.narrow()?,
        v: vt.transpose().narrow()?,
    })
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(LatticeError::Overflow)
    })
}

/// Pairwise size reduction: kernel vectors `vs[rank..]` among themselves,
/// then every vector in `vs[..rank]` against the kernel vectors.
fn reduce_against_kernel(vs: &mut [Vec<i128>], rank: usize) -> Result<()> {
    let n = vs.len();
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            for b in rank..n {
                if a == b {
                    continue;
                }
                let bb = dot(&vs[b], &vs[b])?;
                if bb == 0 {
                    continue;
                }
                let q = nearest_quotient(dot(&vs[a], &vs[b])?, bb);
                if q == 0 {
                    continue;
                }
                let before = dot(&vs[a], &vs[a])?;
                let next: Vec<i128> = vs[a]
                    .iter()
                    .zip(&vs[b])
                    .map(|(x, y)| q.checked_mul(*y).and_then(|p| x.checked_sub(p)))
                    .collect::<Option<_>>()
                    .ok_or(LatticeError::Overflow)?;
                if dot(&next, &next)? < before {
                    vs[a] = next;
                    changed = true;
                }
            }
        }
    }
    Ok(())
}

/// `a / b` rounded to the nearest integer.
fn nearest_quotient(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

/// Scratch matrix for the Smith reduction.
struct Wide {
    a: Vec<Vec<i128>>,
}

impl Wide {
    fn from(m: &IntegerMatrix) -> Self {
        Self {
            a: (0..m.rows())
                .map(|i| m.row(i).iter().map(|&x| i128::from(x)).collect())
                .collect(),
        }
    }

    fn identity(n: usize) -> Self {
        Self::from(&IntegerMatrix::identity(n))
    }

    fn narrow(&self) -> Result<IntegerMatrix> {
        let rows = self
            .a
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| i64::try_from(x).map_err(|_| LatticeError::Overflow))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerMatrix {
            rows: self.a.len(),
            cols: rows.first().map_or(0, Vec::len),
            data: rows.into_iter().flatten().collect(),
        })
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u128, usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                let x = x.unsigned_abs();
                if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                    best = Some((x, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Pairwise size reduction of rows `from..`, mirrored on `track`.
    fn size_reduce_rows(&mut self, from: usize, track: &mut Wide) -> Result<()> {
        let n = self.a.len();
        let mut changed = true;
        while changed {
            changed = false;
            for a in from..n {
                for b in from..n {
                    if a == b {
                        continue;
                    }
                    let bb = dot(&self.a[b], &self.a[b])?;
                    if bb == 0 {
                        continue;
                    }
                    let q = nearest_quotient(dot(&self.a[a], &self.a[b])?, bb);
                    if q == 0 {
                        continue;
                    }
                    let before = dot(&self.a[a], &self.a[a])?;
                    let mut trial = self.a[a].clone();
                    for (x, y) in trial.iter_mut().zip(&self.a[b]) {
                        *x = q.checked_mul(*y).and_then(|p| x.checked_sub(p)).ok_or(LatticeError::Overflow)?;
                    }
                    if dot(&trial, &trial)? < before {
                        self.a[a] = trial;
                        track.sub_row_multiple(a, b, q)?;
                        changed = true;
                    }
                }
            }
        }
        Ok(())
    }

    fn transpose(&self) -> Wide {
        let cols = self.a.first().map_or(0, Vec::len);
        Wide {
            a: (0..cols).map(|j| self.a.iter().map(|r| r[j]).collect()).collect(),
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.a {
            row.swap(a, b);
        }
    }

    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: i128) -> Result<()> {
        for j in 0..self.a[target].len() {
            let delta = factor.checked_mul(self.a[source][j]).ok_or(LatticeError::Overflow)?;
            self.a[target][j] = self.a[target][j].checked_sub(delta).ok_or(LatticeError::Overflow)?;
        }
        Ok(())
    }

    fn sub_col_multiple(&mut self, target: usize, source: usize, factor: i128) -> Result<()> {
        for row in &mut self.a {
            let delta = factor.checked_mul(row[source]).ok_or(LatticeError::Overflow)?;
            row[target] = row[target].checked_sub(delta).ok_or(LatticeError::Overflow)?;
        }
        Ok(())
    }
}

/// Whether `vectors` can be completed to a `Z`-basis of `Z^n`.
///
/// More than `n` vectors is answered `false`; a vector of the wrong
/// dimension is an error.
pub fn extends_to_basis(vectors: &[LatticeVector], n: usize) -> Result<bool> {
    if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    if vectors.len() > n {
        return Ok(false);
    }
    if vectors.is_empty() {
        return Ok(true);
    }
    let snf = smith_normal_form(&IntegerMatrix::from_vectors(vectors)?)?;
    Ok(snf.diagonal().iter().all(|&x| x == 1))
}

/// An integer vector spanning the kernel of `m` when that kernel is
/// one-dimensional over `Q`.
pub fn kernel_line(m: &IntegerMatrix) -> Result<Option<Vec<i64>>> {
    let snf = smith_normal_form(m)?;
    if m.cols() - snf.rank() != 1 {
        return Ok(None);
    }
    Ok(Some(snf.v.column(m.cols() - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn vec_(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(IntegerMatrix::identity(3).determinant(), Ok(1));
        assert_eq!(mat(&[&[1, 0], &[5, 1]]).determinant(), Ok(1));
        assert_eq!(mat(&[&[2, 1], &[1, 1]]).determinant(), Ok(1));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).determinant(), Ok(-1));
        assert_eq!(mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).determinant(), Ok(0));
        assert_eq!(mat(&[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]]).determinant(), Ok(-30));
    }

    #[test]
    fn determinant_rejects_non_square() {
        assert_eq!(
            mat(&[&[1, 2, 3]]).determinant(),
            Err(LatticeError::NotSquare { rows: 1, cols: 3 })
        );
    }

    #[test]
    fn smith_examples() {
        let z = IntegerMatrix::zeros(2, 3);
        let s = smith_normal_form(&z).unwrap();
        assert_eq!(s.d, z);
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(3));

        let s = smith_normal_form(&mat(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(s.diagonal(), vec![1, 6]);

        let s = smith_normal_form(&mat(&[&[2, 1], &[1, 1]])).unwrap();
        assert_eq!(s.d, IntegerMatrix::identity(2));
    }

    #[test]
    fn smith_reconstructs() {
        let m = mat(&[&[4, 6, 2], &[2, -8, 10]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.diagonal(), vec![2, 2]);
    }

    #[test]
    fn basis_extension_examples() {
        assert_eq!(extends_to_basis(&[vec_(&[1, 0])], 2), Ok(true));
        assert_eq!(extends_to_basis(&[vec_(&[2, 0])], 2), Ok(false));
        assert_eq!(extends_to_basis(&[vec_(&[-1, 3]), vec_(&[0, 1])], 2), Ok(true));
        assert_eq!(
            extends_to_basis(&[vec_(&[1, 0]), vec_(&[0, 1]), vec_(&[1, 1])], 2),
            Ok(false)
        );
        assert!(matches!(
            extends_to_basis(&[vec_(&[1, 0, 0])], 2),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unimodular_inverse() {
        let m = mat(&[&[2, 1, 0], &[1, 1, 0], &[3, 4, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntegerMatrix::identity(3));
        assert_eq!(
            mat(&[&[2, 0], &[0, 1]]).inverse_unimodular(),
            Err(LatticeError::NotUnimodular(2))
        );
    }

    #[test]
    fn rank_and_kernel() {
        assert_eq!(mat(&[&[1, 2, 3], &[2, 4, 6]]).rank(), Ok(1));
        assert_eq!(mat(&[&[1, 0, 1], &[0, 1, 1]]).rank(), Ok(2));
        let k = kernel_line(&mat(&[&[1, 0, 1], &[0, 1, 1]])).unwrap().unwrap();
        assert!(k == vec![1, 1, -1] || k == vec![-1, -1, 1]);
        assert_eq!(kernel_line(&mat(&[&[1, 0, 0]])).unwrap(), None);
    }

    #[test]
    fn overflow_is_reported() {
        let big = mat(&[&[i64::MAX / 2, 0], &[0, 3]]);
        assert_eq!(big.mul(&big), Err(LatticeError::Overflow));
    }

    #[test]
    fn vector_bounds() {
        assert_eq!(LatticeVector::new(vec![]), Err(LatticeError::Empty));
        assert_eq!(
            LatticeVector::new(vec![MAX_ENTRY + 1]),
            Err(LatticeError::EntryTooLarge(MAX_ENTRY + 1))
        );
        assert_eq!(vec_(&[4, -6]).primitive(), Ok(vec_(&[2, -3])));
        assert_eq!(vec_(&[0, 0]).primitive(), Err(LatticeError::ZeroVector));
    }
}
