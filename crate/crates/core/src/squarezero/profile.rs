use serde::Serialize;

use super::{FactorKind, Result};

/// Cup-product data in degrees 2 and 4: a basis of `H^2`, the size of a
/// basis of `H^4`, and the product of every pair of degree-2 basis
/// elements written in the `H^4` basis.
///
/// The square of `u = sum c_i e_i` is read as the quadratic form
/// `sum_{i <= j} c_i c_j (e_i e_j)`: a mixed monomial carries its table
/// entry once. This is the form whose zero set the counts refer to; for
/// `CP^1 x CP^1` it is `c d`, and across a product each cross block
/// `u_i ⊗ u_j` appears with coefficient one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticProfile {
    b2: usize,
    b4: usize,
    labels: Vec<String>,
    /// Indexed by `pair_index(i, j)` for `i <= j`.
    products: Vec<Vec<i64>>,
}

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

impl QuadraticProfile {
    /// A profile with every product zero.
    pub fn empty(labels: Vec<String>, b4: usize) -> Self {
        let b2 = labels.len();
        Self {
            b2,
            b4,
            labels,
            products: vec![vec![0; b4]; b2 * (b2 + 1) / 2],
        }
    }

    pub fn b2(&self) -> usize {
        self.b2
    }

    pub fn b4(&self) -> usize {
        self.b4
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The product `e_i e_j` in the `H^4` basis.
    pub fn product(&self, i: usize, j: usize) -> &[i64] {
        &self.products[pair_index(i, j)]
    }

    pub fn set_product(&mut self, i: usize, j: usize, value: Vec<i64>) {
        assert_eq!(value.len(), self.b4);
        self.products[pair_index(i, j)] = value;
    }

    /// `u^2` for `u = sum c_i e_i`, over `Z`, as a quadratic form.
    pub fn square(&self, coeffs: &[i64]) -> Vec<i64> {
        assert_eq!(coeffs.len(), self.b2);
        let mut out = vec![0i64; self.b4];
        for j in 0..self.b2 {
            for i in 0..=j {
                let w = coeffs[i] * coeffs[j];
                if w == 0 {
                    continue;
                }
                for (o, &p) in out.iter_mut().zip(self.product(i, j)) {
                    *o += w * p;
                }
            }
        }
        out
    }

    /// Non-zero table entries as `(label_i, label_j, value)`, `i <= j`.
    pub fn nonzero_entries(&self) -> Vec<(&str, &str, &[i64])> {
        let mut out = Vec::new();
        for j in 0..self.b2 {
            for i in 0..=j {
                let v = self.product(i, j);
                if v.iter().any(|&x| x != 0) {
                    out.push((self.labels[i].as_str(), self.labels[j].as_str(), v));
                }
            }
        }
        out
    }
}

/// The degree-2 presentation of one factor.
pub fn profile(k: FactorKind) -> Result<QuadraticProfile> {
    k.validate()?;
    Ok(match k {
        FactorKind::ProjLine => QuadraticProfile::empty(vec!["x".into()], 0),
        FactorKind::PQ { p, q } => {
            let labels: Vec<String> = (1..=p)
                .map(|i| format!("x{i}"))
                .chain((1..=q).map(|j| format!("y{j}")))
                .collect();
            let mut prof = QuadraticProfile::empty(labels, 1);
            for i in 0..(p + q) as usize {
                let sign = if i < p as usize { 1 } else { -1 };
                prof.set_product(i, i, vec![sign]);
            }
            prof
        }
        FactorKind::Diag { r } => {
            let r = r as usize;
            let labels: Vec<String> = (1..=r)
                .map(|i| format!("z{i}"))
                .chain((1..=r).map(|i| format!("w{i}")))
                .collect();
            let mut prof = QuadraticProfile::empty(labels, 1);
            for i in 0..r {
                prof.set_product(i, r + i, vec![1]);
            }
            prof
        }
        FactorKind::FourSphere => QuadraticProfile::empty(Vec::new(), 1),
    })
}

/// Künneth product: `H^2` is the direct sum, and `H^4` is the sum of the
/// factors' `H^4` followed by one `H^2_i ⊗ H^2_j` block per pair `i < j`.
/// A cross product `e ⊗ f` is a single basis vector with coefficient one.
pub fn product_profile(ps: &[QuadraticProfile]) -> QuadraticProfile {
    if let [single] = ps {
        return single.clone();
    }
    let mut labels = Vec::new();
    let mut b2_offset = Vec::with_capacity(ps.len());
    for (f, p) in ps.iter().enumerate() {
        b2_offset.push(labels.len());
        labels.extend(p.labels.iter().map(|l| format!("{l}@{f}")));
    }
    let mut b4_offset = Vec::with_capacity(ps.len());
    let mut b4 = 0;
    for p in ps {
        b4_offset.push(b4);
        b4 += p.b4;
    }
    let mut tensor_offset = vec![vec![0; ps.len()]; ps.len()];
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            tensor_offset[i][j] = b4;
            b4 += ps[i].b2 * ps[j].b2;
        }
    }

    let mut out = QuadraticProfile::empty(labels, b4);
    for (f, p) in ps.iter().enumerate() {
        for j in 0..p.b2 {
            for i in 0..=j {
                let mut v = vec![0; b4];
                v[b4_offset[f]..b4_offset[f] + p.b4].copy_from_slice(p.product(i, j));
                out.set_product(b2_offset[f] + i, b2_offset[f] + j, v);
            }
        }
    }
    for fi in 0..ps.len() {
        for fj in fi + 1..ps.len() {
            for a in 0..ps[fi].b2 {
                for b in 0..ps[fj].b2 {
                    let mut v = vec![0; b4];
                    v[tensor_offset[fi][fj] + a * ps[fj].b2 + b] = 1;
                    out.set_product(b2_offset[fi] + a, b2_offset[fj] + b, v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line() {
        let p = profile(FactorKind::ProjLine).unwrap();
        assert_eq!((p.b2(), p.b4()), (1, 0));
        assert!(p.product(0, 0).is_empty());
    }

    #[test]
    fn one_plus_one_bar() {
        let p = profile(FactorKind::PQ { p: 1, q: 1 }).unwrap();
        assert_eq!(p.product(0, 0), &[1]);
        assert_eq!(p.product(1, 1), &[-1]);
        assert_eq!(p.product(0, 1), &[0]);
        assert_eq!(p.square(&[1, 1]), vec![0]);
    }

    #[test]
    fn diagonal_sum() {
        let p = profile(FactorKind::Diag { r: 1 }).unwrap();
        assert_eq!(p.labels(), &["z1", "w1"]);
        assert_eq!(p.product(0, 1), &[1]);
        assert_eq!(p.product(1, 0), &[1]);
        assert_eq!(p.product(0, 0), &[0]);
        assert_eq!(p.product(1, 1), &[0]);
        let p2 = profile(FactorKind::Diag { r: 2 }).unwrap();
        assert_eq!(p2.product(0, 3), &[0]);
        assert_eq!(p2.product(1, 3), &[1]);
    }

    #[test]
    fn four_sphere() {
        let p = profile(FactorKind::FourSphere).unwrap();
        assert_eq!((p.b2(), p.b4()), (0, 1));
    }

    #[test]
    fn kunneth_dimensions() {
        let single = profile(FactorKind::PQ { p: 2, q: 1 }).unwrap();
        assert_eq!(product_profile(std::slice::from_ref(&single)), single);

        let line = profile(FactorKind::ProjLine).unwrap();
        let pp = product_profile(&[line.clone(), line.clone()]);
        assert_eq!((pp.b2(), pp.b4()), (2, 1));
        assert_eq!(pp.square(&[1, 1]), vec![1]);
        assert_eq!(pp.square(&[1, 0]), vec![0]);

        let pl = product_profile(&[profile(FactorKind::PQ { p: 1, q: 0 }).unwrap(), line]);
        assert_eq!((pl.b2(), pl.b4()), (2, 2));
    }

    #[test]
    fn table_symmetric() {
        let ps: Vec<QuadraticProfile> = [FactorKind::Diag { r: 2 }, FactorKind::ProjLine, FactorKind::PQ { p: 2, q: 2 }]
            .into_iter()
            .map(|k| profile(k).unwrap())
            .collect();
        let pp = product_profile(&ps);
        for i in 0..pp.b2() {
            for j in 0..pp.b2() {
                assert_eq!(pp.product(i, j), pp.product(j, i));
            }
        }
    }
}
