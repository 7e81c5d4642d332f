use std::collections::BTreeMap;
use std::fmt;

use super::{FactorKind, ProductManifold};

/// Homeomorphism type of a connected component of the real square-zero
/// set: `S^low x S^high x R` with `low <= high`, where a zero exponent
/// drops that sphere. `(0, 0)` is a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentDescriptor {
    low: u32,
    high: u32,
}

impl ComponentDescriptor {
    pub const LINE: ComponentDescriptor = ComponentDescriptor { low: 0, high: 0 };

    pub fn spheres(a: u32, b: u32) -> Self {
        Self {
            low: a.min(b),
            high: a.max(b),
        }
    }

    pub fn sphere_dims(&self) -> (u32, u32) {
        (self.low, self.high)
    }

    pub fn is_line(&self) -> bool {
        *self == Self::LINE
    }

    pub fn dim(&self) -> u32 {
        self.low + self.high + 1
    }
}

impl fmt::Display for ComponentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.low, self.high) {
            (0, 0) => write!(f, "LINE"),
            (0, b) => write!(f, "S{b}xR"),
            (a, b) => write!(f, "S{a}xS{b}xR"),
        }
    }
}

/// Multiset of component types.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RealCensus(BTreeMap<ComponentDescriptor, u64>);

impl RealCensus {
    pub fn add(&mut self, d: ComponentDescriptor, count: u64) {
        if count > 0 {
            *self.0.entry(d).or_default() += count;
        }
    }

    pub fn count(&self, d: ComponentDescriptor) -> u64 {
        self.0.get(&d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ComponentDescriptor, u64)> + '_ {
        self.0.iter().map(|(&d, &n)| (d, n))
    }

    pub fn union(&self, other: &RealCensus) -> RealCensus {
        let mut out = self.clone();
        for (d, n) in other.iter() {
            out.add(d, n);
        }
        out
    }
}

impl fmt::Display for RealCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.iter().map(|(d, n)| format!("{d} x{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Components of `{a_1^2 + ... + a_p^2 = b_1^2 + ... + b_q^2} \ {0}` in
/// `R^(p+q)`: empty if `p` or `q` is zero, otherwise `S^(p-1) x S^(q-1) x R`
/// with each `S^0` factor doubling the number of components.
pub fn quadric_census(p: u32, q: u32) -> RealCensus {
    let mut census = RealCensus::default();
    if p == 0 || q == 0 {
        return census;
    }
    let copies = if p == 1 { 2 } else { 1 } * if q == 1 { 2 } else { 1 };
    census.add(ComponentDescriptor::spheres(p - 1, q - 1), copies);
    census
}

fn factor_census(k: FactorKind) -> RealCensus {
    match k {
        FactorKind::ProjLine => {
            let mut c = RealCensus::default();
            c.add(ComponentDescriptor::LINE, 2);
            c
        }
        FactorKind::PQ { p, q } => quadric_census(p, q),
        // c_i = a_i + b_i, d_i = a_i - b_i turns sum c_i d_i into a quadric
        FactorKind::Diag { r } => quadric_census(r, r),
        FactorKind::FourSphere => RealCensus::default(),
    }
}

/// Census of a product: the union of the factor censuses.
pub fn real_census(pm: &ProductManifold) -> RealCensus {
    pm.factors()
        .iter()
        .fold(RealCensus::default(), |acc, &k| acc.union(&factor_census(k)))
}
