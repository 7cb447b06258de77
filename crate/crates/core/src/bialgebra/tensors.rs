use std::collections::BTreeMap;

use crate::scalars::AlgebraicScalar;

/// An element of the Lie algebra, as generator index → coefficient.
pub type LieVector = BTreeMap<usize, AlgebraicScalar>;
/// An element of g⊗g, keyed by (left, right) generator indices.
pub type LieTensor2 = BTreeMap<(usize, usize), AlgebraicScalar>;

pub(crate) fn accumulate<K: Ord + Clone>(
    map: &mut BTreeMap<K, AlgebraicScalar>,
    key: K,
    value: &AlgebraicScalar,
) {
    if value.is_zero() {
        return;
    }
    let slot = map.entry(key.clone()).or_default();
    *slot += value;
    if slot.is_zero() {
        map.remove(&key);
    }
}

/// Structure constants `f^r_{p,q}` of `[Z_p, Z_q] = f^r_{p,q} Z_r`.
///
/// Only `p < q` is stored; the other orientation is served negated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTensor {
    dim: usize,
    entries: BTreeMap<(usize, usize), LieVector>,
}

impl BracketTensor {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value·Z_r` to `[Z_p, Z_q]` (and its negation to `[Z_q, Z_p]`).
    /// Panics on `p == q` with a nonzero value.
    pub fn add(&mut self, p: usize, q: usize, r: usize, value: &AlgebraicScalar) {
        assert!(p < self.dim && q < self.dim && r < self.dim, "index out of range");
        if value.is_zero() {
            return;
        }
        assert_ne!(p, q, "[Z_p, Z_p] must vanish");
        let (key, v) = if p < q {
            ((p, q), value.clone())
        } else {
            ((q, p), -value)
        };
        let vec = self.entries.entry(key).or_default();
        accumulate(vec, r, &v);
        if vec.is_empty() {
            self.entries.remove(&key);
        }
    }

    /// Overwrites the coefficient of `Z_r` in `[Z_p, Z_q]`.
    pub fn set(&mut self, p: usize, q: usize, r: usize, value: &AlgebraicScalar) {
        let current = self.get(p, q, r);
        self.add(p, q, r, &(value - &current));
    }

    pub fn get(&self, p: usize, q: usize, r: usize) -> AlgebraicScalar {
        if p == q {
            return AlgebraicScalar::zero();
        }
        let (key, sign) = if p < q { ((p, q), false) } else { ((q, p), true) };
        match self.entries.get(&key).and_then(|v| v.get(&r)) {
            Some(x) if sign => -x,
            Some(x) => x.clone(),
            None => AlgebraicScalar::zero(),
        }
    }

    /// `[Z_p, Z_q]` as a vector.
    pub fn bracket(&self, p: usize, q: usize) -> LieVector {
        if p == q {
            return LieVector::new();
        }
        let (key, sign) = if p < q { ((p, q), false) } else { ((q, p), true) };
        match self.entries.get(&key) {
            Some(v) if sign => v.iter().map(|(r, x)| (*r, -x)).collect(),
            Some(v) => v.clone(),
            None => LieVector::new(),
        }
    }

    /// Bilinear extension of the bracket to vectors.
    pub fn bracket_vectors(&self, x: &LieVector, y: &LieVector) -> LieVector {
        let mut out = LieVector::new();
        for (p, a) in x {
            for (q, b) in y {
                let ab = a * b;
                for (r, f) in self.bracket(*p, *q) {
                    accumulate(&mut out, r, &(&ab * &f));
                }
            }
        }
        out
    }

    /// Stored entries `((p, q), [Z_p, Z_q])` with `p < q`.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &LieVector)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, factor: &AlgebraicScalar) -> Self {
        let mut out = Self::new(self.dim);
        for ((p, q), v) in &self.entries {
            for (r, x) in v {
                out.add(*p, *q, *r, &(x * factor));
            }
        }
        out
    }
}

/// Cocommutator constants `c_p^{q,r}` of `δ(Z_p) = c_p^{q,r} Z_q⊗Z_r`.
///
/// Stored as wedge coefficients on `q < r`, where `Z_q∧Z_r = Z_q⊗Z_r − Z_r⊗Z_q`,
/// so `c_p^{q,r} = −c_p^{r,q}` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocommutatorTensor {
    dim: usize,
    entries: BTreeMap<usize, BTreeMap<(usize, usize), AlgebraicScalar>>,
}

impl CocommutatorTensor {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value·(Z_q∧Z_r)` to `δ(Z_p)`.
    pub fn add_wedge(&mut self, p: usize, q: usize, r: usize, value: &AlgebraicScalar) {
        assert!(p < self.dim && q < self.dim && r < self.dim, "index out of range");
        if value.is_zero() || q == r {
            return;
        }
        let (key, v) = if q < r {
            ((q, r), value.clone())
        } else {
            ((r, q), -value)
        };
        let image = self.entries.entry(p).or_default();
        accumulate(image, key, &v);
        if image.is_empty() {
            self.entries.remove(&p);
        }
    }

    /// The full component `c_p^{q,r}`.
    pub fn get(&self, p: usize, q: usize, r: usize) -> AlgebraicScalar {
        if q == r {
            return AlgebraicScalar::zero();
        }
        let (key, sign) = if q < r { ((q, r), false) } else { ((r, q), true) };
        match self.entries.get(&p).and_then(|m| m.get(&key)) {
            Some(x) if sign => -x,
            Some(x) => x.clone(),
            None => AlgebraicScalar::zero(),
        }
    }

    /// Wedge coefficients of `δ(Z_p)` keyed by `(q, r)` with `q < r`.
    pub fn wedges(&self, p: usize) -> BTreeMap<(usize, usize), AlgebraicScalar> {
        self.entries.get(&p).cloned().unwrap_or_default()
    }

    /// `δ(Z_p)` as a full g⊗g tensor.
    pub fn image(&self, p: usize) -> LieTensor2 {
        let mut out = LieTensor2::new();
        if let Some(m) = self.entries.get(&p) {
            for ((q, r), x) in m {
                out.insert((*q, *r), x.clone());
                out.insert((*r, *q), -x);
            }
        }
        out
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&usize, &BTreeMap<(usize, usize), AlgebraicScalar>)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, factor: &AlgebraicScalar) -> Self {
        let mut out = Self::new(self.dim);
        for (p, m) in &self.entries {
            for ((q, r), x) in m {
                out.add_wedge(*p, *q, *r, &(x * factor));
            }
        }
        out
    }

    /// Builds the tensor from full components `δ(Z_p)`; each image must be
    /// antisymmetric in `(q, r)`, otherwise `None`.
    pub fn from_full(dim: usize, images: &BTreeMap<usize, LieTensor2>) -> Option<Self> {
        let mut out = Self::new(dim);
        for (p, t) in images {
            for ((q, r), x) in t {
                let partner = t.get(&(*r, *q)).cloned().unwrap_or_default();
                if partner != -x {
                    return None;
                }
                if q < r {
                    out.add_wedge(*p, *q, *r, x);
                }
            }
        }
        Some(out)
    }
}
