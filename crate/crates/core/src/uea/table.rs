use std::collections::BTreeMap;

use super::{PbwMonomial, UeaElement};
use crate::bialgebra::BracketTensor;
use crate::scalars::ZSeries;

/// `populated_z_order` value of a table known exactly to every order.
pub const EXACT: u32 = u32::MAX;

/// Deformed brackets `[Y_i, Y_j]` for `i < j`, complete through
/// `populated_z_order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommutatorTable {
    n: usize,
    populated: u32,
    entries: BTreeMap<(usize, usize), UeaElement>,
}

impl CommutatorTable {
    /// The undeformed table, exact to every order.
    pub fn classical(f: &BracketTensor) -> Self {
        Self::from_brackets(f, EXACT)
    }

    /// The Lie brackets as a table claimed complete through `populated`.
    pub fn from_brackets(f: &BracketTensor, populated: u32) -> Self {
        let n = f.dim();
        let mut entries = BTreeMap::new();
        for ((p, q), v) in f.iter() {
            let mut e = UeaElement::zero(n, populated);
            for (r, x) in v {
                e.add_term(PbwMonomial::generator(n, *r), &ZSeries::constant(x.clone(), populated));
            }
            entries.insert((*p, *q), e);
        }
        Self {
            n,
            populated,
            entries,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn populated_z_order(&self) -> u32 {
        self.populated
    }

    /// `[Y_i, Y_j]`; the reversed pair is served negated.
    pub fn get(&self, i: usize, j: usize) -> UeaElement {
        let t = self.populated;
        if i == j {
            return UeaElement::zero(self.n, t);
        }
        let (key, negate) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.entries.get(&key) {
            Some(e) if negate => e.neg(),
            Some(e) => e.clone(),
            None => UeaElement::zero(self.n, t),
        }
    }

    /// Stored entries with `i < j`.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), UeaElement> {
        &self.entries
    }

    /// A copy claiming completeness through `order`, where every order above
    /// the present one is taken to be zero until set.
    pub fn provisional(&self, order: u32) -> Self {
        Self {
            n: self.n,
            populated: order,
            entries: self
                .entries
                .iter()
                .map(|(k, e)| (*k, e.with_truncation(order)))
                .collect(),
        }
    }

    /// Adds `correction` to `[Y_i, Y_j]` (`i < j`).
    pub fn add_correction(&mut self, i: usize, j: usize, correction: &UeaElement) {
        assert!(i < j, "entries are stored for i < j");
        let t = self.populated;
        let slot = self
            .entries
            .entry((i, j))
            .or_insert_with(|| UeaElement::zero(self.n, t));
        *slot = slot.add(&correction.with_truncation(t));
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    /// The entries restricted to z-orders `≤ order`.
    pub fn truncated(&self, order: u32) -> Self {
        self.provisional(order.min(self.populated))
    }
}
