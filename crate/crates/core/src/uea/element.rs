use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalars::{AlgebraicScalar, ZSeries};

/// An ordered product `Y_0^{e_0} Y_1^{e_1} ⋯`; all exponents zero is the unit.
///
/// Ordered by total degree first, then with higher powers of earlier
/// generators first, so for `(J3, J+, J-)` the degree-one order is
/// `J3 < J+ < J-`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PbwMonomial {
    exps: Vec<u32>,
}

impl PbwMonomial {
    pub fn unit(n: usize) -> Self {
        Self { exps: vec![0; n] }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut m = Self::unit(n);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn num_generators(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    /// The generator word in order, e.g. `J3^2 J+` is `[0, 0, 1]`.
    pub fn word(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(i, e)| std::iter::repeat(i).take(*e as usize))
            .collect()
    }

    /// The smallest generator present.
    pub fn first(&self) -> Option<usize> {
        self.exps.iter().position(|e| *e > 0)
    }

    /// The largest generator present.
    pub fn last(&self) -> Option<usize> {
        self.exps.iter().rposition(|e| *e > 0)
    }

    pub(crate) fn with_delta(&self, i: usize, delta: i32) -> Self {
        let mut m = self.clone();
        m.exps[i] = (m.exps[i] as i64 + delta as i64) as u32;
        m
    }

    /// Exponent-wise sum; the product when the concatenation is already ordered.
    pub fn combine(&self, other: &Self) -> Self {
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Every monomial of total degree `d` in `n` generators.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Self> {
        fn fill(n: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<PbwMonomial>) {
            if pos + 1 == n {
                cur.push(left);
                out.push(PbwMonomial { exps: cur.clone() });
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                fill(n, pos + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Self { exps: vec![] });
            }
            return out;
        }
        fill(n, 0, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All splits `(a, b)` with `a + b = self` exponent-wise, i.e. the terms of
    /// the primitive coproduct, with their binomial multiplicities.
    pub fn splits(&self) -> Vec<(PbwMonomial, PbwMonomial, AlgebraicScalar)> {
        let mut out = vec![(Vec::new(), Vec::new(), num_bigint::BigInt::from(1))];
        for &e in &self.exps {
            let mut next = Vec::new();
            for (a, b, mult) in &out {
                let mut binom = num_bigint::BigInt::from(1);
                for j in 0..=e {
                    let mut a2: Vec<u32> = a.clone();
                    let mut b2: Vec<u32> = b.clone();
                    a2.push(j);
                    b2.push(e - j);
                    next.push((a2, b2, mult * &binom));
                    binom = binom * (e - j) / (j + 1);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(a, b, m)| {
                (
                    PbwMonomial { exps: a },
                    PbwMonomial { exps: b },
                    AlgebraicScalar::from_rational(num_rational::BigRational::from_integer(m)),
                )
            })
            .collect()
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].to_string()),
                _ => parts.push(format!("{}^{e}", names[i])),
            }
        }
        parts.join(" ")
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) type Terms = BTreeMap<PbwMonomial, ZSeries>;

pub(crate) fn add_into<K: Ord + Clone>(terms: &mut BTreeMap<K, ZSeries>, key: K, value: &ZSeries) {
    if value.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(slot) => {
            *slot = slot.add(value);
            if slot.is_zero() {
                terms.remove(&key);
            }
        }
        None => {
            terms.insert(key, value.clone());
        }
    }
}

fn coefficient_prefix(c: &AlgebraicScalar, order: u32) -> Vec<String> {
    let mut parts = Vec::new();
    if !c.is_one() {
        parts.push(format!("({c})"));
    }
    match order {
        0 => {}
        1 => parts.push("z".into()),
        _ => parts.push(format!("z^{order}")),
    }
    parts
}

fn render_terms<'a, K: 'a>(
    terms: impl Iterator<Item = (&'a K, &'a ZSeries)>,
    key: impl Fn(&K) -> Option<String>,
) -> String {
    let mut expanded: Vec<(u32, usize, String)> = Vec::new();
    for (idx, (k, series)) in terms.enumerate() {
        let body = key(k);
        for (order, c) in series.terms() {
            let mut parts = coefficient_prefix(c, order);
            match &body {
                Some(b) => parts.push(b.clone()),
                None if parts.is_empty() => parts.push("1".into()),
                None => {}
            }
            expanded.push((order, idx, parts.join(" ")));
        }
    }
    if expanded.is_empty() {
        return "0".into();
    }
    expanded.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut out = String::new();
    for (i, (_, _, t)) in expanded.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let _ = write!(out, "{t}");
    }
    out
}

/// A normal-ordered element of `U(g)[[z]]`, truncated at z-order `truncation`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UeaElement {
    n: usize,
    truncation: u32,
    terms: Terms,
}

impl UeaElement {
    pub fn zero(n: usize, truncation: u32) -> Self {
        Self {
            n,
            truncation,
            terms: Terms::new(),
        }
    }

    pub fn one(n: usize, truncation: u32) -> Self {
        Self::monomial(PbwMonomial::unit(n), ZSeries::one(truncation))
    }

    pub fn generator(n: usize, i: usize, truncation: u32) -> Self {
        Self::monomial(PbwMonomial::generator(n, i), ZSeries::one(truncation))
    }

    pub fn monomial(m: PbwMonomial, coeff: ZSeries) -> Self {
        let mut e = Self::zero(m.num_generators(), coeff.truncation());
        e.add_term(m, &coeff);
        e
    }

    pub(crate) fn from_terms(n: usize, truncation: u32, terms: Terms) -> Self {
        let mut e = Self::zero(n, truncation);
        for (m, c) in terms {
            e.add_term(m, &c);
        }
        e
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, ZSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> ZSeries {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| ZSeries::zero(self.truncation))
    }

    pub fn add_term(&mut self, m: PbwMonomial, coeff: &ZSeries) {
        assert_eq!(m.num_generators(), self.n, "monomial length");
        add_into(&mut self.terms, m, &coeff.with_truncation(self.truncation));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_truncation(self.truncation.min(other.truncation));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-AlgebraicScalar::one())
    }

    pub fn scale(&self, factor: &AlgebraicScalar) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.scale(factor));
        }
        out
    }

    /// Multiplies every coefficient by a series.
    pub fn scale_series(&self, factor: &ZSeries) -> Self {
        let t = self.truncation.min(factor.truncation());
        let mut out = Self::zero(self.n, t);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul_truncated(factor, t));
        }
        out
    }

    /// Lowers (or, asserting zero higher terms, raises) the z truncation.
    pub fn with_truncation(&self, truncation: u32) -> Self {
        Self::from_terms(self.n, truncation, self.terms.clone())
    }

    /// The coefficient of `z^order`, as an element carrying only that order.
    pub fn part(&self, order: u32) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.part(order));
        }
        out
    }

    /// Drops monomials of total degree above `max_degree`.
    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.degree() <= max_degree);
        out
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(PbwMonomial::degree).max()
    }

    pub fn render(&self, names: &[&str]) -> String {
        render_terms(self.terms.iter(), |m: &PbwMonomial| {
            (!m.is_unit()).then(|| m.render(names))
        })
    }
}

/// An element of the `rank`-fold tensor power, each slot normal-ordered.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    n: usize,
    rank: usize,
    truncation: u32,
    terms: BTreeMap<Vec<PbwMonomial>, ZSeries>,
}

impl TensorElement {
    pub fn zero(n: usize, rank: usize, truncation: u32) -> Self {
        assert!(rank >= 2, "tensor rank must be at least 2");
        Self {
            n,
            rank,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize, rank: usize, truncation: u32) -> Self {
        let mut t = Self::zero(n, rank, truncation);
        t.add_term(vec![PbwMonomial::unit(n); rank], &ZSeries::one(truncation));
        t
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> &BTreeMap<Vec<PbwMonomial>, ZSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[PbwMonomial]) -> ZSeries {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| ZSeries::zero(self.truncation))
    }

    pub fn add_term(&mut self, key: Vec<PbwMonomial>, coeff: &ZSeries) {
        assert_eq!(key.len(), self.rank, "tensor key rank");
        add_into(&mut self.terms, key, &coeff.with_truncation(self.truncation));
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_rank(other)?;
        let mut out = self.with_truncation(self.truncation.min(other.truncation));
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-AlgebraicScalar::one()))
    }

    pub fn scale(&self, factor: &AlgebraicScalar) -> Self {
        let mut out = Self::zero(self.n, self.rank, self.truncation);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.scale(factor));
        }
        out
    }

    pub fn with_truncation(&self, truncation: u32) -> Self {
        let mut out = Self::zero(self.n, self.rank, truncation);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn part(&self, order: u32) -> Self {
        let mut out = Self::zero(self.n, self.rank, self.truncation);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.part(order));
        }
        out
    }

    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        let mut out = self.clone();
        out.terms
            .retain(|k, _| k.iter().map(PbwMonomial::degree).sum::<u32>() <= max_degree);
        out
    }

    fn same_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }

    /// Tensor product of two elements into a rank-2 tensor.
    pub fn from_pair(a: &UeaElement, b: &UeaElement) -> Self {
        let t = a.truncation().min(b.truncation());
        let mut out = Self::zero(a.num_generators(), 2, t);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                out.add_term(vec![ma.clone(), mb.clone()], &ca.mul_truncated(cb, t));
            }
        }
        out
    }

    /// `self ⊗ m`, appending one slot.
    pub fn append_slot(&self, m: &PbwMonomial) -> Self {
        let mut out = Self::zero(self.n, self.rank + 1, self.truncation);
        for (k, c) in &self.terms {
            let mut key = k.clone();
            key.push(m.clone());
            out.add_term(key, c);
        }
        out
    }

    /// `m ⊗ self`, prepending one slot.
    pub fn prepend_slot(&self, m: &PbwMonomial) -> Self {
        let mut out = Self::zero(self.n, self.rank + 1, self.truncation);
        for (k, c) in &self.terms {
            let mut key = vec![m.clone()];
            key.extend(k.iter().cloned());
            out.add_term(key, c);
        }
        out
    }

    pub fn render(&self, names: &[&str]) -> String {
        render_terms(self.terms.iter(), |k: &Vec<PbwMonomial>| {
            Some(
                k.iter()
                    .map(|m| m.render(names))
                    .collect::<Vec<_>>()
                    .join(" (x) "),
            )
        })
    }
}
