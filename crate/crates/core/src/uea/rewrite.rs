use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::element::{add_into, Terms};
use super::{CommutatorTable, PbwMonomial, TensorElement, UeaElement};
use crate::error::{Error, Result};
use crate::scalars::ZSeries;

/// Per generator, the homogeneous orders `Δ₍0₎, …, Δ₍K₎` of its coproduct;
/// `Δ₍k₎` carries exactly the factor `z^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoproductSeries {
    n: usize,
    orders: Vec<Vec<TensorElement>>,
}

impl CoproductSeries {
    /// `Δ₍0₎(Y) = Y⊗1 + 1⊗Y` and nothing else.
    pub fn primitive(n: usize) -> Self {
        let orders = (0..n)
            .map(|i| vec![primitive_coproduct(&UeaElement::generator(n, i, 0))])
            .collect();
        Self { n, orders }
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    /// Highest order present for every generator.
    pub fn achieved_order(&self) -> u32 {
        self.orders.iter().map(|o| o.len() as u32 - 1).min().unwrap_or(0)
    }

    /// `Δ₍k₎(Y_i)`.
    pub fn order(&self, i: usize, k: u32) -> Option<&TensorElement> {
        self.orders.get(i).and_then(|o| o.get(k as usize))
    }

    /// Appends `Δ₍k₎` for every generator, `k` being the next order.
    pub fn push_order(&mut self, terms: Vec<TensorElement>) {
        assert_eq!(terms.len(), self.n);
        for (o, t) in self.orders.iter_mut().zip(terms) {
            o.push(t);
        }
    }

    /// `Σ_{k ≤ truncation} Δ₍k₎(Y_i)` as one tensor.
    pub fn total(&self, i: usize, truncation: u32) -> Result<TensorElement> {
        if truncation > self.achieved_order() {
            return Err(Error::SeriesIncomplete {
                needed: truncation,
                available: self.achieved_order(),
            });
        }
        let mut out = TensorElement::zero(self.n, 2, truncation);
        for t in &self.orders[i][..=truncation as usize] {
            out = out.add(&t.with_truncation(truncation))?;
        }
        Ok(out)
    }

    /// Keeps orders `≤ k`.
    pub fn truncated(&self, k: u32) -> Self {
        Self {
            n: self.n,
            orders: self
                .orders
                .iter()
                .map(|o| o[..=(k as usize).min(o.len() - 1)].to_vec())
                .collect(),
        }
    }
}

type Cache<K, V> = RefCell<HashMap<K, Rc<V>>>;

/// Normal-ordering engine for one commutator table, with memoized products.
///
/// Products are computed to a z-order `k` passed per call; every rewrite
/// that needs a table order above the populated one is a hard error.
pub struct Rewriter<'a> {
    n: usize,
    table: &'a CommutatorTable,
    /// `[Y_l, Y_g]` for `l > g`.
    brackets: HashMap<(usize, usize), Vec<(PbwMonomial, ZSeries)>>,
    gen_cache: Cache<(PbwMonomial, usize, u32), Terms>,
    mono_cache: Cache<(PbwMonomial, PbwMonomial, u32), Terms>,
    coproducts: Option<(u32, Vec<TensorElement>)>,
    delta_cache: Cache<PbwMonomial, TensorElement>,
}

impl<'a> Rewriter<'a> {
    pub fn new(table: &'a CommutatorTable) -> Self {
        let n = table.num_generators();
        let mut brackets = HashMap::new();
        for l in 0..n {
            for g in 0..l {
                let e = table.get(l, g);
                let terms: Vec<_> = e.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
                if !terms.is_empty() {
                    brackets.insert((l, g), terms);
                }
            }
        }
        Self {
            n,
            table,
            brackets,
            gen_cache: RefCell::default(),
            mono_cache: RefCell::default(),
            coproducts: None,
            delta_cache: RefCell::default(),
        }
    }

    /// Attaches generator coproducts, truncated at z-order `k`, for
    /// [`Rewriter::delta`] and friends.
    pub fn with_coproducts(mut self, series: &CoproductSeries, k: u32) -> Result<Self> {
        let gens = (0..self.n).map(|i| series.total(i, k)).collect::<Result<Vec<_>>>()?;
        self.coproducts = Some((k, gens));
        self.delta_cache.borrow_mut().clear();
        Ok(self)
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    fn unit_terms(m: PbwMonomial, k: u32) -> Terms {
        let mut t = Terms::new();
        t.insert(m, ZSeries::one(k));
        t
    }

    /// Adds `c · (t · Y_g)` to `out`.
    fn add_times_gen(&self, out: &mut Terms, t: &PbwMonomial, c: &ZSeries, g: usize, k: u32) -> Result<()> {
        let Some(j) = c.min_order() else { return Ok(()) };
        if j > k {
            return Ok(());
        }
        let r = self.times_gen(t, g, k - j)?;
        for (u, d) in r.iter() {
            add_into(out, u.clone(), &c.mul_truncated(d, k));
        }
        Ok(())
    }

    /// `m · Y_g`, normal-ordered, to z-order `k`.
    pub fn times_gen(&self, m: &PbwMonomial, g: usize, k: u32) -> Result<Rc<Terms>> {
        let l = match m.last() {
            Some(l) if l > g => l,
            _ => return Ok(Rc::new(Self::unit_terms(m.with_delta(g, 1), k))),
        };
        let key = (m.clone(), g, k);
        if let Some(hit) = self.gen_cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        // m = head · Y_l and Y_l · Y_g = Y_g · Y_l + [Y_l, Y_g]
        let head = m.with_delta(l, -1);
        let mut out = Terms::new();
        let hg = self.times_gen(&head, g, k)?;
        for (t, c) in hg.iter() {
            self.add_times_gen(&mut out, t, c, l, k)?;
        }
        if let Some(bracket) = self.brackets.get(&(l, g)) {
            let populated = self.table.populated_z_order();
            if k > populated {
                return Err(Error::TableIncomplete {
                    needed: k,
                    populated,
                });
            }
            for (t, c) in bracket {
                let c = c.with_truncation(k);
                let Some(j) = c.min_order() else { continue };
                let prod = self.mono_mul(&head, t, k - j)?;
                for (u, d) in prod.iter() {
                    add_into(&mut out, u.clone(), &c.mul_truncated(d, k));
                }
            }
        }
        let out = Rc::new(out);
        self.gen_cache.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// `a · b` for normal monomials, to z-order `k`.
    pub fn mono_mul(&self, a: &PbwMonomial, b: &PbwMonomial, k: u32) -> Result<Rc<Terms>> {
        match (a.last(), b.first()) {
            (None, _) | (_, None) => return Ok(Rc::new(Self::unit_terms(a.combine(b), k))),
            (Some(l), Some(f)) if l <= f => {
                return Ok(Rc::new(Self::unit_terms(a.combine(b), k)))
            }
            _ => {}
        }
        let key = (a.clone(), b.clone(), k);
        if let Some(hit) = self.mono_cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let mut cur = Self::unit_terms(a.clone(), k);
        for g in b.word() {
            let mut next = Terms::new();
            for (t, c) in &cur {
                self.add_times_gen(&mut next, t, c, g, k)?;
            }
            cur = next;
        }
        let out = Rc::new(cur);
        self.mono_cache.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    fn mul_terms(&self, a: &Terms, b: &Terms, k: u32) -> Result<Terms> {
        let mut out = Terms::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let c = ca.mul_truncated(cb, k);
                let Some(j) = c.min_order() else { continue };
                for (u, d) in self.mono_mul(ma, mb, k - j)?.iter() {
                    add_into(&mut out, u.clone(), &c.mul_truncated(d, k));
                }
            }
        }
        Ok(out)
    }

    /// `a · b` to z-order `min(K_a, K_b)`.
    pub fn multiply(&self, a: &UeaElement, b: &UeaElement) -> Result<UeaElement> {
        let k = a.truncation().min(b.truncation());
        let terms = self.mul_terms(a.terms(), b.terms(), k)?;
        Ok(UeaElement::from_terms(self.n, k, terms))
    }

    /// Slot-wise product of two tensors of equal rank.
    pub fn mul_tensors(&self, a: &TensorElement, b: &TensorElement) -> Result<TensorElement> {
        if a.rank() != b.rank() {
            return Err(Error::RankMismatch {
                expected: a.rank(),
                found: b.rank(),
            });
        }
        let k = a.truncation().min(b.truncation());
        let mut out: BTreeMap<Vec<PbwMonomial>, ZSeries> = BTreeMap::new();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let c = ca.mul_truncated(cb, k);
                let Some(j) = c.min_order() else { continue };
                let slots = ka
                    .iter()
                    .zip(kb)
                    .map(|(x, y)| self.mono_mul(x, y, k - j))
                    .collect::<Result<Vec<_>>>()?;
                let mut partial: Vec<(Vec<PbwMonomial>, ZSeries)> = vec![(Vec::new(), c)];
                for slot in &slots {
                    let mut next = Vec::new();
                    for (key, coeff) in &partial {
                        for (u, d) in slot.iter() {
                            let prod = coeff.mul_truncated(d, k);
                            if prod.is_zero() {
                                continue;
                            }
                            let mut key = key.clone();
                            key.push(u.clone());
                            next.push((key, prod));
                        }
                    }
                    partial = next;
                }
                for (key, coeff) in partial {
                    add_into(&mut out, key, &coeff);
                }
            }
        }
        let mut t = TensorElement::zero(self.n, a.rank(), k);
        for (key, c) in out {
            t.add_term(key, &c);
        }
        Ok(t)
    }

    fn coproducts(&self) -> Result<&(u32, Vec<TensorElement>)> {
        self.coproducts.as_ref().ok_or(Error::SeriesIncomplete {
            needed: 0,
            available: 0,
        })
    }

    /// `Δ(m)` for a normal monomial, as the ordered product of generator
    /// coproducts.
    pub fn delta_mono(&self, m: &PbwMonomial) -> Result<Rc<TensorElement>> {
        let (k, gens) = self.coproducts()?;
        let Some(l) = m.last() else {
            return Ok(Rc::new(TensorElement::unit(self.n, 2, *k)));
        };
        if let Some(hit) = self.delta_cache.borrow().get(m) {
            return Ok(hit.clone());
        }
        let head = m.with_delta(l, -1);
        let out = if head.is_unit() {
            gens[l].clone()
        } else {
            let dh = self.delta_mono(&head)?;
            self.mul_tensors(&dh, &gens[l])?
        };
        let out = Rc::new(out);
        self.delta_cache.borrow_mut().insert(m.clone(), out.clone());
        Ok(out)
    }

    /// `Δ(a)` extended as an algebra map.
    pub fn delta(&self, a: &UeaElement) -> Result<TensorElement> {
        let (k, _) = self.coproducts()?;
        let k = (*k).min(a.truncation());
        let mut out = TensorElement::zero(self.n, 2, k);
        for (m, c) in a.terms() {
            if c.min_order().map_or(true, |j| j > k) {
                continue;
            }
            let dm = self.delta_mono(m)?;
            for (key, d) in dm.terms() {
                out.add_term(key.clone(), &c.mul_truncated(d, k));
            }
        }
        Ok(out)
    }

    /// `(Δ⊗1)t` for a rank-2 tensor.
    pub fn delta_left(&self, t: &TensorElement) -> Result<TensorElement> {
        self.delta_slot(t, 0)
    }

    /// `(1⊗Δ)t` for a rank-2 tensor.
    pub fn delta_right(&self, t: &TensorElement) -> Result<TensorElement> {
        self.delta_slot(t, 1)
    }

    fn delta_slot(&self, t: &TensorElement, slot: usize) -> Result<TensorElement> {
        if t.rank() != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                found: t.rank(),
            });
        }
        let (k, _) = self.coproducts()?;
        let k = (*k).min(t.truncation());
        let mut out = TensorElement::zero(self.n, 3, k);
        for (key, c) in t.terms() {
            let Some(j) = c.min_order() else { continue };
            if j > k {
                continue;
            }
            let dm = self.delta_mono(&key[slot])?;
            let other = &key[1 - slot];
            for (dk, d) in dm.terms() {
                let mut new_key = dk.clone();
                if slot == 0 {
                    new_key.push(other.clone());
                } else {
                    new_key.insert(0, other.clone());
                }
                out.add_term(new_key, &c.mul_truncated(d, k));
            }
        }
        Ok(out)
    }
}

/// Normal form of `coeff · Y_{w0} Y_{w1} ⋯` to z-order `k`, dropping monomials
/// of degree above `max_degree`.
pub fn normal_order(
    word: &[usize],
    coeff: &ZSeries,
    table: &CommutatorTable,
    max_degree: u32,
    k: u32,
) -> Result<UeaElement> {
    let n = table.num_generators();
    let rw = Rewriter::new(table);
    let mut cur = Terms::new();
    cur.insert(PbwMonomial::unit(n), coeff.with_truncation(k));
    for &g in word {
        check_generator(n, g)?;
        let mut next = Terms::new();
        for (t, c) in &cur {
            rw.add_times_gen(&mut next, t, c, g, k)?;
        }
        cur = next;
    }
    Ok(UeaElement::from_terms(n, k, cur).truncate_degree(max_degree))
}

fn check_generator(n: usize, g: usize) -> Result<()> {
    if g >= n {
        return Err(Error::UnknownGenerator(format!("#{g}")));
    }
    Ok(())
}

/// Word-level normal ordering that rewrites one descent `Y_j Y_i` (`j > i`)
/// at a time, with `choose` picking which descent among those present.
///
/// Slow and unmemoized; it exists as an independent rewriting strategy.
pub fn normal_order_with(
    word: &[usize],
    coeff: &ZSeries,
    table: &CommutatorTable,
    max_degree: u32,
    k: u32,
    mut choose: impl FnMut(&[usize]) -> usize,
) -> Result<UeaElement> {
    let n = table.num_generators();
    for &g in word {
        check_generator(n, g)?;
    }
    let mut pending: BTreeMap<Vec<usize>, ZSeries> = BTreeMap::new();
    add_into(&mut pending, word.to_vec(), &coeff.with_truncation(k));
    let mut done = UeaElement::zero(n, k);
    while let Some((w, c)) = pending.pop_first() {
        let descents: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]).collect();
        if descents.is_empty() {
            let mut exps = vec![0u32; n];
            for g in &w {
                exps[*g] += 1;
            }
            done.add_term(PbwMonomial::from_exponents(exps), &c);
            continue;
        }
        let p = descents[choose(&descents) % descents.len()];
        let mut swapped = w.clone();
        swapped.swap(p, p + 1);
        add_into(&mut pending, swapped, &c);
        let bracket = table.get(w[p], w[p + 1]);
        if bracket.is_zero() {
            continue;
        }
        let j = c.min_order().expect("stored coefficients are nonzero");
        let needed = k - j;
        if needed > table.populated_z_order() {
            return Err(Error::TableIncomplete {
                needed,
                populated: table.populated_z_order(),
            });
        }
        for (m, d) in bracket.terms() {
            let mut new_word = w[..p].to_vec();
            new_word.extend(m.word());
            new_word.extend_from_slice(&w[p + 2..]);
            add_into(&mut pending, new_word, &c.mul_truncated(d, k));
        }
    }
    Ok(done.truncate_degree(max_degree))
}

/// The associative product, normal-ordered.
pub fn multiply(
    a: &UeaElement,
    b: &UeaElement,
    table: &CommutatorTable,
    max_degree: u32,
    k: u32,
) -> Result<UeaElement> {
    let rw = Rewriter::new(table);
    let a = a.with_truncation(k.min(a.truncation()));
    let b = b.with_truncation(k.min(b.truncation()));
    Ok(rw.multiply(&a, &b)?.truncate_degree(max_degree))
}

/// `ab − ba`.
pub fn commutator(
    a: &UeaElement,
    b: &UeaElement,
    table: &CommutatorTable,
    max_degree: u32,
    k: u32,
) -> Result<UeaElement> {
    let rw = Rewriter::new(table);
    let a = a.with_truncation(k.min(a.truncation()));
    let b = b.with_truncation(k.min(b.truncation()));
    let ab = rw.multiply(&a, &b)?;
    let ba = rw.multiply(&b, &a)?;
    Ok(ab.sub(&ba).truncate_degree(max_degree))
}

/// The undeformed coproduct `Δ₍0₎`, extended multiplicatively.
///
/// On a normal monomial each slot receives an ordered sub-word, so no
/// rewriting is needed: the terms are the exponent splits.
pub fn primitive_coproduct(a: &UeaElement) -> TensorElement {
    let mut out = TensorElement::zero(a.num_generators(), 2, a.truncation());
    for (m, c) in a.terms() {
        for (x, y, mult) in m.splits() {
            out.add_term(vec![x, y], &c.scale(&mult));
        }
    }
    out
}

/// `σ(A⊗B) = B⊗A`.
pub fn flip(t: &TensorElement) -> Result<TensorElement> {
    if t.rank() != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            found: t.rank(),
        });
    }
    let mut out = TensorElement::zero(t.num_generators(), 2, t.truncation());
    for (key, c) in t.terms() {
        out.add_term(vec![key[1].clone(), key[0].clone()], c);
    }
    Ok(out)
}

/// `Δ(a)` from the generator coproducts in `series`, to z-order `k`.
pub fn coproduct_extend(
    series: &CoproductSeries,
    a: &UeaElement,
    table: &CommutatorTable,
    max_degree: u32,
    k: u32,
) -> Result<TensorElement> {
    let rw = Rewriter::new(table).with_coproducts(series, k)?;
    Ok(rw.delta(a)?.truncate_degree(max_degree))
}
