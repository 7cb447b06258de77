//! Perturbative Friedrichs primitivization.
//!
//! Starting from any basic set `X_i` whose linear part is invertible, the
//! lowest defect of `Δ(X_i)` against the target coproduct is the mixed
//! part `Δ₍0₎(Q) − Q⊗1 − 1⊗Q` of some polynomial `Q`; subtracting `Q`,
//! written in the current basic set, removes it. Repeating weight by weight
//! recovers the target generators.
//!
//! In the undeformed case products of non-ordered elements rewrite into
//! terms of lower polynomial degree, so plain degree is not preserved by
//! multiplication and the iteration would never close. The classical run
//! therefore works in the graded form of `U(g)` where every bracket carries
//! one power of a bookkeeping parameter (stored in the `z` slot) and the
//! weight of `z^s·m` is `s + deg m`. Products are exactly weight-additive
//! there, and specializing the parameter to 1 gives back `U(g)`. For bases
//! built from ordered products, such as `Y_± = J_± + J₃²J_±`, no brackets
//! ever fire and weight is ordinary degree. The deformed run is graded by
//! the z-order alone.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::solve::mixed_split;
use super::QuantizationResult;
use crate::bialgebra::BracketTensor;
use crate::error::{Error, Result};
use crate::linalg::{invert, LinearSystem, SparseRow};
use crate::scalars::{AlgebraicScalar, ZSeries};
use crate::uea::{CommutatorTable, CoproductSeries, PbwMonomial, Rewriter, TensorElement, UeaElement};

/// `X_i ← X_i − P(X)`, where `P` is written in the basic set current at the
/// start of `step`. All entries of one step are applied simultaneously.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisChange {
    pub step: usize,
    pub order: u32,
    pub generator: usize,
    #[serde(serialize_with = "serialize_polynomial")]
    pub polynomial: BTreeMap<PbwMonomial, ZSeries>,
}

fn serialize_polynomial<S: serde::Serializer>(
    p: &BTreeMap<PbwMonomial, ZSeries>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for (m, c) in p {
        seq.serialize_element(&(m.exponents(), c.to_string()))?;
    }
    seq.end()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasisChangeLog {
    pub entries: Vec<BasisChange>,
}

impl BasisChangeLog {
    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    /// Text rendering, one entry per line, polynomials in `X1, X2, …`
    /// standing for the basic set current at that step.
    pub fn render(&self, names: &[&str]) -> Vec<String> {
        let xs: Vec<String> = names.iter().map(|n| format!("X[{n}]")).collect();
        let xs: Vec<&str> = xs.iter().map(String::as_str).collect();
        self.entries
            .iter()
            .map(|e| {
                let n = names.len();
                let poly = UeaElement::from_terms(n, truncation_of(&e.polynomial), e.polynomial.clone());
                format!(
                    "step {} order {}: {} -= {}",
                    e.step,
                    e.order,
                    names[e.generator],
                    poly.render(&xs)
                )
            })
            .collect()
    }
}

fn truncation_of(p: &BTreeMap<PbwMonomial, ZSeries>) -> u32 {
    p.values().map(ZSeries::truncation).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Grading {
    /// weight `s + deg m`, bracket-graded undeformed algebra
    Graded,
    /// weight `s`, the deformed algebra
    ZOrder,
}

/// The algebra, target coproduct and truncation a primitivization runs in.
pub struct FriedrichsFrame {
    n: usize,
    table: CommutatorTable,
    series: Option<CoproductSeries>,
    grading: Grading,
    limit: u32,
}

fn term_weight(grading: Grading, s: u32, degree: u32) -> u32 {
    match grading {
        Grading::Graded => s + degree,
        Grading::ZOrder => s,
    }
}

impl FriedrichsFrame {
    /// The bracket-graded `U(g)` for a classical table, truncated above
    /// weight `max_weight`.
    pub fn classical(table: &CommutatorTable, max_weight: u32) -> Result<Self> {
        let n = table.num_generators();
        let mut graded = CommutatorTable::from_brackets(&BracketTensor::new(n), max_weight);
        for ((i, j), e) in table.entries() {
            if e.terms().values().any(|c| c.max_order().unwrap_or(0) > 0) {
                return Err(Error::InvalidJob(
                    "classical primitivization needs an undeformed commutator table".into(),
                ));
            }
            let shift = ZSeries::monomial(AlgebraicScalar::one(), 1, max_weight);
            graded.add_correction(*i, *j, &e.with_truncation(max_weight).scale_series(&shift));
        }
        Ok(Self {
            n,
            table: graded,
            series: None,
            grading: Grading::Graded,
            limit: max_weight,
        })
    }

    /// The deformed algebra of a quantization, truncated above `z^max_order`.
    pub fn deformed(result: &QuantizationResult, max_order: u32) -> Result<Self> {
        if result.order() < max_order {
            return Err(Error::SeriesIncomplete {
                needed: max_order,
                available: result.order(),
            });
        }
        Ok(Self {
            n: result.names.len(),
            table: result.commutators.truncated(max_order),
            series: Some(result.coproducts.truncated(max_order)),
            grading: Grading::ZOrder,
            limit: max_order,
        })
    }

    fn weight_of(&self, s: u32, m: &PbwMonomial) -> u32 {
        term_weight(self.grading, s, m.degree())
    }

    /// Drops everything above the weight limit.
    pub fn clean(&self, e: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero(self.n, self.limit);
        for (m, c) in e.terms() {
            let mut kept = ZSeries::zero(self.limit);
            for (s, v) in c.terms() {
                if s <= self.limit && self.weight_of(s, m) <= self.limit {
                    kept.add_term(s, v);
                }
            }
            out.add_term(m.clone(), &kept);
        }
        out
    }

    fn clean_tensor(&self, t: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.n, t.rank(), self.limit);
        for (key, c) in t.terms() {
            let deg: u32 = key.iter().map(PbwMonomial::degree).sum();
            let mut kept = ZSeries::zero(self.limit);
            for (s, v) in c.terms() {
                if s <= self.limit && term_weight(self.grading, s, deg) <= self.limit {
                    kept.add_term(s, v);
                }
            }
            out.add_term(key.clone(), &kept);
        }
        out
    }

    /// Ordered products `X^P` of the basic set, memoized per call site.
    fn power_cache<'b>(&'b self, rw: &'b Rewriter<'b>, xs: &'b [UeaElement]) -> Powers<'b> {
        Powers {
            frame: self,
            rw,
            xs,
            cache: HashMap::new(),
        }
    }

    /// `Σ_P c_P X^P`.
    fn evaluate(&self, powers: &mut Powers<'_>, poly: &BTreeMap<PbwMonomial, ZSeries>) -> Result<UeaElement> {
        let mut out = UeaElement::zero(self.n, self.limit);
        for (m, c) in poly {
            let xp = powers.get(m)?;
            out = out.add(&xp.scale_series(&c.with_truncation(self.limit)));
        }
        Ok(self.clean(&out))
    }

    /// `Δ(X_i)` minus the target coproduct written in the `X`, per generator.
    pub fn defect(&self, xs: &[UeaElement]) -> Result<Vec<TensorElement>> {
        match &self.series {
            None => Ok(xs
                .iter()
                .map(|x| {
                    let mut t = TensorElement::zero(self.n, 2, self.limit);
                    for (m, c) in x.terms() {
                        for (a, b, mult) in mixed_split(m) {
                            t.add_term(vec![a, b], &c.scale(&mult));
                        }
                    }
                    self.clean_tensor(&t)
                })
                .collect()),
            Some(series) => {
                let rw = Rewriter::new(&self.table).with_coproducts(series, self.limit)?;
                let mut powers = self.power_cache(&rw, xs);
                let mut out = Vec::with_capacity(xs.len());
                for (i, x) in xs.iter().enumerate() {
                    let mut t = rw.delta(&x.with_truncation(self.limit))?;
                    let target = series.total(i, self.limit)?;
                    for (key, c) in target.terms() {
                        let a = powers.get(&key[0])?;
                        let b = powers.get(&key[1])?;
                        let ab = TensorElement::from_pair(&a, &b);
                        let mut scaled = TensorElement::zero(self.n, 2, self.limit);
                        for (k2, c2) in ab.terms() {
                            scaled.add_term(k2.clone(), &c2.mul_truncated(c, self.limit));
                        }
                        t = t.sub(&scaled)?;
                    }
                    out.push(t);
                }
                Ok(out)
            }
        }
    }

    /// Applies one step of simultaneous changes.
    fn apply_step(&self, xs: &[UeaElement], changes: &[&BasisChange]) -> Result<Vec<UeaElement>> {
        let rw = Rewriter::new(&self.table);
        let mut powers = self.power_cache(&rw, xs);
        let mut out = xs.to_vec();
        for c in changes {
            let p = self.evaluate(&mut powers, &c.polynomial)?;
            out[c.generator] = self.clean(&out[c.generator].sub(&p));
        }
        Ok(out)
    }

    /// Replays a log on a basic set.
    pub fn replay(&self, basis: &[UeaElement], log: &BasisChangeLog) -> Result<Vec<UeaElement>> {
        let mut xs: Vec<UeaElement> = basis.iter().map(|x| self.clean(&x.with_truncation(self.limit))).collect();
        let mut steps: BTreeMap<usize, Vec<&BasisChange>> = BTreeMap::new();
        for e in &log.entries {
            steps.entry(e.step).or_default().push(e);
        }
        for changes in steps.values() {
            xs = self.apply_step(&xs, changes)?;
        }
        Ok(xs)
    }

    /// Linear-part normalization `X ← L⁻¹X`, as changes; empty when `L = 1`.
    fn normalization(&self, xs: &[UeaElement], step: usize, order: u32) -> Result<Vec<BasisChange>> {
        let n = self.n;
        let k = self.limit;
        let gens: Vec<PbwMonomial> = (0..n).map(|j| PbwMonomial::generator(n, j)).collect();
        let l: Vec<Vec<ZSeries>> = xs
            .iter()
            .map(|x| gens.iter().map(|g| x.coeff(g).with_truncation(k)).collect())
            .collect();
        let identity = (0..n).all(|i| (0..n).all(|j| l[i][j] == if i == j { ZSeries::one(k) } else { ZSeries::zero(k) }));
        if identity {
            return Ok(Vec::new());
        }
        let l0: Vec<Vec<AlgebraicScalar>> = l.iter().map(|r| r.iter().map(|c| c.coeff(0)).collect()).collect();
        let l0_inv = invert(&l0).map_err(|_| Error::NonInvertibleBasis)?;
        // L⁻¹ = Σ_m (−L0⁻¹ N)^m L0⁻¹ with N = L − L0
        let const_matrix = |m: &[Vec<AlgebraicScalar>]| -> Vec<Vec<ZSeries>> {
            m.iter().map(|r| r.iter().map(|c| ZSeries::constant(c.clone(), k)).collect()).collect()
        };
        let matmul = |a: &[Vec<ZSeries>], b: &[Vec<ZSeries>]| -> Vec<Vec<ZSeries>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(ZSeries::zero(k), |acc, t| acc.add(&a[i][t].mul(&b[t][j]))))
                        .collect()
                })
                .collect()
        };
        let inv0 = const_matrix(&l0_inv);
        let nmat: Vec<Vec<ZSeries>> = (0..n)
            .map(|i| (0..n).map(|j| l[i][j].sub(&ZSeries::constant(l0[i][j].clone(), k))).collect())
            .collect();
        let step_matrix: Vec<Vec<ZSeries>> = matmul(&inv0, &nmat)
            .into_iter()
            .map(|r| r.into_iter().map(|c| c.neg()).collect())
            .collect();
        let mut power = inv0.clone();
        let mut total = inv0;
        for _ in 0..k {
            power = matmul(&step_matrix, &power);
            total = (0..n)
                .map(|i| (0..n).map(|j| total[i][j].add(&power[i][j])).collect())
                .collect();
        }
        Ok((0..n)
            .filter_map(|i| {
                let mut poly = BTreeMap::new();
                for j in 0..n {
                    let target = if i == j { ZSeries::one(k) } else { ZSeries::zero(k) };
                    let c = target.sub(&total[i][j]);
                    if !c.is_zero() {
                        poly.insert(gens[j].clone(), c);
                    }
                }
                (!poly.is_empty()).then_some(BasisChange {
                    step,
                    order,
                    generator: i,
                    polynomial: poly,
                })
            })
            .collect())
    }

    /// Runs the iteration. Returns the recovered generators and the log that
    /// maps `basis` onto them.
    pub fn primitivize(&self, basis: &[UeaElement]) -> Result<(Vec<UeaElement>, BasisChangeLog)> {
        assert_eq!(basis.len(), self.n);
        let mut xs: Vec<UeaElement> = basis.iter().map(|x| self.clean(&x.with_truncation(self.limit))).collect();
        let mut log = BasisChangeLog::default();
        let mut step = 0;

        let changes = self.normalization(&xs, step, 1)?;
        self.commit(&mut xs, changes, &mut log, &mut step)?;
        for w in 0..=self.limit {
            let defects = self.defect(&xs)?;
            let mut changes = Vec::new();
            for (i, d) in defects.iter().enumerate() {
                if let Some(poly) = self.solve_weight(d, w, i)? {
                    changes.push(BasisChange {
                        step,
                        order: w,
                        generator: i,
                        polynomial: poly,
                    });
                }
            }
            self.commit(&mut xs, changes, &mut log, &mut step)?;
            let changes = self.normalization(&xs, step, w)?;
            self.commit(&mut xs, changes, &mut log, &mut step)?;
        }
        Ok((xs, log))
    }

    fn commit(
        &self,
        xs: &mut Vec<UeaElement>,
        changes: Vec<BasisChange>,
        log: &mut BasisChangeLog,
        step: &mut usize,
    ) -> Result<()> {
        if changes.is_empty() {
            return Ok(());
        }
        let refs: Vec<&BasisChange> = changes.iter().collect();
        *xs = self.apply_step(xs, &refs)?;
        log.entries.extend(changes);
        *step += 1;
        Ok(())
    }

    /// The polynomial whose mixed coproduct is the weight-`w` defect.
    fn solve_weight(&self, defect: &TensorElement, w: u32, generator: usize) -> Result<Option<BTreeMap<PbwMonomial, ZSeries>>> {
        // weight-w part keyed by tensor key, with the z-order it sits at
        let mut part: BTreeMap<Vec<PbwMonomial>, (u32, AlgebraicScalar)> = BTreeMap::new();
        for (key, c) in defect.terms() {
            let deg: u32 = key.iter().map(PbwMonomial::degree).sum();
            for (s, v) in c.terms() {
                if term_weight(self.grading, s, deg) == w {
                    part.insert(key.clone(), (s, v.clone()));
                }
            }
        }
        if part.is_empty() {
            return Ok(None);
        }
        let z_order = |p: &PbwMonomial| match self.grading {
            Grading::Graded => w - p.degree(),
            Grading::ZOrder => w,
        };
        let mut unknowns: Vec<PbwMonomial> = match self.grading {
            Grading::Graded => std::iter::once(0)
                .chain(2..=w)
                .flat_map(|d| PbwMonomial::all_of_degree(self.n, d))
                .collect(),
            Grading::ZOrder => {
                let mut set: Vec<PbwMonomial> = part.keys().map(|k| k[0].combine(&k[1])).collect();
                set.push(PbwMonomial::unit(self.n));
                set.retain(|p| p.degree() != 1);
                set.sort();
                set.dedup();
                set
            }
        };
        if self.grading == Grading::ZOrder && w == 0 {
            if unknowns.iter().any(|p| !p.is_unit()) {
                return Err(Error::InvalidJob(
                    "deformed primitivization needs a basis whose z^0 part is linear".into(),
                ));
            }
            unknowns.retain(PbwMonomial::is_unit);
        }
        let index: HashMap<&PbwMonomial, usize> = unknowns.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut rows: BTreeMap<Vec<PbwMonomial>, SparseRow> = BTreeMap::new();
        for p in &unknowns {
            for (a, b, mult) in mixed_split(p) {
                crate::bialgebra::accumulate(rows.entry(vec![a, b]).or_default(), index[p], &mult);
            }
        }
        let mut system = LinearSystem::new(unknowns.len());
        let mut labels = Vec::new();
        for (key, row) in &rows {
            let v = part.remove(key).map(|(_, v)| v).unwrap_or_default();
            system.add_equation(row.clone(), v);
            labels.push(format!("{key:?}"));
        }
        for (key, (_, v)) in part {
            system.add_equation(SparseRow::new(), v);
            labels.push(format!("{key:?} (not a mixed coproduct)"));
        }
        let Some(x) = system.solve() else {
            let detail = system
                .inconsistencies()
                .iter()
                .take(8)
                .map(|inc| format!("{} residual {}", labels[inc.equation], inc.residual))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::NoSolution {
                order: w,
                stage: "friedrichs".into(),
                detail: format!("generator {generator}: {detail}"),
            });
        };
        let poly: BTreeMap<PbwMonomial, ZSeries> = unknowns
            .iter()
            .zip(x)
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| (p.clone(), ZSeries::monomial(v, z_order(p), self.limit)))
            .collect();
        Ok((!poly.is_empty()).then_some(poly))
    }
}

struct Powers<'b> {
    frame: &'b FriedrichsFrame,
    rw: &'b Rewriter<'b>,
    xs: &'b [UeaElement],
    cache: HashMap<PbwMonomial, UeaElement>,
}

impl Powers<'_> {
    fn get(&mut self, m: &PbwMonomial) -> Result<UeaElement> {
        if let Some(hit) = self.cache.get(m) {
            return Ok(hit.clone());
        }
        let n = self.frame.n;
        let k = self.frame.limit;
        let out = match m.last() {
            None => UeaElement::one(n, k),
            Some(l) => {
                let head = m.with_delta(l, -1);
                let h = self.get(&head)?;
                let x = self.xs[l].with_truncation(k);
                if head.is_unit() {
                    x
                } else {
                    self.frame.clean(&self.rw.multiply(&h, &x)?)
                }
            }
        };
        self.cache.insert(m.clone(), out.clone());
        Ok(out)
    }
}

/// Primitive generators recovered from `basis` in `U(g)`, through weight
/// `max_weight`, with the log of basis changes.
pub fn friedrichs_primitivize(
    basis: &[UeaElement],
    table: &CommutatorTable,
    max_weight: u32,
) -> Result<(Vec<UeaElement>, BasisChangeLog)> {
    FriedrichsFrame::classical(table, max_weight)?.primitivize(basis)
}

/// The analytical generators of a quantization recovered from `basis`,
/// through `z^max_order`.
pub fn friedrichs_primitivize_deformed(
    basis: &[UeaElement],
    result: &QuantizationResult,
    max_order: u32,
) -> Result<(Vec<UeaElement>, BasisChangeLog)> {
    FriedrichsFrame::deformed(result, max_order)?.primitivize(basis)
}

/// A reproducible nonlinear basis of degree at most 3 over `n` generators:
/// `X_i = Y_i + (unitriangular linear mixing) + 1 to 3 terms of degree 2 or 3`,
/// with small nonzero integer coefficients drawn from ChaCha8 seeded by `seed`.
pub fn seeded_scramble(n: usize, seed: u64) -> Vec<UeaElement> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coeff = |rng: &mut rand_chacha::ChaCha8Rng| {
        let c: i64 = rng.gen_range(1..=3);
        let c = if rng.gen_bool(0.5) { -c } else { c };
        ZSeries::constant(AlgebraicScalar::from_int(c), 0)
    };
    let higher: Vec<PbwMonomial> = (2..=3).flat_map(|d| PbwMonomial::all_of_degree(n, d)).collect();
    (0..n)
        .map(|i| {
            let mut x = UeaElement::generator(n, i, 0);
            for j in i + 1..n {
                if rng.gen_bool(0.25) {
                    let c = coeff(&mut rng);
                    x.add_term(PbwMonomial::generator(n, j), &c);
                }
            }
            for _ in 0..rng.gen_range(1..=3) {
                let m = higher[rng.gen_range(0..higher.len())].clone();
                let c = coeff(&mut rng);
                x.add_term(m, &c);
            }
            x
        })
        .collect()
}
