use std::collections::{BTreeMap, HashMap};

use crate::bialgebra::CocommutatorTensor;
use crate::error::{Error, Result};
use crate::linalg::{LinearSystem, SparseRow};
use crate::scalars::{AlgebraicScalar, ZSeries};
use crate::uea::{CommutatorTable, CoproductSeries, PbwMonomial, Rewriter, TensorElement, UeaElement};

/// Removable tensors at one order: the mixed parts `Δ₍0₎(P) − P⊗1 − 1⊗P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeBasis {
    pub order: u32,
    pub elements: Vec<TensorElement>,
}

/// `Δ₍0₎(m) − m⊗1 − 1⊗m` as `(left, right, multiplicity)`; for the unit
/// this is `−1⊗1`.
pub(crate) fn mixed_split(m: &PbwMonomial) -> Vec<(PbwMonomial, PbwMonomial, AlgebraicScalar)> {
    if m.is_unit() {
        return vec![(m.clone(), m.clone(), AlgebraicScalar::from_int(-1))];
    }
    m.splits()
        .into_iter()
        .filter(|(a, b, _)| !a.is_unit() && !b.is_unit())
        .collect()
}

/// One removable tensor per monomial of degree `k+1`.
///
/// Distinct monomials give tensors with disjoint supports (every key
/// multiplies back to its monomial), so the set is already independent.
pub fn gauge_basis(k: u32, num_generators: usize) -> GaugeBasis {
    let elements = PbwMonomial::all_of_degree(num_generators, k + 1)
        .into_iter()
        .map(|p| {
            let mut t = TensorElement::zero(num_generators, 2, 0);
            for (a, b, mult) in mixed_split(&p) {
                t.add_term(vec![a, b], &ZSeries::constant(mult, 0));
            }
            t
        })
        .filter(|t| !t.is_zero())
        .collect();
    GaugeBasis { order: k, elements }
}

fn zero_tensors(n: usize, rank: usize, k: u32) -> Vec<TensorElement> {
    (0..n).map(|_| TensorElement::zero(n, rank, k)).collect()
}

/// The series through `k−1` with `Δ₍k₎ = 0` appended.
fn with_provisional_order(series: &CoproductSeries, k: u32) -> CoproductSeries {
    let mut s = series.truncated(k - 1);
    s.push_order(zero_tensors(series.num_generators(), 2, k));
    s
}

/// Rank-3 z^k coefficients of `(Δ⊗1 − 1⊗Δ)Δ(Y_i)` with everything the
/// rewriter needs already in place.
fn residual_with(rw: &Rewriter<'_>, series: &CoproductSeries, k: u32) -> Result<Vec<TensorElement>> {
    (0..series.num_generators())
        .map(|i| {
            let t = series.total(i, k)?;
            let r = rw.delta_left(&t)?.sub(&rw.delta_right(&t)?)?;
            Ok(r.part(k))
        })
        .collect()
}

/// `Σ_{j ≤ k} (Δ₍j₎⊗1 − 1⊗Δ₍j₎)Δ₍k−j₎(Y_i)` for every generator.
pub fn coassoc_residual(series: &CoproductSeries, k: u32, table: &CommutatorTable) -> Result<Vec<TensorElement>> {
    if series.achieved_order() < k {
        return Err(Error::SeriesIncomplete {
            needed: k,
            available: series.achieved_order(),
        });
    }
    if table.populated_z_order() < k {
        return Err(Error::TableIncomplete {
            needed: k,
            populated: table.populated_z_order(),
        });
    }
    let rw = Rewriter::new(table).with_coproducts(series, k)?;
    residual_with(&rw, series, k)
}

fn check_inputs(series: &CoproductSeries, k: u32, table: &CommutatorTable) -> Result<()> {
    assert!(k >= 1, "order 0 is fixed");
    if series.achieved_order().saturating_add(1) < k {
        return Err(Error::SeriesIncomplete {
            needed: k - 1,
            available: series.achieved_order(),
        });
    }
    if table.populated_z_order().saturating_add(1) < k {
        return Err(Error::TableIncomplete {
            needed: k - 1,
            populated: table.populated_z_order(),
        });
    }
    Ok(())
}

/// Degrees of the coproduct ansatz at order `k`.
///
/// Order 1 is quadratic. Above it every degree from 3 to `k+1` is admitted:
/// the only solutions of the homogeneous equation in those degrees are the
/// gauge tensors, so the extra room costs no uniqueness, while degree 2
/// would reopen the `g∧g` freedom and is left out.
fn coproduct_degrees(k: u32, max_degree: u32) -> Vec<u32> {
    if k == 1 {
        return if max_degree >= 2 { vec![2] } else { vec![] };
    }
    (3..=(k + 1).min(max_degree)).collect()
}

fn index_of<K: std::hash::Hash + Eq + Clone>(index: &mut HashMap<K, usize>, keys: &mut Vec<K>, key: K) -> usize {
    if let Some(i) = index.get(&key) {
        return *i;
    }
    keys.push(key.clone());
    index.insert(key, keys.len() - 1);
    keys.len() - 1
}

fn describe_failure(
    system: &LinearSystem,
    labels: &[String],
    generator: &str,
) -> String {
    let mut parts: Vec<String> = system
        .inconsistencies()
        .iter()
        .map(|inc| format!("[{}] residual {}", labels[inc.equation], inc.residual))
        .collect();
    let total = parts.len();
    parts.truncate(12);
    let mut detail = format!("{generator}: {total} inconsistent equation(s): {}", parts.join("; "));
    if total > parts.len() {
        detail.push_str("; ...");
    }
    detail
}

fn key_label(key: &[PbwMonomial]) -> String {
    key.iter()
        .map(|m| format!("{:?}", m.exponents()))
        .collect::<Vec<_>>()
        .join(" (x) ")
}

/// The gauge-fixed `Δ₍k₎` for every generator, with the summed dimension of
/// freedom left after gauge fixing.
///
/// `series` must be solved through `k−1` and `table` populated through
/// `k−1`; anything beyond is ignored.
pub fn solve_coproduct_order(
    series: &CoproductSeries,
    k: u32,
    table: &CommutatorTable,
    delta: &CocommutatorTensor,
    max_degree: u32,
) -> Result<(Vec<TensorElement>, usize)> {
    check_inputs(series, k, table)?;
    let n = series.num_generators();
    let provisional = with_provisional_order(series, k);
    let tbl = table.truncated(k - 1).provisional(k);
    let rw = Rewriter::new(&tbl).with_coproducts(&provisional, k)?;
    let residual = residual_with(&rw, &provisional, k)?;

    // Unknowns x_{a,b} for z^k a⊗b.
    let mut unknowns = Vec::new();
    for d in coproduct_degrees(k, max_degree) {
        for da in 1..d {
            for a in PbwMonomial::all_of_degree(n, da) {
                for b in PbwMonomial::all_of_degree(n, d - da) {
                    unknowns.push((a.clone(), b));
                }
            }
        }
    }
    let unknown_index: HashMap<(PbwMonomial, PbwMonomial), usize> =
        unknowns.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();

    // (Δ₍0₎⊗1 − 1⊗Δ₍0₎) + (·⊗1 − 1⊗·) reduces to mixed(a)⊗b − a⊗mixed(b).
    let mut row_index = HashMap::new();
    let mut row_keys: Vec<Vec<PbwMonomial>> = Vec::new();
    let mut rows: Vec<SparseRow> = Vec::new();
    for (col, (a, b)) in unknowns.iter().enumerate() {
        for (x, y, mult) in mixed_split(a) {
            let r = index_of(&mut row_index, &mut row_keys, vec![x, y, b.clone()]);
            if r == rows.len() {
                rows.push(SparseRow::new());
            }
            crate::bialgebra::accumulate(&mut rows[r], col, &mult);
        }
        for (x, y, mult) in mixed_split(b) {
            let r = index_of(&mut row_index, &mut row_keys, vec![a.clone(), x, y]);
            if r == rows.len() {
                rows.push(SparseRow::new());
            }
            crate::bialgebra::accumulate(&mut rows[r], col, &(-mult));
        }
    }

    let gauge_degrees: Vec<u32> = coproduct_degrees(k, max_degree);
    let mut out = Vec::with_capacity(n);
    let mut free = 0;
    for (i, res) in residual.iter().enumerate() {
        let mut system = LinearSystem::new(unknowns.len());
        let mut labels = Vec::new();

        // gauge: the (first letter, rest) and (rest, first letter) components
        // of every monomial vanish together
        for d in &gauge_degrees {
            for p in PbwMonomial::all_of_degree(n, *d) {
                let f = p.first().expect("degree ≥ 2");
                let head = PbwMonomial::generator(n, f);
                let rest = p.with_delta(f, -1);
                let mut row = SparseRow::new();
                let one = AlgebraicScalar::one();
                crate::bialgebra::accumulate(&mut row, unknown_index[&(head.clone(), rest.clone())], &one);
                crate::bialgebra::accumulate(&mut row, unknown_index[&(rest, head)], &one);
                system.add_equation(row, AlgebraicScalar::zero());
                labels.push(format!("gauge {:?}", p.exponents()));
            }
        }

        if k == 1 {
            let half = AlgebraicScalar::frac(1, 2);
            for q in 0..n {
                for r in q + 1..n {
                    let gq = PbwMonomial::generator(n, q);
                    let gr = PbwMonomial::generator(n, r);
                    let mut row = SparseRow::new();
                    row.insert(unknown_index[&(gq.clone(), gr.clone())], half.clone());
                    row.insert(unknown_index[&(gr, gq)], -&half);
                    system.add_equation(row, delta.get(i, q, r));
                    labels.push(format!("skew part ({q},{r})"));
                }
            }
        }

        // L(x) = −R, row by row; residual keys outside the image give 0 = −R.
        let mut rhs: BTreeMap<usize, AlgebraicScalar> = BTreeMap::new();
        let mut extra: Vec<(Vec<PbwMonomial>, AlgebraicScalar)> = Vec::new();
        for (key, c) in res.terms() {
            let value = -c.coeff(k);
            if value.is_zero() {
                continue;
            }
            match row_index.get(key) {
                Some(r) => {
                    rhs.insert(*r, value);
                }
                None => extra.push((key.clone(), value)),
            }
        }
        for (r, row) in rows.iter().enumerate() {
            let v = rhs.remove(&r).unwrap_or_else(AlgebraicScalar::zero);
            system.add_equation(row.clone(), v);
            labels.push(format!("coassociativity {}", key_label(&row_keys[r])));
        }
        for (key, v) in extra {
            system.add_equation(SparseRow::new(), v);
            labels.push(format!("coassociativity {} (outside ansatz)", key_label(&key)));
        }

        let Some(x) = system.solve() else {
            return Err(Error::NoSolution {
                order: k,
                stage: "coproduct".into(),
                detail: describe_failure(&system, &labels, &format!("generator {i}")),
            });
        };
        free += system.free_dimension();
        let mut t = TensorElement::zero(n, 2, k);
        for (col, value) in x.into_iter().enumerate() {
            if !value.is_zero() {
                let (a, b) = &unknowns[col];
                t.add_term(vec![a.clone(), b.clone()], &ZSeries::monomial(value, k, k));
            }
        }
        out.push(t);
    }
    Ok((out, free))
}

/// Degrees of the commutator correction ansatz at order `k`. Degree 1 is
/// left out: a linear correction is invisible to the mixed coproduct and
/// would be a z-dependent renormalization of the brackets.
fn commutator_degrees(k: u32, max_degree: u32) -> Vec<u32> {
    std::iter::once(0).chain(2..=(k + 1).min(max_degree)).collect()
}

/// Adds the z^k corrections to every `[Y_i, Y_j]` forced by the
/// homomorphism property. Returns the table populated through `k` and the
/// summed freedom left in the commutator solves.
pub fn solve_commutators_order(
    series: &CoproductSeries,
    table: &CommutatorTable,
    k: u32,
    max_degree: u32,
) -> Result<(CommutatorTable, usize)> {
    if series.achieved_order() < k {
        return Err(Error::SeriesIncomplete {
            needed: k,
            available: series.achieved_order(),
        });
    }
    if table.populated_z_order().saturating_add(1) < k {
        return Err(Error::TableIncomplete {
            needed: k - 1,
            populated: table.populated_z_order(),
        });
    }
    let n = series.num_generators();
    let series = series.truncated(k);
    let provisional = table.truncated(k - 1).provisional(k);
    let rw = Rewriter::new(&provisional).with_coproducts(&series, k)?;
    let totals = (0..n).map(|i| series.total(i, k)).collect::<Result<Vec<_>>>()?;

    let unknowns: Vec<PbwMonomial> = commutator_degrees(k, max_degree)
        .into_iter()
        .flat_map(|d| PbwMonomial::all_of_degree(n, d))
        .collect();
    let mut row_index = HashMap::new();
    let mut row_keys: Vec<Vec<PbwMonomial>> = Vec::new();
    let mut rows: Vec<SparseRow> = Vec::new();
    for (col, p) in unknowns.iter().enumerate() {
        for (x, y, mult) in mixed_split(p) {
            let r = index_of(&mut row_index, &mut row_keys, vec![x, y]);
            if r == rows.len() {
                rows.push(SparseRow::new());
            }
            crate::bialgebra::accumulate(&mut rows[r], col, &mult);
        }
    }

    let mut updated = provisional.clone();
    let mut free = 0;
    for i in 0..n {
        for j in i + 1..n {
            let commutator = rw
                .mul_tensors(&totals[i], &totals[j])?
                .sub(&rw.mul_tensors(&totals[j], &totals[i])?)?;
            let known = rw.delta(&provisional.get(i, j))?;
            let target = commutator.sub(&known)?.part(k);

            let mut system = LinearSystem::new(unknowns.len());
            let mut labels = Vec::new();
            let mut rhs: BTreeMap<usize, AlgebraicScalar> = BTreeMap::new();
            let mut extra = Vec::new();
            for (key, c) in target.terms() {
                let value = c.coeff(k);
                if value.is_zero() {
                    continue;
                }
                match row_index.get(key) {
                    Some(r) => {
                        rhs.insert(*r, value);
                    }
                    None => extra.push((key.clone(), value)),
                }
            }
            for (r, row) in rows.iter().enumerate() {
                let v = rhs.remove(&r).unwrap_or_else(AlgebraicScalar::zero);
                system.add_equation(row.clone(), v);
                labels.push(format!("homomorphism {}", key_label(&row_keys[r])));
            }
            for (key, v) in extra {
                system.add_equation(SparseRow::new(), v);
                labels.push(format!("homomorphism {} (outside ansatz)", key_label(&key)));
            }
            let Some(x) = system.solve() else {
                return Err(Error::NoSolution {
                    order: k,
                    stage: "commutators".into(),
                    detail: describe_failure(&system, &labels, &format!("pair ({i},{j})")),
                });
            };
            free += system.free_dimension();
            let mut correction = UeaElement::zero(n, k);
            for (col, value) in x.into_iter().enumerate() {
                if !value.is_zero() {
                    correction.add_term(unknowns[col].clone(), &ZSeries::monomial(value, k, k));
                }
            }
            updated.add_correction(i, j, &correction);
        }
    }
    Ok((updated, free))
}

/// `Δ([Y_i, Y_j]) − [Δ(Y_i), Δ(Y_j)]` through order `k` for every pair
/// `i < j`; only nonzero residuals are returned.
pub fn homomorphism_residual(
    series: &CoproductSeries,
    table: &CommutatorTable,
    k: u32,
) -> Result<Vec<((usize, usize), TensorElement)>> {
    if table.populated_z_order() < k {
        return Err(Error::TableIncomplete {
            needed: k,
            populated: table.populated_z_order(),
        });
    }
    let n = series.num_generators();
    let rw = Rewriter::new(table).with_coproducts(series, k)?;
    let totals = (0..n).map(|i| series.total(i, k)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = rw.delta(&table.get(i, j).with_truncation(k))?;
            let rhs = rw
                .mul_tensors(&totals[i], &totals[j])?
                .sub(&rw.mul_tensors(&totals[j], &totals[i])?)?;
            let r = lhs.sub(&rhs)?;
            if !r.is_zero() {
                out.push(((i, j), r));
            }
        }
    }
    Ok(out)
}
