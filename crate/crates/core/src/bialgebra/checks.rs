//! Axiom checks. Each check reports every failing index tuple together with
//! its nonzero residual.

use std::collections::BTreeMap;

use super::{accumulate, BracketTensor, LieBialgebra, LieTensor2, LieVector};
use crate::scalars::AlgebraicScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    Vector(LieVector),
    Tensor(LieTensor2),
    Scalar(AlgebraicScalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub indices: Vec<usize>,
    pub residual: Residual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub check: String,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    pub fn from_failures(check: &str, failures: Vec<Failure>) -> Self {
        Self {
            check: check.to_string(),
            passed: failures.is_empty(),
            failures,
        }
    }
}

/// `[[Z_p,Z_q],Z_r] + [[Z_q,Z_r],Z_p] + [[Z_r,Z_p],Z_q] = 0` for `p < q < r`.
pub fn check_jacobi(f: &BracketTensor) -> ValidationReport {
    let n = f.dim();
    let unit = |i: usize| -> LieVector { [(i, AlgebraicScalar::one())].into_iter().collect() };
    let mut failures = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            for r in q + 1..n {
                let mut sum = LieVector::new();
                for (a, b, c) in [(p, q, r), (q, r, p), (r, p, q)] {
                    for (k, x) in f.bracket_vectors(&f.bracket(a, b), &unit(c)) {
                        accumulate(&mut sum, k, &x);
                    }
                }
                if !sum.is_empty() {
                    failures.push(Failure {
                        indices: vec![p, q, r],
                        residual: Residual::Vector(sum),
                    });
                }
            }
        }
    }
    ValidationReport::from_failures("jacobi", failures)
}

/// `x · (a⊗b) = [x,a]⊗b + a⊗[x,b]` for a generator `x`.
fn ad_tensor(f: &BracketTensor, x: usize, t: &LieTensor2, sign: &AlgebraicScalar, out: &mut LieTensor2) {
    for ((a, b), c) in t {
        let c = c * sign;
        for (k, y) in f.bracket(x, *a) {
            accumulate(out, (k, *b), &(&c * &y));
        }
        for (k, y) in f.bracket(x, *b) {
            accumulate(out, (*a, k), &(&c * &y));
        }
    }
}

/// The 1-cocycle condition `δ([x,y]) = x·δ(y) − y·δ(x)` on generator pairs,
/// evaluated through the adjoint action on g⊗g.
pub fn check_cocycle(b: &LieBialgebra) -> ValidationReport {
    let f = b.brackets();
    let c = b.cocommutators();
    let n = b.dim();
    let images: Vec<LieTensor2> = (0..n).map(|p| c.image(p)).collect();
    let one = AlgebraicScalar::one();
    let minus_one = -&one;
    let mut failures = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let mut residual = LieTensor2::new();
            for (r, x) in f.bracket(p, q) {
                for (key, y) in &images[r] {
                    accumulate(&mut residual, *key, &(&x * y));
                }
            }
            ad_tensor(f, p, &images[q], &minus_one, &mut residual);
            ad_tensor(f, q, &images[p], &one, &mut residual);
            if !residual.is_empty() {
                failures.push(Failure {
                    indices: vec![p, q],
                    residual: Residual::Tensor(residual),
                });
            }
        }
    }
    ValidationReport::from_failures("cocycle", failures)
}

/// The compatibility identity in components, for `p < q` and `s < t`:
///
/// `f^r_{pq} c_r^{st} = f^s_{pa} c_q^{at} + f^t_{pa} c_q^{sa} − f^s_{qa} c_p^{at} − f^t_{qa} c_p^{sa}`.
///
/// Both sides are skew in `(s, t)`, so only `s < t` is evaluated.
pub fn check_compatibility(b: &LieBialgebra) -> ValidationReport {
    let f = b.brackets();
    let c = b.cocommutators();
    let n = b.dim();
    // by_first[p][a] = [(t, c_p^{a,t})], by_second[p][a] = [(s, c_p^{s,a})]
    let mut by_first: Vec<BTreeMap<usize, Vec<(usize, AlgebraicScalar)>>> = vec![BTreeMap::new(); n];
    let mut by_second: Vec<BTreeMap<usize, Vec<(usize, AlgebraicScalar)>>> = vec![BTreeMap::new(); n];
    for (p, wedges) in c.iter() {
        for ((q, r), x) in wedges {
            by_first[*p].entry(*q).or_default().push((*r, x.clone()));
            by_first[*p].entry(*r).or_default().push((*q, -x));
            by_second[*p].entry(*r).or_default().push((*q, x.clone()));
            by_second[*p].entry(*q).or_default().push((*r, -x));
        }
    }
    let mut failures = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let mut residual: LieTensor2 = BTreeMap::new();
            let mut put = |s: usize, t: usize, v: AlgebraicScalar| {
                if s < t {
                    accumulate(&mut residual, (s, t), &v);
                }
            };
            for (r, x) in f.bracket(p, q) {
                for ((s, t), y) in c.wedges(r) {
                    put(s, t, &x * &y);
                }
            }
            for (outer, inner, sign) in [(p, q, false), (q, p, true)] {
                for a in 0..n {
                    let fa = f.bracket(outer, a);
                    if fa.is_empty() {
                        continue;
                    }
                    for (s, fx) in &fa {
                        for (t, cy) in by_first[inner].get(&a).into_iter().flatten() {
                            let v = fx * cy;
                            put(*s, *t, if sign { v } else { -v });
                        }
                    }
                    for (t, fx) in &fa {
                        for (s, cy) in by_second[inner].get(&a).into_iter().flatten() {
                            let v = fx * cy;
                            put(*s, *t, if sign { v } else { -v });
                        }
                    }
                }
            }
            if !residual.is_empty() {
                failures.push(Failure {
                    indices: vec![p, q],
                    residual: Residual::Tensor(residual),
                });
            }
        }
    }
    ValidationReport::from_failures("compatibility", failures)
}
