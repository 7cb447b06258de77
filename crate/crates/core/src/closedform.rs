//! Recognition of truncated coefficient series as exponential, sinh-type,
//! cosh-type or constant factors, verified exactly to the available order.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::scalars::{AlgebraicScalar, SeriesPattern, ZSeries};
use crate::uea::{CommutatorTable, CoproductSeries, PbwMonomial, UeaElement};

/// A series matched exactly to `verified_order` by one of the reference
/// shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    #[serde(serialize_with = "serialize_pattern")]
    pub pattern: SeriesPattern,
    #[serde(serialize_with = "serialize_scalar")]
    pub rate: AlgebraicScalar,
    /// Generator whose powers the series multiplies, when known.
    pub argument: Option<usize>,
    pub verified_order: u32,
}

fn serialize_pattern<S: serde::Serializer>(p: &SeriesPattern, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(p.name())
}

fn serialize_scalar<S: serde::Serializer>(x: &AlgebraicScalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl ClosedForm {
    /// The reference series this form stands for, to its verified order.
    pub fn regenerate(&self) -> ZSeries {
        ZSeries::pattern(self.pattern, &self.rate, self.verified_order)
    }

    /// `F(z·arg)` as text, e.g. `exp((1/2) z J3)`.
    pub fn render(&self, argument: &str) -> String {
        let r = &self.rate;
        match self.pattern {
            SeriesPattern::Exp => format!("exp(({r}) z {argument})"),
            SeriesPattern::SinhOverArg => format!("sinh(({r}) z {argument})/(({r}) z {argument})"),
            SeriesPattern::Cosh => format!("cosh(({r}) z {argument})"),
            SeriesPattern::Poly if r.is_one() => "1".to_string(),
            SeriesPattern::Poly => format!("({r})"),
        }
    }
}

fn matches(coeffs: &[AlgebraicScalar], pattern: SeriesPattern, rate: &AlgebraicScalar, k: u32) -> bool {
    let reference = ZSeries::pattern(pattern, rate, k);
    (0..=k).all(|j| reference.coeff(j) == coeffs.get(j as usize).cloned().unwrap_or_default())
}

/// Matches `coeffs[0..=k]` (missing entries read as zero) against the
/// pattern library, trying constant, exponential, sinh-over-argument and
/// cosh in that order. Only exact matches count; anything else is `None`.
///
/// The constant pattern needs no rate fit and is tried for any `k`; the
/// others need `k ≥ 2`.
pub fn recognize_factor(coeffs: &[AlgebraicScalar], k: u32) -> Option<ClosedForm> {
    let c = |j: usize| coeffs.get(j).cloned().unwrap_or_default();
    let form = |pattern, rate| ClosedForm {
        pattern,
        rate,
        argument: None,
        verified_order: k,
    };
    if matches(coeffs, SeriesPattern::Poly, &c(0), k) {
        return Some(form(SeriesPattern::Poly, c(0)));
    }
    if k < 2 || !c(0).is_one() {
        return None;
    }
    if matches(coeffs, SeriesPattern::Exp, &c(1), k) {
        return Some(form(SeriesPattern::Exp, c(1)));
    }
    if !c(1).is_zero() {
        return None;
    }
    for (pattern, factor) in [(SeriesPattern::SinhOverArg, 6), (SeriesPattern::Cosh, 2)] {
        if let Some(rate) = (c(2) * AlgebraicScalar::from_int(factor)).sqrt() {
            if matches(coeffs, pattern, &rate, k) {
                return Some(form(pattern, rate));
            }
        }
    }
    None
}

/// `Δ(Y) = F(z·H)⊗Y + Y⊗G(z·H)` with `F`, `G` recognized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredCoproduct {
    pub generator: usize,
    pub left: ClosedForm,
    pub right: ClosedForm,
}

impl FactoredCoproduct {
    pub fn render(&self, names: &[&str]) -> String {
        let y = names[self.generator];
        let h = self.left.argument.map_or("", |a| names[a]);
        format!("{} (x) {y} + {y} (x) {}", self.left.render(h), self.right.render(h))
    }
}

fn power(n: usize, h: usize, e: u32) -> PbwMonomial {
    let mut exps = vec![0; n];
    exps[h] = e;
    PbwMonomial::from_exponents(exps)
}

fn is_primitive(series: &CoproductSeries, i: usize) -> bool {
    (1..=series.achieved_order()).all(|k| series.order(i, k).map_or(true, |t| t.is_zero()))
}

/// Detects `c_k H^k⊗Y + c̄_k Y⊗H^k` at every order `k ≥ 1`, for one
/// generator `H` with primitive coproduct, and recognizes both scalar
/// sequences. A primitive `Δ(Y)` factors with `F = G = 1`.
pub fn factor_coproduct(series: &CoproductSeries, generator: usize) -> Option<FactoredCoproduct> {
    let n = series.num_generators();
    let top = series.achieved_order();
    let y = PbwMonomial::generator(n, generator);
    let first = (1..=top).find_map(|k| series.order(generator, k).filter(|t| !t.is_zero()).map(|t| (k, t)));

    let argument = match first {
        None => None,
        Some((k, t)) => {
            let h = t.terms().keys().find_map(|key| {
                let other = if key[1] == y { &key[0] } else { &key[1] };
                (0..n).find(|h| *other == power(n, *h, k))
            })?;
            if !is_primitive(series, h) {
                return None;
            }
            Some(h)
        }
    };

    let mut left = vec![AlgebraicScalar::one()];
    let mut right = vec![AlgebraicScalar::one()];
    for k in 1..=top {
        let t = series.order(generator, k)?;
        let (l, r) = match argument {
            None => (AlgebraicScalar::zero(), AlgebraicScalar::zero()),
            Some(h) => {
                let hk = power(n, h, k);
                let l = t.coeff(&[hk.clone(), y.clone()]).coeff(k);
                let r = t.coeff(&[y.clone(), hk.clone()]).coeff(k);
                let mut expected = crate::uea::TensorElement::zero(n, 2, t.truncation());
                expected.add_term(vec![hk.clone(), y.clone()], &ZSeries::monomial(l.clone(), k, t.truncation()));
                expected.add_term(vec![y.clone(), hk], &ZSeries::monomial(r.clone(), k, t.truncation()));
                if expected != *t {
                    return None;
                }
                (l, r)
            }
        };
        left.push(l);
        right.push(r);
    }
    let mut left = recognize_factor(&left, top)?;
    let mut right = recognize_factor(&right, top)?;
    left.argument = argument;
    right.argument = argument;
    Some(FactoredCoproduct {
        generator,
        left,
        right,
    })
}

/// `[Y_i, Y_j] = a·H·F(z·H)`, with `a` the classical coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredCommutator {
    pub pair: (usize, usize),
    #[serde(serialize_with = "serialize_scalar")]
    pub amplitude: AlgebraicScalar,
    pub factor: ClosedForm,
}

impl FactoredCommutator {
    pub fn render(&self, names: &[&str]) -> String {
        let h = names[self.factor.argument.expect("set on construction")];
        let amp = if self.amplitude.is_one() {
            String::new()
        } else {
            format!("({}) ", self.amplitude)
        };
        let r = &self.factor.rate;
        match self.factor.pattern {
            SeriesPattern::Poly => format!("{amp}{h}"),
            SeriesPattern::SinhOverArg => format!("{amp}sinh(({r}) z {h})/(({r}) z)"),
            _ => format!("{amp}{h} {}", self.factor.render(h)),
        }
    }
}

/// Detects `Σ_k a_k z^k H^{k+1}` for one generator `H` and recognizes
/// `a_k / a_0` through order `k`.
pub fn factor_commutator(entry: &UeaElement, pair: (usize, usize), k: u32) -> Option<FactoredCommutator> {
    let n = entry.num_generators();
    let (lowest, _) = entry.terms().iter().find(|(m, _)| m.degree() == 1)?;
    let h = lowest.first()?;
    let amplitude = entry.coeff(lowest).coeff(0);
    let inv = amplitude.inv().ok()?;
    let mut rebuilt = UeaElement::zero(n, entry.truncation());
    let mut coeffs = Vec::new();
    for j in 0..=k {
        let m = power(n, h, j + 1);
        let a = entry.coeff(&m).coeff(j);
        rebuilt.add_term(m, &ZSeries::monomial(a.clone(), j, entry.truncation()));
        coeffs.push(&a * &inv);
    }
    if rebuilt.with_truncation(k) != entry.with_truncation(k) {
        return None;
    }
    let mut factor = recognize_factor(&coeffs, k)?;
    factor.argument = Some(h);
    Some(FactoredCommutator {
        pair,
        amplitude,
        factor,
    })
}

/// Every closed form found in a quantization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Recognized {
    pub coproducts: BTreeMap<usize, FactoredCoproduct>,
    pub commutators: BTreeMap<String, FactoredCommutator>,
}

/// Tries [`factor_coproduct`] on every generator and [`factor_commutator`]
/// on every nonzero table entry.
pub fn recognize_all(series: &CoproductSeries, table: &CommutatorTable) -> Recognized {
    let k = series.achieved_order();
    let mut out = Recognized::default();
    for i in 0..series.num_generators() {
        if let Some(f) = factor_coproduct(series, i) {
            out.coproducts.insert(i, f);
        }
    }
    for ((i, j), e) in table.entries() {
        if let Some(f) = factor_commutator(&e.with_truncation(k.min(e.truncation())), (*i, *j), k) {
            out.commutators.insert(format!("{i},{j}"), f);
        }
    }
    out
}
