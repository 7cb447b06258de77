//! Order-by-order quantization of a Lie bialgebra: gauge-fixed coproducts
//! from coassociativity, deformed commutators from the homomorphism
//! property, and the perturbative Friedrichs primitivization.

mod friedrichs;
mod solve;

pub use friedrichs::{
    friedrichs_primitivize, friedrichs_primitivize_deformed, seeded_scramble, BasisChange, BasisChangeLog,
    FriedrichsFrame,
};
pub use solve::{
    coassoc_residual, gauge_basis, homomorphism_residual, solve_commutators_order, solve_coproduct_order,
    GaugeBasis,
};

use crate::bialgebra::{CocommutatorTensor, LieBialgebra};
use crate::closedform::{recognize_all, Recognized};
use crate::error::Result;
use crate::scalars::{AlgebraicScalar, ZSeries};
use crate::uea::{CommutatorTable, CoproductSeries, TensorElement, UeaElement};

/// The analytical quantum basis `(g_q, Δ)` through z-order `K`.
#[derive(Clone, Debug)]
pub struct QuantizationResult {
    pub names: Vec<String>,
    pub coproducts: CoproductSeries,
    pub commutators: CommutatorTable,
    pub recognized: Recognized,
    /// Indexed by order; entry 0 is always 0.
    pub residual_gauge_dims: Vec<usize>,
    pub max_degree: u32,
}

impl QuantizationResult {
    pub fn order(&self) -> u32 {
        self.coproducts.achieved_order()
    }

    pub fn names(&self) -> Vec<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    /// Orders whose coassociativity residual is not zero.
    pub fn coassociativity_failures(&self) -> Result<Vec<u32>> {
        let mut bad = Vec::new();
        for k in 0..=self.order() {
            let r = coassoc_residual(&self.coproducts, k, &self.commutators)?;
            if r.iter().any(|t| !t.is_zero()) {
                bad.push(k);
            }
        }
        Ok(bad)
    }

    /// Pairs whose homomorphism residual is not zero through the full order.
    pub fn homomorphism_failures(&self) -> Result<Vec<(usize, usize)>> {
        Ok(homomorphism_residual(&self.coproducts, &self.commutators, self.order())?
            .into_iter()
            .map(|(p, _)| p)
            .collect())
    }

    /// The same quantum algebra in the basis `Y'_i = s_i Y_i`.
    pub fn rescaled(&self, factors: &[AlgebraicScalar]) -> Result<Self> {
        let n = self.names.len();
        assert_eq!(factors.len(), n);
        let inv = factors.iter().map(|s| s.inv()).collect::<Result<Vec<_>>>()?;
        // a monomial in Y is Π s_j^{-e_j} times the same monomial in Y'
        let weight = |m: &crate::uea::PbwMonomial| {
            m.exponents()
                .iter()
                .zip(&inv)
                .fold(AlgebraicScalar::one(), |acc, (e, s)| acc * s.pow(*e))
        };
        let k = self.order();
        let mut coproducts = CoproductSeries::primitive(n);
        for order in 1..=k {
            let terms = (0..n)
                .map(|i| {
                    let t = self.coproducts.order(i, order).expect("within order");
                    let mut out = TensorElement::zero(n, 2, t.truncation());
                    for (key, c) in t.terms() {
                        let w = &factors[i] * &(weight(&key[0]) * weight(&key[1]));
                        out.add_term(key.clone(), &c.scale(&w));
                    }
                    out
                })
                .collect();
            coproducts.push_order(terms);
        }
        let mut commutators = CommutatorTable::from_brackets(&crate::bialgebra::BracketTensor::new(n), self.commutators.populated_z_order());
        for ((i, j), e) in self.commutators.entries() {
            let mut out = UeaElement::zero(n, e.truncation());
            for (m, c) in e.terms() {
                let w = &(&factors[*i] * &factors[*j]) * &weight(m);
                out.add_term(m.clone(), &c.scale(&w));
            }
            commutators.add_correction(*i, *j, &out);
        }
        let recognized = recognize_all(&coproducts, &commutators);
        Ok(Self {
            names: self.names.clone(),
            coproducts,
            commutators,
            recognized,
            residual_gauge_dims: self.residual_gauge_dims.clone(),
            max_degree: self.max_degree,
        })
    }
}

/// Runs the interleaved coproduct and commutator solves for `k = 1..=K`,
/// with ansatz degrees capped at `max_degree`.
///
/// A zero cocommutator skips the solves: the primitive coproduct and the
/// classical brackets are exact.
pub fn quantize(g: &LieBialgebra, order: u32, max_degree: u32) -> Result<QuantizationResult> {
    let n = g.dim();
    let names = g.names().iter().map(|s| s.to_string()).collect();
    let mut series = CoproductSeries::primitive(n);
    let mut table = CommutatorTable::from_brackets(g.brackets(), 0);
    let mut dims = vec![0];
    if g.cocommutators().is_zero() {
        for k in 1..=order {
            series.push_order((0..n).map(|_| TensorElement::zero(n, 2, k)).collect());
            dims.push(0);
        }
        table = CommutatorTable::from_brackets(g.brackets(), order);
    } else {
        for k in 1..=order {
            let (terms, free) = solve_coproduct_order(&series, k, &table, g.cocommutators(), max_degree)?;
            series.push_order(terms);
            let (next, cfree) = solve_commutators_order(&series, &table, k, max_degree)?;
            table = next;
            dims.push(free + cfree);
        }
    }
    let recognized = recognize_all(&series, &table);
    Ok(QuantizationResult {
        names,
        coproducts: series,
        commutators: table,
        recognized,
        residual_gauge_dims: dims,
        max_degree,
    })
}

/// `δ = lim (Δ − σ∘Δ)/2z`: the skew part of the `z` coefficient of `Δ₍1₎`.
pub fn extract_delta(result: &QuantizationResult) -> CocommutatorTensor {
    let n = result.names.len();
    let mut out = CocommutatorTensor::new(n);
    if result.order() == 0 {
        return out;
    }
    let half = AlgebraicScalar::frac(1, 2);
    for p in 0..n {
        let t = result.coproducts.order(p, 1).expect("order 1 present");
        for (key, c) in t.terms() {
            let (a, b) = (&key[0], &key[1]);
            if a.degree() != 1 || b.degree() != 1 {
                continue;
            }
            let (q, r) = (a.first().expect("degree 1"), b.first().expect("degree 1"));
            out.add_wedge(p, q, r, &(&half * &c.coeff(1)));
        }
    }
    out
}

/// `Σ_k z^k c_k` restricted to one tensor key of one generator.
pub fn coefficient_series(result: &QuantizationResult, generator: usize, key: &[crate::uea::PbwMonomial]) -> ZSeries {
    let k = result.order();
    let mut out = ZSeries::zero(k);
    for order in 0..=k {
        if let Some(t) = result.coproducts.order(generator, order) {
            out.add_term(order, &t.coeff(key).coeff(order));
        }
    }
    out
}
