//! Finite-dimensional Lie bialgebras given by exact structure tensors.
//!
//! Generators are addressed by index everywhere inside the engine; names only
//! matter at the I/O boundary.

mod checks;
mod tensors;

use std::collections::{BTreeMap, HashSet};

pub use checks::{
    check_cocycle, check_compatibility, check_jacobi, Failure, Residual, ValidationReport,
};
pub use tensors::{BracketTensor, CocommutatorTensor, LieTensor2, LieVector};

pub(crate) use tensors::accumulate;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::AlgebraicScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub index: usize,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBialgebra {
    generators: Vec<GeneratorId>,
    brackets: BracketTensor,
    cocommutators: CocommutatorTensor,
}

impl LieBialgebra {
    /// Assembles a bialgebra without running the axiom checks; see
    /// [`LieBialgebra::validated`].
    pub fn new<S: AsRef<str>>(
        names: &[S],
        brackets: BracketTensor,
        cocommutators: CocommutatorTensor,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidBialgebra("no generators".into()));
        }
        let mut seen = HashSet::new();
        for n in names {
            if !seen.insert(n.as_ref()) {
                return Err(Error::DuplicateEntry(n.as_ref().to_string()));
            }
        }
        if brackets.dim() != names.len() || cocommutators.dim() != names.len() {
            return Err(Error::InvalidBialgebra(format!(
                "tensor dimensions {}/{} do not match {} generators",
                brackets.dim(),
                cocommutators.dim(),
                names.len()
            )));
        }
        let generators = names
            .iter()
            .enumerate()
            .map(|(index, n)| GeneratorId {
                index,
                name: n.as_ref().to_string(),
            })
            .collect();
        Ok(Self {
            generators,
            brackets,
            cocommutators,
        })
    }

    /// Like [`LieBialgebra::new`], but fails with `InvalidBialgebra` unless
    /// every axiom check passes.
    pub fn validated<S: AsRef<str>>(
        names: &[S],
        brackets: BracketTensor,
        cocommutators: CocommutatorTensor,
    ) -> Result<Self> {
        let b = Self::new(names, brackets, cocommutators)?;
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for report in self.reports() {
            if !report.passed {
                return Err(Error::InvalidBialgebra(format!(
                    "{} fails on {} tuple(s)",
                    report.check,
                    report.failures.len()
                )));
            }
        }
        Ok(())
    }

    /// The three axiom reports, in the order jacobi, cocycle, compatibility.
    pub fn reports(&self) -> [ValidationReport; 3] {
        [
            check_jacobi(&self.brackets),
            check_cocycle(self),
            check_compatibility(self),
        ]
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.generators[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn brackets(&self) -> &BracketTensor {
        &self.brackets
    }

    pub fn cocommutators(&self) -> &CocommutatorTensor {
        &self.cocommutators
    }

    pub fn with_cocommutators(&self, cocommutators: CocommutatorTensor) -> Self {
        assert_eq!(cocommutators.dim(), self.dim());
        Self {
            cocommutators,
            ..self.clone()
        }
    }

    pub fn with_brackets(&self, brackets: BracketTensor) -> Self {
        assert_eq!(brackets.dim(), self.dim());
        Self {
            brackets,
            ..self.clone()
        }
    }

    pub fn renamed<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        Self::new(names, self.brackets.clone(), self.cocommutators.clone())
    }

    /// Re-expresses the bialgebra in a new basis `new_a = Σ_p matrix[a][p] Z_p`.
    pub fn change_basis<S: AsRef<str>>(
        &self,
        names: &[S],
        matrix: &[Vec<AlgebraicScalar>],
    ) -> Result<Self> {
        let n = self.dim();
        if names.len() != n || matrix.len() != n {
            return Err(Error::InvalidBialgebra("basis change has wrong size".into()));
        }
        let inverse = linalg::invert(matrix)?;
        let sparse = |m: &[Vec<AlgebraicScalar>]| -> Vec<LieVector> {
            m.iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(j, v)| (j, v.clone()))
                        .collect()
                })
                .collect()
        };
        let forward = sparse(matrix);
        let back = sparse(&inverse);
        // old_r = Σ_c back[r][c] new_c
        let to_new = |v: &LieVector| -> LieVector {
            let mut out = LieVector::new();
            for (r, x) in v {
                for (c, w) in &back[*r] {
                    accumulate(&mut out, *c, &(x * w));
                }
            }
            out
        };

        let mut brackets = BracketTensor::new(n);
        for a in 0..n {
            for b in a + 1..n {
                let old = self.brackets.bracket_vectors(&forward[a], &forward[b]);
                for (c, x) in to_new(&old) {
                    brackets.add(a, b, c, &x);
                }
            }
        }

        let mut cocommutators = CocommutatorTensor::new(n);
        for a in 0..n {
            let mut image = LieTensor2::new();
            for (p, m) in &forward[a] {
                for ((q, r), x) in self.cocommutators.image(*p) {
                    let coeff = m * &x;
                    for (u, wu) in &back[q] {
                        for (v, wv) in &back[r] {
                            accumulate(&mut image, (*u, *v), &(&coeff * &(wu * wv)));
                        }
                    }
                }
            }
            for ((u, v), x) in image {
                if u < v {
                    cocommutators.add_wedge(a, u, v, &x);
                }
            }
        }
        Self::new(names, brackets, cocommutators)
    }
}

/// Suffix marking generators of the dual space.
const DUAL_MARK: char = '*';

fn dual_name(name: &str) -> String {
    match name.strip_suffix(DUAL_MARK) {
        Some(base) => base.to_string(),
        None => format!("{name}{DUAL_MARK}"),
    }
}

/// The dual bialgebra: brackets from the cocommutator, cocommutator from the
/// brackets, `[z^p, z^q] = c_r^{p,q} z^r` and `δ(z^p) = f^p_{q,r} z^q⊗z^r`.
pub fn dualize(b: &LieBialgebra) -> LieBialgebra {
    let n = b.dim();
    let mut brackets = BracketTensor::new(n);
    for (r, wedges) in b.cocommutators.iter() {
        for ((p, q), x) in wedges {
            brackets.add(*p, *q, *r, x);
        }
    }
    let mut cocommutators = CocommutatorTensor::new(n);
    for ((q, r), v) in b.brackets.iter() {
        for (p, x) in v {
            cocommutators.add_wedge(*p, *q, *r, x);
        }
    }
    let names: Vec<String> = b.names().into_iter().map(dual_name).collect();
    LieBialgebra::new(&names, brackets, cocommutators).expect("dual keeps dimensions")
}

/// Restricts to the quotient by central generators: every occurrence of the
/// listed generators is dropped.
pub fn restrict_trivial_t(b: &LieBialgebra, drop: &[&str]) -> Result<LieBialgebra> {
    let mut dropped = Vec::new();
    for name in drop {
        let idx = b.generator(name)?;
        if (0..b.dim()).any(|q| !b.brackets.bracket(idx, q).is_empty()) {
            return Err(Error::NotCentral(name.to_string()));
        }
        dropped.push(idx);
    }
    let keep: Vec<usize> = (0..b.dim()).filter(|i| !dropped.contains(i)).collect();
    let position: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, o)| (*o, n)).collect();
    let n = keep.len();
    let mut brackets = BracketTensor::new(n);
    let mut cocommutators = CocommutatorTensor::new(n);
    for (new_p, old_p) in keep.iter().enumerate() {
        for (new_q, old_q) in keep.iter().enumerate().skip(new_p + 1) {
            for (r, x) in b.brackets.bracket(*old_p, *old_q) {
                if let Some(new_r) = position.get(&r) {
                    brackets.add(new_p, new_q, *new_r, &x);
                }
            }
        }
        for ((q, r), x) in b.cocommutators.wedges(*old_p) {
            if let (Some(nq), Some(nr)) = (position.get(&q), position.get(&r)) {
                cocommutators.add_wedge(new_p, *nq, *nr, &x);
            }
        }
    }
    let names: Vec<&str> = keep.iter().map(|i| b.name(*i)).collect();
    LieBialgebra::new(&names, brackets, cocommutators)
}

/// Built-in bialgebras.
pub mod builtin {
    use super::*;

    /// `su(2)` on `(J3, J+, J-)` with `[J3, J±] = ±J±`, `[J+, J-] = J3` and the
    /// standard cocommutator `δ(J±) = ½ J3∧J±`, `δ(J3) = 0`.
    pub fn su2() -> LieBialgebra {
        su2_with(AlgebraicScalar::one(), AlgebraicScalar::frac(1, 2))
    }

    /// `su(2)` with `[J+, J-] = alpha·J3` and `δ(J±) = gamma·J3∧J±`.
    pub fn su2_with(alpha: AlgebraicScalar, gamma: AlgebraicScalar) -> LieBialgebra {
        let one = AlgebraicScalar::one();
        let mut f = BracketTensor::new(3);
        f.add(0, 1, 1, &one);
        f.add(0, 2, 2, &-&one);
        f.add(1, 2, 0, &alpha);
        let mut c = CocommutatorTensor::new(3);
        c.add_wedge(1, 0, 1, &gamma);
        c.add_wedge(2, 0, 2, &gamma);
        LieBialgebra::new(&["J3", "J+", "J-"], f, c).expect("static data")
    }

    /// `su(2)` with the zero cocommutator.
    pub fn su2_classical() -> LieBialgebra {
        su2().with_cocommutators(CocommutatorTensor::new(3))
    }

    /// One-dimensional `u(1)` with zero cocommutator.
    pub fn u1() -> LieBialgebra {
        LieBialgebra::new(&["H"], BracketTensor::new(1), CocommutatorTensor::new(1))
            .expect("static data")
    }

    pub fn abelian(n: usize) -> LieBialgebra {
        let names: Vec<String> = (1..=n).map(|i| format!("A{i}")).collect();
        LieBialgebra::new(&names, BracketTensor::new(n), CocommutatorTensor::new(n))
            .expect("static data")
    }
}
