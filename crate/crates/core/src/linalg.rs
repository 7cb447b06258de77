//! Sparse exact linear algebra over Q(i, √2).
//!
//! [`LinearSystem`] reduces equations incrementally into row echelon form as
//! they arrive. Pivots are always the smallest surviving column index, so the
//! reduced form (and therefore every solution) is independent of hashing or
//! thread scheduling.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalars::AlgebraicScalar;

pub type SparseRow = BTreeMap<usize, AlgebraicScalar>;

#[derive(Clone, Debug)]
struct PivotRow {
    // leading coefficient is 1 and is stored
    coeffs: SparseRow,
    rhs: AlgebraicScalar,
}

/// An equation that reduced to `0 = rhs` with `rhs ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    pub equation: usize,
    pub residual: AlgebraicScalar,
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    num_vars: usize,
    pivots: BTreeMap<usize, PivotRow>,
    equations: usize,
    inconsistencies: Vec<Inconsistency>,
}

fn axpy(row: &mut SparseRow, factor: &AlgebraicScalar, other: &SparseRow) {
    for (col, value) in other {
        let term = factor * value;
        let slot = row.entry(*col).or_default();
        *slot += &term;
        if slot.is_zero() {
            row.remove(col);
        }
    }
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            ..Self::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `Σ coeffs[j]·x_j = rhs`. Returns `false` if the equation is
    /// inconsistent with those already present.
    pub fn add_equation(&mut self, mut coeffs: SparseRow, mut rhs: AlgebraicScalar) -> bool {
        let index = self.equations;
        self.equations += 1;
        coeffs.retain(|col, v| {
            assert!(*col < self.num_vars, "column {col} out of range");
            !v.is_zero()
        });
        loop {
            let Some((&lead, lead_value)) = coeffs.iter().next() else {
                if rhs.is_zero() {
                    return true;
                }
                self.inconsistencies.push(Inconsistency {
                    equation: index,
                    residual: rhs,
                });
                return false;
            };
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    let factor = -lead_value;
                    axpy(&mut coeffs, &factor, &pivot.coeffs);
                    rhs += &(&factor * &pivot.rhs);
                }
                None => {
                    let inv = lead_value.inv().expect("nonzero lead");
                    let coeffs = coeffs.iter().map(|(c, v)| (*c, v * &inv)).collect();
                    let rhs = &rhs * &inv;
                    self.pivots.insert(lead, PivotRow { coeffs, rhs });
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Dimension of the solution space (when consistent).
    pub fn free_dimension(&self) -> usize {
        self.num_vars - self.rank()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }

    pub fn inconsistencies(&self) -> &[Inconsistency] {
        &self.inconsistencies
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// The solution with every free variable set to zero.
    pub fn solve(&self) -> Option<Vec<AlgebraicScalar>> {
        if !self.is_consistent() {
            return None;
        }
        let mut x = vec![AlgebraicScalar::zero(); self.num_vars];
        for (&lead, row) in self.pivots.iter().rev() {
            let mut value = row.rhs.clone();
            for (col, coeff) in row.coeffs.range(lead + 1..) {
                if !x[*col].is_zero() {
                    value -= &(coeff * &x[*col]);
                }
            }
            x[lead] = value;
        }
        Some(x)
    }
}

/// Dense Gauss-Jordan inverse of a square matrix.
pub fn invert(matrix: &[Vec<AlgebraicScalar>]) -> Result<Vec<Vec<AlgebraicScalar>>> {
    let n = matrix.len();
    let mut work: Vec<Vec<AlgebraicScalar>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    AlgebraicScalar::one()
                } else {
                    AlgebraicScalar::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or(Error::NonInvertibleBasis)?;
        work.swap(col, pivot);
        let inv = work[col][col].inv()?;
        for v in work[col].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = work[col].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&factor * p);
                }
            }
        }
    }
    Ok(work.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> AlgebraicScalar {
        text.parse().unwrap()
    }

    fn row(entries: &[(usize, &str)]) -> SparseRow {
        entries.iter().map(|(c, v)| (*c, s(v))).collect()
    }

    #[test]
    fn solves_a_small_system() {
        // x + y = 3, x - y = 1 (with √2 and i noise)
        let mut sys = LinearSystem::new(2);
        assert!(sys.add_equation(row(&[(0, "1"), (1, "1")]), s("3")));
        assert!(sys.add_equation(row(&[(0, "r2"), (1, "-r2")]), s("r2")));
        assert_eq!(sys.solve().unwrap(), vec![s("2"), s("1")]);
        assert_eq!(sys.free_dimension(), 0);
    }

    #[test]
    fn detects_inconsistency_and_freedom() {
        let mut sys = LinearSystem::new(3);
        assert!(sys.add_equation(row(&[(0, "1"), (1, "i")]), s("1")));
        assert!(sys.add_equation(row(&[(0, "2"), (1, "2*i")]), s("2")));
        assert_eq!(sys.free_dimension(), 2);
        assert!(!sys.add_equation(row(&[(0, "1"), (1, "i")]), s("0")));
        assert!(!sys.is_consistent());
        assert_eq!(sys.inconsistencies()[0].residual, s("-1"));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![
            vec![s("1/2*r2"), s("1/2*i*r2")],
            vec![s("1/2*r2"), s("-1/2*i*r2")],
        ];
        let inv = invert(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = AlgebraicScalar::zero();
                for k in 0..2 {
                    acc += &(&m[i][k] * &inv[k][j]);
                }
                let expected = if i == j { s("1") } else { s("0") };
                assert_eq!(acc, expected);
            }
        }
        assert_eq!(
            invert(&[vec![s("1"), s("2")], vec![s("2"), s("4")]]),
            Err(Error::NonInvertibleBasis)
        );
    }
}
