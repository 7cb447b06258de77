//! Independent oracles shared by the integration tests: matrix
//! representations over truncated rational power series, and Taylor
//! coefficients computed straight from factorials.
#![allow(dead_code)]

use bialg_core::uea::{PbwMonomial, TensorElement, UeaElement};
use bialg_core::{AlgebraicScalar, ZSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(n: i64, d: i64) -> AlgebraicScalar {
    AlgebraicScalar::frac(n, d)
}

pub fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * BigRational::from_integer(BigInt::from(k)))
}

pub fn rpow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// `exp(rate·z)` through `z^k`: `rate^j / j!`.
pub fn exp_taylor(rate: &BigRational, k: u32) -> Vec<BigRational> {
    (0..=k).map(|j| rpow(rate, j) / factorial(j)).collect()
}

/// `sinh(rate·z)/(rate·z)` through `z^k`: `rate^{2m} / (2m+1)!` at even orders.
pub fn sinh_over_arg_taylor(rate: &BigRational, k: u32) -> Vec<BigRational> {
    (0..=k)
        .map(|j| if j % 2 == 0 { rpow(rate, j) / factorial(j + 1) } else { BigRational::zero() })
        .collect()
}

/// `cosh(rate·z)` through `z^k`.
pub fn cosh_taylor(rate: &BigRational, k: u32) -> Vec<BigRational> {
    (0..=k)
        .map(|j| if j % 2 == 0 { rpow(rate, j) / factorial(j) } else { BigRational::zero() })
        .collect()
}

pub fn scalar(x: &BigRational) -> AlgebraicScalar {
    AlgebraicScalar::from_rational(x.clone())
}

pub fn rational(x: &AlgebraicScalar) -> BigRational {
    x.as_rational().expect("oracle works over Q").clone()
}

/// A square matrix whose entries are rational series truncated at `z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    pub dim: usize,
    pub k: u32,
    /// `entries[row][col][order]`
    pub entries: Vec<Vec<Vec<BigRational>>>,
}

impl SeriesMatrix {
    pub fn zero(dim: usize, k: u32) -> Self {
        Self {
            dim,
            k,
            entries: vec![vec![vec![BigRational::zero(); k as usize + 1]; dim]; dim],
        }
    }

    pub fn identity(dim: usize, k: u32) -> Self {
        let mut m = Self::zero(dim, k);
        for i in 0..dim {
            m.entries[i][i][0] = BigRational::one();
        }
        m
    }

    /// Constant entries.
    pub fn constant(rows: &[Vec<BigRational>], k: u32) -> Self {
        let mut m = Self::zero(rows.len(), k);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.entries[i][j][0] = x.clone();
            }
        }
        m
    }

    pub fn set_series(&mut self, i: usize, j: usize, coeffs: &[BigRational]) {
        for (o, c) in coeffs.iter().enumerate().take(self.k as usize + 1) {
            self.entries[i][j][o] = c.clone();
        }
    }

    fn mul_series(a: &[BigRational], b: &[BigRational], k: u32) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); k as usize + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if i + j <= k as usize {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.k);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for l in 0..self.dim {
                    let p = Self::mul_series(&self.entries[i][l], &other.entries[l][j], self.k);
                    for (o, v) in p.into_iter().enumerate() {
                        out.entries[i][j][o] += v;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for o in 0..=self.k as usize {
                    out.entries[i][j][o] += &other.entries[i][j][o];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_series(&[r(-1, 1)]))
    }

    pub fn scale_series(&self, s: &[BigRational]) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i][j] = Self::mul_series(s, &self.entries[i][j], self.k);
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut out = Self::zero(d, self.k);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for a in 0..other.dim {
                    for b in 0..other.dim {
                        out.entries[i * other.dim + a][j * other.dim + b] =
                            Self::mul_series(&self.entries[i][j], &other.entries[a][b], self.k);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().flatten().all(Zero::is_zero)
    }
}

fn series_coeffs(c: &ZSeries, k: u32) -> Vec<BigRational> {
    (0..=k).map(|o| rational(&c.coeff(o))).collect()
}

/// `ρ(Y_{i1}^{e1} ⋯)` as the ordered product of generator images.
pub fn eval_monomial(m: &PbwMonomial, gens: &[SeriesMatrix]) -> SeriesMatrix {
    let mut out = SeriesMatrix::identity(gens[0].dim, gens[0].k);
    for g in m.word() {
        out = out.mul(&gens[g]);
    }
    out
}

pub fn eval_element(e: &UeaElement, gens: &[SeriesMatrix]) -> SeriesMatrix {
    let k = gens[0].k;
    let mut out = SeriesMatrix::zero(gens[0].dim, k);
    for (m, c) in e.terms() {
        out = out.add(&eval_monomial(m, gens).scale_series(&series_coeffs(c, k)));
    }
    out
}

/// `(ρ⊗ρ)(t)` for a rank-2 tensor.
pub fn eval_tensor(t: &TensorElement, gens: &[SeriesMatrix]) -> SeriesMatrix {
    let k = gens[0].k;
    let d = gens[0].dim;
    let mut out = SeriesMatrix::zero(d * d, k);
    for (key, c) in t.terms() {
        let piece = eval_monomial(&key[0], gens).kron(&eval_monomial(&key[1], gens));
        out = out.add(&piece.scale_series(&series_coeffs(c, k)));
    }
    out
}

/// The spin-`j` representation of classical `su(2)` on `(J3, J+, J-)`,
/// `2j+1` states `m = j, j−1, …, −j`, with `J+ e_{m} ∝ e_{m+1}` normalized
/// so that every matrix is rational: `J-` has unit entries and `J+` carries
/// `(j(j+1) − m(m+1))/2`, which gives `[J+, J-] = J3`.
pub fn spin_rep(two_j: i64, k: u32) -> Vec<SeriesMatrix> {
    let d = (two_j + 1) as usize;
    let m = |row: usize| r(two_j - 2 * row as i64, 2);
    let jj = r(two_j, 2) * (r(two_j, 2) + r(1, 1));
    let zero = || vec![vec![BigRational::zero(); d]; d];
    let (mut j3, mut jp, mut jm) = (zero(), zero(), zero());
    for row in 0..d {
        j3[row][row] = m(row);
        if row + 1 < d {
            // e_{row+1} has weight m(row) − 1
            let mm = m(row + 1);
            jp[row][row + 1] = (&jj - &mm * (&mm + r(1, 1))) * r(1, 2);
            jm[row + 1][row] = BigRational::one();
        }
    }
    vec![
        SeriesMatrix::constant(&j3, k),
        SeriesMatrix::constant(&jp, k),
        SeriesMatrix::constant(&jm, k),
    ]
}

/// The `z`-deformed two-dimensional representation of `su_q(2)`:
/// `J3 = diag(1/2, −1/2)`, `J- = E21`, `J+ = (sinh(z/2)/z)·E12`, so that
/// `[J+, J-] = sinh(z J3)/z`.
pub fn deformed_doublet(k: u32) -> Vec<SeriesMatrix> {
    let zero = || vec![vec![BigRational::zero(); 2]; 2];
    let mut j3 = zero();
    j3[0][0] = r(1, 2);
    j3[1][1] = r(-1, 2);
    let mut jm = zero();
    jm[1][0] = r(1, 1);
    let mut jp = SeriesMatrix::zero(2, k);
    // sinh(z/2)/z = (1/2)·sinh(z/2)/(z/2)
    let f: Vec<BigRational> = sinh_over_arg_taylor(&r(1, 2), k).into_iter().map(|c| c * r(1, 2)).collect();
    jp.set_series(0, 1, &f);
    vec![SeriesMatrix::constant(&j3, k), jp, SeriesMatrix::constant(&jm, k)]
}

/// The deformed triplet: `J3 = diag(1, 0, −1)`, `J- = E21 + E32`,
/// `J+ = (sinh z / z)(E12 + E23)`.
pub fn deformed_triplet(k: u32) -> Vec<SeriesMatrix> {
    let zero = || vec![vec![BigRational::zero(); 3]; 3];
    let mut j3 = zero();
    j3[0][0] = r(1, 1);
    j3[2][2] = r(-1, 1);
    let mut jm = zero();
    jm[1][0] = r(1, 1);
    jm[2][1] = r(1, 1);
    let s = sinh_over_arg_taylor(&r(1, 1), k);
    let mut jp = SeriesMatrix::zero(3, k);
    jp.set_series(0, 1, &s);
    jp.set_series(1, 2, &s);
    vec![SeriesMatrix::constant(&j3, k), jp, SeriesMatrix::constant(&jm, k)]
}
