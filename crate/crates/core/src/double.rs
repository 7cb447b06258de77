//! Drinfeld doubles: crossed brackets, the canonical pairing, self-duality,
//! and the `su(2)⊕t1` and `gl(N)⊕tN` families.
//!
//! The full double always lists the `Z` half first and the `z` half second,
//! so the canonical pairing is the identity block between them.

use std::fmt;
use std::str::FromStr;

use crate::bialgebra::{
    dualize, BracketTensor, CocommutatorTensor, Failure, LieBialgebra, LieVector, Residual,
    ValidationReport,
};
use crate::error::{Error, Result};
use crate::scalars::AlgebraicScalar;

pub use crate::bialgebra::restrict_trivial_t;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldDouble {
    /// The bialgebra `(g, η)` on the `Z` generators.
    pub half_plus: LieBialgebra,
    /// The dual bialgebra on the `z` generators.
    pub half_minus: LieBialgebra,
    /// The double on `Z` followed by `z`, with the double cocommutator.
    pub full: LieBialgebra,
    /// `pairing[p][q] = ⟨Z_p, z^q⟩`.
    pub pairing: Vec<Vec<AlgebraicScalar>>,
}

impl DrinfeldDouble {
    /// Half dimension.
    pub fn n(&self) -> usize {
        self.half_plus.dim()
    }

    /// `⟨x, y⟩` on the full double for basis indices.
    pub fn pair(&self, x: usize, y: usize) -> AlgebraicScalar {
        let n = self.n();
        match (x < n, y < n) {
            (true, false) => self.pairing[x][y - n].clone(),
            (false, true) => self.pairing[y][x - n].clone(),
            _ => AlgebraicScalar::zero(),
        }
    }

    /// Wraps a `2n`-generator algebra (with cocommutator) as a double with the
    /// canonical pairing. No consistency with the halves is assumed; the
    /// checks in this module report on it.
    pub fn from_full(full: LieBialgebra, n: usize) -> Result<Self> {
        if full.dim() != 2 * n {
            return Err(Error::InvalidBialgebra(format!(
                "a double on {n}+{n} generators needs {} generators, found {}",
                2 * n,
                full.dim()
            )));
        }
        let half = |offset: usize| -> Result<LieBialgebra> {
            let mut f = BracketTensor::new(n);
            let mut c = CocommutatorTensor::new(n);
            for p in 0..n {
                for q in p + 1..n {
                    for (r, x) in full.brackets().bracket(offset + p, offset + q) {
                        if (offset..offset + n).contains(&r) {
                            f.add(p, q, r - offset, &x);
                        }
                    }
                }
                for ((q, r), x) in full.cocommutators().wedges(offset + p) {
                    if (offset..offset + n).contains(&q) && (offset..offset + n).contains(&r) {
                        c.add_wedge(p, q - offset, r - offset, &x);
                    }
                }
            }
            let names: Vec<&str> = (offset..offset + n).map(|i| full.name(i)).collect();
            LieBialgebra::new(&names, f, c)
        };
        let half_plus = half(0)?;
        let half_minus = half(n)?;
        Ok(Self {
            half_plus,
            half_minus,
            full,
            pairing: identity(n),
        })
    }
}

fn identity(n: usize) -> Vec<Vec<AlgebraicScalar>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        AlgebraicScalar::one()
                    } else {
                        AlgebraicScalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// [`build_double_named`] with dual names formed by [`dualize`].
pub fn build_double(g: &LieBialgebra) -> Result<DrinfeldDouble> {
    let names: Vec<String> = dualize(g).names().into_iter().map(String::from).collect();
    build_double_named(g, &names)
}

/// The double of `g` on `Z_0..Z_{n-1}, z^0..z^{n-1}`.
///
/// Brackets: `[Z_p,Z_q] = f^r_{pq} Z_r`, `[z^p,z^q] = c_r^{pq} z^r` and the
/// crossed rule `[z^p, Z_q] = f^p_{qr} z^r − c_q^{pr} Z_r`. Cocommutator:
/// `δ(Z_p) = −c_p^{qr} Z_q⊗Z_r`, `δ(z^p) = f^p_{qr} z^q⊗z^r`.
pub fn build_double_named<S: AsRef<str>>(
    g: &LieBialgebra,
    dual_names: &[S],
) -> Result<DrinfeldDouble> {
    g.validate()?;
    let n = g.dim();
    if dual_names.len() != n {
        return Err(Error::InvalidBialgebra("wrong number of dual names".into()));
    }
    let f = g.brackets();
    let c = g.cocommutators();
    let mut brackets = BracketTensor::new(2 * n);
    for ((p, q), v) in f.iter() {
        for (r, x) in v {
            brackets.add(*p, *q, *r, x);
        }
    }
    for (r, wedges) in c.iter() {
        for ((p, q), x) in wedges {
            brackets.add(n + p, n + q, n + r, x);
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let zr = f.get(q, r, p);
                brackets.add(n + p, q, n + r, &zr);
                let big_r = c.get(q, p, r);
                brackets.add(n + p, q, r, &-big_r);
            }
        }
    }
    let mut cocommutators = CocommutatorTensor::new(2 * n);
    for (p, wedges) in c.iter() {
        for ((q, r), x) in wedges {
            cocommutators.add_wedge(*p, *q, *r, &-x);
        }
    }
    for ((q, r), v) in f.iter() {
        for (p, x) in v {
            cocommutators.add_wedge(n + p, n + q, n + r, x);
        }
    }
    let mut names: Vec<String> = g.names().into_iter().map(String::from).collect();
    names.extend(dual_names.iter().map(|s| s.as_ref().to_string()));
    let full = LieBialgebra::new(&names, brackets, cocommutators)?;
    let half_minus = dualize(g).renamed(dual_names)?;
    Ok(DrinfeldDouble {
        half_plus: g.clone(),
        half_minus,
        full,
        pairing: identity(n),
    })
}

/// `⟨[x,y],w⟩ + ⟨y,[x,w]⟩ = 0` over all basis triples of the full double.
pub fn check_pairing_invariance(d: &DrinfeldDouble) -> ValidationReport {
    let m = d.full.dim();
    let f = d.full.brackets();
    let pair_vec = |v: &LieVector, w: usize| -> AlgebraicScalar {
        let mut acc = AlgebraicScalar::zero();
        for (k, x) in v {
            let p = d.pair(*k, w);
            if !p.is_zero() {
                acc += &(x * &p);
            }
        }
        acc
    };
    let mut failures = Vec::new();
    for x in 0..m {
        for y in 0..m {
            let xy = f.bracket(x, y);
            for w in 0..m {
                let xw = f.bracket(x, w);
                let residual = &pair_vec(&xy, w) + &pair_vec(&xw, y);
                if !residual.is_zero() {
                    failures.push(Failure {
                        indices: vec![x, y, w],
                        residual: Residual::Scalar(residual),
                    });
                }
            }
        }
    }
    ValidationReport::from_failures("pairing_invariance", failures)
}

/// True iff `c_p^{qr} = −f^p_{qr}` entry-wise, with `f` and `c` read from
/// every place they occur in the full double: the two halves and both parts
/// of the crossed brackets. A structure whose crossed brackets disagree with
/// its halves is not a self-dual double for the canonical pairing.
pub fn is_self_dual(d: &DrinfeldDouble) -> bool {
    let n = d.n();
    let full = d.full.brackets();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let f_pqr = full.get(q, r, p); // f^p_{qr}
                // [z^q, z^r] = c_p^{qr} z^p
                let c_pqr = full.get(n + q, n + r, n + p);
                if c_pqr != -&f_pqr {
                    return false;
                }
                // [z^p, Z_q] = f^p_{qr} z^r − c_q^{pr} Z_r
                if full.get(n + p, q, n + r) != f_pqr {
                    return false;
                }
                let c_qpr = full.get(n + p, n + r, n + q);
                if -full.get(n + p, q, r) != c_qpr {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoubleFamily {
    Su2T1,
    /// `gl(n+1)⊕t_{n+1}`
    GlTn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DoubleFamilySpec {
    pub family: DoubleFamily,
    /// The rank parameter `n`; matrices are `(n+1)×(n+1)`. Ignored for `su2+t1`.
    pub n: usize,
}

/// Largest supported matrix size; generator names use single digits.
pub const MAX_GL_SIZE: usize = 9;

impl DoubleFamilySpec {
    pub fn su2_t1() -> Self {
        Self {
            family: DoubleFamily::Su2T1,
            n: 1,
        }
    }

    /// `gl:size`, i.e. `n = size − 1`.
    pub fn gl(size: usize) -> Self {
        Self {
            family: DoubleFamily::GlTn,
            n: size.saturating_sub(1),
        }
    }

    pub fn matrix_size(&self) -> usize {
        self.n + 1
    }
}

impl FromStr for DoubleFamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "su2+t1" {
            return Ok(Self::su2_t1());
        }
        if let Some(size) = s.strip_prefix("gl:") {
            let size: usize = size
                .parse()
                .map_err(|_| Error::UnsupportedFamily(s.to_string()))?;
            if !(2..=MAX_GL_SIZE).contains(&size) {
                return Err(Error::UnsupportedFamily(s.to_string()));
            }
            return Ok(Self::gl(size));
        }
        Err(Error::UnsupportedFamily(s.to_string()))
    }
}

impl fmt::Display for DoubleFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            DoubleFamily::Su2T1 => f.write_str("su2+t1"),
            DoubleFamily::GlTn => write!(f, "gl:{}", self.matrix_size()),
        }
    }
}

pub fn build_family(spec: DoubleFamilySpec) -> Result<DrinfeldDouble> {
    match spec.family {
        DoubleFamily::Su2T1 => {
            let g = su2_t1_b_plus();
            build_double_named(&g, &["z1", "z2"])
        }
        DoubleFamily::GlTn => {
            let size = spec.matrix_size();
            if spec.n < 1 || size > MAX_GL_SIZE {
                return Err(Error::UnsupportedFamily(spec.to_string()));
            }
            let layout = GlLayout::new(size);
            let g = gl_b_plus(&layout);
            let dual: Vec<String> = layout.z_names().iter().map(|s| s.to_lowercase()).collect();
            build_double_named(&g, &dual)
        }
    }
}

/// `b+ = {Z1, Z2}` with `[Z1, Z2] = Z2/√2` and the self-dual `c = −f`.
pub fn su2_t1_b_plus() -> LieBialgebra {
    let mut f = BracketTensor::new(2);
    f.add(0, 1, 1, &AlgebraicScalar::inv_sqrt2());
    self_dual(&["Z1", "Z2"], f)
}

fn self_dual(names: &[impl AsRef<str>], f: BracketTensor) -> LieBialgebra {
    let mut c = CocommutatorTensor::new(f.dim());
    for ((q, r), v) in f.iter() {
        for (p, x) in v {
            c.add_wedge(*p, *q, *r, &-x);
        }
    }
    LieBialgebra::new(names, f, c).expect("consistent dimensions")
}

/// Index bookkeeping for `gl(N)⊕tN` with `N` = `size`.
#[derive(Clone, Debug)]
pub struct GlLayout {
    pub size: usize,
    /// Upper pairs `(i, j)`, `i < j`, 1-based, in lexicographic order.
    pub upper: Vec<(usize, usize)>,
    /// All off-diagonal pairs in lexicographic order.
    pub off_diagonal: Vec<(usize, usize)>,
}

impl GlLayout {
    pub fn new(size: usize) -> Self {
        let mut upper = Vec::new();
        let mut off_diagonal = Vec::new();
        for i in 1..=size {
            for j in 1..=size {
                if i < j {
                    upper.push((i, j));
                }
                if i != j {
                    off_diagonal.push((i, j));
                }
            }
        }
        Self {
            size,
            upper,
            off_diagonal,
        }
    }

    /// Dimension of each half, `(n+1)(n+2)/2`.
    pub fn half_dim(&self) -> usize {
        self.size + self.upper.len()
    }

    /// Index of `Z_i` in the half.
    pub fn cartan(&self, i: usize) -> usize {
        i - 1
    }

    /// Index of `Z_ij` (`i < j`) in the half.
    pub fn root(&self, i: usize, j: usize) -> usize {
        self.size + self.upper.iter().position(|&p| p == (i, j)).expect("upper pair")
    }

    pub fn z_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.size).map(|i| format!("Z{i}")).collect();
        names.extend(self.upper.iter().map(|(i, j)| format!("Z{i}{j}")));
        names
    }

    /// Names of the `H, F, I` basis: `H1..HN`, `Fij` (lexicographic, `i ≠ j`), `I1..IN`.
    pub fn hfi_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.size).map(|i| format!("H{i}")).collect();
        names.extend(self.off_diagonal.iter().map(|(i, j)| format!("F{i}{j}")));
        names.extend((1..=self.size).map(|i| format!("I{i}")));
        names
    }

    pub fn hfi_h(&self, i: usize) -> usize {
        i - 1
    }

    pub fn hfi_f(&self, i: usize, j: usize) -> usize {
        self.size
            + self
                .off_diagonal
                .iter()
                .position(|&p| p == (i, j))
                .expect("off-diagonal pair")
    }

    pub fn hfi_i(&self, i: usize) -> usize {
        self.size + self.off_diagonal.len() + i - 1
    }

    pub fn hfi_dim(&self) -> usize {
        self.size * (self.size + 1)
    }
}

/// `b+` of `gl(N)⊕tN`: `[Z_i, Z_jk] = (δ_ij − δ_ik) Z_jk/√2`,
/// `[Z_ij, Z_kl] = δ_jk Z_il − δ_il Z_kj`, with `c = −f`.
pub fn gl_b_plus(layout: &GlLayout) -> LieBialgebra {
    let n = layout.half_dim();
    let s = AlgebraicScalar::inv_sqrt2();
    let mut f = BracketTensor::new(n);
    for i in 1..=layout.size {
        for &(j, k) in &layout.upper {
            let weight = i64::from(i == j) - i64::from(i == k);
            if weight != 0 {
                let x = &s * &AlgebraicScalar::from_int(weight);
                f.add(layout.cartan(i), layout.root(j, k), layout.root(j, k), &x);
            }
        }
    }
    for (a, &(i, j)) in layout.upper.iter().enumerate() {
        for &(k, l) in &layout.upper[a + 1..] {
            let (p, q) = (layout.root(i, j), layout.root(k, l));
            if j == k {
                f.add(p, q, layout.root(i, l), &AlgebraicScalar::one());
            }
            if i == l {
                f.add(p, q, layout.root(k, j), &AlgebraicScalar::from_int(-1));
            }
        }
    }
    self_dual(&layout.z_names(), f)
}

/// `gl(N)⊕tN` in the `H, F, I` basis with matrix-unit brackets
/// `[E_ij, E_kl] = δ_jk E_il − δ_il E_kj` (`E_ii = H_i`, the `I_i` central)
/// and the canonical cocommutator.
pub fn gl_t_hfi(size: usize) -> LieBialgebra {
    let layout = GlLayout::new(size);
    let dim = layout.hfi_dim();
    let unit = |i: usize, j: usize| {
        if i == j {
            layout.hfi_h(i)
        } else {
            layout.hfi_f(i, j)
        }
    };
    let mut f = BracketTensor::new(dim);
    let mut pairs: Vec<(usize, usize)> = (1..=size).map(|i| (i, i)).collect();
    pairs.extend(layout.off_diagonal.iter().copied());
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let (p, q) = (unit(i, j), unit(k, l));
            if p >= q {
                continue;
            }
            if j == k {
                f.add(p, q, unit(i, l), &AlgebraicScalar::one());
            }
            if i == l {
                f.add(p, q, unit(k, j), &AlgebraicScalar::from_int(-1));
            }
        }
    }
    LieBialgebra::new(&layout.hfi_names(), f, canonical_cocommutator_gl(size - 1))
        .expect("consistent dimensions")
}

/// The canonical cocommutator of `gl(n+1)⊕t_{n+1}` in the `H, F, I` basis:
/// `δ(H_i) = δ(I_i) = 0` and, for `i < j`,
///
/// `δ(F_ij) = −½ F_ij∧(H_i−H_j) − (i/2) F_ij∧(I_i−I_j) + Σ_{i<k<j} F_ik∧F_kj`,
///
/// while for `i > j`
///
/// `δ(F_ij) = ½ F_ij∧(H_i−H_j) − (i/2) F_ij∧(I_i−I_j) − Σ_{j<k<i} F_ik∧F_kj`.
pub fn canonical_cocommutator_gl(n: usize) -> CocommutatorTensor {
    let size = n + 1;
    let layout = GlLayout::new(size);
    let mut c = CocommutatorTensor::new(layout.hfi_dim());
    let half = AlgebraicScalar::frac(1, 2);
    let half_i = &half * &AlgebraicScalar::i();
    for &(i, j) in &layout.off_diagonal {
        let p = layout.hfi_f(i, j);
        let sign = if i < j { -&half } else { half.clone() };
        c.add_wedge(p, p, layout.hfi_h(i), &sign);
        c.add_wedge(p, p, layout.hfi_h(j), &-&sign);
        c.add_wedge(p, p, layout.hfi_i(i), &-&half_i);
        c.add_wedge(p, p, layout.hfi_i(j), &half_i);
        let (lo, hi, s) = if i < j {
            (i, j, AlgebraicScalar::one())
        } else {
            (j, i, AlgebraicScalar::from_int(-1))
        };
        for k in lo + 1..hi {
            c.add_wedge(p, layout.hfi_f(i, k), layout.hfi_f(k, j), &s);
        }
    }
    c
}

/// Rewrites a `gl(N)⊕tN` double in the `H, F, I` basis using
/// `H_i = (Z_i + z^i)/√2`, `I_i = −i(Z_i − z^i)/√2`, `F_ij = Z_ij`, `F_ji = z^ij` (`i < j`).
pub fn to_hfi_basis(d: &DrinfeldDouble) -> Result<LieBialgebra> {
    let n = d.n();
    let size = (1..=MAX_GL_SIZE)
        .find(|s| GlLayout::new(*s).half_dim() == n)
        .ok_or_else(|| Error::UnsupportedFamily(format!("no gl layout with half dimension {n}")))?;
    let layout = GlLayout::new(size);
    let dim = 2 * n;
    let s = AlgebraicScalar::inv_sqrt2();
    let minus_is = -&(&s * &AlgebraicScalar::i());
    let mut matrix = vec![vec![AlgebraicScalar::zero(); dim]; dim];
    for i in 1..=size {
        let z = layout.cartan(i);
        matrix[layout.hfi_h(i)][z] = s.clone();
        matrix[layout.hfi_h(i)][n + z] = s.clone();
        matrix[layout.hfi_i(i)][z] = minus_is.clone();
        matrix[layout.hfi_i(i)][n + z] = -&minus_is;
    }
    for &(i, j) in &layout.upper {
        matrix[layout.hfi_f(i, j)][layout.root(i, j)] = AlgebraicScalar::one();
        matrix[layout.hfi_f(j, i)][n + layout.root(i, j)] = AlgebraicScalar::one();
    }
    d.full.change_basis(&layout.hfi_names(), &matrix)
}

/// Rewrites the `su(2)⊕t1` double on `(J3, J+, J-, I)` using
/// `J3 = (Z1 + z1)/√2`, `J+ = Z2`, `J- = z2`, `I = −i(Z1 − z1)/√2`.
pub fn su2_t1_j_basis(d: &DrinfeldDouble) -> Result<LieBialgebra> {
    if d.n() != 2 {
        return Err(Error::UnsupportedFamily("expected the su2+t1 double".into()));
    }
    let zero = AlgebraicScalar::zero;
    let one = AlgebraicScalar::one;
    let s = AlgebraicScalar::inv_sqrt2();
    let is = &s * &AlgebraicScalar::i();
    let matrix = vec![
        vec![s.clone(), zero(), s.clone(), zero()],
        vec![zero(), one(), zero(), zero()],
        vec![zero(), zero(), zero(), one()],
        vec![-&is, zero(), is.clone(), zero()],
    ];
    d.full.change_basis(&["J3", "J+", "J-", "I"], &matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{builtin, check_jacobi};

    fn s(text: &str) -> AlgebraicScalar {
        text.parse().unwrap()
    }

    #[test]
    fn su2_t1_crossed_bracket() {
        let d = build_family(DoubleFamilySpec::su2_t1()).unwrap();
        // [Z2, z2] = (Z1 + z1)/√2
        let v = d.full.brackets().bracket(1, 3);
        let expected: LieVector = [(0, s("1/2*r2")), (2, s("1/2*r2"))].into_iter().collect();
        assert_eq!(v, expected);
        // [Z1, z2] = −z2/√2, [Z2, z1] = −Z2/√2
        assert_eq!(d.full.brackets().bracket(0, 3), [(3, s("-1/2*r2"))].into_iter().collect());
        assert_eq!(d.full.brackets().bracket(1, 2), [(1, s("-1/2*r2"))].into_iter().collect());
        assert!(d.full.brackets().bracket(0, 2).is_empty());
        assert!(check_jacobi(d.full.brackets()).passed);
        d.full.validate().unwrap();
        assert!(is_self_dual(&d));
        assert!(check_pairing_invariance(&d).passed);
    }

    #[test]
    fn su2_t1_restricts_to_su2() {
        let d = build_family(DoubleFamilySpec::su2_t1()).unwrap();
        let j = su2_t1_j_basis(&d).unwrap();
        assert_eq!(j.brackets().get(1, 2, 0), s("1"));
        let su2 = restrict_trivial_t(&j, &["I"]).unwrap();
        assert_eq!(su2, builtin::su2());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("gl:3".parse::<DoubleFamilySpec>().unwrap().n, 2);
        assert_eq!("su2+t1".parse::<DoubleFamilySpec>().unwrap(), DoubleFamilySpec::su2_t1());
        for bad in ["gl:1", "gl:x", "so:3", "su2", "gl:10"] {
            assert!(matches!(
                bad.parse::<DoubleFamilySpec>(),
                Err(Error::UnsupportedFamily(_))
            ));
        }
    }

    #[test]
    fn gl_layout_dimensions() {
        let l = GlLayout::new(3);
        assert_eq!(l.half_dim(), 6);
        assert_eq!(l.z_names(), vec!["Z1", "Z2", "Z3", "Z12", "Z13", "Z23"]);
        assert_eq!(l.hfi_dim(), 12);
        assert_eq!(l.hfi_f(2, 1), 3 + 2);
    }

    #[test]
    fn gl2_double_matches_hfi_algebra() {
        let d = build_family(DoubleFamilySpec::gl(2)).unwrap();
        assert_eq!(to_hfi_basis(&d).unwrap(), gl_t_hfi(2));
    }
}
