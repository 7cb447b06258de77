mod common;

use std::time::{Duration, Instant};

use bialg_core::bialgebra::{
    builtin, check_compatibility, check_jacobi, restrict_trivial_t, BracketTensor, CocommutatorTensor,
    LieBialgebra,
};
use bialg_core::double::{
    build_double, build_double_named, build_family, canonical_cocommutator_gl, check_pairing_invariance,
    gl_b_plus, is_self_dual, su2_t1_b_plus, su2_t1_j_basis, to_hfi_basis, DoubleFamilySpec, DrinfeldDouble,
    GlLayout,
};
use bialg_core::AlgebraicScalar;
use common::q;

fn s(text: &str) -> AlgebraicScalar {
    text.parse().unwrap()
}

fn families() -> Vec<DoubleFamilySpec> {
    vec![
        DoubleFamilySpec::su2_t1(),
        DoubleFamilySpec::gl(2),
        DoubleFamilySpec::gl(3),
        DoubleFamilySpec::gl(4),
    ]
}

fn assert_double_checks(d: &DrinfeldDouble, label: &str) {
    assert!(check_jacobi(d.full.brackets()).passed, "{label}: jacobi");
    assert!(check_compatibility(&d.full).passed, "{label}: compatibility");
    assert!(check_pairing_invariance(d).passed, "{label}: pairing");
    assert!(is_self_dual(d), "{label}: self dual");
}

#[test]
fn families_pass_every_check() {
    for spec in families() {
        let d = build_family(spec).unwrap();
        assert_double_checks(&d, &spec.to_string());
        d.full.validate().unwrap();
        d.half_plus.validate().unwrap();
        d.half_minus.validate().unwrap();
    }
}

#[test]
fn half_dimensions() {
    for (size, half) in [(2, 3), (3, 6), (4, 10)] {
        let d = build_family(DoubleFamilySpec::gl(size)).unwrap();
        assert_eq!(d.n(), half);
        assert_eq!(d.full.dim(), 2 * half);
    }
    let d = build_family(DoubleFamilySpec::gl(2)).unwrap();
    assert_eq!(d.full.names(), vec!["Z1", "Z2", "Z12", "z1", "z2", "z12"]);
}

#[test]
fn gl2_half_brackets() {
    let b = gl_b_plus(&GlLayout::new(2));
    // [Z1, Z12] = Z12/√2, [Z2, Z12] = −Z12/√2, [Z1, Z2] = 0
    assert_eq!(b.brackets().bracket(0, 2), [(2, s("1/2*r2"))].into_iter().collect());
    assert_eq!(b.brackets().bracket(1, 2), [(2, s("-1/2*r2"))].into_iter().collect());
    assert!(b.brackets().bracket(0, 1).is_empty());
}

#[test]
fn gl3_half_has_the_nilpotent_bracket() {
    let layout = GlLayout::new(3);
    let b = gl_b_plus(&layout);
    let v = b.brackets().bracket(layout.root(1, 2), layout.root(2, 3));
    assert_eq!(v, [(layout.root(1, 3), q(1, 1))].into_iter().collect());
}

/// The double cocommutator, rewritten in the `H, F, I` basis, is the
/// canonical one entry by entry.
#[test]
fn double_cocommutator_is_canonical() {
    for size in 2..=4 {
        let d = build_family(DoubleFamilySpec::gl(size)).unwrap();
        let hfi = to_hfi_basis(&d).unwrap();
        let canonical = canonical_cocommutator_gl(size - 1);
        assert_eq!(hfi.cocommutators(), &canonical, "gl:{size}");
        for p in 0..hfi.dim() {
            assert_eq!(hfi.cocommutators().wedges(p), canonical.wedges(p), "gl:{size} generator {p}");
        }
    }
}

#[test]
fn canonical_cocommutator_examples() {
    let layout = GlLayout::new(2);
    let c = canonical_cocommutator_gl(1);
    let f12 = layout.hfi_f(1, 2);
    let (h1, h2, i1, i2) = (layout.hfi_h(1), layout.hfi_h(2), layout.hfi_i(1), layout.hfi_i(2));
    // −½ F12∧(H1−H2) − (i/2) F12∧(I1−I2)
    assert_eq!(c.get(f12, f12, h1), q(-1, 2));
    assert_eq!(c.get(f12, f12, h2), q(1, 2));
    assert_eq!(c.get(f12, f12, i1), s("-1/2*i"));
    assert_eq!(c.get(f12, f12, i2), s("1/2*i"));
    assert_eq!(c.wedges(f12).len(), 4);
    assert!(c.wedges(h1).is_empty());
    assert!(c.wedges(i1).is_empty());

    let layout = GlLayout::new(3);
    let c = canonical_cocommutator_gl(2);
    let (f12, f13, f23) = (layout.hfi_f(1, 2), layout.hfi_f(1, 3), layout.hfi_f(2, 3));
    assert_eq!(c.get(f13, f12, f23), q(1, 1));
}

#[test]
fn hfi_brackets_are_matrix_units() {
    for size in 2..=4 {
        let d = build_family(DoubleFamilySpec::gl(size)).unwrap();
        let hfi = to_hfi_basis(&d).unwrap();
        let layout = GlLayout::new(size);
        // [F_ij, F_ji] = H_i − H_j and the I_k are central
        for &(i, j) in &layout.off_diagonal {
            let v = hfi.brackets().bracket(layout.hfi_f(i, j), layout.hfi_f(j, i));
            let expected = [(layout.hfi_h(i), q(1, 1)), (layout.hfi_h(j), q(-1, 1))].into_iter().collect();
            assert_eq!(v, expected, "gl:{size} ({i},{j})");
        }
        for k in 1..=size {
            for p in 0..hfi.dim() {
                assert!(hfi.brackets().bracket(layout.hfi_i(k), p).is_empty());
            }
        }
    }
}

#[test]
fn su2_t1_crossed_brackets() {
    let d = build_double_named(&su2_t1_b_plus(), &["z1", "z2"]).unwrap();
    // [Z2, z2] = (Z1 + z1)/√2
    assert_eq!(
        d.full.brackets().bracket(1, 3),
        [(0, s("1/2*r2")), (2, s("1/2*r2"))].into_iter().collect()
    );
    assert_eq!(d, build_family(DoubleFamilySpec::su2_t1()).unwrap());
}

#[test]
fn abelian_double_is_abelian() {
    let d = build_double(&builtin::abelian(3)).unwrap();
    assert!(d.full.brackets().is_zero());
    assert!(d.full.cocommutators().is_zero());
    assert!(check_pairing_invariance(&d).passed);
    assert!(is_self_dual(&d));
}

/// Reading the double in the `J` basis fixes `[J+, J-] = J3` with coefficient
/// exactly one, and dropping `I` leaves the standard `su(2)` bialgebra.
#[test]
fn double_fixes_the_su2_normalization() {
    let d = build_family(DoubleFamilySpec::su2_t1()).unwrap();
    let j = su2_t1_j_basis(&d).unwrap();
    assert_eq!(j.names(), vec!["J3", "J+", "J-", "I"]);
    assert_eq!(j.brackets().bracket(1, 2), [(0, q(1, 1))].into_iter().collect());
    assert_eq!(j.brackets().get(0, 1, 1), q(1, 1));
    assert_eq!(j.brackets().get(0, 2, 2), q(-1, 1));
    let su2 = restrict_trivial_t(&j, &["I"]).unwrap();
    assert_eq!(su2, builtin::su2());
    assert_eq!(su2.cocommutators().get(1, 0, 1), q(1, 2));
    assert_eq!(su2.cocommutators().get(2, 0, 2), q(1, 2));
    assert!(su2.cocommutators().wedges(0).is_empty());
}

/// Rescales one generator of the full double and keeps the canonical pairing.
fn rescaled(d: &DrinfeldDouble, index: usize, factor: AlgebraicScalar) -> DrinfeldDouble {
    let m = d.full.dim();
    let matrix: Vec<Vec<AlgebraicScalar>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| match (a == b, a == index) {
                    (true, true) => factor.clone(),
                    (true, false) => AlgebraicScalar::one(),
                    _ => AlgebraicScalar::zero(),
                })
                .collect()
        })
        .collect();
    let full = d.full.change_basis(&d.full.names(), &matrix).unwrap();
    DrinfeldDouble::from_full(full, d.n()).unwrap()
}

#[test]
fn scaling_a_root_generator_breaks_the_double() {
    let d = build_family(DoubleFamilySpec::gl(2)).unwrap();
    let f12 = GlLayout::new(2).root(1, 2);
    let scaled = rescaled(&d, f12, q(2, 1));
    let jacobi = check_jacobi(scaled.full.brackets()).passed;
    let self_dual = is_self_dual(&scaled);
    assert!(!(jacobi && self_dual));
    assert!(!self_dual);
    assert!(!check_pairing_invariance(&scaled).passed);

    // a basis change never breaks Jacobi on its own
    assert!(jacobi);
}

#[test]
fn doubled_crossed_bracket_breaks_pairing_invariance() {
    let d = build_family(DoubleFamilySpec::su2_t1()).unwrap();
    let mut f = BracketTensor::new(4);
    for ((p, q_), v) in d.full.brackets().iter() {
        for (r, x) in v {
            let x = if (*p, *q_) == (1, 3) { x * &q(2, 1) } else { x.clone() };
            f.add(*p, *q_, *r, &x);
        }
    }
    let full = d.full.with_brackets(f);
    let broken = DrinfeldDouble::from_full(full, 2).unwrap();
    let report = check_pairing_invariance(&broken);
    assert!(!report.passed);
    // (Z2, z2, Z1): ⟨[Z2,z2], Z1⟩ + ⟨z2, [Z2,Z1]⟩ = 2/√2 − 1/√2
    let hit = report.failures.iter().find(|f| f.indices == vec![1, 3, 0]).expect("triple (Z2, z2, Z1)");
    assert_eq!(hit.residual, bialg_core::bialgebra::Residual::Scalar(s("1/2*r2")));
}

#[test]
fn scaled_cobracket_is_not_self_dual() {
    let b = su2_t1_b_plus();
    let scaled = b.with_cocommutators(b.cocommutators().scaled(&q(2, 1)));
    let d = build_double(&scaled).unwrap();
    assert!(!is_self_dual(&d));
    assert!(check_jacobi(d.full.brackets()).passed);
    assert!(check_pairing_invariance(&d).passed);
}

#[test]
fn double_of_su2_is_a_lie_algebra_with_invariant_pairing() {
    let d = build_double(&builtin::su2()).unwrap();
    assert!(check_jacobi(d.full.brackets()).passed);
    assert!(check_pairing_invariance(&d).passed);
    assert!(!is_self_dual(&d));
}

#[test]
fn half_mismatch_is_an_error() {
    let g = LieBialgebra::new(&["A", "B"], BracketTensor::new(2), CocommutatorTensor::new(2)).unwrap();
    assert!(build_double_named(&g, &["a"]).is_err());
    assert!(DrinfeldDouble::from_full(g, 2).is_err());
}

#[test]
fn gl4_double_is_fast() {
    let start = Instant::now();
    let d = build_family(DoubleFamilySpec::gl(4)).unwrap();
    assert_double_checks(&d, "gl:4");
    assert_eq!(to_hfi_basis(&d).unwrap().cocommutators(), &canonical_cocommutator_gl(3));
    assert!(start.elapsed() < Duration::from_secs(10), "{:?}", start.elapsed());
}
