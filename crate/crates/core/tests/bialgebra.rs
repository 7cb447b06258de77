mod common;

use bialg_core::bialgebra::{
    builtin, check_cocycle, check_compatibility, check_jacobi, dualize, restrict_trivial_t, BracketTensor,
    CocommutatorTensor, LieBialgebra, Residual,
};
use bialg_core::double::{su2_t1_b_plus, to_hfi_basis, build_family, DoubleFamilySpec, GlLayout};
use bialg_core::{AlgebraicScalar, Error};
use common::q;
use proptest::prelude::*;

fn s(text: &str) -> AlgebraicScalar {
    text.parse().unwrap()
}

fn builtins() -> Vec<LieBialgebra> {
    vec![
        builtin::su2(),
        builtin::su2_classical(),
        builtin::u1(),
        builtin::abelian(3),
        su2_t1_b_plus(),
    ]
}

#[test]
fn builtins_pass_every_check() {
    for b in builtins() {
        for report in b.reports() {
            assert!(report.passed, "{:?}: {}", b.names(), report.check);
            assert!(report.failures.is_empty());
        }
        b.validate().unwrap();
    }
}

#[test]
fn abelian_brackets_satisfy_jacobi() {
    assert!(check_jacobi(&BracketTensor::new(4)).passed);
}

/// `[J3, J+] = 2 J+` with everything else left alone.
#[test]
fn lopsided_raising_bracket_breaks_jacobi() {
    let mut f = builtin::su2().brackets().clone();
    f.set(0, 1, 1, &q(2, 1));
    let report = check_jacobi(&f);
    assert!(!report.passed);
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.failures[0].indices, vec![0, 1, 2]);
    // by hand: [[J3,J+],J-] + [[J+,J-],J3] + [[J-,J3],J+] = 2 J3 + 0 − J3
    let expected = Residual::Vector([(0, q(1, 1))].into_iter().collect());
    assert_eq!(report.failures[0].residual, expected);
}

#[test]
fn rescaling_the_lowering_bracket_keeps_jacobi() {
    let b = builtin::su2_with(q(2, 1), q(1, 2));
    assert!(check_jacobi(b.brackets()).passed);
}

/// `δ(J+) = ½ J+∧J3` but `δ(J-) = J-∧J3`: the pair `(J+, J-)` fails.
#[test]
fn unbalanced_cobracket_breaks_the_cocycle() {
    let mut c = CocommutatorTensor::new(3);
    c.add_wedge(1, 1, 0, &q(1, 2));
    c.add_wedge(2, 2, 0, &q(1, 1));
    let b = builtin::su2().with_cocommutators(c);
    let report = check_cocycle(&b);
    assert!(!report.passed);
    let pairs: Vec<Vec<usize>> = report.failures.iter().map(|f| f.indices.clone()).collect();
    assert!(pairs.contains(&vec![1, 2]), "{pairs:?}");
}

#[test]
fn zero_cobracket_is_always_a_cocycle() {
    let b = builtin::su2_with(q(3, 1), q(0, 1));
    assert!(check_cocycle(&b).passed);
    assert!(check_compatibility(&b).passed);
}

#[test]
fn su2_t1_half_is_compatible() {
    let b = su2_t1_b_plus();
    assert_eq!(b.brackets().get(0, 1, 1), AlgebraicScalar::inv_sqrt2());
    assert_eq!(b.cocommutators().get(1, 0, 1), -&AlgebraicScalar::inv_sqrt2());
    assert!(check_compatibility(&b).passed);
}

/// On two generators `ad X` acts on `Λ²` by `tr(ad X)`, so every skew
/// cobracket is a cocycle: flipping the sign of `c^{12}_2`, or adding any
/// `δ(Z1)`, stays compatible.
#[test]
fn two_dimensional_cobrackets_are_all_compatible() {
    let b = su2_t1_b_plus();
    for (c1, c2) in [(q(0, 1), q(1, 1)), (q(1, 1), q(1, 1)), (q(-3, 2), q(0, 1)), (q(0, 1), AlgebraicScalar::inv_sqrt2())] {
        let mut c = CocommutatorTensor::new(2);
        c.add_wedge(0, 0, 1, &c1);
        c.add_wedge(1, 0, 1, &c2);
        assert!(check_compatibility(&b.with_cocommutators(c)).passed);
    }
}

#[test]
fn negated_lowering_cobracket_fails_compatibility() {
    let su2 = builtin::su2();
    let mut c = su2.cocommutators().clone();
    c.add_wedge(2, 0, 2, &q(-1, 1));
    let report = check_compatibility(&su2.with_cocommutators(c));
    assert!(!report.passed);
}

#[test]
fn dual_of_the_su2_t1_half() {
    let b = su2_t1_b_plus();
    let d = dualize(&b);
    assert_eq!(d.names(), vec!["Z1*", "Z2*"]);
    assert_eq!(d.brackets().get(0, 1, 1), s("-1/2*r2"));
    assert_eq!(d.cocommutators().get(1, 0, 1), s("1/2*r2"));
    assert_eq!(dualize(&d), b);
    for report in d.reports() {
        assert!(report.passed);
    }
}

#[test]
fn dual_of_an_abelian_algebra_is_abelian() {
    let d = dualize(&builtin::abelian(3));
    assert!(d.brackets().is_zero());
    assert!(d.cocommutators().is_zero());
}

#[test]
fn su2_dual_is_a_bialgebra() {
    let d = dualize(&builtin::su2());
    // [J3*, J+*] = ½ J+*
    assert_eq!(d.brackets().get(0, 1, 1), q(1, 2));
    for report in d.reports() {
        assert!(report.passed, "{}", report.check);
    }
}

#[test]
fn restricting_nothing_is_the_identity() {
    let b = builtin::su2();
    assert_eq!(restrict_trivial_t(&b, &[]).unwrap(), b);
}

#[test]
fn restricting_a_non_central_generator_fails() {
    assert_eq!(
        restrict_trivial_t(&builtin::su2(), &["J3"]),
        Err(Error::NotCentral("J3".into()))
    );
    assert!(matches!(
        restrict_trivial_t(&builtin::su2(), &["K"]),
        Err(Error::UnknownGenerator(_))
    ));
}

/// `gl(2)⊕t2` with `I1, I2` dropped: `δ(F12) = −½ F12∧(H1 − H2)`.
#[test]
fn gl2_without_the_torus() {
    let hfi = to_hfi_basis(&build_family(DoubleFamilySpec::gl(2)).unwrap()).unwrap();
    let b = restrict_trivial_t(&hfi, &["I1", "I2"]).unwrap();
    assert_eq!(b.names(), vec!["H1", "H2", "F12", "F21"]);
    let layout = GlLayout::new(2);
    let f12 = layout.hfi_f(1, 2);
    let wedges = b.cocommutators().wedges(f12);
    let expected = [((0, f12), q(1, 2)), ((1, f12), q(-1, 2))].into_iter().collect();
    assert_eq!(wedges, expected);
    assert!(b.cocommutators().wedges(0).is_empty());
    for report in b.reports() {
        assert!(report.passed, "{}", report.check);
    }
}

#[test]
fn basis_change_preserves_the_axioms() {
    let su2 = builtin::su2();
    // J3' = 2 J3, J+' = J+ + J-, J-' = J+ − J-
    let m = vec![
        vec![q(2, 1), q(0, 1), q(0, 1)],
        vec![q(0, 1), q(1, 1), q(1, 1)],
        vec![q(0, 1), q(1, 1), q(-1, 1)],
    ];
    let b = su2.change_basis(&["A", "B", "C"], &m).unwrap();
    for report in b.reports() {
        assert!(report.passed, "{}", report.check);
    }
    // [J3', J+'] = 2(J+ − J-) = 2 C
    assert_eq!(b.brackets().bracket(0, 1), [(2, q(2, 1))].into_iter().collect());
    let singular = vec![m[0].clone(), m[0].clone(), m[2].clone()];
    assert!(su2.change_basis(&["A", "B", "C"], &singular).is_err());
}

fn coefficient() -> impl Strategy<Value = AlgebraicScalar> {
    prop_oneof![
        3 => Just(AlgebraicScalar::zero()),
        1 => Just(q(1, 1)),
        1 => Just(q(-1, 1)),
        1 => Just(q(1, 2)),
        1 => Just(AlgebraicScalar::inv_sqrt2()),
    ]
}

/// Random antisymmetric bracket and skew cobracket on two or three generators,
/// with no axiom imposed.
fn small_tensors() -> impl Strategy<Value = LieBialgebra> {
    (2usize..=3).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(coefficient(), pairs * n),
            proptest::collection::vec(coefficient(), pairs * n),
        )
            .prop_map(move |(fs, cs)| {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect();
                let mut f = BracketTensor::new(n);
                let mut c = CocommutatorTensor::new(n);
                for (k, &(p, q)) in pairs.iter().enumerate() {
                    for r in 0..n {
                        f.add(p, q, r, &fs[k * n + r]);
                        c.add_wedge(r, p, q, &cs[k * n + r]);
                    }
                }
                let names: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
                LieBialgebra::new(&names, f, c).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dualize_is_an_involution(b in small_tensors()) {
        prop_assert_eq!(dualize(&dualize(&b)), b);
    }

    #[test]
    fn compatibility_is_self_dual(b in small_tensors()) {
        prop_assert_eq!(check_compatibility(&b).passed, check_compatibility(&dualize(&b)).passed);
    }
}

/// Compatibility passes on enough random samples for the property above to
/// test both directions.
#[test]
fn random_tensors_hit_both_outcomes() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let strategy = small_tensors();
    let (mut pass, mut fail) = (0, 0);
    for _ in 0..400 {
        let b = strategy.new_tree(&mut runner).unwrap().current();
        if check_compatibility(&b).passed {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    assert!(pass > 0 && fail > 0, "pass {pass} fail {fail}");
}
