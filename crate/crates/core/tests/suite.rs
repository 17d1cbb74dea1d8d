use paraklein::fock::{
    check_relation, evaluate, evaluate_with, ModeSpec, Representation, Substitution, DEFAULT_DIMENSION_CAP,
};
use paraklein::random::random_expression;
use paraklein::relations::{applicable_families, enumerate, RelationFamily};
use paraklein::verify::{
    cross_layer_oracle, level_dimensions, run_matrix_suite, structural_checks, FamilySelection, SuiteConfig,
};
use paraklein::ConfigError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_spec() -> impl Strategy<Value = ModeSpec> {
    (0..=2usize, 0..=1usize, 1..=2usize, 3..=4usize)
        .prop_filter("nonempty", |(m, n, _, _)| m + n > 0)
        .prop_map(|(m, n, p, c)| ModeSpec::new(m, n, p, c))
}

#[test]
fn reports_are_deterministic() {
    let cfg = SuiteConfig::new(ModeSpec::new(1, 1, 2, 4)).with_seed(17);
    let a = run_matrix_suite(&cfg).unwrap();
    let b = run_matrix_suite(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn every_enumerated_instance_is_checked() {
    for (m, n, p, c) in [(1, 1, 1, 4), (2, 0, 2, 0), (0, 2, 1, 3), (2, 1, 1, 3)] {
        let report = run_matrix_suite(&SuiteConfig::new(ModeSpec::new(m, n, p, c))).unwrap();
        let (families, skipped) = applicable_families(m, n);
        let expected: usize = families.iter().map(|&f| enumerate(f, m, n).unwrap().len()).sum();
        assert_eq!(report.instances.len(), expected, "({m},{n},{p},{c})");
        assert_eq!(report.notices.len(), skipped.len());
        assert!(report.passed(), "({m},{n},{p},{c}): {:?}", report.failures().next());
        assert!(report.instances.iter().all(|r| r.safe_columns.unwrap_or(0) > 0));
    }
}

#[test]
fn explicit_inapplicable_family_is_an_error() {
    let cfg = SuiteConfig::new(ModeSpec::new(2, 0, 1, 0))
        .with_families(FamilySelection::parse("PF,REL_PF").unwrap());
    assert!(matches!(run_matrix_suite(&cfg), Err(ConfigError::FamilyNotApplicable { .. })));
}

#[test]
fn small_cutoff_is_rejected_for_suites() {
    let cfg = SuiteConfig::new(ModeSpec::new(1, 1, 1, 2));
    assert!(matches!(run_matrix_suite(&cfg), Err(ConfigError::CutoffTooSmall { .. })));
}

#[test]
fn symbolic_only_builds_nothing() {
    let mut cfg = SuiteConfig::new(ModeSpec::new(2, 2, 9, 40));
    cfg.symbolic_only = true;
    let report = run_matrix_suite(&cfg).unwrap();
    assert!(report.passed());
    assert!(report.structural.is_empty());
}

// Identities verified symbolically must also vanish on the matrices.
#[test]
fn symbolic_identities_hold_on_matrices() {
    let rep = Representation::build(ModeSpec::new(2, 1, 2, 3), DEFAULT_DIMENSION_CAP).unwrap();
    for inst in enumerate(RelationFamily::TildeIdentity, 2, 1).unwrap() {
        assert!(inst.expr.is_zero(), "{}", inst.id());
        let res = check_relation(&inst, &rep).unwrap();
        assert!(res.pass, "{}: {:?}", inst.id(), res.first_failure);
    }
}

#[test]
fn cyclic_subspace_levels() {
    assert_eq!(level_dimensions(ModeSpec::new(1, 0, 1, 0), DEFAULT_DIMENSION_CAP, 2).unwrap(), vec![1, 1, 0]);
    // One paraboson of order 1 is an ordinary boson: one state per level.
    assert_eq!(level_dimensions(ModeSpec::new(0, 1, 1, 4), DEFAULT_DIMENSION_CAP, 4).unwrap(), vec![1; 5]);
    assert!(level_dimensions(ModeSpec::new(0, 1, 1, 4), DEFAULT_DIMENSION_CAP, 5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn structure_holds_on_small_systems(spec in small_spec()) {
        let rep = Representation::build(spec, DEFAULT_DIMENSION_CAP).unwrap();
        for check in structural_checks(&rep) {
            prop_assert!(check.passed(), "{}: {:?}", check.id, check.failure);
        }
    }

    #[test]
    fn oracle_holds_for_any_seed(spec in small_spec(), seed in any::<u64>()) {
        let rep = Representation::build(spec, DEFAULT_DIMENSION_CAP).unwrap();
        for check in cross_layer_oracle(&rep, seed, 5) {
            prop_assert!(check.passed(), "{}: {:?}", check.id, check.failure);
        }
    }

    // Evaluation is an algebra map: products of expressions become matrix products.
    #[test]
    fn evaluation_is_multiplicative(spec in small_spec(), seed in any::<u64>()) {
        let rep = Representation::build(spec, DEFAULT_DIMENSION_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_expression(&mut rng, spec.m, spec.n, 1, 2);
        let b = random_expression(&mut rng, spec.m, spec.n, 1, 2);
        for subst in [Substitution::Original, Substitution::Tilde] {
            let lhs = evaluate_with(&(&a * &b), &rep, subst).unwrap();
            let rhs = &evaluate_with(&a, &rep, subst).unwrap() * &evaluate_with(&b, &rep, subst).unwrap();
            prop_assert!(lhs == rhs);
        }
        prop_assert!(evaluate(&(&a + &b), &rep).unwrap() == &evaluate(&a, &rep).unwrap() + &evaluate(&b, &rep).unwrap());
    }
}
