use paraklein::algebra::{rational, Letter, Word};
use paraklein::{Expression, Generator, Kind, Sign};
use proptest::prelude::*;

const M: usize = 2;
const N: usize = 2;

fn generator() -> impl Strategy<Value = Generator> {
    (prop_oneof![Just(Kind::ParaFermion), Just(Kind::ParaBoson)], 1..=2usize, any::<bool>()).prop_map(
        |(kind, index, plus)| {
            let bound = if kind == Kind::ParaFermion { M } else { N };
            Generator::new(kind, index.min(bound), if plus { Sign::Plus } else { Sign::Minus })
        },
    )
}

fn word() -> impl Strategy<Value = Word> {
    (prop::collection::vec(generator(), 0..=3), any::<bool>()).prop_map(|(g, k)| Word::new(g, k))
}

fn coefficient() -> impl Strategy<Value = paraklein::Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| rational(p, q))
}

fn expression() -> impl Strategy<Value = Expression> {
    prop::collection::vec((word(), coefficient()), 0..=4).prop_map(Expression::from_terms)
}

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop_oneof![3 => generator().prop_map(Letter::Gen), 1 => Just(Letter::Klein)], 0..=6)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn mul_is_associative(a in expression(), b in expression(), c in expression()) {
        prop_assert_eq!((&a * &b).mul(&c), a.mul(&(&b * &c)));
    }

    #[test]
    fn mul_distributes(a in expression(), b in expression(), c in expression()) {
        prop_assert_eq!(a.mul(&(&b + &c)), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn one_is_identity(a in expression()) {
        prop_assert_eq!(a.mul(&Expression::one()), a.clone());
        prop_assert_eq!(Expression::one().mul(&a), a);
    }

    #[test]
    fn dagger_reverses_products(a in expression(), b in expression()) {
        prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
    }

    #[test]
    fn dagger_is_involution(a in expression()) {
        prop_assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn klein_transform_is_multiplicative(a in expression(), b in expression()) {
        prop_assert_eq!((&a * &b).klein_transform(), &a.klein_transform() * &b.klein_transform());
    }

    #[test]
    fn klein_transform_is_involution(a in expression()) {
        prop_assert_eq!(a.klein_transform().klein_transform(), a);
    }

    #[test]
    fn klein_transform_is_linear(a in expression(), b in expression(), c in coefficient()) {
        let lhs = (&a.scale(&c) + &b).klein_transform();
        prop_assert_eq!(lhs, &a.klein_transform().scale(&c) + &b.klein_transform());
    }

    #[test]
    fn normalize_is_idempotent(a in expression()) {
        prop_assert_eq!(a.normalize(), a.clone());
        prop_assert_eq!(a.normalize().normalize(), a.normalize());
    }

    #[test]
    fn klein_squares_to_one_and_anticommutes(g in generator()) {
        let k = Expression::klein();
        prop_assert_eq!(&k * &k, Expression::one());
        let x = Expression::generator(g);
        prop_assert!(k.anticommutator(&x).is_zero());
    }

    // Canonicalizing a token string equals multiplying its letters one by one.
    #[test]
    fn tokens_agree_with_products(tokens in letters()) {
        let (sign, w) = Word::from_tokens(&tokens);
        let product = tokens.iter().fold(Expression::one(), |acc, t| {
            let x = match *t {
                Letter::Gen(g) => Expression::generator(g),
                Letter::Klein => Expression::klein(),
            };
            &acc * &x
        });
        prop_assert_eq!(product, Expression::term(w, rational(sign, 1)));
    }

    #[test]
    fn text_form_round_trips(a in expression()) {
        let text = a.to_string();
        let back: Expression = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn commutator_is_antisymmetric(a in expression(), b in expression()) {
        prop_assert_eq!(a.commutator(&b), -b.commutator(&a));
        prop_assert_eq!(a.anticommutator(&b), b.anticommutator(&a));
    }
}
