//! Seeded random expressions for property checks and the cross-layer oracle.

use rand::Rng;

use crate::algebra::{rational, Expression, Generator, Kind, Sign, Word};

/// A random generator with indices in range for an `(m, n)` system.
pub fn random_generator<R: Rng>(rng: &mut R, m: usize, n: usize) -> Generator {
    assert!(m + n > 0);
    let pick = rng.gen_range(0..m + n);
    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
    if pick < m {
        Generator::new(Kind::ParaFermion, pick + 1, sign)
    } else {
        Generator::new(Kind::ParaBoson, pick - m + 1, sign)
    }
}

/// Up to `max_terms` words of at most `max_len` letters, each with a random
/// `K` flag and a small nonzero rational coefficient.
pub fn random_expression<R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    max_len: usize,
    max_terms: usize,
) -> Expression {
    let terms = rng.gen_range(1..=max_terms.max(1));
    Expression::from_terms((0..terms).map(|_| {
        let len = rng.gen_range(0..=max_len);
        let letters = (0..len).map(|_| random_generator(rng, m, n)).collect();
        let klein = rng.gen_bool(0.5);
        let mut numer = rng.gen_range(-4i64..=4);
        if numer == 0 {
            numer = 1;
        }
        let denom = rng.gen_range(1i64..=3);
        (Word::new(letters, klein), rational(numer, denom))
    }))
}
